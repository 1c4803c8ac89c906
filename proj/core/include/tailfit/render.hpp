#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace tailfit {

/// Renders a double with 12 significant digits (printf "%.12g" rules).
/// All file output and digest strings go through this so that repeated
/// runs are byte-identical.
std::string render_double(double value);

/// 64-bit FNV-1a over raw bytes. Used for input-file digests in run
/// manifests; rendered as 0x%016x hexadecimal.
std::uint64_t fnv1a64(std::span<const char> bytes);

/// Hexadecimal rendering of a 64-bit hash, "0x" + 16 lowercase digits.
std::string render_hash(std::uint64_t hash);

}  // namespace tailfit
