#pragma once

#include <cstdint>
#include <variant>

#include "tailfit/histogram.hpp"
#include "tailfit/pled.hpp"
#include "tailfit/tpa.hpp"

namespace tailfit {

// Deterministic inverse-CDF sampling driven by std::mt19937_64 seeded with
// `seed`; each draw consumes exactly one 64-bit output, mapped to [0,1) as
// (word >> 11) * 2^-53. The TPA head and the PLED body use a cumulative
// table; the TPA tail inverts the geometric law in closed form, and the PLED
// table stops once less than 1e-12 of mass remains, folding the remainder
// into its last entry.
struct SampleSpec {
  std::variant<TpaParams, PledParams> params;
  std::int64_t n = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

DegreeHistogram sample(const SampleSpec& spec);

}  // namespace tailfit
