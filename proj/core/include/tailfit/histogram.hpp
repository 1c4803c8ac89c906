#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace tailfit {

// Degree histogram: strictly ascending degrees >= 1 with nonnegative integer
// counts, at least one of them positive.
struct DegreeHistogram {
  struct Entry {
    std::int64_t degree = 0;
    std::int64_t count = 0;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  std::vector<Entry> entries;
  std::string source_label;

  void validate() const;
  std::int64_t total_count() const;
};

// Parses "degree count" pairs, one per line. Blank lines and lines whose
// first non-space character is '#' are skipped; fields may be separated by
// whitespace, a comma, or both. Duplicate degrees are merged by summing.
// ParseError carries the 1-based line number of the offending line.
DegreeHistogram parse_histogram(std::istream& in, std::string source_label = "<stream>");

// File variant; unreadable paths raise IoError.
DegreeHistogram load_histogram(const std::filesystem::path& path);

}  // namespace tailfit
