#include "tailfit/histogram.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "tailfit/errors.hpp"

namespace tailfit {

void DegreeHistogram::validate() const {
  std::int64_t positive = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Entry& e = entries[i];
    if (e.degree < 1)
      throw InvalidParamsError("histogram: degree must be >= 1, got " +
                               std::to_string(e.degree));
    if (e.count < 0)
      throw InvalidParamsError("histogram: count must be >= 0, got " +
                               std::to_string(e.count));
    if (i > 0 && entries[i - 1].degree >= e.degree)
      throw InvalidParamsError("histogram: degrees must be strictly ascending");
    if (e.count > 0) ++positive;
  }
  if (positive == 0) throw EmptySupportError("histogram: no degree has a positive count");
}

std::int64_t DegreeHistogram::total_count() const {
  std::int64_t total = 0;
  for (const Entry& e : entries) total += e.count;
  return total;
}

namespace {

bool parse_int_field(const std::string& tok, std::int64_t& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && p == last;
}

}  // namespace

DegreeHistogram parse_histogram(std::istream& in, std::string source_label) {
  std::map<std::int64_t, std::int64_t> merged;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string cleaned = line;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream fields(cleaned);
    std::string first_tok;
    if (!(fields >> first_tok)) continue;
    if (first_tok.front() == '#') continue;

    std::string second_tok, extra_tok;
    if (!(fields >> second_tok))
      throw ParseError("expected two fields (degree, count)", line_no);
    if (fields >> extra_tok)
      throw ParseError("trailing content after count field", line_no);

    std::int64_t degree = 0, count = 0;
    if (!parse_int_field(first_tok, degree))
      throw ParseError("degree is not an integer: '" + first_tok + "'", line_no);
    if (!parse_int_field(second_tok, count))
      throw ParseError("count is not an integer: '" + second_tok + "'", line_no);
    if (degree < 1) throw ParseError("degree must be >= 1, got " + first_tok, line_no);
    if (count < 0) throw ParseError("count must be >= 0, got " + second_tok, line_no);
    merged[degree] += count;
  }

  DegreeHistogram hist;
  hist.source_label = std::move(source_label);
  hist.entries.reserve(merged.size());
  for (const auto& [degree, count] : merged) hist.entries.push_back({degree, count});
  hist.validate();
  return hist;
}

DegreeHistogram load_histogram(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open histogram file: " + path.string());
  return parse_histogram(in, path.string());
}

}  // namespace tailfit
