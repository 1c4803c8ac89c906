#include "tailfit/table.hpp"

#include <cmath>

#include "tailfit/errors.hpp"

namespace tailfit {

namespace {

constexpr std::int64_t kMaxRangeSpan = 10'000'000;

void check_degrees(std::span<const std::int64_t> degrees, std::int64_t d_min) {
  if (degrees.empty()) throw InvalidParamsError("tabulate: degree list is empty");
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < d_min)
      throw DomainError("tabulate: degree " + std::to_string(degrees[i]) + " below d_min " +
                        std::to_string(d_min));
    if (i > 0 && degrees[i] <= degrees[i - 1])
      throw InvalidParamsError("tabulate: degrees must be strictly ascending");
  }
}

}  // namespace

std::string to_string(ModelId id) { return id == ModelId::tpa ? "tpa" : "pled"; }

ModelEvaluation tabulate(const TpaDistribution& dist, std::span<const std::int64_t> degrees) {
  check_degrees(degrees, dist.d_min());
  ModelEvaluation ev;
  ev.model_id = ModelId::tpa;
  ev.params_digest = dist.params().digest();
  ev.degrees.assign(degrees.begin(), degrees.end());
  ev.pmf.reserve(degrees.size());
  ev.ccdf.reserve(degrees.size());
  for (std::int64_t d : degrees) {
    ev.pmf.push_back(dist.pmf(d));
    ev.ccdf.push_back(dist.ccdf(d));
  }
  return ev;
}

ModelEvaluation tabulate(const PledDistribution& dist, std::span<const std::int64_t> degrees) {
  check_degrees(degrees, dist.d_min());
  ModelEvaluation ev;
  ev.model_id = ModelId::pled;
  ev.params_digest = dist.params().digest();
  ev.degrees.assign(degrees.begin(), degrees.end());
  ev.pmf.reserve(degrees.size());
  for (std::int64_t d : degrees) ev.pmf.push_back(dist.pmf(d));
  const std::vector<double> log_ccdf = dist.log_ccdf_table(degrees);
  ev.ccdf.reserve(degrees.size());
  for (double v : log_ccdf) ev.ccdf.push_back(std::exp(v));
  return ev;
}

std::vector<std::int64_t> degree_range(std::int64_t first, std::int64_t last) {
  if (first < 1 || last < first)
    throw InvalidParamsError("degree range: need 1 <= first <= last, got " +
                             std::to_string(first) + ".." + std::to_string(last));
  if (last - first + 1 > kMaxRangeSpan)
    throw InvalidParamsError("degree range: span exceeds " + std::to_string(kMaxRangeSpan));
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(last - first + 1));
  for (std::int64_t d = first; d <= last; ++d) out.push_back(d);
  return out;
}

}  // namespace tailfit
