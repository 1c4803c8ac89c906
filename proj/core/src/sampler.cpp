#include "tailfit/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "tailfit/errors.hpp"

namespace tailfit {

namespace {

constexpr double kTableTailMass = 1e-12;
constexpr std::size_t kMaxTableSize = 10'000'000;

double next_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::int64_t index_from_table(const std::vector<double>& cum, double u) {
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  return it == cum.end() ? static_cast<std::int64_t>(cum.size()) - 1
                         : static_cast<std::int64_t>(it - cum.begin());
}

DegreeHistogram histogram_from_counts(const std::map<std::int64_t, std::int64_t>& counts,
                                      std::string label) {
  DegreeHistogram hist;
  hist.source_label = std::move(label);
  hist.entries.reserve(counts.size());
  for (const auto& [degree, count] : counts) hist.entries.push_back({degree, count});
  hist.validate();
  return hist;
}

DegreeHistogram sample_tpa(const TpaParams& params, std::int64_t n, std::uint64_t seed) {
  const TpaDistribution dist(params);
  const std::int64_t d_min = dist.d_min();
  const std::int64_t a2 = params.a2;
  const double log_q = std::log(dist.tail_ratio());

  // Cumulative head over [d_min, a2]; everything past a2 is geometric and
  // inverted in closed form from the same uniform.
  std::vector<double> head_cum;
  double head_total = 0.0;
  if (d_min <= a2) {
    head_cum.reserve(static_cast<std::size_t>(a2 - d_min + 1));
    for (std::int64_t x = d_min; x <= a2; ++x) {
      head_total += dist.pmf(x);
      head_cum.push_back(head_total);
    }
  }
  const std::int64_t tail_start = d_min <= a2 ? a2 + 1 : d_min;

  std::mt19937_64 gen(seed);
  std::map<std::int64_t, std::int64_t> counts;
  for (std::int64_t i = 0; i < n; ++i) {
    const double u = next_uniform(gen);
    if (u < head_total) {
      ++counts[d_min + index_from_table(head_cum, u)];
      continue;
    }
    const double v = head_total < 1.0 ? (u - head_total) / (1.0 - head_total) : 0.0;
    const double upper = 1.0 - v;  // in (0, 1], exactly 1 when u == head_total
    const std::int64_t k =
        upper >= 1.0 ? 0 : static_cast<std::int64_t>(std::floor(std::log(upper) / log_q));
    ++counts[tail_start + std::max<std::int64_t>(0, k)];
  }

  std::ostringstream label;
  label << "sample:" << params.digest() << ",n=" << n << ",seed=" << seed;
  return histogram_from_counts(counts, label.str());
}

DegreeHistogram sample_pled(const PledParams& params, std::int64_t n, std::uint64_t seed) {
  const PledDistribution dist(params);
  const std::int64_t d_min = dist.d_min();

  std::vector<double> cum;
  double total = 0.0;
  std::int64_t x = d_min;
  while (1.0 - total >= kTableTailMass) {
    if (cum.size() >= kMaxTableSize)
      throw Error("pled sample: cumulative table cap reached; c is too large to tabulate");
    total += dist.pmf(x++);
    cum.push_back(total);
  }
  cum.back() = 1.0;

  std::mt19937_64 gen(seed);
  std::map<std::int64_t, std::int64_t> counts;
  for (std::int64_t i = 0; i < n; ++i) {
    const double u = next_uniform(gen);
    ++counts[d_min + index_from_table(cum, u)];
  }

  std::ostringstream label;
  label << "sample:" << params.digest() << ",n=" << n << ",seed=" << seed;
  return histogram_from_counts(counts, label.str());
}

}  // namespace

void SampleSpec::validate() const {
  if (n < 1) throw InvalidParamsError("sample: n must be >= 1, got " + std::to_string(n));
  std::visit([](const auto& p) { p.validate(); }, params);
}

DegreeHistogram sample(const SampleSpec& spec) {
  spec.validate();
  if (const TpaParams* tp = std::get_if<TpaParams>(&spec.params))
    return sample_tpa(*tp, spec.n, spec.seed);
  return sample_pled(std::get<PledParams>(spec.params), spec.n, spec.seed);
}

}  // namespace tailfit
