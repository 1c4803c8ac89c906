#include "tailfit/empirical.hpp"

#include <algorithm>

#include "tailfit/errors.hpp"

namespace tailfit {

EmpiricalDistribution::EmpiricalDistribution(std::int64_t d_min, std::int64_t n_total,
                                             const std::vector<std::int64_t>& degrees,
                                             const std::vector<std::int64_t>& counts) {
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < d_min || counts[i] <= 0) continue;
    degrees_.push_back(degrees[i]);
    counts_.push_back(counts[i]);
  }
  std::int64_t suffix = 0;
  suffix_counts_.assign(counts_.size(), 0);
  for (std::size_t i = counts_.size(); i-- > 0;) {
    suffix += counts_[i];
    suffix_counts_[i] = suffix;
  }
  if (suffix == 0)
    throw EmptySupportError("truncation at d_min=" + std::to_string(d_min) +
                            " leaves no observations");
  d_min_ = d_min;
  n_total_ = n_total;
  n_kept_ = suffix;
  const double n = static_cast<double>(suffix);
  pmf_.reserve(counts_.size());
  ccdf_.reserve(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    pmf_.push_back(static_cast<double>(counts_[i]) / n);
    ccdf_.push_back(static_cast<double>(suffix_counts_[i]) / n);
  }
}

double EmpiricalDistribution::eta() const {
  return static_cast<double>(n_total_) / static_cast<double>(n_kept_);
}

double EmpiricalDistribution::ccdf_at(std::int64_t x) const {
  if (x < d_min_)
    throw DomainError("empirical ccdf: degree " + std::to_string(x) + " below d_min " +
                      std::to_string(d_min_));
  const auto it = std::lower_bound(degrees_.begin(), degrees_.end(), x);
  if (it == degrees_.end()) return 0.0;
  const std::size_t i = static_cast<std::size_t>(it - degrees_.begin());
  return static_cast<double>(suffix_counts_[i]) / static_cast<double>(n_kept_);
}

EmpiricalDistribution truncate_renormalize(const DegreeHistogram& hist, std::int64_t d_min) {
  hist.validate();
  if (d_min < 1)
    throw InvalidParamsError("truncate: d_min must be >= 1, got " + std::to_string(d_min));
  std::vector<std::int64_t> degrees, counts;
  degrees.reserve(hist.entries.size());
  counts.reserve(hist.entries.size());
  std::int64_t n_total = 0;
  for (const DegreeHistogram::Entry& e : hist.entries) {
    n_total += e.count;
    degrees.push_back(e.degree);
    counts.push_back(e.count);
  }
  return EmpiricalDistribution(d_min, n_total, degrees, counts);
}

EmpiricalDistribution truncate(const EmpiricalDistribution& dist, std::int64_t d_min) {
  if (d_min < dist.d_min())
    throw InvalidParamsError("truncate: cannot lower d_min from " +
                             std::to_string(dist.d_min()) + " to " + std::to_string(d_min));
  return EmpiricalDistribution(d_min, dist.n_total(), dist.degrees(), dist.counts());
}

}  // namespace tailfit
