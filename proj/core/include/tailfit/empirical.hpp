#pragma once

#include <cstdint>
#include <vector>

#include "tailfit/histogram.hpp"

namespace tailfit {

// Empirical pmf/ccdf over the observed support at or above a cutoff d_min.
// Counts are kept alongside the normalized values so that further truncation
// stays exact integer arithmetic; eta = n_total / n_kept is the factor the
// cutoff discards.
class EmpiricalDistribution {
 public:
  std::int64_t d_min() const { return d_min_; }
  std::int64_t n_total() const { return n_total_; }
  std::int64_t n_kept() const { return n_kept_; }
  double eta() const;

  const std::vector<std::int64_t>& degrees() const { return degrees_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  const std::vector<double>& pmf() const { return pmf_; }
  const std::vector<double>& ccdf() const { return ccdf_; }

  // Step-function ccdf P(X >= x) for arbitrary x >= d_min; exactly 1 at or
  // below the smallest observed degree, 0 beyond the largest.
  double ccdf_at(std::int64_t x) const;

 private:
  EmpiricalDistribution(std::int64_t d_min, std::int64_t n_total,
                        const std::vector<std::int64_t>& degrees,
                        const std::vector<std::int64_t>& counts);

  std::int64_t d_min_ = 1;
  std::int64_t n_total_ = 0;
  std::int64_t n_kept_ = 0;
  std::vector<std::int64_t> degrees_;
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> suffix_counts_;
  std::vector<double> pmf_;
  std::vector<double> ccdf_;

  friend EmpiricalDistribution truncate_renormalize(const DegreeHistogram& hist,
                                                    std::int64_t d_min);
  friend EmpiricalDistribution truncate(const EmpiricalDistribution& dist,
                                        std::int64_t d_min);
};

// Drops degrees below d_min and renormalizes over what remains.
EmpiricalDistribution truncate_renormalize(const DegreeHistogram& hist, std::int64_t d_min);

// Re-truncates at a higher cutoff using the retained counts; equivalent to
// truncate_renormalize on the original histogram at that cutoff.
EmpiricalDistribution truncate(const EmpiricalDistribution& dist, std::int64_t d_min);

}  // namespace tailfit
