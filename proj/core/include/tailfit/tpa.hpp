#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tailfit {

/// Parameters of the tempered-preferential-attachment degree distribution.
///
/// The pmf has a product-form head up to the tempering threshold a2 and an
/// exactly geometric tail beyond it with ratio q = a2 / (a2 + w):
///
///   p(x) = p_a2 * prod_{k=x}^{a2-1} (k+w+1)/k     for d_min <= x <= a2
///   p(x) = p_a2 * q^(x-a2)                        for x >= a2
///
/// where p_a2 normalizes the distribution on {d_min, d_min+1, ...}.
struct TpaParams {
  std::int64_t a2 = 1;  ///< tempering threshold, >= 1
  double w = 1.0;       ///< tempering parameter, > 0
  std::int64_t d_min = 1;
  /// Optional companion threshold carried as inert metadata. It is echoed
  /// into digests and reports but enters no formula.
  std::optional<std::int64_t> a1 = std::nullopt;

  /// q = a2 / (a2 + w), strictly inside (0, 1) for valid parameters.
  double tail_ratio() const;

  /// Asymptotic head exponent label: p(x) ~ x^-(1+w).
  double asymptotic_exponent() const { return 1.0 + w; }

  /// Throws InvalidParamsError unless a2 >= 1, w > 0 finite, d_min >= 1
  /// and a1 (when present) >= 1.
  void validate() const;

  std::string digest() const;  ///< e.g. "tpa(a2=90,w=0.83,dmin=2)"

  friend bool operator==(const TpaParams&, const TpaParams&) = default;
};

/// Evaluator for the TPA pmf and ccdf.
///
/// Head products are accumulated in log space via log-Gamma identities
/// (prod_{k=j}^{a2-1} (k+w+1)/k = exp(lgamma(a2+w+1) - lgamma(j+w+1)
/// - lgamma(a2) + lgamma(j))), so thresholds up to a2 ~ 1e6 evaluate
/// without overflow. Construction is O(a2); pmf/ccdf lookups are O(1).
///
/// Immutable after construction; concurrent reads are safe.
class TpaDistribution {
 public:
  explicit TpaDistribution(TpaParams params);

  const TpaParams& params() const { return params_; }
  std::int64_t d_min() const { return params_.d_min; }

  double tail_ratio() const { return q_; }

  /// Normalization anchor: the probability mass at degree a2.
  /// For d_min <= a2 this is
  ///   [ 1/(1-q) + sum_{j=d_min}^{a2-1} prod_{k=j}^{a2-1} (k+w+1)/k ]^-1.
  /// For d_min > a2 the distribution is purely geometric on {d_min, ...}
  /// and the anchor is the virtual value (1-q) q^(a2-d_min), which keeps
  /// the tail formulas valid verbatim (it may exceed 1; it is not itself
  /// a probability of a supported degree in that regime).
  double p_a2() const;

  double pmf(std::int64_t x) const;   ///< DomainError if x < d_min
  double ccdf(std::int64_t x) const;  ///< P(X >= x); DomainError if x < d_min

  double log_pmf(std::int64_t x) const;   ///< natural log of pmf
  double log_ccdf(std::int64_t x) const;  ///< natural log of ccdf

  /// The two closed-form ccdf branches, exposed separately so their
  /// agreement at x = a2 can be checked directly.
  /// Head branch: p_a2 * (1/(1-q) + sum_{j=x}^{a2-1} prod (k+w+1)/k),
  /// valid for d_min <= x <= a2 (requires d_min <= a2).
  double ccdf_head_branch(std::int64_t x) const;
  /// Tail branch: (p_a2/(1-q)) * q^(x-a2), valid for x >= max(a2, d_min).
  double ccdf_tail_branch(std::int64_t x) const;

 private:
  bool has_head() const { return params_.d_min < params_.a2; }

  TpaParams params_;
  double q_ = 0;
  double log_q_ = 0;
  double log_one_minus_q_ = 0;
  double log_p_a2_ = 0;
  // Log head tables indexed by x - d_min for x in [d_min, a2], present
  // only when d_min <= a2:
  //   head_log_prod_[i]  = log prod_{k=x}^{a2-1} (k+w+1)/k
  //   head_log_tail_sum_[i] = log(1/(1-q) + sum_{j=x}^{a2-1} prod ...)
  // so log ccdf(x) = log_p_a2_ + head_log_tail_sum_[i].
  std::vector<double> head_log_prod_;
  std::vector<double> head_log_tail_sum_;
};

}  // namespace tailfit
