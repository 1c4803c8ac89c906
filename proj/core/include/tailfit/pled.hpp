#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tailfit {

/// Parameters of the power-law-with-exponential-decay distribution
///   p(x) = A x^-b exp(-x/c)  on {d_min, d_min+1, ...},
/// with A fixed by normalization. c > 0 makes the normalizing sum converge
/// for any real b.
struct PledParams {
  double b = 1.0;  ///< power-law exponent (any finite real)
  double c = 1.0;  ///< exponential decay scale, > 0
  std::int64_t d_min = 2;

  void validate() const;       ///< throws InvalidParamsError
  std::string digest() const;  ///< e.g. "pled(b=1.63,c=350,dmin=2)"

  friend bool operator==(const PledParams&, const PledParams&) = default;
};

/// Default truncation tolerance for the infinite sums.
inline constexpr double kPledDefaultTol = 1e-12;

/// Evaluator for the PLED pmf and ccdf.
///
/// Infinite sums are truncated with a geometric tail bound: successive
/// terms shrink by at most rho(j) = exp(-1/c) * ((j+1)/j)^max(-b,0), so
/// once rho(j) < 1 the remainder beyond j is at most
/// term(j) * rho/(1-rho), and summation stops when that bound drops below
/// tol times the accumulated sum. Terms are rescaled by the peak term so
/// arbitrarily large |b| cannot overflow.
///
/// Immutable after construction; concurrent reads are safe.
class PledDistribution {
 public:
  explicit PledDistribution(PledParams params, double tol = kPledDefaultTol);

  const PledParams& params() const { return params_; }
  std::int64_t d_min() const { return params_.d_min; }
  double tol() const { return tol_; }

  /// Normalization constant A = 1 / sum_{x=d_min}^inf x^-b exp(-x/c).
  double normalizer() const;
  double log_normalizer() const;

  double pmf(std::int64_t x) const;   ///< DomainError if x < d_min
  double ccdf(std::int64_t x) const;  ///< P(X >= x); DomainError if x < d_min

  double log_pmf(std::int64_t x) const;
  double log_ccdf(std::int64_t x) const;

  /// Natural-log ccdf at every requested degree (strictly ascending, all
  /// >= d_min) in one backward pass over the support. Equivalent to
  /// calling log_ccdf per degree, but O(max degree + tail) total instead
  /// of per call. The pass is self-normalizing: a leading degree equal to
  /// d_min maps to exactly 0.
  std::vector<double> log_ccdf_table(std::span<const std::int64_t> degrees) const;

 private:
  double log_term(double x) const;         // -b ln x - x/c
  double log_suffix(std::int64_t x) const; // log sum_{j=x}^inf exp(log_term(j))

  PledParams params_;
  double tol_ = kPledDefaultTol;
  double log_norm_sum_ = 0;  // log of the normalizing sum; A = exp(-this)
};

/// Normalization constant with an explicit truncation tolerance.
/// tol must lie in (0, 1e-6]; otherwise InvalidToleranceError.
double pled_normalizer(const PledParams& params, double tol);

namespace detail {

/// Fit-loop variant of PledDistribution::log_ccdf_table. Identical
/// contract, but the tail beyond the last requested degree is summed in
/// adaptive strides of ~min(x, c)/256 with midpoint sampling (relative
/// error ~1e-5 worst case, far below the fit objective's resolution) so
/// that grid search over large c stays O(10^4) terms per candidate
/// instead of O(c).
std::vector<double> pled_fit_log_ccdf_table(const PledParams& params,
                                            std::span<const std::int64_t> degrees,
                                            double tol);

}  // namespace detail

}  // namespace tailfit
