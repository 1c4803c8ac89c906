#include "tailfit/pled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tailfit/errors.hpp"
#include "tailfit/render.hpp"

namespace tailfit {

namespace {

constexpr std::int64_t kMaxTailIterations = 100'000'000;

void check_tol(double tol) {
  if (!(tol > 0.0) || tol > 1e-6)
    throw InvalidToleranceError("pled: tol must lie in (0, 1e-6], got " + render_double(tol));
}

// Exponent of the summand, g(x) = -b ln x - x/c, defined for real x > 0.
double summand_exponent(double x, double b, double c) { return -b * std::log(x) - x / c; }

// Location of the summand's maximum on [lo, inf): lo itself for decaying
// summands (b >= 0), else the stationary point -b*c.
double summand_peak(double lo, double b, double c) {
  if (b >= 0.0) return lo;
  return std::max(lo, -b * c);
}

// Sums exp(g(x) - shift) for integer x from j upward until a rigorous
// remainder bound drops below tol * (seed + accumulated). Two bounds are
// combined: the geometric one (term ratios are at most
// exp(-1/c) ((x+1)/x)^max(-b,0), which is < 1 from some point on), and,
// for b > 1, the power-integral one
// (sum_{x>=J} <= exp(-J/c) (J^-b + J^(1-b)/(b-1))), which reaches small
// remainders in far fewer terms when c is huge.
//
// With coarse=true, runs of ~min(j, c)/256 consecutive terms are replaced
// by one midpoint sample of the run (relative error ~1e-5 worst case),
// capping the work at O(10^4) evaluations regardless of c. Reserved for
// the fit objective, where that error is far below the search resolution.
double scaled_tail_sum(double j, bool coarse, double shift, double seed, double b, double c,
                       double tol) {
  const double decay = std::exp(-1.0 / c);
  const double pow_exp = std::max(-b, 0.0);
  double acc = 0.0;
  std::int64_t guard = 0;
  while (true) {
    if (++guard > kMaxTailIterations)
      throw Error("pled: truncation bound not reached within iteration budget (b=" +
                  render_double(b) + ", c=" + render_double(c) + ")");
    const double h = coarse ? std::max(1.0, std::floor(std::min(j, c) / 256.0)) : 1.0;
    acc += (h == 1.0) ? std::exp(summand_exponent(j, b, c) - shift)
                      : h * std::exp(summand_exponent(j + (h - 1.0) / 2.0, b, c) - shift);
    const double jn = j + h;
    const double t_next = std::exp(summand_exponent(jn, b, c) - shift);
    const double rho = pow_exp > 0.0 ? decay * std::pow((jn + 1.0) / jn, pow_exp) : decay;
    double bound = rho < 1.0 ? t_next / (1.0 - rho) : std::numeric_limits<double>::infinity();
    if (b > 1.0) bound = std::min(bound, t_next * (1.0 + jn / (b - 1.0)));
    if (bound <= tol * (seed + acc)) return acc;
    j = jn;
  }
}

}  // namespace

void PledParams::validate() const {
  if (!std::isfinite(b))
    throw InvalidParamsError("pled: b must be a finite real, got " + render_double(b));
  if (!(c > 0.0) || !std::isfinite(c))
    throw InvalidParamsError("pled: c must be a positive finite real, got " + render_double(c));
  if (d_min < 1)
    throw InvalidParamsError("pled: d_min must be >= 1, got " + std::to_string(d_min));
}

std::string PledParams::digest() const {
  std::ostringstream os;
  os << "pled(b=" << render_double(b) << ",c=" << render_double(c) << ",dmin=" << d_min << ")";
  return os.str();
}

PledDistribution::PledDistribution(PledParams params, double tol)
    : params_(params), tol_(tol) {
  params_.validate();
  check_tol(tol_);
  log_norm_sum_ = log_suffix(params_.d_min);
}

double PledDistribution::log_term(double x) const {
  return summand_exponent(x, params_.b, params_.c);
}

double PledDistribution::log_suffix(std::int64_t x) const {
  const double lo = static_cast<double>(x);
  const double shift =
      summand_exponent(summand_peak(lo, params_.b, params_.c), params_.b, params_.c);
  const double acc =
      scaled_tail_sum(lo, /*coarse=*/false, shift, 0.0, params_.b, params_.c, tol_);
  return shift + std::log(acc);
}

double PledDistribution::normalizer() const { return std::exp(-log_norm_sum_); }

double PledDistribution::log_normalizer() const { return -log_norm_sum_; }

double PledDistribution::log_pmf(std::int64_t x) const {
  if (x < params_.d_min)
    throw DomainError("pled pmf: degree " + std::to_string(x) + " below d_min " +
                      std::to_string(params_.d_min));
  return log_term(static_cast<double>(x)) - log_norm_sum_;
}

double PledDistribution::log_ccdf(std::int64_t x) const {
  if (x < params_.d_min)
    throw DomainError("pled ccdf: degree " + std::to_string(x) + " below d_min " +
                      std::to_string(params_.d_min));
  return log_suffix(x) - log_norm_sum_;
}

double PledDistribution::pmf(std::int64_t x) const { return std::exp(log_pmf(x)); }

double PledDistribution::ccdf(std::int64_t x) const { return std::exp(log_ccdf(x)); }

namespace {

std::vector<double> log_ccdf_table_impl(const PledParams& params,
                                        std::span<const std::int64_t> degrees, double tol,
                                        bool coarse_tail) {
  params.validate();
  check_tol(tol);
  if (degrees.empty()) return {};
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < params.d_min)
      throw DomainError("pled ccdf table: degree " + std::to_string(degrees[i]) +
                        " below d_min " + std::to_string(params.d_min));
    if (i > 0 && degrees[i] <= degrees[i - 1])
      throw InvalidParamsError("pled ccdf table: degrees must be strictly ascending");
  }

  const double b = params.b;
  const double c = params.c;
  const std::int64_t top = degrees.back();
  const double shift =
      summand_exponent(summand_peak(static_cast<double>(params.d_min), b, c), b, c);

  // Tail mass beyond the last requested degree, then one descending pass
  // over [d_min, top] recording suffix sums at the requested degrees,
  // normalized by the full sum reached at d_min.
  const double top_term = std::exp(summand_exponent(static_cast<double>(top), b, c) - shift);
  double suffix = scaled_tail_sum(static_cast<double>(top) + 1.0, coarse_tail, shift,
                                  top_term, b, c, tol);

  std::vector<double> out(degrees.size());
  std::size_t next = degrees.size();
  for (std::int64_t j = top; j >= params.d_min; --j) {
    suffix += std::exp(summand_exponent(static_cast<double>(j), b, c) - shift);
    if (next > 0 && degrees[next - 1] == j) out[--next] = std::log(suffix);
  }
  const double log_total = std::log(suffix);
  for (double& v : out) v -= log_total;
  return out;
}

}  // namespace

std::vector<double> PledDistribution::log_ccdf_table(
    std::span<const std::int64_t> degrees) const {
  return log_ccdf_table_impl(params_, degrees, tol_, /*coarse_tail=*/false);
}

double pled_normalizer(const PledParams& params, double tol) {
  return PledDistribution(params, tol).normalizer();
}

namespace detail {

std::vector<double> pled_fit_log_ccdf_table(const PledParams& params,
                                            std::span<const std::int64_t> degrees,
                                            double tol) {
  return log_ccdf_table_impl(params, degrees, tol, /*coarse_tail=*/true);
}

}  // namespace detail

}  // namespace tailfit
