#include "tailfit/tpa.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "tailfit/errors.hpp"
#include "tailfit/render.hpp"

namespace tailfit {

namespace {

// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (std::isinf(b) && b < 0) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace

double TpaParams::tail_ratio() const {
  return static_cast<double>(a2) / (static_cast<double>(a2) + w);
}

void TpaParams::validate() const {
  if (a2 < 1) throw InvalidParamsError("tpa: a2 must be >= 1, got " + std::to_string(a2));
  if (!(w > 0.0) || !std::isfinite(w))
    throw InvalidParamsError("tpa: w must be a positive finite real, got " + render_double(w));
  if (d_min < 1)
    throw InvalidParamsError("tpa: d_min must be >= 1, got " + std::to_string(d_min));
  if (a1.has_value() && *a1 < 1)
    throw InvalidParamsError("tpa: a1 metadata must be >= 1, got " + std::to_string(*a1));
}

std::string TpaParams::digest() const {
  std::ostringstream os;
  os << "tpa(a2=" << a2 << ",w=" << render_double(w) << ",dmin=" << d_min;
  if (a1.has_value()) os << ",a1=" << *a1;
  os << ")";
  return os.str();
}

TpaDistribution::TpaDistribution(TpaParams params) : params_(params) {
  params_.validate();
  const double a2 = static_cast<double>(params_.a2);
  const double w = params_.w;
  q_ = a2 / (a2 + w);
  // 1 - q = w / (a2 + w); evaluated directly to keep precision when q -> 1.
  log_one_minus_q_ = std::log(w) - std::log(a2 + w);
  log_q_ = std::log1p(-w / (a2 + w));

  if (params_.d_min > params_.a2) {
    // Purely geometric regime: pmf(x) = (1-q) q^(x-d_min) on {d_min, ...}.
    log_p_a2_ = log_one_minus_q_ +
                static_cast<double>(params_.a2 - params_.d_min) * log_q_;
    return;
  }

  // Head tables over x in [d_min, a2]. With
  //   H(x) = log prod_{k=x}^{a2-1} (k+w+1)/k
  //        = [lgamma(a2+w+1) - lgamma(a2)] - [lgamma(x+w+1) - lgamma(x)]
  // the log tail sums satisfy the downward recursion
  //   L(a2) = -log(1-q),  L(x) = logaddexp(L(x+1), H(x)),
  // and the normalization ccdf(d_min) = 1 pins log p_a2 = -L(d_min).
  const std::size_t n = static_cast<std::size_t>(params_.a2 - params_.d_min) + 1;
  head_log_prod_.resize(n);
  head_log_tail_sum_.resize(n);
  const double top = std::lgamma(a2 + w + 1.0) - std::lgamma(a2);
  head_log_prod_[n - 1] = 0.0;
  head_log_tail_sum_[n - 1] = -log_one_minus_q_;
  for (std::size_t i = n - 1; i-- > 0;) {
    const double x = static_cast<double>(params_.d_min + static_cast<std::int64_t>(i));
    head_log_prod_[i] = top - (std::lgamma(x + w + 1.0) - std::lgamma(x));
    head_log_tail_sum_[i] = log_add_exp(head_log_tail_sum_[i + 1], head_log_prod_[i]);
  }
  log_p_a2_ = -head_log_tail_sum_[0];
}

double TpaDistribution::p_a2() const { return std::exp(log_p_a2_); }

double TpaDistribution::log_pmf(std::int64_t x) const {
  if (x < params_.d_min)
    throw DomainError("tpa pmf: degree " + std::to_string(x) + " below d_min " +
                      std::to_string(params_.d_min));
  if (x >= params_.a2 || !has_head())
    return log_p_a2_ + static_cast<double>(x - params_.a2) * log_q_;
  return log_p_a2_ + head_log_prod_[static_cast<std::size_t>(x - params_.d_min)];
}

double TpaDistribution::log_ccdf(std::int64_t x) const {
  if (x < params_.d_min)
    throw DomainError("tpa ccdf: degree " + std::to_string(x) + " below d_min " +
                      std::to_string(params_.d_min));
  if (x >= params_.a2 || !has_head())
    return log_p_a2_ - log_one_minus_q_ + static_cast<double>(x - params_.a2) * log_q_;
  return log_p_a2_ + head_log_tail_sum_[static_cast<std::size_t>(x - params_.d_min)];
}

double TpaDistribution::pmf(std::int64_t x) const { return std::exp(log_pmf(x)); }

double TpaDistribution::ccdf(std::int64_t x) const { return std::exp(log_ccdf(x)); }

double TpaDistribution::ccdf_head_branch(std::int64_t x) const {
  if (params_.d_min > params_.a2)
    throw DomainError("tpa ccdf head branch: no head when d_min > a2");
  if (x < params_.d_min || x > params_.a2)
    throw DomainError("tpa ccdf head branch: degree " + std::to_string(x) +
                      " outside [d_min, a2]");
  return std::exp(log_p_a2_ + head_log_tail_sum_[static_cast<std::size_t>(x - params_.d_min)]);
}

double TpaDistribution::ccdf_tail_branch(std::int64_t x) const {
  if (x < params_.a2 || x < params_.d_min)
    throw DomainError("tpa ccdf tail branch: degree " + std::to_string(x) +
                      " below max(a2, d_min)");
  return std::exp(log_p_a2_ - log_one_minus_q_ +
                  static_cast<double>(x - params_.a2) * log_q_);
}

}  // namespace tailfit
