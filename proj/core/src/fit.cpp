#include "tailfit/fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "tailfit/errors.hpp"
#include "tailfit/render.hpp"

namespace tailfit {

namespace {

constexpr double kLn10 = 2.302585092994045684;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Refinement scale floors: neighborhood factors never shrink below these,
// so a later improving move can always regrow them. They set the resolution
// at which continuous parameters are reported.
constexpr double kMinFactor = 1.0 + 1e-6;
constexpr double kMinBstepScale = 1e-6;

int thread_count() {
  if (const char* env = std::getenv("TAILFIT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != nullptr && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(0..n-1) on the configured number of threads. Each index writes its
// own output slot, so scheduling never affects results.
template <typename Fn>
void parallel_for_index(std::size_t n, Fn&& fn) {
  const std::size_t threads = std::min(static_cast<std::size_t>(thread_count()), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&fn, t, n, threads] {
      for (std::size_t i = t; i < n; i += threads) fn(i);
    });
  for (std::thread& th : pool) th.join();
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out.push_back(lo * std::pow(hi / lo, t));
  }
  return out;
}

std::vector<double> lin_spaced(double lo, double hi, int n) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out.push_back(lo + (hi - lo) * t);
  }
  return out;
}

std::vector<std::int64_t> log_spaced_ints(std::int64_t lo, std::int64_t hi, int n) {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    const double v = static_cast<double>(lo) *
                     std::pow(static_cast<double>(hi) / static_cast<double>(lo), t);
    out.push_back(std::clamp<std::int64_t>(std::llround(v), lo, hi));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct FinitePairs {
  std::vector<double> x;
  std::vector<double> y;
};

FinitePairs collect_finite(std::span<const double> x, std::span<const double> y,
                           const char* who) {
  if (x.size() != y.size()) throw InvalidParamsError(std::string(who) + ": length mismatch");
  FinitePairs p;
  p.x.reserve(x.size());
  p.y.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    p.x.push_back(x[i]);
    p.y.push_back(y[i]);
  }
  if (p.x.size() < 3)
    throw InsufficientDataError(std::string(who) + ": need at least 3 finite pairs, have " +
                                std::to_string(p.x.size()));
  return p;
}

struct Moments {
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
};

Moments central_moments(const FinitePairs& p) {
  const std::size_t n = p.x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += p.x[i];
    my += p.y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  Moments m;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = p.x[i] - mx;
    const double dy = p.y[i] - my;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  return m;
}

}  // namespace

double pearson_r(std::span<const double> x, std::span<const double> y) {
  const FinitePairs p = collect_finite(x, y, "pearson_r");
  const Moments m = central_moments(p);
  if (m.sxx == 0.0 || m.syy == 0.0)
    throw ZeroVarianceError("pearson_r: a coordinate has zero variance");
  return std::clamp(m.sxy / std::sqrt(m.sxx * m.syy), -1.0, 1.0);
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  const FinitePairs p = collect_finite(x, y, "least_squares_slope");
  const Moments m = central_moments(p);
  if (m.sxx == 0.0)
    throw ZeroVarianceError("least_squares_slope: abscissa has zero variance");
  return m.sxy / m.sxx;
}

void FitConfig::validate() const {
  if (a2_lo < 1 || a2_hi < a2_lo)
    throw InvalidParamsError("fit config: need 1 <= a2_lo <= a2_hi");
  if (!(w_range.lo > 0.0) || !(w_range.hi >= w_range.lo) || !std::isfinite(w_range.hi))
    throw InvalidParamsError("fit config: w range must satisfy 0 < lo <= hi");
  if (!std::isfinite(b_range.lo) || !std::isfinite(b_range.hi) || b_range.hi < b_range.lo)
    throw InvalidParamsError("fit config: b range must satisfy lo <= hi");
  if (!(c_range.lo > 0.0) || !(c_range.hi >= c_range.lo) || !std::isfinite(c_range.hi))
    throw InvalidParamsError("fit config: c range must satisfy 0 < lo <= hi");
  if (grid_density < 2) throw InvalidParamsError("fit config: grid_density must be >= 2");
  if (refine_iterations < 0)
    throw InvalidParamsError("fit config: refine_iterations must be >= 0");
  if (!(refine_shrink > 0.0) || !(refine_shrink < 1.0))
    throw InvalidParamsError("fit config: refine_shrink must lie in (0, 1)");
}

std::string FitConfig::digest() const {
  std::ostringstream os;
  os << "fitcfg(a2=[" << a2_lo << "," << a2_hi << "],w=[" << render_double(w_range.lo) << ","
     << render_double(w_range.hi) << "],b=[" << render_double(b_range.lo) << ","
     << render_double(b_range.hi) << "],c=[" << render_double(c_range.lo) << ","
     << render_double(c_range.hi) << "],grid=" << grid_density
     << ",refine=" << refine_iterations << ",shrink=" << render_double(refine_shrink) << ")";
  return os.str();
}

namespace {

std::vector<double> empirical_log10(const EmpiricalDistribution& emp) {
  std::vector<double> out;
  out.reserve(emp.ccdf().size());
  for (double v : emp.ccdf()) out.push_back(std::log10(v));
  return out;
}

std::vector<double> tpa_model_log10(const TpaParams& params,
                                    std::span<const std::int64_t> degrees) {
  const TpaDistribution dist(params);
  std::vector<double> out(degrees.size());
  for (std::size_t i = 0; i < degrees.size(); ++i)
    out[i] = dist.log_ccdf(degrees[i]) / kLn10;
  return out;
}

std::vector<double> pled_model_log10(const PledParams& params,
                                     std::span<const std::int64_t> degrees) {
  const PledDistribution dist(params);
  const std::vector<double> table = dist.log_ccdf_table(degrees);
  std::vector<double> out(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) out[i] = table[i] / kLn10;
  return out;
}

void check_d_min(std::int64_t model_d_min, const EmpiricalDistribution& emp,
                 const char* who) {
  if (model_d_min != emp.d_min())
    throw InvalidParamsError(std::string(who) + ": model d_min " +
                             std::to_string(model_d_min) + " does not match empirical d_min " +
                             std::to_string(emp.d_min()));
}

std::vector<Residual> make_residuals(std::span<const std::int64_t> degrees,
                                     std::span<const double> emp_log10,
                                     std::span<const double> model_log10) {
  std::vector<Residual> out;
  out.reserve(degrees.size());
  for (std::size_t i = 0; i < degrees.size(); ++i)
    out.push_back({degrees[i], emp_log10[i], model_log10[i]});
  return out;
}

RSquared correlate(const EmpiricalDistribution& emp, std::span<const double> emp_log10,
                   std::span<const double> model_log10, CcdfSpace space) {
  RSquared out;
  if (space == CcdfSpace::log10) {
    out.r = pearson_r(emp_log10, model_log10);
  } else {
    std::vector<double> model_lin(model_log10.size());
    for (std::size_t i = 0; i < model_log10.size(); ++i)
      model_lin[i] = std::pow(10.0, model_log10[i]);
    out.r = pearson_r(emp.ccdf(), model_lin);
  }
  out.r_squared = out.r * out.r;
  return out;
}

struct SseResult {
  double sse = kInf;
  std::size_t n = 0;
};

SseResult sse_against(std::span<const double> emp_log10,
                      std::span<const double> model_log10) {
  double sse = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < emp_log10.size(); ++i) {
    if (!std::isfinite(model_log10[i])) continue;
    const double d = emp_log10[i] - model_log10[i];
    sse += d * d;
    ++n;
  }
  if (n < 3) return {};
  return {sse, n};
}

// Candidate objectives swallow library errors (iteration budgets, degenerate
// parameter corners) and report an infinite objective instead, so a bad grid
// cell cannot abort the search or escape a worker thread.
SseResult tpa_candidate_sse(std::int64_t a2, double w, std::int64_t d_min,
                            std::span<const std::int64_t> degrees,
                            std::span<const double> emp_log10) {
  try {
    const TpaDistribution dist({a2, w, d_min});
    std::vector<double> model(degrees.size());
    for (std::size_t i = 0; i < degrees.size(); ++i)
      model[i] = dist.log_ccdf(degrees[i]) / kLn10;
    return sse_against(emp_log10, model);
  } catch (const Error&) {
    return {};
  }
}

SseResult pled_candidate_sse(double b, double c, std::int64_t d_min,
                             std::span<const std::int64_t> degrees,
                             std::span<const double> emp_log10) {
  try {
    const std::vector<double> table =
        detail::pled_fit_log_ccdf_table({b, c, d_min}, degrees, kPledDefaultTol);
    std::vector<double> model(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) model[i] = table[i] / kLn10;
    return sse_against(emp_log10, model);
  } catch (const Error&) {
    return {};
  }
}

struct Scored1d {
  double value = 0.0;
  double sse = kInf;
};

// Conditional optimum along one multiplicatively scaled axis. From the seed,
// probe value/f and value*f each round; the window f shrinks only on rounds
// with no improvement, so a long slide toward a distant optimum never stalls,
// and the loop ends once f reaches the resolution floor.
template <typename Eval>
Scored1d line_search_multiplicative(Eval&& eval, double seed, double f0, double lo,
                                    double hi, double shrink) {
  Scored1d best{std::clamp(seed, lo, hi), kInf};
  best.sse = eval(best.value);
  double f = std::max(kMinFactor, f0);
  for (int i = 0; i < 256 && f > kMinFactor; ++i) {
    bool improved = false;
    for (const double raw : {best.value / f, best.value * f}) {
      const double cand = std::clamp(raw, lo, hi);
      if (cand == best.value) continue;
      const double s = eval(cand);
      if (s < best.sse) {
        best = {cand, s};
        improved = true;
      }
    }
    if (!improved) f = std::max(kMinFactor, std::pow(f, shrink));
  }
  return best;
}

void check_fit_input(const EmpiricalDistribution& emp, const FitConfig& config) {
  config.validate();
  if (emp.degrees().size() < 5)
    throw InsufficientDataError("fit: need at least 5 distinct observed degrees, have " +
                                std::to_string(emp.degrees().size()));
}

FitReport finish_report(ModelId id, std::variant<TpaParams, PledParams> params,
                        const EmpiricalDistribution& emp,
                        std::span<const double> emp_log10, std::string config_digest,
                        std::span<const double> model_log10) {
  FitReport rep;
  rep.model_id = id;
  rep.params = std::move(params);
  rep.d_min = emp.d_min();
  rep.config_digest = std::move(config_digest);

  const SseResult s = sse_against(emp_log10, model_log10);
  if (s.n < 3)
    throw InsufficientDataError("fit: fewer than 3 usable degrees at the optimum");
  rep.sse_log10_ccdf = s.sse;
  rep.n_points = s.n;
  rep.r = pearson_r(emp_log10, model_log10);
  rep.r_squared = rep.r * rep.r;
  rep.residuals = make_residuals(emp.degrees(), emp_log10, model_log10);
  return rep;
}

}  // namespace

std::vector<Residual> log_ccdf_residuals(const TpaParams& params,
                                         const EmpiricalDistribution& emp) {
  params.validate();
  check_d_min(params.d_min, emp, "log_ccdf_residuals");
  return make_residuals(emp.degrees(), empirical_log10(emp),
                        tpa_model_log10(params, emp.degrees()));
}

std::vector<Residual> log_ccdf_residuals(const PledParams& params,
                                         const EmpiricalDistribution& emp) {
  params.validate();
  check_d_min(params.d_min, emp, "log_ccdf_residuals");
  return make_residuals(emp.degrees(), empirical_log10(emp),
                        pled_model_log10(params, emp.degrees()));
}

RSquared r_squared(const TpaParams& params, const EmpiricalDistribution& emp,
                   CcdfSpace space) {
  params.validate();
  check_d_min(params.d_min, emp, "r_squared");
  return correlate(emp, empirical_log10(emp), tpa_model_log10(params, emp.degrees()), space);
}

RSquared r_squared(const PledParams& params, const EmpiricalDistribution& emp,
                   CcdfSpace space) {
  params.validate();
  check_d_min(params.d_min, emp, "r_squared");
  return correlate(emp, empirical_log10(emp), pled_model_log10(params, emp.degrees()),
                   space);
}

FitReport fit_tpa(const EmpiricalDistribution& emp, const FitConfig& config) {
  check_fit_input(emp, config);
  const std::vector<std::int64_t>& degrees = emp.degrees();
  const std::vector<double> emp_log10 = empirical_log10(emp);
  const std::int64_t d_min = emp.d_min();

  const std::vector<std::int64_t> a2s =
      log_spaced_ints(config.a2_lo, config.a2_hi, config.grid_density);
  const std::vector<double> ws =
      log_spaced(config.w_range.lo, config.w_range.hi, config.grid_density);

  const std::size_t n = a2s.size() * ws.size();
  std::vector<double> sse(n, kInf);
  parallel_for_index(n, [&](std::size_t i) {
    const std::int64_t a2 = a2s[i / ws.size()];
    const double w = ws[i % ws.size()];
    sse[i] = tpa_candidate_sse(a2, w, d_min, degrees, emp_log10).sse;
  });

  // Strict < over (a2-major, w-minor) order breaks ties toward smaller a2,
  // then smaller w.
  std::size_t best = n;
  for (std::size_t i = 0; i < n; ++i)
    if (sse[i] < (best == n ? kInf : sse[best])) best = i;
  if (best == n) throw SearchFailureError("fit tpa: no grid candidate produced a finite objective");

  std::int64_t a2c = a2s[best / ws.size()];
  double wc = ws[best % ws.size()];
  double sse_c = sse[best];

  const double r_a2 = std::pow(static_cast<double>(config.a2_hi) /
                                   static_cast<double>(config.a2_lo),
                               1.0 / std::max(1, config.grid_density - 1));
  const double wf0 = std::max(kMinFactor, std::pow(config.w_range.hi / config.w_range.lo,
                                                   1.0 / std::max(1, config.grid_density - 1)));
  std::int64_t step = std::max<std::int64_t>(
      1, std::llround(static_cast<double>(a2c) * (r_a2 - 1.0)));

  // Integer-local walk on a2 where every candidate is scored at its
  // conditionally optimal w (inner interval shrink seeded from the incumbent).
  // Scoring conditional optima keeps the walk from stalling on the diagonal
  // a2-w ridge, where a one-step a2 move only pays off once w re-adjusts.
  for (int iter = 0; iter < config.refine_iterations; ++iter) {
    std::vector<std::int64_t> a2_cand;
    for (const std::int64_t v : {a2c - step, a2c, a2c + step})
      a2_cand.push_back(std::clamp(v, config.a2_lo, config.a2_hi));
    std::sort(a2_cand.begin(), a2_cand.end());
    a2_cand.erase(std::unique(a2_cand.begin(), a2_cand.end()), a2_cand.end());

    std::int64_t a2_best = a2c;
    Scored1d round_best{wc, kInf};
    for (const std::int64_t a2 : a2_cand) {
      const Scored1d scored = line_search_multiplicative(
          [&](double w) { return tpa_candidate_sse(a2, w, d_min, degrees, emp_log10).sse; },
          wc, wf0, config.w_range.lo, config.w_range.hi, config.refine_shrink);
      if (scored.sse < round_best.sse) {
        round_best = scored;
        a2_best = a2;
      }
    }

    const bool progressed = round_best.sse < sse_c;
    const bool moved = progressed && a2_best != a2c;
    if (progressed) {
      a2c = a2_best;
      wc = round_best.value;
      sse_c = round_best.sse;
    }
    if (moved) {
      const std::int64_t cap = std::max<std::int64_t>(
          1, std::llround(static_cast<double>(a2c) * (r_a2 - 1.0)));
      step = std::min(cap, std::max(step, static_cast<std::int64_t>(std::llround(
                                              static_cast<double>(step) /
                                              config.refine_shrink))));
    } else if (!progressed) {
      if (step == 1) break;  // next round would repeat this one exactly
      step = std::max<std::int64_t>(
          1, static_cast<std::int64_t>(static_cast<double>(step) * config.refine_shrink));
    }
  }

  const TpaParams fitted{a2c, wc, d_min};
  return finish_report(ModelId::tpa, fitted, emp, emp_log10, config.digest(),
                       tpa_model_log10(fitted, degrees));
}

FitReport fit_pled(const EmpiricalDistribution& emp, const FitConfig& config) {
  check_fit_input(emp, config);
  const std::vector<std::int64_t>& degrees = emp.degrees();
  const std::vector<double> emp_log10 = empirical_log10(emp);
  const std::int64_t d_min = emp.d_min();

  const std::vector<double> bs =
      lin_spaced(config.b_range.lo, config.b_range.hi, config.grid_density);
  const std::vector<double> cs =
      log_spaced(config.c_range.lo, config.c_range.hi, config.grid_density);

  const std::size_t n = bs.size() * cs.size();
  std::vector<double> sse(n, kInf);
  parallel_for_index(n, [&](std::size_t i) {
    const double b = bs[i / cs.size()];
    const double c = cs[i % cs.size()];
    sse[i] = pled_candidate_sse(b, c, d_min, degrees, emp_log10).sse;
  });

  std::size_t best = n;
  for (std::size_t i = 0; i < n; ++i)
    if (sse[i] < (best == n ? kInf : sse[best])) best = i;
  if (best == n)
    throw SearchFailureError("fit pled: no grid candidate produced a finite objective");

  double bc = bs[best / cs.size()];
  double cc = cs[best % cs.size()];
  double sse_c = sse[best];

  double bstep0 = (config.b_range.hi - config.b_range.lo) /
                  std::max(1, config.grid_density - 1);
  if (bstep0 == 0.0) bstep0 = 0.25;
  const double kMinBstep = kMinBstepScale * std::max(1.0, config.b_range.hi - config.b_range.lo);
  const double cf0 = std::max(kMinFactor, std::pow(config.c_range.hi / config.c_range.lo,
                                                   1.0 / std::max(1, config.grid_density - 1)));
  double bstep = bstep0;

  // Same nested shape as the tpa walk: b moves on a shrinking linear step,
  // each candidate scored at its conditionally optimal c, because b and c
  // trade off along a ridge just like a2 and w.
  for (int iter = 0; iter < config.refine_iterations; ++iter) {
    std::vector<double> b_cand;
    for (const double v : {bc - bstep, bc, bc + bstep})
      b_cand.push_back(std::clamp(v, config.b_range.lo, config.b_range.hi));
    std::sort(b_cand.begin(), b_cand.end());
    b_cand.erase(std::unique(b_cand.begin(), b_cand.end()), b_cand.end());

    double b_best = bc;
    Scored1d round_best{cc, kInf};
    for (const double b : b_cand) {
      const Scored1d scored = line_search_multiplicative(
          [&](double c) { return pled_candidate_sse(b, c, d_min, degrees, emp_log10).sse; },
          cc, cf0, config.c_range.lo, config.c_range.hi, config.refine_shrink);
      if (scored.sse < round_best.sse) {
        round_best = scored;
        b_best = b;
      }
    }

    const bool progressed = round_best.sse < sse_c;
    const bool moved = progressed && b_best != bc;
    if (progressed) {
      bc = b_best;
      cc = round_best.value;
      sse_c = round_best.sse;
    }
    if (moved) {
      bstep = std::min(bstep0, bstep / config.refine_shrink);
    } else if (!progressed) {
      if (bstep <= kMinBstep) break;
      bstep = std::max(kMinBstep, bstep * config.refine_shrink);
    }
  }

  const PledParams fitted{bc, cc, d_min};
  return finish_report(ModelId::pled, fitted, emp, emp_log10, config.digest(),
                       pled_model_log10(fitted, degrees));
}

}  // namespace tailfit
