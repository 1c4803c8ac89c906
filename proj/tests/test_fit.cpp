#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "oracles.hpp"
#include "tailfit/empirical.hpp"
#include "tailfit/errors.hpp"
#include "tailfit/fit.hpp"

using namespace tailfit;

namespace {

constexpr double kTableScale = 1e15;

// Histogram whose empirical ccdf reproduces the model ccdf at every retained
// degree: counts are proportional to the pmf, and once per-bin resolution
// runs low (or hi is reached) the model's entire remaining tail mass is
// folded into one final bin, so suffix sums stay exact instead of being cut
// off at the last degree.
template <typename Dist>
DegreeHistogram tail_folded_histogram(const Dist& dist, std::int64_t hi) {
  DegreeHistogram hist;
  hist.source_label = "synthetic-ccdf-table";
  for (std::int64_t x = dist.d_min();; ++x) {
    const double pmf = dist.pmf(x);
    if (x >= hi || pmf * kTableScale < 1e7) {
      const std::int64_t fold = std::llround(dist.ccdf(x) * kTableScale);
      if (fold > 0) hist.entries.push_back({x, fold});
      break;
    }
    hist.entries.push_back({x, std::llround(pmf * kTableScale)});
  }
  return hist;
}

DegreeHistogram histogram_from_tpa(const TpaParams& params, std::int64_t hi) {
  return tail_folded_histogram(TpaDistribution(params), hi);
}

DegreeHistogram histogram_from_pled(const PledParams& params, std::int64_t hi) {
  return tail_folded_histogram(PledDistribution(params), hi);
}

}  // namespace

TEST_CASE("pearson_r on exact lines") {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0};
  const std::vector<double> up{1.0, 3.0, 5.0, 7.0, 9.0};
  const std::vector<double> down{4.0, 3.0, 2.0, 1.0, 0.0};
  CHECK(pearson_r(x, up) == 1.0);
  CHECK(pearson_r(x, down) == -1.0);
}

TEST_CASE("pearson_r and least_squares_slope match the long double reference") {
  const std::vector<double> x{0.1, 0.7, 1.3, 2.9, 4.2, 6.0};
  const std::vector<double> y{2.3, 1.9, 2.8, 0.4, 1.1, -0.7};
  std::vector<long double> lx(x.begin(), x.end()), ly(y.begin(), y.end());
  const oracles::LineStats ref = oracles::line_stats(lx, ly);
  CHECK(pearson_r(x, y) == doctest::Approx(static_cast<double>(ref.r)).epsilon(1e-14));
  CHECK(least_squares_slope(x, y) ==
        doctest::Approx(static_cast<double>(ref.slope)).epsilon(1e-14));
}

TEST_CASE("pearson_r ignores non-finite pairs") {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0};
  const std::vector<double> y{1.0, 3.0, 5.0, 7.0, 9.0};
  std::vector<double> x2 = x, y2 = y;
  x2.push_back(std::numeric_limits<double>::infinity());
  y2.push_back(5.0);
  x2.push_back(2.5);
  y2.push_back(std::nan(""));
  CHECK(pearson_r(x2, y2) == pearson_r(x, y));
}

TEST_CASE("pearson_r preconditions") {
  const std::vector<double> two{1.0, 2.0};
  CHECK_THROWS_AS(pearson_r(two, two), InsufficientDataError);
  const std::vector<double> x{1.0, 2.0, 3.0};
  const std::vector<double> flat{4.0, 4.0, 4.0};
  CHECK_THROWS_AS(pearson_r(x, flat), ZeroVarianceError);
  CHECK_THROWS_AS(least_squares_slope(flat, x), ZeroVarianceError);
  const std::vector<double> mismatched{1.0, 2.0};
  CHECK_THROWS_AS(pearson_r(x, mismatched), InvalidParamsError);
}

TEST_CASE("fit config validation and digest") {
  FitConfig config;
  CHECK_NOTHROW(config.validate());
  CHECK(config.digest() ==
        "fitcfg(a2=[2,2000],w=[0.01,10],b=[0.5,4],c=[10,100000],grid=64,refine=60,shrink=0.5)");
  FitConfig bad = config;
  bad.grid_density = 1;
  CHECK_THROWS_AS(bad.validate(), InvalidParamsError);
  bad = config;
  bad.refine_shrink = 1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidParamsError);
  bad = config;
  bad.a2_lo = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidParamsError);
  bad = config;
  bad.w_range = {0.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), InvalidParamsError);
  bad = config;
  bad.c_range = {100.0, 10.0};
  CHECK_THROWS_AS(bad.validate(), InvalidParamsError);
}

TEST_CASE("log_ccdf_residuals covers every observed degree") {
  DegreeHistogram hist;
  hist.entries = {{1, 1}, {2, 1}};
  const EmpiricalDistribution emp = truncate_renormalize(hist, 1);
  const TpaParams geometric{1, 1.0, 1};
  const std::vector<Residual> res = log_ccdf_residuals(geometric, emp);
  REQUIRE(res.size() == 2);
  CHECK(res[0].degree == 1);
  CHECK(res[0].log10_empirical == 0.0);
  CHECK(res[0].log10_model == 0.0);
  CHECK(res[1].degree == 2);
  CHECK(res[1].log10_empirical == doctest::Approx(std::log10(0.5)).epsilon(1e-12));
  CHECK(res[1].log10_model == doctest::Approx(std::log10(0.5)).epsilon(1e-12));
}

TEST_CASE("log_ccdf_residuals on a single-degree support is the zero pair") {
  DegreeHistogram hist;
  hist.entries = {{5, 3}};
  const EmpiricalDistribution emp = truncate_renormalize(hist, 5);
  const std::vector<Residual> res = log_ccdf_residuals(TpaParams{2, 1.0, 5}, emp);
  REQUIRE(res.size() == 1);
  CHECK(res[0].degree == 5);
  CHECK(res[0].log10_empirical == 0.0);
  CHECK(res[0].log10_model == 0.0);
}

TEST_CASE("log_ccdf_residuals rejects a d_min mismatch") {
  DegreeHistogram hist;
  hist.entries = {{2, 4}, {3, 2}, {4, 1}};
  const EmpiricalDistribution emp = truncate_renormalize(hist, 2);
  CHECK_THROWS_AS(log_ccdf_residuals(TpaParams{5, 1.0, 3}, emp), InvalidParamsError);
  CHECK_THROWS_AS(log_ccdf_residuals(PledParams{1.0, 10.0, 1}, emp), InvalidParamsError);
}

TEST_CASE("r_squared is 1 for model-generated data at the true parameters") {
  const TpaParams truth{17, 1.4, 2};
  const EmpiricalDistribution emp =
      truncate_renormalize(histogram_from_tpa(truth, 800), 2);
  const RSquared log_space = r_squared(truth, emp);
  CHECK(log_space.r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(log_space.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(log_space.r_squared == log_space.r * log_space.r);

  const RSquared lin_space = r_squared(truth, emp, CcdfSpace::linear);
  CHECK(lin_space.r == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("r_squared space toggle changes the answer on a mismatched model") {
  DegreeHistogram hist;
  hist.entries = {{1, 50}, {2, 30}, {3, 10}, {4, 8}, {5, 2}};
  const EmpiricalDistribution emp = truncate_renormalize(hist, 1);
  const TpaParams model{1, 1.0, 1};
  const RSquared log_space = r_squared(model, emp);
  const RSquared lin_space = r_squared(model, emp, CcdfSpace::linear);
  CHECK(log_space.r != lin_space.r);
  CHECK(std::fabs(log_space.r) <= 1.0);
  CHECK(std::fabs(lin_space.r) <= 1.0);
}

TEST_CASE("fit_tpa recovers its own tabulated distribution") {
  const TpaParams truth{90, 0.83, 2};
  const EmpiricalDistribution emp =
      truncate_renormalize(histogram_from_tpa(truth, 3500), 2);
  const FitReport rep = fit_tpa(emp);
  CHECK(rep.model_id == ModelId::tpa);
  CHECK(rep.tpa().a2 == 90);
  CHECK(rep.tpa().w == doctest::Approx(0.83).epsilon(1e-3));
  CHECK(rep.r_squared >= 1.0 - 1e-9);
  CHECK(rep.d_min == 2);
  CHECK(rep.n_points == emp.degrees().size());
  CHECK(rep.residuals.size() == emp.degrees().size());
  CHECK(rep.config_digest == FitConfig{}.digest());

  // The polished optimum can never lose to a coarse-grid candidate; probe a
  // few grid points rebuilt with the same spacing formula.
  for (const std::int64_t a2 : {83, 93}) {
    for (const int j : {30, 35, 40, 45}) {
      const double w = 0.01 * std::pow(10.0 / 0.01, static_cast<double>(j) / 63.0);
      double sse = 0.0;
      for (const Residual& res : log_ccdf_residuals(TpaParams{a2, w, 2}, emp)) {
        if (!std::isfinite(res.log10_model)) continue;
        const double d = res.log10_empirical - res.log10_model;
        sse += d * d;
      }
      CHECK(rep.sse_log10_ccdf <= sse);
    }
  }
}

TEST_CASE("fit_tpa pins a2 exactly for a second parameter set") {
  const TpaParams truth{17, 1.4, 2};
  const EmpiricalDistribution emp =
      truncate_renormalize(histogram_from_tpa(truth, 3000), 2);
  const FitReport rep = fit_tpa(emp);
  CHECK(rep.tpa().a2 == 17);
  CHECK(rep.tpa().w == doctest::Approx(1.4).epsilon(1e-3));
  CHECK(rep.r_squared >= 1.0 - 1e-9);
}

TEST_CASE("fit_pled recovers its own tabulated distribution") {
  const PledParams truth{1.63, 350.0, 2};
  FitConfig config;
  config.grid_density = 16;
  config.refine_iterations = 60;
  const EmpiricalDistribution emp =
      truncate_renormalize(histogram_from_pled(truth, 9000), 2);
  const FitReport rep = fit_pled(emp, config);
  CHECK(rep.model_id == ModelId::pled);
  CHECK(rep.pled().b == doctest::Approx(1.63).epsilon(5e-3));
  CHECK(rep.pled().c == doctest::Approx(350.0).epsilon(2e-2));
  CHECK(rep.r_squared >= 1.0 - 1e-6);
}

TEST_CASE("fit_pled recovers a pure exponential as b near zero") {
  const PledParams truth{0.0, 80.0, 2};
  FitConfig config;
  config.b_range = {-0.5, 2.0};
  config.grid_density = 16;
  config.refine_iterations = 60;
  const EmpiricalDistribution emp =
      truncate_renormalize(histogram_from_pled(truth, 2200), 2);
  const FitReport rep = fit_pled(emp, config);
  CHECK(std::fabs(rep.pled().b) <= 0.05);
  CHECK(rep.pled().c == doctest::Approx(80.0).epsilon(5e-2));
  CHECK(rep.r_squared >= 1.0 - 1e-6);
}

TEST_CASE("fit_tpa handles a distribution with no head block") {
  const TpaParams truth{1, 1.2, 1};
  FitConfig config;
  config.a2_lo = 1;
  config.a2_hi = 50;
  config.grid_density = 24;
  const EmpiricalDistribution emp =
      truncate_renormalize(histogram_from_tpa(truth, 200), 1);
  const FitReport rep = fit_tpa(emp, config);
  CHECK(rep.tpa().a2 == 1);
  CHECK(rep.tpa().w == doctest::Approx(1.2).epsilon(5e-2));
}

TEST_CASE("fit results are independent of the thread count") {
  const EmpiricalDistribution emp =
      truncate_renormalize(histogram_from_tpa({30, 1.5, 2}, 600), 2);
  FitConfig config;
  config.grid_density = 12;
  config.refine_iterations = 20;
  const FitReport base = fit_tpa(emp, config);
  setenv("TAILFIT_THREADS", "3", 1);
  const FitReport threaded = fit_tpa(emp, config);
  unsetenv("TAILFIT_THREADS");
  CHECK(base.tpa().a2 == threaded.tpa().a2);
  CHECK(base.tpa().w == threaded.tpa().w);
  CHECK(base.sse_log10_ccdf == threaded.sse_log10_ccdf);
  CHECK(base.r == threaded.r);
}

TEST_CASE("fit rejects fewer than 5 distinct degrees") {
  DegreeHistogram hist;
  hist.entries = {{2, 10}, {3, 5}};
  const EmpiricalDistribution two = truncate_renormalize(hist, 2);
  CHECK_THROWS_AS(fit_tpa(two), InsufficientDataError);
  CHECK_THROWS_AS(fit_pled(two), InsufficientDataError);

  hist.entries = {{2, 10}, {3, 5}, {4, 3}, {5, 2}};
  const EmpiricalDistribution four = truncate_renormalize(hist, 2);
  CHECK_THROWS_AS(fit_tpa(four), InsufficientDataError);
  CHECK_THROWS_AS(fit_pled(four), InsufficientDataError);
}

TEST_CASE("fit reports search failure when no candidate survives") {
  DegreeHistogram hist;
  hist.entries = {{1000, 6}, {2000, 5}, {3000, 3}, {4000, 2}, {5000, 1}};
  const EmpiricalDistribution emp = truncate_renormalize(hist, 1000);
  FitConfig config;
  config.b_range = {3.0, 4.0};
  config.c_range = {0.001, 0.002};
  config.grid_density = 4;
  config.refine_iterations = 0;
  CHECK_THROWS_AS(fit_pled(emp, config), SearchFailureError);
}
