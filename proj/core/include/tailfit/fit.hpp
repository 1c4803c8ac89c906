#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tailfit/empirical.hpp"
#include "tailfit/pled.hpp"
#include "tailfit/table.hpp"
#include "tailfit/tpa.hpp"

namespace tailfit {

struct ParamRange {
  double lo = 0.0;
  double hi = 0.0;
};

// Search space and schedule for both fitters. Grids are grid_density points
// per axis (a2 and c log-spaced, w log-spaced, b linear); the coarse optimum
// is then polished by a shrinking 3x3 neighborhood search.
struct FitConfig {
  std::int64_t a2_lo = 2;
  std::int64_t a2_hi = 2000;
  ParamRange w_range{0.01, 10.0};
  ParamRange b_range{0.5, 4.0};
  ParamRange c_range{10.0, 1e5};
  int grid_density = 64;
  int refine_iterations = 60;
  double refine_shrink = 0.5;

  void validate() const;
  std::string digest() const;
};

struct Residual {
  std::int64_t degree = 0;
  double log10_empirical = 0.0;
  double log10_model = 0.0;
};

/// Space in which correlation is computed. Reported numbers use log10 ccdf;
/// the linear toggle correlates raw ccdf values instead, for sensitivity
/// checks.
enum class CcdfSpace { log10, linear };

struct RSquared {
  double r = 0.0;
  double r_squared = 0.0;
};

struct FitReport {
  ModelId model_id = ModelId::tpa;
  std::variant<TpaParams, PledParams> params;
  double sse_log10_ccdf = 0.0;
  double r = 0.0;
  double r_squared = 0.0;
  std::int64_t d_min = 1;
  std::size_t n_points = 0;
  std::vector<Residual> residuals;
  std::string config_digest;

  const TpaParams& tpa() const { return std::get<TpaParams>(params); }
  const PledParams& pled() const { return std::get<PledParams>(params); }
};

// Pearson correlation over pairs where both coordinates are finite. Fewer
// than three such pairs raises InsufficientDataError; zero variance on
// either side raises ZeroVarianceError.
double pearson_r(std::span<const double> x, std::span<const double> y);

// Least-squares slope of y against x over finite pairs, same preconditions
// as pearson_r (zero variance check applies to x).
double least_squares_slope(std::span<const double> x, std::span<const double> y);

// One residual triple per observed degree: (x, log10 empirical ccdf,
// log10 model ccdf). The model's d_min must equal the distribution's
// (InvalidParamsError otherwise). Model entries may be -inf where the model
// ccdf underflows; downstream statistics skip those pairs.
std::vector<Residual> log_ccdf_residuals(const TpaParams& params,
                                         const EmpiricalDistribution& emp);
std::vector<Residual> log_ccdf_residuals(const PledParams& params,
                                         const EmpiricalDistribution& emp);

// Pearson r (and its square) between the empirical and model ccdf vectors
// over the observed degrees, in the requested space. Preconditions as
// pearson_r.
RSquared r_squared(const TpaParams& params, const EmpiricalDistribution& emp,
                   CcdfSpace space = CcdfSpace::log10);
RSquared r_squared(const PledParams& params, const EmpiricalDistribution& emp,
                   CcdfSpace space = CcdfSpace::log10);

// Grid search plus shrinking-neighborhood refinement minimizing the sum of
// squared log10-ccdf residuals. Requires at least 5 distinct observed
// degrees; SearchFailureError if no candidate yields a finite objective.
FitReport fit_tpa(const EmpiricalDistribution& emp, const FitConfig& config = {});
FitReport fit_pled(const EmpiricalDistribution& emp, const FitConfig& config = {});

}  // namespace tailfit
