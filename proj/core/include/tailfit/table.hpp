#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tailfit/pled.hpp"
#include "tailfit/tpa.hpp"

namespace tailfit {

enum class ModelId { tpa, pled };

std::string to_string(ModelId id);

// Pointwise pmf/ccdf evaluation of a model over a strictly ascending degree
// list. Degrees below the model's d_min are rejected.
struct ModelEvaluation {
  ModelId model_id;
  std::string params_digest;
  std::vector<std::int64_t> degrees;
  std::vector<double> pmf;
  std::vector<double> ccdf;
};

ModelEvaluation tabulate(const TpaDistribution& dist, std::span<const std::int64_t> degrees);
ModelEvaluation tabulate(const PledDistribution& dist, std::span<const std::int64_t> degrees);

// Expands "a..b" (inclusive) into consecutive degrees.
std::vector<std::int64_t> degree_range(std::int64_t first, std::int64_t last);

}  // namespace tailfit
