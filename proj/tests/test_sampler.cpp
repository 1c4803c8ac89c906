#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "tailfit/errors.hpp"
#include "tailfit/sampler.hpp"

using namespace tailfit;

namespace {

std::map<std::int64_t, std::int64_t> as_map(const DegreeHistogram& hist) {
  std::map<std::int64_t, std::int64_t> m;
  for (const auto& e : hist.entries) m[e.degree] = e.count;
  return m;
}

double wilson_hilferty_chi2_99(double dof) {
  const double z = 2.3263478740408408;  // standard normal 0.99 quantile
  const double t = 1.0 - 2.0 / (9.0 * dof) + z * std::sqrt(2.0 / (9.0 * dof));
  return dof * t * t * t;
}

}  // namespace

TEST_CASE("sampling is deterministic in the seed") {
  const SampleSpec spec{TpaParams{17, 0.83, 2}, 5000, 42};
  const DegreeHistogram a = sample(spec);
  const DegreeHistogram b = sample(spec);
  CHECK(a.entries == b.entries);
  const DegreeHistogram c = sample({TpaParams{17, 0.83, 2}, 5000, 43});
  CHECK(a.entries != c.entries);
  CHECK(a.total_count() == 5000);
}

TEST_CASE("sample labels identify the generator") {
  const DegreeHistogram hist = sample({TpaParams{5, 1.0, 1}, 1000, 9});
  CHECK(hist.source_label == "sample:tpa(a2=5,w=1,dmin=1),n=1000,seed=9");
  const DegreeHistogram ph = sample({PledParams{1.63, 350.0, 2}, 10, 3});
  CHECK(ph.source_label == "sample:pled(b=1.63,c=350,dmin=2),n=10,seed=3");
}

TEST_CASE("pled draws follow the documented word-to-uniform inversion") {
  // Reconstruct the first draws independently: one 64-bit word per draw,
  // u = (word >> 11) * 2^-53, inverse CDF walked over the pmf.
  const PledParams params{1.63, 350.0, 2};
  const PledDistribution dist(params);
  const std::int64_t n = 25;
  std::mt19937_64 gen(7);
  std::map<std::int64_t, std::int64_t> expected;
  for (std::int64_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    std::int64_t x = params.d_min;
    double cum = dist.pmf(x);
    while (cum <= u) {
      ++x;
      cum += dist.pmf(x);
    }
    ++expected[x];
  }
  const DegreeHistogram hist = sample({params, n, 7});
  CHECK(as_map(hist) == expected);
}

TEST_CASE("tpa draws follow the documented word-to-uniform inversion") {
  const TpaParams params{3, 2.0, 1};
  const TpaDistribution dist(params);
  const double q = dist.tail_ratio();
  double head_total = 0.0;
  std::vector<double> head_cum;
  for (std::int64_t x = 1; x <= 3; ++x) {
    head_total += dist.pmf(x);
    head_cum.push_back(head_total);
  }
  const std::int64_t n = 40;
  std::mt19937_64 gen(3);
  std::map<std::int64_t, std::int64_t> expected;
  for (std::int64_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    if (u < head_total) {
      std::int64_t x = 1;
      while (u >= head_cum[static_cast<std::size_t>(x - 1)]) ++x;
      ++expected[x];
    } else {
      const double upper = 1.0 - (u - head_total) / (1.0 - head_total);
      const std::int64_t k =
          upper >= 1.0 ? 0
                       : static_cast<std::int64_t>(std::floor(std::log(upper) / std::log(q)));
      ++expected[4 + std::max<std::int64_t>(0, k)];
    }
  }
  const DegreeHistogram hist = sample({params, n, 3});
  CHECK(as_map(hist) == expected);
}

TEST_CASE("tpa sample frequencies stay within four sigma per degree") {
  const TpaParams params{90, 0.83, 2};
  const TpaDistribution dist(params);
  const std::int64_t n = 200000;
  for (std::uint64_t seed = 11; seed <= 20; ++seed) {
    CAPTURE(seed);
    const DegreeHistogram hist = sample({params, n, seed});
    const std::map<std::int64_t, std::int64_t> counts = as_map(hist);
    int violations = 0;
    for (std::int64_t x = 2; x <= 300; ++x) {
      const double p = dist.pmf(x);
      if (p * static_cast<double>(n) < 50.0) continue;
      const auto it = counts.find(x);
      const double observed = it == counts.end() ? 0.0 : static_cast<double>(it->second);
      const double sigma = std::sqrt(p * (1.0 - p) * static_cast<double>(n));
      if (std::abs(observed - p * static_cast<double>(n)) > 4.0 * sigma) ++violations;
    }
    CHECK(violations <= 3);
  }
}

TEST_CASE("pled sample mean agrees with the analytic mean") {
  const PledParams params{1.63, 350.0, 2};
  const PledDistribution dist(params);
  double mean = 0.0, second = 0.0;
  for (std::int64_t x = 2; x <= 30000; ++x) {
    const double p = dist.pmf(x);
    mean += static_cast<double>(x) * p;
    second += static_cast<double>(x) * static_cast<double>(x) * p;
  }
  const double var = second - mean * mean;
  const std::int64_t n = 200000;
  const DegreeHistogram hist = sample({params, n, 2026});
  double sum = 0.0;
  for (const auto& e : hist.entries)
    sum += static_cast<double>(e.degree) * static_cast<double>(e.count);
  const double sample_mean = sum / static_cast<double>(n);
  const double sigma_mean = std::sqrt(var / static_cast<double>(n));
  CHECK(std::abs(sample_mean - mean) <= 4.0 * sigma_mean);
}

TEST_CASE("tpa sample passes a chi-square goodness-of-fit check") {
  const TpaParams params{5, 1.0, 1};
  const TpaDistribution dist(params);
  const std::int64_t n = 100000;
  const DegreeHistogram hist = sample({params, n, 5});
  const std::map<std::int64_t, std::int64_t> counts = as_map(hist);

  // Bins over single degrees, merged upward until expected >= 5; final bin
  // holds the remaining tail mass.
  std::vector<double> expected;
  std::vector<double> observed;
  double exp_acc = 0.0, obs_acc = 0.0;
  double tail = 1.0;
  std::int64_t x = 1;
  while (tail * static_cast<double>(n) >= 5.0 && x < 100000) {
    const double p = dist.pmf(x);
    exp_acc += p * static_cast<double>(n);
    tail -= p;
    const auto it = counts.find(x);
    obs_acc += it == counts.end() ? 0.0 : static_cast<double>(it->second);
    if (exp_acc >= 5.0) {
      expected.push_back(exp_acc);
      observed.push_back(obs_acc);
      exp_acc = obs_acc = 0.0;
    }
    ++x;
  }
  double tail_obs = 0.0;
  for (auto it = counts.lower_bound(x); it != counts.end(); ++it)
    tail_obs += static_cast<double>(it->second);
  expected.push_back(exp_acc + tail * static_cast<double>(n));
  observed.push_back(obs_acc + tail_obs);

  double chi2 = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double d = observed[i] - expected[i];
    chi2 += d * d / expected[i];
  }
  const double dof = static_cast<double>(expected.size()) - 1.0;
  CHECK(chi2 <= wilson_hilferty_chi2_99(dof));
}

TEST_CASE("sample validates its spec") {
  CHECK_THROWS_AS(sample({TpaParams{5, 1.0, 1}, 0, 1}), InvalidParamsError);
  CHECK_THROWS_AS(sample({TpaParams{0, 1.0, 1}, 10, 1}), InvalidParamsError);
  CHECK_THROWS_AS(sample({PledParams{1.0, -1.0, 2}, 10, 1}), InvalidParamsError);
}

TEST_CASE("pled sample respects d_min and tpa sample covers the tail") {
  const DegreeHistogram ph = sample({PledParams{-0.5, 30.0, 4}, 20000, 8});
  CHECK(ph.entries.front().degree >= 4);
  const DegreeHistogram th = sample({TpaParams{3, 1.0, 7}, 20000, 8});
  CHECK(th.entries.front().degree >= 7);
  CHECK(th.entries.back().degree > 7);
}
