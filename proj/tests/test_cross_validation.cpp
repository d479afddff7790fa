#include "icv/cross_validation.hpp"
#include "icv/normal_mixture.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace icv;

namespace {

const auto phi = SignedGaussianMixture::standard_normal();

using test::lscv_definitional;

std::vector<double> rounded_normal(long long n, std::uint64_t seed, double step)
{
  auto x = sample(density_by_name("gaussian"), n, seed);
  for (auto& v : x)
    v = std::round(v / step) * step;
  return x;
}

} // namespace

TEST(Lscv, MatchesDefinitionalOracle)
{
  std::mt19937_64 gen(1);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x(5 + rep % 2);
    for (auto& v : x)
      v = nd(gen);
    for (const auto& kernel : {phi, SelectionKernel(6.0, 6.0).mixture(), SelectionKernel(2.0, 0.5).mixture()}) {
      for (double h : {0.2, 0.7, 1.9}) {
        const double oracle = lscv_definitional(x, kernel, h);
        EXPECT_NEAR(lscv(x, kernel, h), oracle, 1e-8) << "rep " << rep << " h " << h;
      }
    }
  }
}

TEST(Lscv, TiedDataDivesForGaussianKernel)
{
  const std::vector<double> x(10, 1.5);
  const double small = lscv(x, phi, 1e-4);
  const double mid = lscv(x, phi, 1e-2);
  EXPECT_LT(small, mid);
  EXPECT_LT(mid, 0.0);
}

TEST(Lscv, TiedDataRisesForRobustKernel)
{
  const std::vector<double> x(10, 1.5);
  const auto l = SelectionKernel(6.0, 6.0).mixture();
  EXPECT_GT(lscv(x, l, 1e-4), lscv(x, l, 1e-2));
}

TEST(Lscv, TiedLimitSignFollowsRoughnessBalance)
{
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> ua(0.0, 15.0);
  std::uniform_real_distribution<double> us(1.05, 10.0);
  const std::vector<double> x(12, -0.3);
  int robust = 0;
  int fragile = 0;
  while (robust < 20 || fragile < 20) {
    const SelectionKernel k(ua(gen), us(gen));
    const double margin = k.roughness() - 2.0 * k.at_zero();
    if (std::abs(margin) < 1e-3)
      continue;
    const double v = lscv(x, k.mixture(), 1e-6);
    if (margin > 0.0 && robust < 20) {
      ++robust;
      EXPECT_GT(v, 0.0);
    } else if (margin < 0.0 && fragile < 20) {
      ++fragile;
      EXPECT_LT(v, 0.0);
    }
  }
}

TEST(Lscv, LocationAndScaleBehaviour)
{
  const auto x = sample(density_by_name("bimodal"), 80, 4);
  auto shifted = x;
  auto scaled = x;
  for (auto& v : shifted)
    v += 3.7;
  for (auto& v : scaled)
    v *= 2.5;
  for (double h : {0.1, 0.4}) {
    EXPECT_NEAR(lscv(shifted, phi, h), lscv(x, phi, h), 1e-12);
    EXPECT_NEAR(lscv(scaled, phi, 2.5 * h), lscv(x, phi, h) / 2.5, 1e-12);
  }
}

TEST(Lscv, UnbiasedForMiseMinusRoughness)
{
  const auto f = density_by_name("gaussian");
  const int reps = 400;
  std::vector<double> v;
  for (int r = 0; r < reps; ++r)
    v.push_back(lscv(sample(f, 50, 500 + static_cast<std::uint64_t>(r)), phi, 0.5));
  const double se = stats::sample_sd(v) / std::sqrt(static_cast<double>(reps));
  EXPECT_NEAR(stats::mean(v), exact_mise(phi, f, 50, 0.5) - roughness(f.as_mixture()), 3.0 * se);
}

TEST(MinimizeLscv, ConsistentOnGaussianSample)
{
  const auto f = density_by_name("gaussian");
  const double h0 = mise_optimal_bandwidth(phi, f, 500);
  const auto sel = minimize_lscv(sample(f, 500, 8), phi);
  EXPECT_GT(sel.bandwidth, 0.5 * h0);
  EXPECT_LT(sel.bandwidth, 2.0 * h0);
  EXPECT_FALSE(sel.boundary_hit);
  EXPECT_FALSE(sel.degenerate_zero);
  EXPECT_EQ(sel.trace.grid.size(), 200u);
}

TEST(MinimizeLscv, RoundedDataDegenerateDiveWithInteriorMinimum)
{
  // Integer-rounded data with many ties, on a scale where the rounding is
  // coarse but not total.
  auto x = sample(density_by_name("gaussian"), 400, 6);
  for (auto& v : x)
    v = std::round(8.0 * v);
  const auto sel = minimize_lscv(x, phi);
  EXPECT_TRUE(sel.degenerate_zero);
  EXPECT_FALSE(sel.boundary_hit);
  EXPECT_GT(sel.bandwidth, 1.0);
}

TEST(MinimizeLscv, ScaleEquivariance)
{
  const auto x = sample(density_by_name("skewed_unimodal"), 150, 10);
  auto y = x;
  for (auto& v : y)
    v *= 3.0;
  const double a = minimize_lscv(x, phi).bandwidth;
  const double b = minimize_lscv(y, phi).bandwidth;
  EXPECT_NEAR(b / (3.0 * a), 1.0, 1e-5);
}

TEST(MinimizeLscv, NoSpreadIsAnError)
{
  try {
    minimize_lscv(std::vector<double>(5, 2.0), phi);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "criterion degenerate: no spread");
  }
}

TEST(Icv, AlphaZeroMatchesLscv)
{
  const auto x = sample(density_by_name("bimodal"), 120, 12);
  const auto a = icv_bandwidth(x, 0.0, 3.0);
  const auto b = minimize_lscv(x, phi);
  EXPECT_DOUBLE_EQ(a.bandwidth, b.bandwidth);
  EXPECT_DOUBLE_EQ(*a.rescale_constant, 1.0);
}

TEST(Icv, BandwidthIsRescaledSelection)
{
  const auto x = sample(density_by_name("gaussian"), 200, 13);
  const auto p = model_params(200);
  const auto s = icv_bandwidth(x, p.alpha, p.sigma);
  EXPECT_EQ(s.method, Method::ICV);
  EXPECT_NEAR(s.bandwidth, *s.rescale_constant * *s.selection_bandwidth, 1e-12 * s.bandwidth);
  auto y = x;
  for (auto& v : y)
    v *= 0.2;
  EXPECT_NEAR(icv_bandwidth(y, p.alpha, p.sigma).bandwidth / (0.2 * s.bandwidth), 1.0, 1e-5);
}

TEST(Icv, LessVariableThanLscv)
{
  const auto f = density_by_name("gaussian");
  const auto p = model_params(100);
  std::vector<double> hi;
  std::vector<double> hu;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto x = sample(f, 100, 9000 + seed);
    hi.push_back(icv_bandwidth(x, p.alpha, p.sigma).bandwidth);
    hu.push_back(minimize_lscv(x, phi).bandwidth);
  }
  EXPECT_LT(stats::sample_sd(hi), stats::sample_sd(hu));
}

TEST(Oversmoothed, Values)
{
  std::vector<double> x = sample(density_by_name("gaussian"), 100, 1);
  const double m = stats::mean(x);
  const double s = stats::sample_sd(x);
  for (auto& v : x)
    v = (v - m) / s;
  EXPECT_NEAR(oversmoothed_bandwidth(x), std::pow(243.0 / (35.0 * 2.0 * std::sqrt(std::numbers::pi)), 0.2) * std::pow(100.0, -0.2), 1e-12);
  EXPECT_NEAR(oversmoothed_bandwidth(x), 0.4553, 1e-4);
  auto y = x;
  for (auto& v : y)
    v *= 4.0;
  EXPECT_NEAR(oversmoothed_bandwidth(y), 4.0 * oversmoothed_bandwidth(x), 1e-12);
  EXPECT_THROW(oversmoothed_bandwidth(std::vector<double>(4, 1.0)), Error);
  // Oversmoothing relative to h_0 at large n.
  const double h0 = mise_optimal_bandwidth(phi, density_by_name("gaussian"), 1000000);
  EXPECT_NEAR(1.1439 * std::pow(1e6, -0.2) / h0, 1.080, 0.02);
}

TEST(IcvCapped, CapBindsOnlyAboveOversmoothed)
{
  const auto f = density_by_name("skewed_unimodal");
  const auto p = model_params(100);
  int binds = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto x = sample(f, 100, 300 + seed);
    const auto plain = icv_bandwidth(x, p.alpha, p.sigma);
    const auto capped = icv_capped(x, p.alpha, p.sigma);
    const double os = oversmoothed_bandwidth(x);
    EXPECT_EQ(capped.method, Method::ICVCapped);
    if (plain.bandwidth > os) {
      ++binds;
      EXPECT_TRUE(capped.boundary_hit);
      EXPECT_DOUBLE_EQ(capped.bandwidth, os);
    } else {
      EXPECT_DOUBLE_EQ(capped.bandwidth, plain.bandwidth);
      EXPECT_EQ(capped.boundary_hit, plain.boundary_hit);
    }
  }
  EXPECT_GT(binds, 0);
}

TEST(Rounding, ModelKernelRisesWhereGaussianDives)
{
  const auto p = model_params(100);
  const auto l = SelectionKernel(p.alpha, p.sigma).mixture();
  const auto x = rounded_normal(100, 3, 0.1);
  EXPECT_LT(lscv(x, phi, 1e-4), lscv(x, phi, 1e-3));
  EXPECT_GT(lscv(x, l, 1e-4), lscv(x, l, 1e-3));
}
