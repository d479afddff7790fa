#include "icv/normal_mixture.hpp"
#include "icv/stats.hpp"
#include "support/quadrature.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace icv;

namespace {

const double sqrt_pi = std::sqrt(std::numbers::pi);

std::vector<double> breaks(const NormalMixture& f)
{
  std::vector<double> b;
  for (const auto& c : f.components()) {
    for (double k : {-3.0, -1.0, 0.0, 1.0, 3.0})
      b.push_back(c.mean + k * c.sd);
  }
  return b;
}

double quad_roughness(const NormalMixture& f, int k)
{
  return test::integrate_split(
    [&](double x) {
      const double d = f.pdf_derivative(k, x);
      return d * d;
    },
    -15.0, 15.0, breaks(f));
}

} // namespace

TEST(Suite, HasTheSixDensities)
{
  const auto s = standard_suite();
  EXPECT_EQ(s.size(), 6u);
  for (const char* name :
       {"gaussian", "skewed_unimodal", "bimodal", "separated_bimodal", "skewed_bimodal", "kurtotic_unimodal"})
    EXPECT_NO_THROW(density_by_name(name)) << name;
  EXPECT_THROW(density_by_name("claw"), Error);
}

TEST(Suite, GaussianModeAndBimodalSymmetry)
{
  EXPECT_NEAR(density_by_name("gaussian").pdf(0.0), 0.398942, 1e-6);
  const auto b = density_by_name("bimodal");
  for (double x : {0.1, 0.7, 1.3, 2.9})
    EXPECT_NEAR(b.pdf(x), b.pdf(-x), 1e-15);
}

TEST(Suite, DensitiesIntegrateToOne)
{
  for (const auto& [name, f] : standard_suite()) {
    const double q = test::integrate_split([&](double x) { return f.pdf(x); }, -15.0, 15.0, breaks(f));
    EXPECT_NEAR(q, 1.0, 1e-10) << name;
  }
}

TEST(NormalMixture, RejectsBadWeights)
{
  EXPECT_THROW(NormalMixture({{0.5, 0.0, 1.0}}), Error);
  EXPECT_THROW(NormalMixture({{1.0, 0.0, -1.0}}), Error);
  EXPECT_THROW(NormalMixture({}), Error);
}

TEST(Sample, LargeGaussianMoments)
{
  const auto x = sample(density_by_name("gaussian"), 1000000, 42);
  EXPECT_NEAR(stats::mean(x), 0.0, 4e-3);
  EXPECT_NEAR(stats::sample_sd(x), 1.0, 4e-3);
}

TEST(Sample, DeterministicPerSeed)
{
  const auto f = density_by_name("skewed_bimodal");
  EXPECT_EQ(sample(f, 500, 7), sample(f, 500, 7));
  EXPECT_NE(sample(f, 500, 7), sample(f, 500, 8));
  EXPECT_THROW(sample(f, 0, 1), Error);
}

TEST(Sample, SeparatedBimodalBalance)
{
  const auto x = sample(density_by_name("separated_bimodal"), 100000, 9);
  const auto below = std::count_if(x.begin(), x.end(), [](double v) { return v < 0.0; });
  EXPECT_NEAR(static_cast<double>(below) / 1e5, 0.5, 0.01);
}

TEST(Functionals, StandardNormalClosedForms)
{
  const auto fun = derivative_functionals(density_by_name("gaussian"));
  EXPECT_NEAR(fun.r_f, 1.0 / (2.0 * sqrt_pi), 1e-15);
  EXPECT_NEAR(fun.r_f2, 3.0 / (8.0 * sqrt_pi), 1e-15);
  EXPECT_NEAR(fun.r_f3, 15.0 / (16.0 * sqrt_pi), 1e-15);
  const auto f = density_by_name("gaussian");
  EXPECT_NEAR(quad_roughness(f, 2), fun.r_f2, 1e-10);
  EXPECT_NEAR(quad_roughness(f, 3), fun.r_f3, 1e-10);
}

TEST(Functionals, SuiteMatchesQuadrature)
{
  for (const auto& [name, f] : standard_suite()) {
    const auto fun = derivative_functionals(f);
    EXPECT_NEAR(fun.r_f, quad_roughness(f, 0), 1e-8 * fun.r_f) << name;
    EXPECT_NEAR(fun.r_f2, quad_roughness(f, 2), 1e-8 * fun.r_f2) << name;
    EXPECT_NEAR(fun.r_f3, quad_roughness(f, 3), 1e-8 * fun.r_f3) << name;
    EXPECT_GT(fun.r_f3, 0.0);
  }
}

TEST(Functionals, ScaleEquivariance)
{
  for (const auto& [name, f] : standard_suite()) {
    const auto base = derivative_functionals(f);
    for (double c : {0.5, 2.0}) {
      const auto scaled = derivative_functionals(f.affine(c, 0.3));
      EXPECT_NEAR(scaled.r_f / base.r_f, std::pow(c, -1.0), 1e-12) << name;
      EXPECT_NEAR(scaled.r_f2 / base.r_f2, std::pow(c, -5.0), 1e-12) << name;
      EXPECT_NEAR(scaled.r_f3 / base.r_f3, std::pow(c, -7.0), 1e-12) << name;
    }
  }
}
