#include "icv/asymptotics.hpp"
#include "icv/estimation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace icv;

TEST(TheoryConstants, AAlphaAtZero)
{
  EXPECT_NEAR(theory_a_alpha(0.0), 0.38169, 5e-5);
  EXPECT_NEAR(theory_a_alpha(0.0),
              3.0 / std::sqrt(2.0 * std::numbers::pi) * (0.125 - 8.0 / (9.0 * std::sqrt(3.0)) + 1.0 / std::sqrt(2.0)),
              1e-15);
}

TEST(TheoryConstants, APositiveOnWideGrid)
{
  for (double a : log_grid(1e-6, 1e6, 2000))
    ASSERT_GT(theory_a_alpha(a), 0.0) << "alpha=" << a;
}

TEST(TheoryConstants, RejectsNonPositiveAlpha)
{
  EXPECT_THROW(theory_constants(0.0), Error);
  EXPECT_THROW(theory_constants(-1.0), Error);
}

TEST(TheoryConstants, ProductBlowsUpAtZero)
{
  EXPECT_GT(cd_product(1e-6), 10.0 * cd_product(2.4233));
  EXPECT_GT(cd_product(1e-9), cd_product(1e-6));
}

TEST(OptimalAlpha, ValueAndMinimality)
{
  const double a0 = optimal_alpha();
  EXPECT_NEAR(a0, 2.4233, 1e-3);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> ul(std::log(1e-3), std::log(1e3));
  for (int k = 0; k < 100; ++k)
    EXPECT_LE(cd_product(a0), cd_product(std::exp(ul(gen))) + 1e-15);
  EXPECT_NEAR(cd_product(1e6) / cd_product(a0), 1.33, 0.02);
}

TEST(RelativeError, MonotoneInSigma)
{
  const auto fun = derivative_functionals(density_by_name("gaussian"));
  double prev_s = 1e300;
  double prev_b = 0.0;
  for (double s : log_grid(1.1, 100.0, 40)) {
    const auto t = relative_error_terms(2.0, s, 1000, fun);
    EXPECT_LT(t.s_n, prev_s);
    EXPECT_GT(t.b_n_bias, prev_b);
    EXPECT_DOUBLE_EQ(t.mse, t.s_n * t.s_n + t.b_n_bias * t.b_n_bias);
    prev_s = t.s_n;
    prev_b = t.b_n_bias;
  }
}

TEST(SigmaOpt, FirstOrderCondition)
{
  const auto fun = derivative_functionals(density_by_name("bimodal"));
  const double s = sigma_opt(2.4233, 1e4, fun);
  const double d = 1e-4 * s;
  const double up = relative_error_terms(2.4233, s + d, 1e4, fun).mse;
  const double dn = relative_error_terms(2.4233, s - d, 1e4, fun).mse;
  const double mid = relative_error_terms(2.4233, s, 1e4, fun).mse;
  EXPECT_LT(std::abs(up - dn) / (2 * d) * s / mid, 1e-6);
}

TEST(SigmaOpt, GrowthAndInvariance)
{
  const auto g = derivative_functionals(density_by_name("gaussian"));
  EXPECT_NEAR(sigma_opt(3.0, 1e4, g) / sigma_opt(3.0, 1e2, g), std::pow(100.0, 0.375), 1e-12);
  const auto shifted = derivative_functionals(NormalMixture({{1.0, 5.0, 3.0}}));
  EXPECT_NEAR(sigma_opt(3.0, 500, shifted) / sigma_opt(3.0, 500, g), 1.0, 1e-12);
}

TEST(SigmaOpt, MinimizesMseOnGrid)
{
  const auto fun = derivative_functionals(density_by_name("skewed_unimodal"));
  const double s = sigma_opt(2.0, 1000, fun);
  const auto grid = log_grid(s / 20.0, s * 20.0, 401);
  std::vector<double> v;
  for (double g : grid)
    v.push_back(relative_error_terms(2.0, g, 1000, fun).mse);
  const auto k = argmin_index(v);
  EXPECT_NEAR(std::log(grid[k] / s), 0.0, std::log(20.0 * 20.0) / 400.0);
}

TEST(MseOpt, IdentityWithRelativeErrorTerms)
{
  const auto fun = derivative_functionals(density_by_name("gaussian"));
  const double s = sigma_opt(2.4233, 1e4, fun);
  EXPECT_NEAR(relative_error_terms(2.4233, s, 1e4, fun).mse / mse_opt(2.4233, 1e4, fun), 1.0, 1e-10);
}

TEST(MseOpt, ScalingAndAlphaFactorisation)
{
  const auto fun = derivative_functionals(density_by_name("separated_bimodal"));
  EXPECT_NEAR(mse_opt(2.0, 1e4, fun) / mse_opt(2.0, 1e2, fun), 0.1, 1e-14);
  const auto other = derivative_functionals(density_by_name("skewed_bimodal"));
  for (const auto& f : {fun, other})
    EXPECT_NEAR(mse_opt(1.0, 500, f) / mse_opt(7.0, 500, f), cd_product(1.0) / cd_product(7.0), 1e-12);
}

TEST(AsymptoticBandwidths, RatioIsRescaleConstant)
{
  const auto fun = derivative_functionals(density_by_name("gaussian"));
  for (auto [a, s] : {std::pair{6.0, 6.0}, {2.0, 3.0}, {25.0, 1.39}}) {
    const SelectionKernel k(a, s);
    const auto bw = asymptotic_bandwidths(k, 1000, fun);
    EXPECT_NEAR(bw.h_n / bw.b_n, rescale_constant(k), 1e-12 * rescale_constant(k));
  }
  const auto bw = asymptotic_bandwidths(SelectionKernel(2.0, 3.0), 1e4, fun);
  EXPECT_NEAR(bw.h_n / std::pow(1e4, -0.2), 1.0592, 1e-4);
}

TEST(AsymptoticBandwidths, ConsistentWithExactMise)
{
  const auto f = density_by_name("gaussian");
  const auto bw = asymptotic_bandwidths(SelectionKernel(2.0, 3.0), 1e6, derivative_functionals(f));
  const double h0 = mise_optimal_bandwidth(SignedGaussianMixture::standard_normal(), f, 1000000);
  EXPECT_NEAR(bw.h_n / h0, 1.0, 0.02);
}

TEST(ModelPredictions, FiniteAndPositive)
{
  const auto fun = derivative_functionals(density_by_name("gaussian"));
  for (double e = 2.0; e <= std::log10(5e5); e += 0.1) {
    const auto n = std::pow(10.0, e);
    const auto p = model_params(static_cast<long long>(n));
    const auto t = relative_error_terms(p.alpha, p.sigma, n, fun);
    EXPECT_TRUE(std::isfinite(t.mse));
    EXPECT_GT(t.mse, 0.0);
    EXPECT_GT(t.b_n_bias, 0.0);
  }
}
