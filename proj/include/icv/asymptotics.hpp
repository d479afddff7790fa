#pragma once

#include "icv/error.hpp"
#include "icv/minimize.hpp"
#include "icv/normal_mixture.hpp"
#include "icv/selection_kernel.hpp"

#include <cmath>
#include <numbers>

namespace icv {

// Large-sample behaviour of the ICV bandwidth for negative-tailed selection
// kernels (sigma -> infinity, alpha fixed). The relative error
// (h_ICV - h_0)/h_0 is asymptotically normal with standard deviation S_n and
// bias B_n.

struct TheoryConstants
{
  double a_alpha;
  double c_alpha;
  double d_alpha;
};

//! A_alpha, also meaningful at alpha = 0.
inline double theory_a_alpha(double alpha)
{
  const double p = 1.0 + alpha;
  return 3.0 / std::sqrt(2.0 * std::numbers::pi) * p * p *
         (p * p / 8.0 - 8.0 / (9.0 * std::sqrt(3.0)) * p + 1.0 / std::numbers::sqrt2);
}

inline TheoryConstants theory_constants(double alpha)
{
  if (!(alpha > 0.0))
    throw Error("theory constants need alpha > 0");
  const double pi = std::numbers::pi;
  const double p = 1.0 + alpha;
  const double a = theory_a_alpha(alpha);
  const double c = std::sqrt(2.0 * a) * std::pow(2.0 * std::sqrt(pi), 0.9) /
                   (5.0 * std::pow(p, 1.8) * std::pow(alpha, 0.2));
  const double d = 0.15 * std::pow(p * p / (2.0 * alpha * alpha * std::sqrt(pi)), 0.4);
  return {a, c, d};
}

inline double cd_product(double alpha)
{
  const auto t = theory_constants(alpha);
  return t.c_alpha * t.d_alpha;
}

//! Minimizer of C_alpha D_alpha over alpha in [1e-3, 1e3].
inline double optimal_alpha()
{
  const auto m = minimize_on_log_grid([](double a) { return cd_product(a); }, 1e-3, 1e3, 400, 1e-10);
  return m.argmin;
}

struct AsymptoticMSE
{
  double s_n;
  double b_n_bias;
  double mse;
};

inline AsymptoticMSE relative_error_terms(double alpha, double sigma, double n, const DensityFunctionals& fun)
{
  const auto t = theory_constants(alpha);
  const double s_n = std::pow(sigma, -0.4) * std::pow(n, -0.1) * std::sqrt(fun.r_f) * std::pow(fun.r_f2, -0.1) *
                     t.c_alpha;
  const double b_n = std::pow(sigma / n, 0.4) * fun.r_f3 * std::pow(fun.r_f2, -1.4) * t.d_alpha;
  return {s_n, b_n, s_n * s_n + b_n * b_n};
}

//! sigma minimizing S_n^2 + B_n^2.
inline double sigma_opt(double alpha, double n, const DensityFunctionals& fun)
{
  const auto t = theory_constants(alpha);
  return std::pow(n, 0.375) * std::pow(t.c_alpha / t.d_alpha, 1.25) *
         std::pow(fun.r_f * std::pow(fun.r_f2, 2.6) / (fun.r_f3 * fun.r_f3), 0.625);
}

//! min over sigma of S_n^2 + B_n^2 = 2 n^(-1/2) C_alpha D_alpha R(f''') R(f)^(1/2) / R(f'')^(3/2).
inline double mse_opt(double alpha, double n, const DensityFunctionals& fun)
{
  const auto t = theory_constants(alpha);
  return 2.0 / std::sqrt(n) * t.c_alpha * t.d_alpha * fun.r_f3 * std::sqrt(fun.r_f) / std::pow(fun.r_f2, 1.5);
}

struct AsymptoticBandwidths
{
  double b_n; //!< L-kernel AMISE-optimal bandwidth
  double h_n; //!< Gaussian-kernel AMISE-optimal bandwidth
};

inline AsymptoticBandwidths asymptotic_bandwidths(const SelectionKernel& kernel, double n,
                                                  const DensityFunctionals& fun)
{
  const double mu2 = kernel.second_moment();
  const double scale = std::pow(n, -0.2);
  return {std::pow(kernel.roughness() / (mu2 * mu2 * fun.r_f2), 0.2) * scale,
          std::pow(roughness_gaussian / fun.r_f2, 0.2) * scale};
}

} // namespace icv
