#pragma once

#include "icv/error.hpp"
#include "icv/gaussian_mixture.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>

namespace icv {

//! R(phi) for the standard normal kernel, 1 / (2 sqrt(pi)).
inline constexpr double roughness_gaussian = 0.282094791773878143474039725780;

enum class KernelClass
{
  CutOutMiddle,  //!< negative dip at zero: sigma < alpha / (1 + alpha)
  Density,       //!< proper density: alpha / (1 + alpha) <= sigma < 1
  NegativeTails, //!< sigma > 1
  GaussianDegenerate
};

inline std::string_view to_string(KernelClass c)
{
  switch (c) {
    case KernelClass::CutOutMiddle: return "cut_out_middle";
    case KernelClass::Density: return "density";
    case KernelClass::NegativeTails: return "negative_tails";
    case KernelClass::GaussianDegenerate: return "gaussian";
  }
  return "unknown";
}

/// Selection kernel L(u) = (1 + alpha) phi(u) - (alpha / sigma) phi(u / sigma).
///
/// Used only inside cross-validation; the bandwidth it selects is rescaled by
/// rescale_constant() for use with the Gaussian kernel. Total mass is always 1
/// and the kernel is symmetric, so only the second moment can make it fail to
/// be second order.
class SelectionKernel
{
public:
  SelectionKernel(double alpha, double sigma)
    : alpha_(alpha)
    , sigma_(sigma)
    , mixture_(build(alpha, sigma))
  {}

  double alpha() const { return alpha_; }
  double sigma() const { return sigma_; }
  const SignedGaussianMixture& mixture() const { return mixture_; }

  double operator()(double u) const { return mixture_(u); }

  //! mu_2 = 1 + alpha - alpha sigma^2.
  double second_moment() const { return 1.0 + alpha_ - alpha_ * sigma_ * sigma_; }

  //! R(L) in closed form.
  double roughness() const
  {
    const double a = alpha_;
    const double s = sigma_;
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    return (1 + a) * (1 + a) / (2 * sqrt_pi) - 2 * a * (1 + a) / std::sqrt(2 * std::numbers::pi * (1 + s * s)) +
           a * a / (2 * s * sqrt_pi);
  }

  //! L(0).
  double at_zero() const { return (1.0 + alpha_ - alpha_ / sigma_) * inv_sqrt_2pi; }

private:
  static SignedGaussianMixture build(double alpha, double sigma)
  {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
      throw Error("selection kernel: alpha must be nonnegative");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
      throw Error("selection kernel: sigma must be positive");
    if (std::abs(1.0 + alpha - alpha * sigma * sigma) < 1e-12)
      throw Error("degenerate: not a second-order kernel");
    if (alpha == 0.0)
      return SignedGaussianMixture::standard_normal();
    return SignedGaussianMixture({{1.0 + alpha, 0.0, 1.0}, {-alpha, 0.0, sigma}});
  }

  double alpha_;
  double sigma_;
  SignedGaussianMixture mixture_;
};

inline SelectionKernel make_selection_kernel(double alpha, double sigma)
{
  return SelectionKernel(alpha, sigma);
}

inline KernelClass classify(const SelectionKernel& k)
{
  const double a = k.alpha();
  const double s = k.sigma();
  if (a == 0.0 || s == 1.0)
    return KernelClass::GaussianDegenerate;
  if (s < a / (1.0 + a))
    return KernelClass::CutOutMiddle;
  if (s <= 1.0)
    return KernelClass::Density;
  return KernelClass::NegativeTails;
}

//! C = (R(phi) mu_2L^2 / (R(L) mu_2phi^2))^(1/5): maps an L-kernel bandwidth
//! to the Gaussian-kernel bandwidth with the same asymptotic MISE optimality.
inline double rescale_constant(const SelectionKernel& k)
{
  const double mu2 = k.second_moment();
  return std::pow(roughness_gaussian * mu2 * mu2 / k.roughness(), 0.2);
}

//! Same constant computed from any centered, mass-one kernel mixture.
inline double rescale_constant(const SignedGaussianMixture& kernel)
{
  const double mu2 = even_moment(kernel, 2);
  if (mu2 == 0.0)
    throw Error("degenerate: not a second-order kernel");
  return std::pow(roughness_gaussian * mu2 * mu2 / roughness(kernel), 0.2);
}

//! gamma(u) = (L * L)(u) - 2 L(u).
inline std::function<double(double)> gamma_function(const SelectionKernel& k)
{
  auto ll = convolve(k.mixture(), k.mixture());
  auto l = k.mixture();
  return [ll = std::move(ll), l = std::move(l)](double u) { return ll(u) - 2.0 * l(u); };
}

//! rho(u) = u gamma'(u), with gamma' from analytic Gaussian derivatives.
inline std::function<double(double)> rho_function(const SelectionKernel& k)
{
  auto ll = convolve(k.mixture(), k.mixture());
  auto l = k.mixture();
  return [ll = std::move(ll), l = std::move(l)](double u) { return u * (ll.derivative(u) - 2.0 * l.derivative(u)); };
}

//! Cross-validation with this kernel diverges to +infinity on tied data
//! (rather than -infinity) iff R(L) > 2 L(0).
inline bool robust_to_rounding(const SelectionKernel& k)
{
  return k.roughness() > 2.0 * k.at_zero();
}

/// Smallest alpha for which L(.; alpha, sigma) is robust to rounding, sigma > 1.
///
/// Scaling R(L) - 2 L(0) by sqrt(pi / 2) gives the quadratic
/// b alpha^2 + 2 a alpha - (2 - 1/sqrt 2) in alpha, with
///   a = 1/sqrt 2 - 1/sqrt(1 + sigma^2) - 1 + 1/sigma,
///   b = 1/sqrt 2 - 2/sqrt(1 + sigma^2) + 1/(sigma sqrt 2),
/// whose positive root is (-a + sqrt(a^2 + (2 - 1/sqrt 2) b)) / b.
inline double robust_alpha_threshold(double sigma)
{
  if (!(sigma > 1.0))
    throw Error("threshold defined for negative-tailed kernels only");
  const double r2 = std::numbers::sqrt2;
  const double t = std::sqrt(1.0 + sigma * sigma);
  const double a = 1.0 / r2 - 1.0 / t - 1.0 + 1.0 / sigma;
  const double b = 1.0 / r2 - 2.0 / t + 1.0 / (sigma * r2);
  const double c = 2.0 - 1.0 / r2;
  const double root = std::sqrt(a * a + c * b);
  // Pick the cancellation-free form of the same root.
  return a <= 0.0 ? (root - a) / b : c / (a + root);
}

//! (alpha, sigma) from the polynomial model in log10(n), valid for
//! 100 <= n <= 500000.
struct ModelParams
{
  double alpha;
  double sigma;
};

inline ModelParams model_params_unchecked(double n)
{
  const double l = std::log10(n);
  const double l3 = l * l * l;
  const double alpha = std::pow(10.0, 3.390 - 1.093 * l + 0.025 * l3 - 0.00004 * l3 * l3);
  const double sigma = std::pow(10.0, -0.58 + 0.386 * l - 0.012 * l * l);
  return {alpha, sigma};
}

//! Raised for sample sizes outside the model's fitted range. Carries the
//! parameters at the nearest valid n so the caller can decide to use them.
class ModelRangeError : public Error
{
public:
  ModelRangeError(long long n, long long clamped_n)
    : Error("model_params: n = " + std::to_string(n) + " outside [100, 500000]; nearest valid n is " +
            std::to_string(clamped_n))
    , clamped_n_(clamped_n)
    , suggestion_(model_params_unchecked(static_cast<double>(clamped_n)))
  {}

  long long clamped_n() const { return clamped_n_; }
  ModelParams suggestion() const { return suggestion_; }

private:
  long long clamped_n_;
  ModelParams suggestion_;
};

inline ModelParams model_params(long long n)
{
  if (n < 100)
    throw ModelRangeError(n, 100);
  if (n > 500000)
    throw ModelRangeError(n, 500000);
  return model_params_unchecked(static_cast<double>(n));
}

} // namespace icv
