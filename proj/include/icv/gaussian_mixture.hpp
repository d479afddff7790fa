#pragma once

#include "icv/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace icv {

inline constexpr double inv_sqrt_2pi = 0.398942280401432677939946059934;

//! Normal density with mean 0 and standard deviation `scale`, evaluated at x.
inline double normal_pdf(double x, double scale)
{
  const double z = x / scale;
  return inv_sqrt_2pi * std::exp(-0.5 * z * z) / scale;
}

//! Probabilists' Hermite polynomial He_k(z), k <= 6.
inline double hermite_he(int k, double z)
{
  const double z2 = z * z;
  switch (k) {
    case 0: return 1.0;
    case 1: return z;
    case 2: return z2 - 1.0;
    case 3: return z * (z2 - 3.0);
    case 4: return z2 * (z2 - 6.0) + 3.0;
    case 5: return z * (z2 * (z2 - 10.0) + 15.0);
    case 6: return z2 * (z2 * (z2 - 15.0) + 45.0) - 15.0;
    default: throw Error("Hermite polynomials implemented up to order 6");
  }
}

//! k-th derivative of the N(0, scale^2) density at x, k <= 6.
inline double normal_pdf_derivative(int k, double x, double scale)
{
  const double z = x / scale;
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * hermite_he(k, z) * normal_pdf(x, scale) / std::pow(scale, k);
}

//! One term weight * phi((x - mean) / scale) / scale.
struct GaussianComponent
{
  double weight;
  double mean;
  double scale;
};

//! Finite signed combination of Gaussian densities. Immutable; every algebraic
//! operation returns a new mixture. Kernels, their convolutions and kernel
//! density estimates are all represented this way.
class SignedGaussianMixture
{
public:
  explicit SignedGaussianMixture(std::vector<GaussianComponent> components)
    : components_(std::move(components))
  {
    if (components_.empty())
      throw Error("mixture needs at least one component");
    for (const auto& c : components_) {
      if (!(c.scale > 0.0) || !std::isfinite(c.scale))
        throw Error("mixture component scales must be positive");
    }
  }

  static SignedGaussianMixture standard_normal() { return SignedGaussianMixture({{1.0, 0.0, 1.0}}); }

  std::span<const GaussianComponent> components() const { return components_; }
  std::size_t size() const { return components_.size(); }

  double operator()(double x) const
  {
    double sum = 0.0;
    for (const auto& c : components_)
      sum += c.weight * normal_pdf(x - c.mean, c.scale);
    return sum;
  }

  //! d/dx of the mixture at x.
  double derivative(double x) const
  {
    double sum = 0.0;
    for (const auto& c : components_)
      sum += c.weight * normal_pdf_derivative(1, x - c.mean, c.scale);
    return sum;
  }

  double total_mass() const
  {
    double sum = 0.0;
    for (const auto& c : components_)
      sum += c.weight;
    return sum;
  }

  bool is_centered() const
  {
    for (const auto& c : components_) {
      if (c.mean != 0.0)
        return false;
    }
    return true;
  }

  //! x -> m(x / h) / h.
  SignedGaussianMixture scaled(double h) const
  {
    if (!(h > 0.0))
      throw Error("scale factor must be positive");
    auto out = components_;
    for (auto& c : out) {
      c.mean *= h;
      c.scale *= h;
    }
    return SignedGaussianMixture(std::move(out));
  }

  //! x -> m(x - shift).
  SignedGaussianMixture shifted(double shift) const
  {
    auto out = components_;
    for (auto& c : out)
      c.mean += shift;
    return SignedGaussianMixture(std::move(out));
  }

  //! x -> m(-x).
  SignedGaussianMixture reflected() const
  {
    auto out = components_;
    for (auto& c : out)
      c.mean = -c.mean;
    return SignedGaussianMixture(std::move(out));
  }

  SignedGaussianMixture operator*(double factor) const
  {
    auto out = components_;
    for (auto& c : out)
      c.weight *= factor;
    return SignedGaussianMixture(std::move(out));
  }

  SignedGaussianMixture operator+(const SignedGaussianMixture& other) const
  {
    auto out = components_;
    out.insert(out.end(), other.components_.begin(), other.components_.end());
    return SignedGaussianMixture(std::move(out));
  }

  SignedGaussianMixture operator-(const SignedGaussianMixture& other) const { return *this + other * -1.0; }

private:
  std::vector<GaussianComponent> components_;
};

inline double evaluate(const SignedGaussianMixture& m, double x)
{
  return m(x);
}

//! (a * b)(u) = integral of a(t) b(u - t) dt. Produces a.size() * b.size()
//! components; no pruning.
inline SignedGaussianMixture convolve(const SignedGaussianMixture& a, const SignedGaussianMixture& b)
{
  std::vector<GaussianComponent> out;
  out.reserve(a.size() * b.size());
  for (const auto& ca : a.components()) {
    for (const auto& cb : b.components()) {
      out.push_back({ca.weight * cb.weight, ca.mean + cb.mean, std::hypot(ca.scale, cb.scale)});
    }
  }
  return SignedGaussianMixture(std::move(out));
}

//! Integral of a(x) b(x) over the real line.
inline double cross_integral(const SignedGaussianMixture& a, const SignedGaussianMixture& b)
{
  double sum = 0.0;
  for (const auto& ca : a.components()) {
    for (const auto& cb : b.components())
      sum += ca.weight * cb.weight * normal_pdf(ca.mean - cb.mean, std::hypot(ca.scale, cb.scale));
  }
  return sum;
}

//! R(m) = integral of m(x)^2. Clamped at zero against rounding.
inline double roughness(const SignedGaussianMixture& m)
{
  return std::max(0.0, cross_integral(m, m));
}

//! Integral of u^j m(u) du for even j <= 8 on a centered mixture.
inline double even_moment(const SignedGaussianMixture& m, int j)
{
  if (j < 0 || j % 2 != 0 || j > 8)
    throw Error("even_moment: order must be even and at most 8");
  if (!m.is_centered())
    throw Error("moments implemented for centered mixtures only");
  if (j == 0)
    return m.total_mass();
  double double_factorial = 1.0; // (j - 1)!!
  for (int k = j - 1; k > 1; k -= 2)
    double_factorial *= k;
  double sum = 0.0;
  for (const auto& c : m.components())
    sum += c.weight * std::pow(c.scale, j);
  return sum * double_factorial;
}

} // namespace icv
