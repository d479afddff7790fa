#pragma once

// Adaptive Gauss-Kronrod quadrature used as an independent oracle for the
// closed-form Gaussian algebra.

#include "icv/gaussian_mixture.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <span>

namespace icv::test {

template <class F>
double integrate(F&& f, double lo, double hi, double tol = 1e-12)
{
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, tol);
}

//! [min mean - 12 max scale, max mean + 12 max scale].
inline std::pair<double, double> support(std::span<const GaussianComponent> comps)
{
  double lo = comps[0].mean;
  double hi = comps[0].mean;
  double s = 0.0;
  for (const auto& c : comps) {
    lo = std::min(lo, c.mean);
    hi = std::max(hi, c.mean);
    s = std::max(s, c.scale);
  }
  return {lo - 12.0 * s, hi + 12.0 * s};
}

inline std::pair<double, double> support(const SignedGaussianMixture& m)
{
  return support(m.components());
}

//! Integrate over [lo, hi] split at the listed breakpoints, so narrow
//! features inside a wide range are not missed.
template <class F>
double integrate_split(F&& f, double lo, double hi, std::vector<double> breaks, double tol = 1e-12)
{
  breaks.push_back(lo);
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = std::max(lo, breaks[k]);
    const double b = std::min(hi, breaks[k + 1]);
    if (b > a)
      total += integrate(f, a, b, tol);
  }
  return total;
}

} // namespace icv::test
