#pragma once

#include "icv/error.hpp"

#include <algorithm>
#include <span>
#include <vector>

namespace icv {

//! Natural cubic spline (zero second derivative at both ends) through
//! (x_k, y_k), x strictly increasing.
class NaturalCubicSpline
{
public:
  NaturalCubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x))
    , y_(std::move(y))
  {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
      throw Error("spline needs at least 2 knots and matching values");
    for (std::size_t k = 1; k < n; ++k) {
      if (!(x_[k] > x_[k - 1]))
        throw Error("spline knots must be strictly increasing");
    }

    // Second derivatives from the tridiagonal system (Thomas algorithm).
    m_.assign(n, 0.0);
    if (n == 2)
      return;
    std::vector<double> diag(n, 0.0);
    std::vector<double> rhs(n, 0.0);
    std::vector<double> upper(n, 0.0);
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double h0 = x_[k] - x_[k - 1];
      const double h1 = x_[k + 1] - x_[k];
      const double lower = h0;
      diag[k] = 2.0 * (h0 + h1);
      upper[k] = h1;
      rhs[k] = 6.0 * ((y_[k + 1] - y_[k]) / h1 - (y_[k] - y_[k - 1]) / h0);
      if (k > 1) {
        const double factor = lower / diag[k - 1];
        diag[k] -= factor * upper[k - 1];
        rhs[k] -= factor * rhs[k - 1];
      }
    }
    for (std::size_t k = n - 2; k >= 1; --k) {
      m_[k] = (rhs[k] - upper[k] * m_[k + 1]) / diag[k];
      if (k == 1)
        break;
    }
  }

  double operator()(double t) const
  {
    const auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    k = std::min(k, x_.size() - 2);
    const double h = x_[k + 1] - x_[k];
    const double a = (x_[k + 1] - t) / h;
    const double b = (t - x_[k]) / h;
    return a * y_[k] + b * y_[k + 1] + ((a * a * a - a) * m_[k] + (b * b * b - b) * m_[k + 1]) * h * h / 6.0;
  }

  std::span<const double> knots() const { return x_; }
  std::span<const double> values() const { return y_; }
  std::span<const double> second_derivatives() const { return m_; }

private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;
};

} // namespace icv
