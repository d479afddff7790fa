#pragma once

#include "icv/cross_validation.hpp"
#include "icv/detail/fast_exp.hpp"
#include "icv/error.hpp"
#include "icv/gaussian_mixture.hpp"
#include "icv/minimize.hpp"
#include "icv/normal_mixture.hpp"
#include "icv/pairwise.hpp"
#include "icv/selection_kernel.hpp"
#include "icv/spline.hpp"
#include "icv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace icv {

//! -3.0, -2.9, ..., 3.0.
inline std::vector<double> default_local_grid()
{
  std::vector<double> g;
  for (int k = -30; k <= 30; ++k)
    g.push_back(k / 10.0);
  return g;
}

//! lo, lo + step, ..., up to hi (inclusive within rounding).
inline std::vector<double> uniform_grid(double lo, double hi, double step)
{
  if (!(step > 0.0) || !(hi >= lo))
    throw Error("grid needs lo <= hi and a positive step");
  std::vector<double> g;
  const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
  for (long long k = 0; k <= count; ++k)
    g.push_back(lo + static_cast<double>(k) * step);
  return g;
}

/// Windowed cross-validation criterion at a point x:
///   (1/w) int phi((x-u)/w) f_b(u)^2 du - (2/(n w)) sum_i phi((x-X_i)/w) f_{b,-i}(X_i),
/// where f_b uses a centered mixture kernel. The integral is a sum of
/// closed-form triple-Gaussian products; both terms cost O(n^2) per bandwidth.
class LocalCriterion
{
public:
  LocalCriterion(std::span<const double> data, SignedGaussianMixture kernel, double window)
    : sorted_(data.begin(), data.end())
    , kernel_(std::move(kernel))
    , window_(window)
  {
    if (sorted_.size() < 2)
      throw Error("local criterion needs at least 2 observations");
    if (!(window_ > 0.0))
      throw Error("window must be positive");
    require_kernel(kernel_);
    std::sort(sorted_.begin(), sorted_.end());
  }

  std::span<const double> sorted_data() const { return sorted_; }
  double window() const { return window_; }
  const SignedGaussianMixture& kernel() const { return kernel_; }

  double operator()(double x, double b) const
  {
    const double xs[1] = {x};
    return values(b, xs)[0];
  }

  //! Criterion at every x in xs for one bandwidth b.
  std::vector<double> values(double b, std::span<const double> xs) const
  {
    if (!(b > 0.0))
      throw Error("local criterion: bandwidth must be positive");
    auto out = first_term(b, xs);
    const auto second = second_term(b, xs);
    for (std::size_t q = 0; q < xs.size(); ++q)
      out[q] -= second[q];
    return out;
  }

  //! (1/w) int phi((x-u)/w) f_b(u)^2 du.
  std::vector<double> first_term(double b, std::span<const double> xs) const
  {
    const std::size_t n = sorted_.size();
    const double nn = static_cast<double>(n);
    const double* x = sorted_.data();
    const double w2 = window_ * window_;
    std::vector<double> out(xs.size(), 0.0);

    for (const auto& ck : kernel_.components()) {
      for (const auto& cl : kernel_.components()) {
        const double ak2 = ck.scale * ck.scale * b * b;
        const double al2 = cl.scale * cl.scale * b * b;
        const double pair_var = ak2 + al2;
        const double v2 = w2 + ak2 * al2 / pair_var;
        // X_i carries weight al2 and X_j weight ak2 in the product's centre.
        const double lambda = ak2 / pair_var;
        const double norm = ck.weight * cl.weight / (2.0 * std::numbers::pi * std::sqrt(pair_var * v2));
        const double cd = -0.5 / pair_var;
        const double cv = -0.5 / v2;
        const double reach_d = pairwise::detail::underflow_z * std::sqrt(pair_var);
        const double reach_v = pairwise::detail::underflow_z * std::sqrt(v2);

        for (std::size_t q = 0; q < xs.size(); ++q) {
          const double xq = xs[q];
          double diagonal = 0.0;
          double off = 0.0;
          std::size_t end = 0;
          for (std::size_t i = 0; i < n; ++i) {
            const double xi = x[i];
            const double t0 = xq - xi;
            diagonal += icv::detail::exp_nonpositive(cv * t0 * t0);
            if (i + 1 >= n)
              break;
            end = std::max(end, i + 1);
            while (end < n && x[end] - xi <= reach_d)
              ++end;
            // Centre xi + lambda d must lie within reach_v of xq.
            std::size_t lo = i + 1;
            std::size_t hi = end;
            if (lambda > 0.0) {
              const double dmin = (xq - reach_v - xi) / lambda;
              const double dmax = (xq + reach_v - xi) / lambda;
              lo = static_cast<std::size_t>(std::lower_bound(x + i + 1, x + end, xi + dmin) - x);
              hi = static_cast<std::size_t>(std::upper_bound(x + lo, x + end, xi + dmax) - x);
            }
            double s = 0.0;
#pragma omp simd reduction(+ : s)
            for (std::size_t j = lo; j < hi; ++j) {
              const double d = x[j] - xi;
              const double t = t0 - lambda * d;
              s += icv::detail::exp_nonpositive(cd * d * d + cv * t * t);
            }
            off += s;
          }
          out[q] += norm * (diagonal + 2.0 * off) / (nn * nn);
        }
      }
    }
    return out;
  }

  //! (2/(n w)) sum_i phi((x - X_i)/w) f_{b,-i}(X_i).
  std::vector<double> second_term(double b, std::span<const double> xs) const
  {
    const std::size_t n = sorted_.size();
    const double nn = static_cast<double>(n);
    std::vector<double> rows(n);
    pairwise::kernel_row_sums(sorted_, kernel_.scaled(b), rows);
    std::vector<double> out(xs.size(), 0.0);
    const double cw = -0.5 / (window_ * window_);
    const double norm = inv_sqrt_2pi / window_ * 2.0 / (nn * (nn - 1.0));
    for (std::size_t q = 0; q < xs.size(); ++q) {
      double s = 0.0;
      const double xq = xs[q];
#pragma omp simd reduction(+ : s)
      for (std::size_t i = 0; i < n; ++i) {
        const double t = xq - sorted_[i];
        s += icv::detail::exp_nonpositive(cw * t * t) * rows[i];
      }
      out[q] = norm * s;
    }
    return out;
  }

private:
  std::vector<double> sorted_;
  SignedGaussianMixture kernel_;
  double window_;
};

inline double local_icv_criterion(std::span<const double> data, const SelectionKernel& kernel, double x, double w,
                                   double b)
{
  return LocalCriterion(data, kernel.mixture(), w)(x, b);
}

//! Bandwidth function h(x) on a grid, interpolated by a natural cubic spline.
class LocalBandwidthFunction
{
public:
  LocalBandwidthFunction(std::vector<double> grid, std::vector<double> bandwidths, double window)
    : grid_(grid)
    , bandwidths_(bandwidths)
    , window_(window)
    , spline_(std::move(grid), std::move(bandwidths))
  {
    for (double h : bandwidths_) {
      if (!(h > 0.0))
        throw Error("local bandwidths must be positive");
    }
    floor_ = *std::min_element(bandwidths_.begin(), bandwidths_.end());
    // Probe between knots for overshoot below the smallest knot value.
    for (std::size_t k = 0; k + 1 < grid_.size() && !floored_; ++k) {
      for (int s = 1; s < 20; ++s) {
        const double t = grid_[k] + (grid_[k + 1] - grid_[k]) * s / 20.0;
        if (spline_(t) < floor_) {
          floored_ = true;
          break;
        }
      }
    }
  }

  std::span<const double> grid() const { return grid_; }
  std::span<const double> bandwidths() const { return bandwidths_; }
  double window() const { return window_; }
  //! The spline undershoots the smallest knot bandwidth somewhere and is clipped there.
  bool floored() const { return floored_; }

  bool contains(double x) const { return x >= grid_.front() && x <= grid_.back(); }

  double operator()(double x) const
  {
    if (!contains(x))
      throw Error("outside local-bandwidth domain");
    const double h = spline_(x);
    return std::max(h, floor_);
  }

private:
  std::vector<double> grid_;
  std::vector<double> bandwidths_;
  double window_;
  NaturalCubicSpline spline_;
  double floor_ = 0.0;
  bool floored_ = false;
};

enum class LocalMethod
{
  ICV,
  LSCV
};

struct LocalOptions
{
  LocalMethod method = LocalMethod::ICV;
  double alpha = 6.0;
  double sigma = 6.0;
  double window = 0.3;
  std::size_t grid_points = 100;
  double rel_tol = 1e-6;
  //! Smallest-local-minimizer rule; the global grid minimum when false.
  //! Defaults to true for ICV and is ignored for LSCV.
  std::optional<bool> smallest_local = std::nullopt;
};

struct LocalSelection
{
  LocalBandwidthFunction bandwidths;
  std::vector<double> selection_bandwidths; //!< b(x) before rescaling
  std::vector<bool> boundary;               //!< no interior minimum at this x
  double rescale_constant;
};

/// Local bandwidths on `grid`. For ICV, b(x) is the smallest local minimizer
/// of the windowed criterion with kernel L(.; alpha, sigma) and h(x) = C b(x);
/// local LSCV uses the Gaussian kernel, the global minimum and C = 1. The
/// bandwidth search range is the global one, [1e-3, 10] * sd * n^(-1/5).
inline LocalSelection local_bandwidths(std::span<const double> data, const LocalOptions& opt,
                                       const std::vector<double>& grid = default_local_grid())
{
  if (grid.size() < 2)
    throw Error("local bandwidth grid needs at least 2 points");
  const bool icv = opt.method == LocalMethod::ICV;
  const SelectionKernel kernel = icv ? SelectionKernel(opt.alpha, opt.sigma) : SelectionKernel(0.0, 1.0);
  const double c = icv ? rescale_constant(kernel) : 1.0;
  const bool smallest = icv && opt.smallest_local.value_or(true);

  const LocalCriterion criterion(data, kernel.mixture(), opt.window);
  const auto n = static_cast<long long>(data.size());
  const auto [lo, hi] = bandwidth_range(stats::sample_sd(data), n);
  const auto bgrid = log_grid(lo, hi, opt.grid_points);

  // One sweep over the bandwidth grid serves every x.
  std::vector<GridScan> scans(grid.size());
  for (auto& s : scans) {
    s.grid = bgrid;
    s.values.reserve(bgrid.size());
  }
  for (double b : bgrid) {
    const auto v = criterion.values(b, grid);
    for (std::size_t q = 0; q < grid.size(); ++q)
      scans[q].values.push_back(v[q]);
  }

  std::vector<double> selected(grid.size());
  std::vector<bool> boundary(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) {
    auto curve = [&](double b) { return criterion(grid[q], b); };
    if (smallest) {
      const auto r = smallest_local_minimizer(curve, scans[q], opt.rel_tol);
      selected[q] = r.argmin;
      boundary[q] = r.boundary;
    } else {
      const auto k = argmin_index(scans[q].values);
      const bool edge = k == 0 || k + 1 == bgrid.size();
      selected[q] = edge ? bgrid[k] : refine_grid_point(curve, scans[q], k, opt.rel_tol).argmin;
      boundary[q] = edge;
    }
  }

  std::vector<double> h(selected.size());
  for (std::size_t q = 0; q < selected.size(); ++q)
    h[q] = c * selected[q];
  return {LocalBandwidthFunction(grid, std::move(h), opt.window), std::move(selected), std::move(boundary), c};
}

//! Gaussian-kernel estimate at x with the interpolated local bandwidth h(x).
inline double local_estimate(std::span<const double> data, const LocalBandwidthFunction& lbf, double x)
{
  const double h = lbf(x);
  double s = 0.0;
  for (double xi : data)
    s += normal_pdf(x - xi, h);
  return s / static_cast<double>(data.size());
}

//! Mean of (estimate(x_k) - f(x_k))^2 over the grid.
inline double average_squared_error(const std::function<double(double)>& estimate, const NormalMixture& f,
                                    const std::vector<double>& grid = default_local_grid())
{
  if (grid.empty())
    throw Error("ASE grid is empty");
  double s = 0.0;
  for (double x : grid) {
    const double e = estimate(x) - f.pdf(x);
    s += e * e;
  }
  return s / static_cast<double>(grid.size());
}

} // namespace icv
