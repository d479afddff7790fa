#pragma once

#include "icv/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace icv {

//! `points` values log-spaced over [lo, hi], both ends included.
inline std::vector<double> log_grid(double lo, double hi, std::size_t points)
{
  if (!(lo > 0.0) || !(hi > lo) || points < 2)
    throw Error("log grid needs 0 < lo < hi and at least 2 points");
  std::vector<double> grid(points);
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k)
    grid[k] = lo * std::exp(step * static_cast<double>(k));
  grid.back() = hi;
  return grid;
}

struct GridScan
{
  std::vector<double> grid;
  std::vector<double> values;
};

template <class F>
GridScan scan(F&& f, std::vector<double> grid)
{
  GridScan out{std::move(grid), {}};
  out.values.reserve(out.grid.size());
  for (double x : out.grid)
    out.values.push_back(f(x));
  return out;
}

//! Index of the smallest value; the first one wins on ties.
inline std::size_t argmin_index(const std::vector<double>& values)
{
  return static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
}

//! Indices k, 0 < k < size - 1, with values[k] strictly below both neighbours.
inline std::vector<std::size_t> interior_local_minima(const std::vector<double>& values)
{
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k + 1 < values.size(); ++k) {
    if (values[k] < values[k - 1] && values[k] < values[k + 1])
      out.push_back(k);
  }
  return out;
}

struct Minimum
{
  double argmin;
  double value;
};

//! Golden-section search on [lo, hi] until the bracket is narrower than
//! rel_tol times its midpoint. Returns the best point evaluated.
template <class F>
Minimum golden_section(F&& f, double lo, double hi, double rel_tol = 1e-6, int max_iterations = 200)
{
  constexpr double inv_phi = 0.6180339887498948482;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iterations; ++it) {
    if (std::abs(b - a) <= rel_tol * 0.5 * std::abs(a + b))
      break;
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? Minimum{c, fc} : Minimum{d, fd};
}

//! Golden-section refinement of grid point k over its neighbours. The grid
//! value itself is kept when refinement does not improve on it.
template <class F>
Minimum refine_grid_point(F&& f, const GridScan& scan, std::size_t k, double rel_tol)
{
  const double lo = scan.grid[k == 0 ? 0 : k - 1];
  const double hi = scan.grid[std::min(k + 1, scan.grid.size() - 1)];
  Minimum best{scan.grid[k], scan.values[k]};
  const auto refined = golden_section(f, lo, hi, rel_tol);
  if (refined.value <= best.value)
    best = refined;
  return best;
}

struct GridMinimum
{
  double argmin;
  double value;
  std::size_t grid_index;
  bool boundary; //!< grid minimum sits at an end of the grid
};

//! Global minimum of f over a log grid, refined by golden section when it is
//! interior.
template <class F>
GridMinimum minimize_on_log_grid(F&& f, double lo, double hi, std::size_t points, double rel_tol = 1e-6)
{
  const auto s = scan(f, log_grid(lo, hi, points));
  const auto k = argmin_index(s.values);
  if (k == 0 || k + 1 == s.grid.size())
    return {s.grid[k], s.values[k], k, true};
  const auto m = refine_grid_point(f, s, k, rel_tol);
  return {m.argmin, m.value, k, false};
}

struct LocalMinimizerResult
{
  double argmin;
  double value;
  bool boundary; //!< no interior local minimum; global grid minimum returned
};

//! Smallest-argument interior local minimizer of precomputed grid values,
//! refined by golden section. Falls back to the global grid minimum with the
//! boundary flag set when the scan has no interior local minimum.
template <class F>
LocalMinimizerResult smallest_local_minimizer(F&& curve, const GridScan& s, double rel_tol = 1e-6)
{
  const auto minima = interior_local_minima(s.values);
  if (minima.empty()) {
    const auto k = argmin_index(s.values);
    return {s.grid[k], s.values[k], true};
  }
  const auto m = refine_grid_point(curve, s, minima.front(), rel_tol);
  return {m.argmin, m.value, false};
}

//! Scans `grid_points` log-spaced values of b over [low, high] and applies
//! the smallest-local-minimizer rule.
template <class F>
LocalMinimizerResult smallest_local_minimizer(F&& curve, double low, double high, std::size_t grid_points,
                                              double rel_tol = 1e-6)
{
  if (!(low > 0.0))
    throw Error("smallest_local_minimizer: range must be positive");
  if (grid_points < 50)
    throw Error("smallest_local_minimizer: need at least 50 grid points");
  const auto s = scan(curve, log_grid(low, high, grid_points));
  return smallest_local_minimizer(curve, s, rel_tol);
}

} // namespace icv
