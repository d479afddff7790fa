#pragma once

#include "icv/error.hpp"
#include "icv/estimation.hpp"
#include "icv/gaussian_mixture.hpp"
#include "icv/minimize.hpp"
#include "icv/pairwise.hpp"
#include "icv/selection_kernel.hpp"
#include "icv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace icv {

enum class Method
{
  LSCV,
  ICV,
  ICVCapped,
  Oversmoothed
};

inline std::string_view to_string(Method m)
{
  switch (m) {
    case Method::LSCV: return "lscv";
    case Method::ICV: return "icv";
    case Method::ICVCapped: return "icv-capped";
    case Method::Oversmoothed: return "os";
  }
  return "unknown";
}

struct BandwidthSelection
{
  Method method = Method::LSCV;
  double bandwidth = 0.0;
  std::optional<double> selection_bandwidth; //!< b_UCV for the ICV methods
  std::optional<double> rescale_constant;    //!< C for the ICV methods
  double criterion_minimum = 0.0;
  bool boundary_hit = false;
  bool degenerate_zero = false; //!< criterion dives toward h -> 0
  GridScan trace;               //!< criterion on the search grid
};

/// Closed-form LSCV criterion for a centered, mass-one mixture kernel:
///   R(K)/(n h) + (2/n^2) sum_{i<j} (K*K)_h(d_ij) - (4/(n(n-1))) sum_{i<j} K_h(d_ij)
/// with K_h(x) = K(x/h)/h. Requires ascending data.
inline double lscv_sorted(std::span<const double> sorted, const SignedGaussianMixture& kernel, double h)
{
  const double n = static_cast<double>(sorted.size());
  const auto kk = convolve(kernel, kernel);
  const auto combined = kk.scaled(h) * (2.0 / (n * n)) + kernel.scaled(h) * (-4.0 / (n * (n - 1.0)));
  return roughness(kernel) / (n * h) + pairwise::kernel_pair_sum(sorted, combined);
}

inline double lscv(std::span<const double> data, const SignedGaussianMixture& kernel, double h)
{
  if (data.size() < 2)
    throw Error("lscv: need at least 2 observations");
  if (!(h > 0.0))
    throw Error("lscv: bandwidth must be positive");
  require_kernel(kernel);
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  return lscv_sorted(sorted, kernel, h);
}

//! Minimizer of LSCV over 200 log-spaced bandwidths in
//! [1e-3, 10] * sd * n^(-1/5), refined by golden section.
///
/// When the grid minimum is the smallest bandwidth (the criterion dives toward
/// zero, as on rounded data) degenerate_zero is set and the smallest interior
/// local minimum is returned instead, if there is one.
inline BandwidthSelection minimize_lscv(std::span<const double> data, const SignedGaussianMixture& kernel,
                                        const BandwidthSearch& search = {})
{
  if (data.size() < 2)
    throw Error("lscv: need at least 2 observations");
  require_kernel(kernel);
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back())
    throw Error("criterion degenerate: no spread");

  const auto n = static_cast<long long>(sorted.size());
  const auto [lo, hi] = bandwidth_range(stats::sample_sd(sorted), n, search);
  auto criterion = [&](double h) { return lscv_sorted(sorted, kernel, h); };

  BandwidthSelection out;
  out.method = Method::LSCV;
  out.trace = scan(criterion, log_grid(lo, hi, search.grid_points));
  const auto& values = out.trace.values;
  const auto k = argmin_index(values);

  std::optional<std::size_t> pick;
  if (k == 0) {
    out.degenerate_zero = true;
    const auto minima = interior_local_minima(values);
    if (!minima.empty())
      pick = minima.front();
  } else if (k + 1 < values.size()) {
    pick = k;
  }

  if (pick) {
    const auto m = refine_grid_point(criterion, out.trace, *pick, search.rel_tol);
    out.bandwidth = m.argmin;
    out.criterion_minimum = m.value;
  } else {
    out.boundary_hit = true;
    out.bandwidth = out.trace.grid[k];
    out.criterion_minimum = values[k];
  }
  return out;
}

//! h_ICV = C * b_UCV, where b_UCV minimizes LSCV under L(.; alpha, sigma).
inline BandwidthSelection icv_bandwidth(std::span<const double> data, double alpha, double sigma,
                                        const BandwidthSearch& search = {})
{
  const SelectionKernel kernel(alpha, sigma);
  auto out = minimize_lscv(data, kernel.mixture(), search);
  const double c = rescale_constant(kernel);
  out.method = Method::ICV;
  out.selection_bandwidth = out.bandwidth;
  out.rescale_constant = c;
  out.bandwidth = c * out.bandwidth;
  return out;
}

//! Oversmoothed bandwidth (243 R(phi) / (35 n))^(1/5) * sd, about
//! 1.1439 sd n^(-1/5). This is Terrell's (1990) maximal smoothing bound for
//! the Gaussian kernel.
inline double oversmoothed_bandwidth(std::span<const double> data)
{
  if (data.size() < 2)
    throw Error("oversmoothed bandwidth needs at least 2 observations");
  const double s = stats::sample_sd(data);
  if (!(s > 0.0))
    throw Error("oversmoothed bandwidth undefined for zero sample standard deviation");
  const double n = static_cast<double>(data.size());
  return std::pow(243.0 * roughness_gaussian / (35.0 * n), 0.2) * s;
}

//! min(h_ICV, h_OS). boundary_hit reports that the cap was applied.
inline BandwidthSelection icv_capped(std::span<const double> data, double alpha, double sigma,
                                     const BandwidthSearch& search = {})
{
  auto out = icv_bandwidth(data, alpha, sigma, search);
  out.method = Method::ICVCapped;
  const double cap = oversmoothed_bandwidth(data);
  if (out.bandwidth > cap) {
    out.bandwidth = cap;
    out.boundary_hit = true;
  }
  return out;
}

} // namespace icv
