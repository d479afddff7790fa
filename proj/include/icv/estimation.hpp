#pragma once

#include "icv/error.hpp"
#include "icv/gaussian_mixture.hpp"
#include "icv/minimize.hpp"
#include "icv/normal_mixture.hpp"
#include "icv/pairwise.hpp"
#include "icv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace icv {

inline void require_kernel(const SignedGaussianMixture& kernel)
{
  if (!kernel.is_centered())
    throw Error("kernel must be centered at zero");
  if (std::abs(kernel.total_mass() - 1.0) > 1e-12)
    throw Error("kernel must integrate to one");
}

/// Kernel density estimate (1/(n h)) sum_i K((x - X_i) / h).
///
/// The kernel may take negative values, in which case so may the estimate.
/// The sample is stored sorted; every quantity here is order invariant.
class KernelEstimate
{
public:
  KernelEstimate(std::vector<double> data, double bandwidth,
                 SignedGaussianMixture kernel = SignedGaussianMixture::standard_normal())
    : data_(std::move(data))
    , bandwidth_(bandwidth)
    , kernel_(std::move(kernel))
  {
    if (data_.size() < 2)
      throw Error("kernel estimate needs at least 2 observations");
    if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_))
      throw Error("bandwidth must be positive");
    require_kernel(kernel_);
    std::sort(data_.begin(), data_.end());
  }

  std::span<const double> data() const { return data_; }
  double bandwidth() const { return bandwidth_; }
  const SignedGaussianMixture& kernel() const { return kernel_; }
  std::size_t size() const { return data_.size(); }

  double operator()(double x) const
  {
    double sum = 0.0;
    for (const auto& c : kernel_.components()) {
      const double s = c.scale * bandwidth_;
      double part = 0.0;
      for (double xi : data_)
        part += normal_pdf(x - xi, s);
      sum += c.weight * part;
    }
    return sum / static_cast<double>(data_.size());
  }

  //! The estimate as an explicit mixture with n * (kernel components) terms.
  SignedGaussianMixture as_mixture() const
  {
    std::vector<GaussianComponent> out;
    out.reserve(data_.size() * kernel_.size());
    const double inv_n = 1.0 / static_cast<double>(data_.size());
    for (double xi : data_) {
      for (const auto& c : kernel_.components())
        out.push_back({c.weight * inv_n, xi, c.scale * bandwidth_});
    }
    return SignedGaussianMixture(std::move(out));
  }

  //! R(f_hat) in closed form, O(n^2).
  double roughness() const
  {
    const double n = static_cast<double>(data_.size());
    const auto kk = convolve(kernel_, kernel_).scaled(bandwidth_);
    const double diagonal = n * kk(0.0);
    return (diagonal + 2.0 * pairwise::kernel_pair_sum(data_, kk)) / (n * n);
  }

  //! Integral of f_hat(x) g(x) dx, O(n * components).
  double cross_integral(const SignedGaussianMixture& g) const
  {
    double sum = 0.0;
    for (const auto& c : kernel_.components()) {
      const double s = c.scale * bandwidth_;
      for (const auto& gc : g.components()) {
        const double tau = std::hypot(s, gc.scale);
        double part = 0.0;
        for (double xi : data_)
          part += normal_pdf(xi - gc.mean, tau);
        sum += c.weight * gc.weight * part;
      }
    }
    return sum / static_cast<double>(data_.size());
  }

private:
  std::vector<double> data_;
  double bandwidth_;
  SignedGaussianMixture kernel_;
};

inline double estimate_at(const KernelEstimate& e, double x)
{
  return e(x);
}

//! ISE = R(f_hat) - 2 integral(f_hat f) + R(f), exact.
inline double exact_ise(const KernelEstimate& e, const NormalMixture& f)
{
  const auto fm = f.as_mixture();
  const double ise = e.roughness() - 2.0 * e.cross_integral(fm) + roughness(fm);
  return std::max(0.0, ise);
}

/// Exact finite-sample MISE of the K-kernel estimator with bandwidth h:
///   R(K)/(n h) + (1 - 1/n) R(K_h * f) - 2 integral((K_h * f) f) + R(f).
inline double exact_mise(const SignedGaussianMixture& kernel, const NormalMixture& f, long long n, double h)
{
  if (n < 2)
    throw Error("exact_mise: n must be at least 2");
  if (!(h > 0.0))
    throw Error("exact_mise: bandwidth must be positive");
  const auto fm = f.as_mixture();
  const auto smoothed = convolve(kernel.scaled(h), fm);
  const double nn = static_cast<double>(n);
  return roughness(kernel) / (nn * h) + (1.0 - 1.0 / nn) * roughness(smoothed) - 2.0 * cross_integral(smoothed, fm) +
         roughness(fm);
}

struct BandwidthSearch
{
  std::size_t grid_points = 200;
  double lower_factor = 1e-3;
  double upper_factor = 10.0;
  double rel_tol = 1e-6;
};

//! Search interval [lower, upper] * s * n^(-1/5).
inline std::pair<double, double> bandwidth_range(double scale, long long n, const BandwidthSearch& search = {})
{
  const double anchor = scale * std::pow(static_cast<double>(n), -0.2);
  return {search.lower_factor * anchor, search.upper_factor * anchor};
}

//! Minimizer of exact_mise over the anchored range: h_0 for the Gaussian
//! kernel, b_0 when called with a selection kernel.
inline double mise_optimal_bandwidth(const SignedGaussianMixture& kernel, const NormalMixture& f, long long n,
                                     const BandwidthSearch& search = {})
{
  require_kernel(kernel);
  if (n < 2)
    throw Error("mise_optimal_bandwidth: n must be at least 2");
  const auto [lo, hi] = bandwidth_range(f.sd(), n, search);
  const auto m = minimize_on_log_grid([&](double h) { return exact_mise(kernel, f, n, h); }, lo, hi,
                                      search.grid_points, search.rel_tol);
  if (m.boundary)
    throw Error("MISE minimizer at search boundary");
  return m.argmin;
}

//! h_0 hat: minimizer of exact ISE for the given sample. The search range is
//! anchored at the target's standard deviation, as for h_0.
inline double ise_optimal_bandwidth(std::span<const double> data, const NormalMixture& f,
                                    const SignedGaussianMixture& kernel = SignedGaussianMixture::standard_normal(),
                                    const BandwidthSearch& search = {})
{
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<long long>(sorted.size());
  const auto [lo, hi] = bandwidth_range(f.sd(), n, search);

  // R(f) and the data themselves are fixed; keep the sorted copy.
  const auto fm = f.as_mixture();
  const double r_f = roughness(fm);
  auto ise = [&](double h) {
    const KernelEstimate e(sorted, h, kernel);
    return std::max(0.0, e.roughness() - 2.0 * e.cross_integral(fm) + r_f);
  };
  const auto m = minimize_on_log_grid(ise, lo, hi, search.grid_points, search.rel_tol);
  if (m.boundary)
    throw Error("ISE minimizer at search boundary");
  return m.argmin;
}

} // namespace icv
