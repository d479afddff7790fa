#pragma once

#include "icv/detail/fast_exp.hpp"
#include "icv/error.hpp"
#include "icv/gaussian_mixture.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

// O(n^2) pairwise Gaussian sums over a sorted sample. Inner loops are SIMD
// reductions; pairs further apart than the underflow distance of the widest
// scale in a pass are skipped, which leaves the sums unchanged in double
// precision.

namespace icv::pairwise {

namespace detail {

// exp(-z^2 / 2) underflows below this z.
inline constexpr double underflow_z = 37.63;

// A pass evaluates exp(-d^2/(2 tau^2)) and, when `has_wide`, the value at
// sqrt(2) * tau through a square root.
struct Pass
{
  double tau;
  bool has_wide;
  std::size_t slot;
  std::size_t wide_slot;
};

inline std::vector<Pass> plan_passes(std::span<const double> taus)
{
  std::vector<std::size_t> order(taus.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return taus[a] < taus[b]; });

  std::vector<bool> used(taus.size(), false);
  std::vector<Pass> passes;
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const auto i = order[oi];
    if (used[i])
      continue;
    used[i] = true;
    Pass p{taus[i], false, i, 0};
    const double wide = std::sqrt(2.0) * taus[i];
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      const auto j = order[oj];
      if (!used[j] && std::abs(taus[j] - wide) <= 1e-14 * wide) {
        used[j] = true;
        p.has_wide = true;
        p.wide_slot = j;
        break;
      }
    }
    passes.push_back(p);
  }
  return passes;
}

} // namespace detail

//! For each tau: sum over i < j of exp(-(x_j - x_i)^2 / (2 tau^2)).
//! `sorted` must be ascending. Equal taus are computed once.
inline std::vector<double> gauss_sums(std::span<const double> sorted, std::span<const double> taus)
{
  std::vector<double> out(taus.size(), 0.0);
  const std::size_t n = sorted.size();
  const double* x = sorted.data();

  for (const auto& pass : detail::plan_passes(taus)) {
    const double c = -0.5 / (pass.tau * pass.tau);
    const double reach = detail::underflow_z * pass.tau * (pass.has_wide ? std::sqrt(2.0) : 1.0);
    double total = 0.0;
    double total_wide = 0.0;
    std::size_t end = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double xi = x[i];
      end = std::max(end, i + 1);
      while (end < n && x[end] - xi <= reach)
        ++end;
      double s = 0.0;
      double s_wide = 0.0;
      if (pass.has_wide) {
#pragma omp simd reduction(+ : s, s_wide)
        for (std::size_t j = i + 1; j < end; ++j) {
          const double d = x[j] - xi;
          const double e = icv::detail::exp_nonpositive(c * d * d);
          s += e;
          s_wide += std::sqrt(e);
        }
      } else {
#pragma omp simd reduction(+ : s)
        for (std::size_t j = i + 1; j < end; ++j) {
          const double d = x[j] - xi;
          s += icv::detail::exp_nonpositive(c * d * d);
        }
      }
      total += s;
      total_wide += s_wide;
    }
    out[pass.slot] = total;
    if (pass.has_wide)
      out[pass.wide_slot] = total_wide;
  }

  // Duplicates of an already planned tau get the same value.
  for (std::size_t i = 0; i < taus.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (taus[j] == taus[i]) {
        out[i] = out[j];
        break;
      }
    }
  }
  return out;
}

//! Sum over i < j of m(x_j - x_i) for a centered mixture m.
inline double kernel_pair_sum(std::span<const double> sorted, const SignedGaussianMixture& m)
{
  if (!m.is_centered())
    throw Error("pairwise sums need a centered mixture");
  // Merge components sharing a scale.
  std::vector<double> taus;
  std::vector<double> weights;
  for (const auto& c : m.components()) {
    auto it = std::find_if(taus.begin(), taus.end(), [&](double t) { return std::abs(t - c.scale) <= 1e-14 * c.scale; });
    if (it == taus.end()) {
      taus.push_back(c.scale);
      weights.push_back(c.weight);
    } else {
      weights[static_cast<std::size_t>(it - taus.begin())] += c.weight;
    }
  }
  const auto sums = gauss_sums(sorted, taus);
  double total = 0.0;
  for (std::size_t k = 0; k < taus.size(); ++k)
    total += weights[k] * inv_sqrt_2pi / taus[k] * sums[k];
  return total;
}

//! out[i] = sum over j != i of m(x_i - x_j) for a centered mixture m.
inline void kernel_row_sums(std::span<const double> sorted, const SignedGaussianMixture& m, std::span<double> out)
{
  if (!m.is_centered())
    throw Error("pairwise sums need a centered mixture");
  if (out.size() != sorted.size())
    throw Error("row sum output has the wrong length");
  const std::size_t n = sorted.size();
  const double* x = sorted.data();
  std::fill(out.begin(), out.end(), 0.0);

  for (const auto& comp : m.components()) {
    const double c = -0.5 / (comp.scale * comp.scale);
    const double coef = comp.weight * inv_sqrt_2pi / comp.scale;
    const double reach = detail::underflow_z * comp.scale;
    std::size_t begin = 0;
    std::size_t end = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = x[i];
      while (x[begin] < xi - reach)
        ++begin;
      while (end < n && x[end] - xi <= reach)
        ++end;
      double s = 0.0;
#pragma omp simd reduction(+ : s)
      for (std::size_t j = begin; j < i; ++j) {
        const double d = x[j] - xi;
        s += icv::detail::exp_nonpositive(c * d * d);
      }
#pragma omp simd reduction(+ : s)
      for (std::size_t j = i + 1; j < end; ++j) {
        const double d = x[j] - xi;
        s += icv::detail::exp_nonpositive(c * d * d);
      }
      out[i] += coef * s;
    }
  }
}

} // namespace icv::pairwise
