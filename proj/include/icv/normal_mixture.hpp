#pragma once

#include "icv/error.hpp"
#include "icv/gaussian_mixture.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace icv {

struct NormalComponent
{
  double weight;
  double mean;
  double sd;
};

//! R(f), R(f'') and R(f''') of a target density.
struct DensityFunctionals
{
  double r_f;
  double r_f2;
  double r_f3;
};

//! Normal mixture target density. Weights are positive and sum to one.
class NormalMixture
{
public:
  explicit NormalMixture(std::vector<NormalComponent> components)
    : components_(std::move(components))
  {
    if (components_.empty())
      throw Error("normal mixture needs at least one component");
    double total = 0.0;
    for (const auto& c : components_) {
      if (!(c.weight > 0.0) || !(c.sd > 0.0))
        throw Error("normal mixture weights and sds must be positive");
      total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw Error("normal mixture weights must sum to 1");
  }

  const std::vector<NormalComponent>& components() const { return components_; }

  double pdf(double x) const
  {
    double sum = 0.0;
    for (const auto& c : components_)
      sum += c.weight * normal_pdf(x - c.mean, c.sd);
    return sum;
  }

  //! k-th derivative of the density, k <= 6.
  double pdf_derivative(int k, double x) const
  {
    double sum = 0.0;
    for (const auto& c : components_)
      sum += c.weight * normal_pdf_derivative(k, x - c.mean, c.sd);
    return sum;
  }

  double mean() const
  {
    double m = 0.0;
    for (const auto& c : components_)
      m += c.weight * c.mean;
    return m;
  }

  double sd() const
  {
    const double m = mean();
    double second = 0.0;
    for (const auto& c : components_)
      second += c.weight * (c.sd * c.sd + c.mean * c.mean);
    return std::sqrt(second - m * m);
  }

  SignedGaussianMixture as_mixture() const
  {
    std::vector<GaussianComponent> out;
    out.reserve(components_.size());
    for (const auto& c : components_)
      out.push_back({c.weight, c.mean, c.sd});
    return SignedGaussianMixture(std::move(out));
  }

  //! Density of c * X + shift where X has this density.
  NormalMixture affine(double c, double shift = 0.0) const
  {
    auto out = components_;
    for (auto& comp : out) {
      comp.mean = c * comp.mean + shift;
      comp.sd *= std::abs(c);
    }
    return NormalMixture(std::move(out));
  }

private:
  std::vector<NormalComponent> components_;
};

//! Marron-Wand densities used in the simulation study plus the kurtotic
//! unimodal density (Marron and Wand 1992, density #4) used for local
//! bandwidths.
inline std::map<std::string, NormalMixture> standard_suite()
{
  std::map<std::string, NormalMixture> suite;
  suite.emplace("gaussian", NormalMixture({{1.0, 0.0, 1.0}}));
  suite.emplace("skewed_unimodal",
                NormalMixture({{0.2, 0.0, 1.0}, {0.2, 0.5, 2.0 / 3.0}, {0.6, 13.0 / 12.0, 5.0 / 9.0}}));
  suite.emplace("bimodal", NormalMixture({{0.5, -1.0, 2.0 / 3.0}, {0.5, 1.0, 2.0 / 3.0}}));
  suite.emplace("separated_bimodal", NormalMixture({{0.5, -1.5, 0.5}, {0.5, 1.5, 0.5}}));
  suite.emplace("skewed_bimodal", NormalMixture({{0.75, 0.0, 1.0}, {0.25, 1.5, 1.0 / 3.0}}));
  suite.emplace("kurtotic_unimodal", NormalMixture({{2.0 / 3.0, 0.0, 1.0}, {1.0 / 3.0, 0.0, 0.1}}));
  return suite;
}

inline NormalMixture density_by_name(const std::string& name)
{
  auto suite = standard_suite();
  auto it = suite.find(name);
  if (it == suite.end())
    throw Error("unknown density '" + name + "'");
  return it->second;
}

//! Generator for one sample: the 64-bit seed is split into two 32-bit words
//! and expanded through std::seed_seq.
inline std::mt19937_64 seeded_generator(std::uint64_t seed)
{
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

//! n independent draws: component chosen by weight, then a normal draw.
inline std::vector<double> sample(const NormalMixture& f, long long n, std::uint64_t seed)
{
  if (n < 1)
    throw Error("sample: n must be at least 1");
  auto gen = seeded_generator(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto& comps = f.components();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const double u = unif(gen);
    std::size_t k = 0;
    double cum = comps[0].weight;
    while (u >= cum && k + 1 < comps.size())
      cum += comps[++k].weight;
    out.push_back(comps[k].mean + comps[k].sd * normal(gen));
  }
  return out;
}

//! R(f^(k)) = (-1)^k sum_ij w_i w_j phi^(2k)_{sqrt(s_i^2 + s_j^2)}(m_i - m_j).
inline double derivative_roughness(const NormalMixture& f, int k)
{
  const auto& comps = f.components();
  double sum = 0.0;
  for (const auto& a : comps) {
    for (const auto& b : comps)
      sum += a.weight * b.weight * normal_pdf_derivative(2 * k, a.mean - b.mean, std::hypot(a.sd, b.sd));
  }
  return (k % 2 == 0) ? sum : -sum;
}

inline DensityFunctionals derivative_functionals(const NormalMixture& f)
{
  return {derivative_roughness(f, 0), derivative_roughness(f, 2), derivative_roughness(f, 3)};
}

} // namespace icv
