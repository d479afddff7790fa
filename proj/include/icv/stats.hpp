#pragma once

#include "icv/error.hpp"

#include <cmath>
#include <span>

namespace icv::stats {

inline double mean(std::span<const double> x)
{
  if (x.empty())
    throw Error("mean of empty sample");
  double s = 0.0;
  for (double v : x)
    s += v;
  return s / static_cast<double>(x.size());
}

//! Standard deviation with the n - 1 denominator.
inline double sample_sd(std::span<const double> x)
{
  if (x.size() < 2)
    throw Error("standard deviation needs at least 2 values");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x)
    ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

//! Moment skewness m3 / m2^(3/2).
inline double skewness(std::span<const double> x)
{
  const double m = mean(x);
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : x) {
    const double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  const double n = static_cast<double>(x.size());
  m2 /= n;
  m3 /= n;
  return m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
}

} // namespace icv::stats
