#pragma once

#include "icv/cross_validation.hpp"
#include "icv/error.hpp"
#include "icv/estimation.hpp"
#include "icv/normal_mixture.hpp"
#include "icv/selection_kernel.hpp"
#include "icv/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace icv {

struct ReplicationFlags
{
  bool ucv_boundary = false;
  bool ucv_degenerate = false;
  bool icv_boundary = false;
  bool icv_capped = false; //!< h_icv_star took the oversmoothed value
};

struct ReplicationRecord
{
  std::uint64_t seed = 0;
  double h0_hat = 0.0;
  double h_ucv = 0.0;
  double h_icv = 0.0;
  double h_icv_star = 0.0;
  double h_os = 0.0;
  double ise_h0 = 0.0;
  double ise_ucv = 0.0;
  double ise_icv = 0.0;
  double ise_icv_star = 0.0;
  double ise_os = 0.0;
  ReplicationFlags flags;
  std::optional<std::string> error; //!< set when the replication failed
};

//! Fixed (alpha, sigma), or the polynomial model evaluated at each n.
struct StudyParams
{
  std::optional<ModelParams> fixed;

  ModelParams at(long long n) const { return fixed ? *fixed : model_params(n); }
};

inline ReplicationRecord run_replication(const NormalMixture& f, long long n, std::uint64_t seed,
                                         const ModelParams& params, const BandwidthSearch& search = {})
{
  ReplicationRecord r;
  r.seed = seed;
  try {
    const auto x = sample(f, n, seed);
    const auto phi = SignedGaussianMixture::standard_normal();
    r.h0_hat = ise_optimal_bandwidth(x, f, phi, search);
    const auto ucv = minimize_lscv(x, phi, search);
    const auto icv = icv_bandwidth(x, params.alpha, params.sigma, search);
    r.h_ucv = ucv.bandwidth;
    r.h_icv = icv.bandwidth;
    r.h_os = oversmoothed_bandwidth(x);
    r.h_icv_star = std::min(r.h_icv, r.h_os);
    r.flags = {ucv.boundary_hit, ucv.degenerate_zero, icv.boundary_hit, r.h_icv > r.h_os};

    auto ise = [&](double h) { return exact_ise(KernelEstimate(x, h, phi), f); };
    r.ise_h0 = ise(r.h0_hat);
    r.ise_ucv = ise(r.h_ucv);
    r.ise_icv = ise(r.h_icv);
    r.ise_icv_star = ise(r.h_icv_star);
    r.ise_os = ise(r.h_os);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

//! Replications with seeds base_seed + i, i = 0..reps-1, spread over a pool
//! of worker threads. Each record depends only on its seed, so the result is
//! independent of the thread count.
inline std::vector<ReplicationRecord> run_replications(const NormalMixture& f, long long n, int reps,
                                                       std::uint64_t base_seed, const ModelParams& params,
                                                       unsigned threads = 0, const BandwidthSearch& search = {})
{
  if (reps < 1)
    throw Error("reps must be positive");
  std::vector<ReplicationRecord> out(static_cast<std::size_t>(reps));
  if (threads == 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(reps));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < out.size(); i = next++)
      out[i] = run_replication(f, n, base_seed + i, params, search);
  };
  if (threads == 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back(worker);
  for (auto& t : pool)
    t.join();
  return out;
}

struct MeanSd
{
  double mean;
  double sd;
};

//! A ratio reported with its parts, so 0/0 stays visible as NaN.
struct Ratio
{
  double numerator;
  double denominator;
  double value;
};

struct StudySummary
{
  std::string density;
  long long n = 0;
  int reps = 0;   //!< valid records aggregated
  int failed = 0; //!< records excluded because they errored
  ModelParams params{0.0, 0.0};
  MeanSd h0_hat{};
  MeanSd h_ucv{};
  MeanSd h_icv{};
  MeanSd h_icv_star{};
  MeanSd h_os{};
  double skew_ucv = 0.0;
  double skew_icv_star = 0.0;
  Ratio sq_error_ratio{};
  Ratio ise_ratio{};
  std::vector<ReplicationRecord> records; //!< raw records, including failures
};

/// Aggregates valid records. E denotes the average over replications:
///   sq_error_ratio = E(h*_ICV - E h0_hat)^2 / E(h_UCV - E h0_hat)^2
///   ise_ratio      = E(ISE(h*_ICV)/ISE(h0_hat)) / E(ISE(h_UCV)/ISE(h0_hat))
inline StudySummary summarize(const std::vector<ReplicationRecord>& records)
{
  std::vector<const ReplicationRecord*> ok;
  for (const auto& r : records) {
    if (!r.error)
      ok.push_back(&r);
  }
  if (ok.size() < 2)
    throw Error("summarize: need at least 2 valid records");

  StudySummary s;
  s.reps = static_cast<int>(ok.size());
  s.failed = static_cast<int>(records.size() - ok.size());
  s.records = records;

  auto column = [&](double ReplicationRecord::*field) {
    std::vector<double> v;
    v.reserve(ok.size());
    for (const auto* r : ok)
      v.push_back(r->*field);
    return v;
  };
  auto mean_sd = [](const std::vector<double>& v) { return MeanSd{stats::mean(v), stats::sample_sd(v)}; };

  const auto h0 = column(&ReplicationRecord::h0_hat);
  const auto ucv = column(&ReplicationRecord::h_ucv);
  const auto star = column(&ReplicationRecord::h_icv_star);
  s.h0_hat = mean_sd(h0);
  s.h_ucv = mean_sd(ucv);
  s.h_icv = mean_sd(column(&ReplicationRecord::h_icv));
  s.h_icv_star = mean_sd(star);
  s.h_os = mean_sd(column(&ReplicationRecord::h_os));
  s.skew_ucv = stats::skewness(ucv);
  s.skew_icv_star = stats::skewness(star);

  const double e_h0 = s.h0_hat.mean;
  const double m = static_cast<double>(ok.size());
  double num = 0.0;
  double den = 0.0;
  double ise_num = 0.0;
  double ise_den = 0.0;
  for (const auto* r : ok) {
    num += (r->h_icv_star - e_h0) * (r->h_icv_star - e_h0);
    den += (r->h_ucv - e_h0) * (r->h_ucv - e_h0);
    ise_num += r->ise_icv_star / r->ise_h0;
    ise_den += r->ise_ucv / r->ise_h0;
  }
  s.sq_error_ratio = {num / m, den / m, num / den};
  s.ise_ratio = {ise_num / m, ise_den / m, ise_num / ise_den};
  return s;
}

struct StudyConfig
{
  std::vector<std::string> densities;
  std::vector<long long> ns;
  int reps = 200;
  std::uint64_t base_seed = 1;
  StudyParams params;
  unsigned threads = 0;
  BandwidthSearch search;
};

//! One summary per (density, n), densities outermost. Every setting reuses
//! the seeds base_seed + i.
inline std::vector<StudySummary> run_study(const StudyConfig& cfg)
{
  if (cfg.reps < 2)
    throw Error("run_study: reps must be at least 2");
  std::vector<StudySummary> out;
  for (const auto& name : cfg.densities) {
    const auto f = density_by_name(name);
    for (long long n : cfg.ns) {
      const auto params = cfg.params.at(n);
      auto s = summarize(run_replications(f, n, cfg.reps, cfg.base_seed, params, cfg.threads, cfg.search));
      s.density = name;
      s.n = n;
      s.params = params;
      out.push_back(std::move(s));
    }
  }
  return out;
}

namespace detail {

inline std::string fmt17(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string flag_string(const ReplicationRecord& r)
{
  if (r.error)
    return "error";
  std::string s;
  auto add = [&](bool on, const char* name) {
    if (!on)
      return;
    if (!s.empty())
      s += '|';
    s += name;
  };
  add(r.flags.ucv_boundary, "ucv_boundary");
  add(r.flags.ucv_degenerate, "ucv_degenerate");
  add(r.flags.icv_boundary, "icv_boundary");
  add(r.flags.icv_capped, "icv_capped");
  return s;
}

} // namespace detail

inline void write_records_csv(std::ostream& os, const std::vector<StudySummary>& studies)
{
  os << "density,n,seed,h0_hat,h_ucv,h_icv,h_icv_star,h_os,ise_h0,ise_ucv,ise_icv_star,flags\n";
  for (const auto& s : studies) {
    for (const auto& r : s.records) {
      os << s.density << ',' << s.n << ',' << r.seed;
      for (double v : {r.h0_hat, r.h_ucv, r.h_icv, r.h_icv_star, r.h_os, r.ise_h0, r.ise_ucv, r.ise_icv_star})
        os << ',' << detail::fmt17(v);
      os << ',' << detail::flag_string(r) << '\n';
    }
  }
}

inline void write_summary_csv(std::ostream& os, const std::vector<StudySummary>& studies)
{
  os << "density,n,reps,failed,alpha,sigma,"
        "mean_h0_hat,sd_h0_hat,mean_h_ucv,sd_h_ucv,mean_h_icv,sd_h_icv,mean_h_icv_star,sd_h_icv_star,"
        "mean_h_os,sd_h_os,skew_h_ucv,skew_h_icv_star,"
        "sq_error_num,sq_error_den,sq_error_ratio,ise_num,ise_den,ise_ratio\n";
  for (const auto& s : studies) {
    os << s.density << ',' << s.n << ',' << s.reps << ',' << s.failed;
    for (double v : {s.params.alpha, s.params.sigma, s.h0_hat.mean, s.h0_hat.sd, s.h_ucv.mean, s.h_ucv.sd,
                     s.h_icv.mean, s.h_icv.sd, s.h_icv_star.mean, s.h_icv_star.sd, s.h_os.mean, s.h_os.sd,
                     s.skew_ucv, s.skew_icv_star, s.sq_error_ratio.numerator, s.sq_error_ratio.denominator,
                     s.sq_error_ratio.value, s.ise_ratio.numerator, s.ise_ratio.denominator, s.ise_ratio.value})
      os << ',' << detail::fmt17(v);
    os << '\n';
  }
}

} // namespace icv
