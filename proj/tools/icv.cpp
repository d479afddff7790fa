// Command-line front end: bandwidth selection, density estimates, local
// bandwidths, asymptotic constants and the Monte Carlo study.

#include "icv/icv.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

icv::Sample read_input(const std::string& path)
{
  if (path == "-")
    return icv::ingest(std::cin);
  return icv::ingest_file(path);
}

std::vector<double> parse_grid(const std::string& grid_text)
{
  std::vector<double> parts;
  std::stringstream ss(grid_text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size())
        throw icv::Error("");
    } catch (const std::exception&) {
      throw icv::Error("grid must look like lo:hi:step, got '" + grid_text + "'");
    }
  }
  if (parts.size() != 3)
    throw icv::Error("grid must look like lo:hi:step, got '" + grid_text + "'");
  return icv::uniform_grid(parts[0], parts[1], parts[2]);
}

std::string num(double v)
{
  return icv::detail::fmt17(v);
}

// (alpha, sigma) from the flags, else from the model at n. Outside the
// model's range the nearest valid parameters are used with a warning.
icv::ModelParams resolve_params(std::optional<double> alpha, std::optional<double> sigma, long long n,
                                std::vector<std::string>& warnings)
{
  if (alpha && sigma)
    return {*alpha, *sigma};
  if (alpha || sigma)
    throw icv::Error("--alpha and --sigma must be given together");
  try {
    return icv::model_params(n);
  } catch (const icv::ModelRangeError& e) {
    warnings.push_back(std::string(e.what()) + "; using its parameters");
    return e.suggestion();
  }
}

json selection_json(const icv::BandwidthSelection& s)
{
  json j;
  j["method"] = std::string(icv::to_string(s.method));
  j["bandwidth"] = s.bandwidth;
  j["selection_bandwidth"] = s.selection_bandwidth ? json(*s.selection_bandwidth) : json(nullptr);
  j["rescale_constant"] = s.rescale_constant ? json(*s.rescale_constant) : json(nullptr);
  j["criterion_minimum"] = s.criterion_minimum;
  j["boundary_hit"] = s.boundary_hit;
  j["degenerate_zero"] = s.degenerate_zero;
  return j;
}

struct SelectArgs
{
  std::string input = "-";
  std::string method = "icv";
  std::optional<double> alpha;
  std::optional<double> sigma;
  std::size_t grid_points = 200;
  std::string trace;
};

icv::BandwidthSelection run_select(const SelectArgs& a, const std::vector<double>& x, json& extra,
                                   std::vector<std::string>& warnings)
{
  icv::BandwidthSearch search;
  search.grid_points = a.grid_points;
  const auto n = static_cast<long long>(x.size());
  if (a.method == "lscv")
    return icv::minimize_lscv(x, icv::SignedGaussianMixture::standard_normal(), search);
  if (a.method == "os") {
    icv::BandwidthSelection s;
    s.method = icv::Method::Oversmoothed;
    s.bandwidth = icv::oversmoothed_bandwidth(x);
    return s;
  }
  const auto p = resolve_params(a.alpha, a.sigma, n, warnings);
  extra["alpha"] = p.alpha;
  extra["sigma"] = p.sigma;
  if (a.method == "icv")
    return icv::icv_bandwidth(x, p.alpha, p.sigma, search);
  if (a.method == "icv-capped")
    return icv::icv_capped(x, p.alpha, p.sigma, search);
  throw icv::Error("unknown method '" + a.method + "'");
}

void write_trace(const std::string& path, const icv::GridScan& trace)
{
  std::ofstream out(path);
  if (!out)
    throw icv::Error("cannot write '" + path + "'");
  out << "h,criterion\n";
  for (std::size_t k = 0; k < trace.grid.size(); ++k)
    out << num(trace.grid[k]) << ',' << num(trace.values[k]) << '\n';
}

void add_select(CLI::App& app)
{
  auto args = std::make_shared<SelectArgs>();
  auto* cmd = app.add_subcommand("select", "Select a global bandwidth for a sample");
  cmd->add_option("-i,--input", args->input, "Newline-delimited sample ('-' for stdin)");
  cmd->add_option("--method", args->method, "lscv | icv | icv-capped | os")
    ->check(CLI::IsMember({"lscv", "icv", "icv-capped", "os"}));
  cmd->add_option("--alpha", args->alpha, "Selection kernel alpha (default: model at n)");
  cmd->add_option("--sigma", args->sigma, "Selection kernel sigma (default: model at n)");
  cmd->add_option("--grid-points", args->grid_points, "Log-grid size of the bandwidth search")
    ->check(CLI::Range(3, 100000));
  cmd->add_option("--emit-trace", args->trace, "Write the criterion trace (h, criterion) as CSV");
  cmd->callback([args] {
    const auto sample = read_input(args->input);
    json extra = json::object();
    std::vector<std::string> warnings;
    const auto s = run_select(*args, sample.values, extra, warnings);
    for (const auto& w : warnings)
      std::cerr << "warning: " << w << '\n';
    if (!args->trace.empty())
      write_trace(args->trace, s.trace);
    json j = selection_json(s);
    j.update(extra);
    j["n"] = sample.count();
    j["min"] = sample.min;
    j["max"] = sample.max;
    j["warnings"] = warnings;
    std::cout << j.dump(2) << '\n';
  });
}

void add_density(CLI::App& app)
{
  struct Args
  {
    SelectArgs select;
    std::optional<double> bandwidth;
    std::string grid = "-3:3:0.1";
  };
  auto args = std::make_shared<Args>();
  auto* cmd = app.add_subcommand("density", "Gaussian-kernel density estimate on a grid (CSV x,fhat)");
  cmd->add_option("-i,--input", args->select.input, "Newline-delimited sample ('-' for stdin)");
  cmd->add_option("--bandwidth", args->bandwidth, "Bandwidth; selected with --method when omitted");
  cmd->add_option("--method", args->select.method, "lscv | icv | icv-capped | os")
    ->check(CLI::IsMember({"lscv", "icv", "icv-capped", "os"}));
  cmd->add_option("--alpha", args->select.alpha);
  cmd->add_option("--sigma", args->select.sigma);
  cmd->add_option("--grid", args->grid, "lo:hi:step");
  cmd->callback([args] {
    const auto sample = read_input(args->select.input);
    const auto grid = parse_grid(args->grid);
    double h = 0.0;
    if (args->bandwidth) {
      h = *args->bandwidth;
    } else {
      json extra = json::object();
      std::vector<std::string> warnings;
      h = run_select(args->select, sample.values, extra, warnings).bandwidth;
      for (const auto& w : warnings)
        std::cerr << "warning: " << w << '\n';
    }
    const icv::KernelEstimate fhat(sample.values, h);
    std::cout << "x,fhat\n";
    for (double x : grid)
      std::cout << num(x) << ',' << num(fhat(x)) << '\n';
  });
}

void add_local(CLI::App& app)
{
  struct Args
  {
    std::string input;
    std::string density;
    long long n = 1500;
    std::uint64_t seed = 1;
    std::string method = "icv";
    double alpha = 6.0;
    double sigma = 6.0;
    double window = 0.3;
    std::string grid = "-3:3:0.1";
    std::size_t b_points = 100;
  };
  auto args = std::make_shared<Args>();
  auto* cmd = app.add_subcommand("local", "Local bandwidths and the local estimate (CSV)");
  cmd->add_option("-i,--input", args->input, "Newline-delimited sample ('-' for stdin)");
  cmd->add_option("--density", args->density,
                  "Target density: adds f_true, and is sampled (--n, --seed) when no input is given");
  cmd->add_option("--n", args->n, "Sample size when sampling from --density");
  cmd->add_option("--seed", args->seed, "Seed when sampling from --density");
  cmd->add_option("--method", args->method, "icv | lscv")->check(CLI::IsMember({"icv", "lscv"}));
  cmd->add_option("--alpha", args->alpha);
  cmd->add_option("--sigma", args->sigma);
  cmd->add_option("--window", args->window, "Window w of the local criterion");
  cmd->add_option("--grid", args->grid, "lo:hi:step");
  cmd->add_option("--b-grid-points", args->b_points, "Log-grid size of the per-x bandwidth search")
    ->check(CLI::Range(50, 100000));
  cmd->callback([args] {
    std::optional<icv::NormalMixture> f;
    if (!args->density.empty())
      f = icv::density_by_name(args->density);
    std::vector<double> x;
    if (!args->input.empty())
      x = read_input(args->input).values;
    else if (f)
      x = icv::sample(*f, args->n, args->seed);
    else
      throw icv::Error("local needs --input or --density");

    icv::LocalOptions opt;
    opt.method = args->method == "icv" ? icv::LocalMethod::ICV : icv::LocalMethod::LSCV;
    opt.alpha = args->alpha;
    opt.sigma = args->sigma;
    opt.window = args->window;
    opt.grid_points = args->b_points;
    const auto grid = parse_grid(args->grid);
    const auto sel = icv::local_bandwidths(x, opt, grid);
    if (sel.bandwidths.floored())
      std::cerr << "warning: interpolated bandwidth was non-positive somewhere and has been floored\n";

    std::cout << "x,bandwidth,fhat_local" << (f ? ",f_true" : "") << '\n';
    for (std::size_t q = 0; q < grid.size(); ++q) {
      std::cout << num(grid[q]) << ',' << num(sel.bandwidths.bandwidths()[q]) << ','
                << num(icv::local_estimate(x, sel.bandwidths, grid[q]));
      if (f)
        std::cout << ',' << num(f->pdf(grid[q]));
      std::cout << '\n';
    }
  });
}

void add_theory(CLI::App& app)
{
  struct Args
  {
    std::optional<double> alpha;
    double n = 1000;
    std::string density = "gaussian";
  };
  auto args = std::make_shared<Args>();
  auto* cmd = app.add_subcommand("theory", "Asymptotic constants, sigma_opt and mse_opt (JSON)");
  cmd->add_option("--alpha", args->alpha, "alpha > 0 (default: the C*D minimizer)");
  cmd->add_option("--n", args->n, "Sample size")->check(CLI::PositiveNumber);
  cmd->add_option("--density", args->density, "Target density name");
  cmd->callback([args] {
    const double a0 = icv::optimal_alpha();
    const double alpha = args->alpha.value_or(a0);
    const auto f = icv::density_by_name(args->density);
    const auto fun = icv::derivative_functionals(f);
    const auto t = icv::theory_constants(alpha);
    const double s_opt = icv::sigma_opt(alpha, args->n, fun);
    const auto terms = icv::relative_error_terms(alpha, s_opt, args->n, fun);
    json j;
    j["alpha"] = alpha;
    j["n"] = args->n;
    j["density"] = args->density;
    j["A_alpha"] = t.a_alpha;
    j["C_alpha"] = t.c_alpha;
    j["D_alpha"] = t.d_alpha;
    j["CD"] = t.c_alpha * t.d_alpha;
    j["optimal_alpha"] = a0;
    j["functionals"] = {{"R_f", fun.r_f}, {"R_f2", fun.r_f2}, {"R_f3", fun.r_f3}};
    j["sigma_opt"] = s_opt;
    j["mse_opt"] = icv::mse_opt(alpha, args->n, fun);
    j["S_n"] = terms.s_n;
    j["B_n"] = terms.b_n_bias;
    if (s_opt > 1.0) {
      const icv::SelectionKernel k(alpha, s_opt);
      const auto bw = icv::asymptotic_bandwidths(k, args->n, fun);
      j["b_n"] = bw.b_n;
      j["h_n"] = bw.h_n;
      j["rescale_constant"] = icv::rescale_constant(k);
    }
    std::cout << j.dump(2) << '\n';
  });
}

void add_simulate(CLI::App& app)
{
  struct Args
  {
    std::vector<std::string> densities{"gaussian"};
    std::vector<long long> ns{100, 250, 500};
    int reps = 200;
    std::uint64_t seed = 1;
    std::optional<double> alpha;
    std::optional<double> sigma;
    bool model = false;
    std::vector<std::string> out;
    std::string records;
    std::string summary;
    unsigned threads = 0;
    bool allow_large_n = false;
  };
  auto args = std::make_shared<Args>();
  auto* cmd = app.add_subcommand("simulate", "Monte Carlo comparison of LSCV and ICV bandwidths");
  cmd->add_option("--density", args->densities, "Target density (repeatable)");
  cmd->add_option("--n", args->ns, "Sample size (repeatable)");
  cmd->add_option("--reps", args->reps, "Replications per setting")->check(CLI::Range(2, 1000000));
  cmd->add_option("--seed", args->seed, "Base seed; replication i uses seed + i");
  auto* alpha = cmd->add_option("--alpha", args->alpha, "Fixed alpha for every n");
  auto* sigma = cmd->add_option("--sigma", args->sigma, "Fixed sigma for every n");
  auto* model = cmd->add_flag("--model", args->model, "Use the (alpha, sigma) model at each n (default)");
  model->excludes(alpha)->excludes(sigma);
  alpha->needs(sigma);
  sigma->needs(alpha);
  cmd->add_option("--out", args->out, "records.csv summary.csv")->expected(2);
  cmd->add_option("--records", args->records, "Per-replication CSV");
  cmd->add_option("--summary", args->summary, "Summary CSV (stdout when omitted)");
  cmd->add_option("--threads", args->threads, "Worker threads (0 = all cores)");
  cmd->add_flag("--allow-large-n", args->allow_large_n, "Permit n > 1000 (slow)");
  cmd->callback([args] {
    for (long long n : args->ns) {
      if (n > 1000 && !args->allow_large_n)
        throw icv::Error("n = " + std::to_string(n) + " is slow; pass --allow-large-n to run it");
    }
    std::string records = args->records;
    std::string summary = args->summary;
    if (!args->out.empty()) {
      records = args->out[0];
      summary = args->out[1];
    }
    icv::StudyConfig cfg;
    cfg.densities = args->densities;
    cfg.ns = args->ns;
    cfg.reps = args->reps;
    cfg.base_seed = args->seed;
    cfg.threads = args->threads;
    if (args->alpha)
      cfg.params.fixed = icv::ModelParams{*args->alpha, *args->sigma};
    for (const auto& d : cfg.densities)
      (void)icv::density_by_name(d);

    const auto studies = icv::run_study(cfg);
    if (!records.empty()) {
      std::ofstream out(records);
      if (!out)
        throw icv::Error("cannot write '" + records + "'");
      icv::write_records_csv(out, studies);
    }
    if (!summary.empty()) {
      std::ofstream out(summary);
      if (!out)
        throw icv::Error("cannot write '" + summary + "'");
      icv::write_summary_csv(out, studies);
    } else {
      icv::write_summary_csv(std::cout, studies);
    }
    for (const auto& s : studies) {
      if (s.failed > 0)
        std::cerr << "warning: " << s.density << " n=" << s.n << ": " << s.failed << " replications failed\n";
    }
  });
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Kernel density bandwidth selection by indirect cross-validation"};
  app.require_subcommand(1);
  add_select(app);
  add_density(app);
  add_local(app);
  add_theory(app);
  add_simulate(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
