#include <algorithm>
#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpcheck/dirichlet_process.hpp"
#include "dpcheck/distributions.hpp"
#include "dpcheck/divergence.hpp"
#include "dpcheck/errors.hpp"
#include "dpcheck/io.hpp"
#include "dpcheck/relative_belief.hpp"

namespace {

using dpcheck::CheckConfig;
using dpcheck::DivergenceSample;
using dpcheck::Family;
using dpcheck::FittedModel;
using dpcheck::OutputFormat;
using dpcheck::RBReport;
using dpcheck::RunManifest;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

constexpr std::uint64_t kSimulateStream = 3;

struct CommonFlags {
  std::string data_path;
  std::string family = "normal-location-unit-variance";
  std::vector<double> a_grid;
  std::size_t N = 200;
  std::size_t M = 20;
  std::size_t i0 = 1;
  std::size_t r1 = 2000;
  std::size_t r2 = 2000;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool print_seed = false;
  std::size_t threads = 1;
  std::string format = "json";
};

void add_sampling_flags(CLI::App* cmd, CommonFlags& f, bool with_data) {
  if (with_data) cmd->add_option("--data", f.data_path, "Input data file")->required();
  cmd->add_option("--family", f.family, "Model family to fit");
  cmd->add_option("--a", f.a_grid, "Concentration value (repeatable; default 1 5 10)");
  cmd->add_option("--N", f.N, "Stick-breaking truncation");
  cmd->add_option("--M", f.M, "Quantile bin count");
  cmd->add_option("--i0", f.i0, "Small-distance bin index");
  cmd->add_option("--r1", f.r1, "Prior draw count");
  cmd->add_option("--r2", f.r2, "Posterior draw count");
  auto* seed = cmd->add_option("--seed", f.seed, "Master seed (required for reproducibility)");
  cmd->add_flag("--print-seed", f.print_seed,
                "Generate a seed, print it to stderr, and use it");
  seed->each([&f](const std::string&) { f.seed_set = true; });
  cmd->add_option("--threads", f.threads, "Worker threads (results identical for any value)");
  cmd->add_option("--format", f.format, "Output format: json or tsv");
}

void resolve_seed(CommonFlags& f) {
  if (f.seed_set) return;
  if (!f.print_seed)
    throw dpcheck::input_error("--seed is required (or pass --print-seed to generate one)");
  std::random_device rd;
  f.seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  std::cerr << "seed: " << f.seed << "\n";
}

RunManifest build_manifest(const CommonFlags& f) {
  RunManifest m;
  m.input = f.data_path;
  m.family = dpcheck::family_from_name(f.family);
  m.a_grid = f.a_grid.empty() ? std::vector<double>{1.0, 5.0, 10.0} : f.a_grid;
  m.N = f.N;
  m.M = f.M;
  m.i0 = f.i0;
  m.r1 = f.r1;
  m.r2 = f.r2;
  m.seed = f.seed;
  m.threads = f.threads;
  m.format = dpcheck::format_from_name(f.format);
  return m;
}

int cmd_check(CommonFlags& f) {
  resolve_seed(f);
  RunManifest manifest = build_manifest(f);
  const std::vector<double> data = dpcheck::ingest(f.data_path);
  std::vector<CheckConfig> grid;
  for (double a : manifest.a_grid) grid.push_back(manifest.config_for(a));
  const std::vector<RBReport> reports = dpcheck::run_check(data, manifest.family, grid);
  if (manifest.format == OutputFormat::json)
    std::cout << dpcheck::reports_to_json(manifest, reports);
  else
    std::cout << dpcheck::reports_to_tsv(manifest, reports);
  return kExitOk;
}

int cmd_elicit(const std::vector<double>& a_grid, std::size_t N, std::size_t m,
               const std::string& format) {
  const std::size_t window = m == 0 ? dpcheck::window_size(N) : m;
  std::vector<double> values;
  for (double a : a_grid) values.push_back(dpcheck::expected_prior_kl(a, N, window));
  if (dpcheck::format_from_name(format) == OutputFormat::json) {
    ordered_json doc;
    doc["N"] = N;
    doc["m"] = window;
    doc["rows"] = ordered_json::array();
    for (std::size_t i = 0; i < a_grid.size(); ++i)
      doc["rows"].push_back(ordered_json{{"a", a_grid[i]},
                                         {"expected_prior_kl", values[i]},
                                         {"display", dpcheck::format_display(values[i])}});
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "# N=" << N << " m=" << window << "\n";
    std::cout << "a\texpected_prior_kl\texpected_prior_kl_4dp\n";
    for (std::size_t i = 0; i < a_grid.size(); ++i)
      std::cout << dpcheck::format_full(a_grid[i]) << '\t' << dpcheck::format_full(values[i])
                << '\t' << dpcheck::format_display(values[i]) << "\n";
  }
  return kExitOk;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_simulate(CommonFlags& f, const std::string& truth_spec, std::size_t n,
                 std::size_t reps) {
  resolve_seed(f);
  RunManifest manifest = build_manifest(f);
  manifest.generator = truth_spec;
  const FittedModel truth = dpcheck::parse_model_spec(truth_spec);
  std::vector<std::vector<double>> rb0(manifest.a_grid.size());
  std::vector<std::vector<double>> strength(manifest.a_grid.size());
  for (std::size_t rep = 0; rep < reps; ++rep) {
    dpcheck::Rng rng = dpcheck::Rng::substream(manifest.seed, {kSimulateStream, rep});
    const std::vector<double> data = dpcheck::sample(truth, n, rng);
    std::vector<CheckConfig> grid;
    for (double a : manifest.a_grid) {
      CheckConfig cfg = manifest.config_for(a);
      // Per-replication seed so replications are independent and reorderable.
      cfg.seed = dpcheck::mix64(manifest.seed ^ dpcheck::mix64(rep + 1));
      grid.push_back(cfg);
    }
    const std::vector<RBReport> reports = dpcheck::run_check(data, manifest.family, grid);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (!reports[i].error.empty())
        throw dpcheck::estimator_error("replication " + std::to_string(rep) + ": " +
                                       reports[i].error);
      rb0[i].push_back(reports[i].rb0);
      strength[i].push_back(reports[i].strength);
    }
  }
  if (manifest.format == OutputFormat::json) {
    ordered_json doc;
    doc["truth"] = truth_spec;
    doc["family"] = dpcheck::family_name(manifest.family);
    doc["n"] = n;
    doc["replications"] = reps;
    doc["seed"] = manifest.seed;
    doc["rows"] = ordered_json::array();
    for (std::size_t i = 0; i < manifest.a_grid.size(); ++i)
      doc["rows"].push_back(ordered_json{
          {"a", manifest.a_grid[i]},
          {"median_rb0", median_of(rb0[i])},
          {"median_strength", median_of(strength[i])},
          {"display",
           ordered_json{{"median_rb0", dpcheck::format_display(median_of(rb0[i]))},
                        {"median_strength",
                         dpcheck::format_display(median_of(strength[i]))}}}});
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "# truth=" << truth_spec << " family=" << dpcheck::family_name(manifest.family)
              << " n=" << n << " reps=" << reps << " seed=" << manifest.seed << "\n";
    std::cout << "a\tmedian_rb0\tmedian_strength\tmedian_rb0_4dp\tmedian_strength_4dp\n";
    for (std::size_t i = 0; i < manifest.a_grid.size(); ++i)
      std::cout << dpcheck::format_full(manifest.a_grid[i]) << '\t'
                << dpcheck::format_full(median_of(rb0[i])) << '\t'
                << dpcheck::format_full(median_of(strength[i])) << '\t'
                << dpcheck::format_display(median_of(rb0[i])) << '\t'
                << dpcheck::format_display(median_of(strength[i])) << "\n";
  }
  return kExitOk;
}

int cmd_densities(CommonFlags& f) {
  resolve_seed(f);
  RunManifest manifest = build_manifest(f);
  if (manifest.a_grid.size() != 1)
    throw dpcheck::input_error("densities requires exactly one --a value");
  const std::vector<double> data = dpcheck::ingest(f.data_path);
  const FittedModel model = dpcheck::fit_mle(manifest.family, data);
  const CheckConfig cfg = manifest.config_for(manifest.a_grid[0]);
  const DivergenceSample prior = dpcheck::generate_prior_sample(cfg);
  const DivergenceSample posterior = dpcheck::generate_posterior_sample(cfg, data, model);
  const auto ps = dpcheck::summarize(prior.draws);
  const auto qs = dpcheck::summarize(posterior.draws);
  if (manifest.format == OutputFormat::json) {
    ordered_json doc;
    doc["a"] = cfg.a;
    doc["seed"] = cfg.seed;
    doc["prior_summary"] = ordered_json{
        {"mean", ps.mean}, {"median", ps.median}, {"q05", ps.q05}, {"q95", ps.q95}};
    doc["posterior_summary"] = ordered_json{
        {"mean", qs.mean}, {"median", qs.median}, {"q05", qs.q05}, {"q95", qs.q95}};
    doc["prior_draws"] = prior.draws;
    doc["posterior_draws"] = posterior.draws;
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "# a=" << dpcheck::format_full(cfg.a) << " seed=" << cfg.seed << "\n";
    std::cout << "# prior: mean=" << dpcheck::format_full(ps.mean)
              << " median=" << dpcheck::format_full(ps.median)
              << " q05=" << dpcheck::format_full(ps.q05)
              << " q95=" << dpcheck::format_full(ps.q95) << "\n";
    std::cout << "# posterior: mean=" << dpcheck::format_full(qs.mean)
              << " median=" << dpcheck::format_full(qs.median)
              << " q05=" << dpcheck::format_full(qs.q05)
              << " q95=" << dpcheck::format_full(qs.q95) << "\n";
    std::cout << "prior\tposterior\n";
    const std::size_t rows = std::max(prior.draws.size(), posterior.draws.size());
    for (std::size_t i = 0; i < rows; ++i) {
      if (i < prior.draws.size()) std::cout << dpcheck::format_full(prior.draws[i]);
      std::cout << '\t';
      if (i < posterior.draws.size()) std::cout << dpcheck::format_full(posterior.draws[i]);
      std::cout << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian nonparametric model checking via relative belief"};
  app.require_subcommand(1);

  CommonFlags check_flags;
  auto* check = app.add_subcommand("check", "Run the model check on a data file");
  add_sampling_flags(check, check_flags, true);

  std::vector<double> elicit_a;
  std::size_t elicit_N = 200;
  std::size_t elicit_m = 0;
  std::string elicit_format = "tsv";
  auto* elicit =
      app.add_subcommand("elicit", "Expected prior divergence for candidate a values");
  elicit->add_option("--a", elicit_a, "Concentration value (repeatable)")->required();
  elicit->add_option("--N", elicit_N, "Stick-breaking truncation");
  elicit->add_option("--m", elicit_m, "Spacing half-window (default: rule for N)");
  elicit->add_option("--format", elicit_format, "Output format: json or tsv");

  CommonFlags sim_flags;
  std::string truth_spec;
  std::size_t sim_n = 20;
  std::size_t sim_reps = 10;
  auto* simulate = app.add_subcommand("simulate", "Replicated checks on generated data");
  add_sampling_flags(simulate, sim_flags, false);
  simulate->add_option("--truth", truth_spec, "True data distribution, e.g. cauchy:0,1")
      ->required();
  simulate->add_option("--n", sim_n, "Sample size per replication");
  simulate->add_option("--reps", sim_reps, "Replication count");

  CommonFlags dens_flags;
  auto* densities =
      app.add_subcommand("densities", "Dump raw prior and posterior divergence draws");
  add_sampling_flags(densities, dens_flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(check_flags);
    if (elicit->parsed()) return cmd_elicit(elicit_a, elicit_N, elicit_m, elicit_format);
    if (simulate->parsed()) return cmd_simulate(sim_flags, truth_spec, sim_n, sim_reps);
    if (densities->parsed()) return cmd_densities(dens_flags);
  } catch (const dpcheck::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const dpcheck::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const std::string what = e.what();
    const bool data_problem = what.rfind("cannot open data file", 0) == 0 ||
                              what.rfind("data file contains no values", 0) == 0;
    return data_problem ? kExitData : kExitUsage;
  } catch (const dpcheck::fit_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const dpcheck::estimator_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
