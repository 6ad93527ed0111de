// SPDX-License-Identifier: Apache-2.0
//
// Batch CLI: NMSE-vs-SNR sweeps over the bundled benchmark scenarios or a
// custom config file, effective-rank queries, and a quick selftest.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>

#include "rsls/errors.hpp"
#include "rsls/experiments.hpp"

namespace {

int run_command(const std::string& scenario, const std::string& config_path,
                const std::string& out_path, int trials, std::uint64_t seed,
                const std::string& estimators, int threads, const std::string& cache_dir,
                bool no_cache, bool have_trials, bool have_seed) {
  rsls::ExperimentConfig config;
  if (scenario == "paper-fig1") {
    config = rsls::paper_fig1_config();
  } else if (scenario == "paper-fig2") {
    config = rsls::paper_fig2_config();
  } else if (scenario == "custom") {
    if (config_path.empty()) {
      std::cerr << "error: --scenario custom requires --config\n";
      return 2;
    }
    config = rsls::parse_config_file(config_path);
  } else {
    std::cerr << "error: unknown scenario '" << scenario << "'\n";
    return 2;
  }
  if (have_trials) {
    config.trials = trials;
  }
  if (have_seed) {
    config.seed = seed;
  }
  if (!estimators.empty()) {
    config.estimators.clear();
    std::stringstream stream(estimators);
    std::string item;
    while (std::getline(stream, item, ',')) {
      config.estimators.push_back(rsls::method_from_name(item));
    }
  }
  config.threads = threads;
  config.cache_dir = no_cache ? std::string() : cache_dir;

  const std::vector<rsls::ResultRow> rows = rsls::run_nmse_sweep(config);
  if (out_path.empty() || out_path == "-") {
    rsls::write_results_csv(std::cout, rows);
  } else {
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) {
      std::cerr << "error: cannot open " << out_path << "\n";
      return 2;
    }
    rsls::write_results_csv(out, rows);
  }
  for (const rsls::ResultRow& row : rows) {
    if (!row.feasible) {
      std::cerr << "note: " << rsls::method_name(row.method)
                << " infeasible for this configuration; rows marked with nan\n";
      break;
    }
  }
  return 0;
}

int rank_command(bool tx_side, const std::string& config_path, int num_h, int num_v,
                 double spacing_h, double spacing_v, double capture) {
  rsls::UpaGeometry geom(num_h, num_v, spacing_h, spacing_v);
  if (!config_path.empty()) {
    const rsls::ExperimentConfig config = rsls::parse_config_file(config_path);
    geom = tx_side ? config.geometry_tx : config.geometry_rx;
  }
  const rsls::CorrelationMatrix corr = rsls::isotropic_correlation(geom);
  std::cout << rsls::effective_rank(corr.eigenvalues(), capture) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduced-subspace least-squares channel estimation for planar arrays"};
  app.require_subcommand(1);

  // run
  std::string scenario = "paper-fig1";
  std::string config_path;
  std::string out_path = "-";
  int trials = 25;
  std::uint64_t seed = 1;
  std::string estimators;
  int threads = 0;
  std::string cache_dir = ".rsls-cache";
  bool no_cache = false;

  CLI::App* run = app.add_subcommand("run", "Run an NMSE-vs-SNR sweep and emit CSV");
  run->add_option("--scenario", scenario, "paper-fig1 | paper-fig2 | custom")
      ->check(CLI::IsMember({"paper-fig1", "paper-fig2", "custom"}));
  run->add_option("--config", config_path, "Config file for --scenario custom");
  run->add_option("--out", out_path, "Output CSV path ('-' for stdout)");
  CLI::Option* trials_opt = run->add_option("--trials", trials, "Monte-Carlo trials per point");
  CLI::Option* seed_opt = run->add_option("--seed", seed, "Root RNG seed");
  run->add_option("--estimators", estimators,
                  "Comma list of ls,ew-mmse,mmse,rs-ls,cluster-rs-ls");
  run->add_option("--threads", threads, "Worker threads (0 = auto)");
  run->add_option("--cache-dir", cache_dir, "Directory for cached correlation matrices");
  run->add_flag("--no-cache", no_cache, "Disable the on-disk cache");

  // rank
  bool rank_tx = false;
  bool rank_rx = false;
  int num_h = 8;
  int num_v = 8;
  double spacing_h = 0.25;
  double spacing_v = 0.25;
  double capture = 1.0 - 1e-5;
  std::string rank_config;

  CLI::App* rank = app.add_subcommand("rank", "Print the isotropic effective rank of a side");
  CLI::Option* tx_flag = rank->add_flag("--tx", rank_tx, "Transmit side");
  rank->add_flag("--rx", rank_rx, "Receive side")->excludes(tx_flag);
  rank->add_option("--num-h", num_h, "Antennas per row");
  rank->add_option("--num-v", num_v, "Antennas per column");
  rank->add_option("--spacing-h", spacing_h, "Horizontal spacing (wavelengths)");
  rank->add_option("--spacing-v", spacing_v, "Vertical spacing (wavelengths)");
  rank->add_option("--capture", capture, "Eigenvalue sum fraction to capture");
  rank->add_option("--config", rank_config, "Read the geometry from a config file");

  CLI::App* selftest_cmd = app.add_subcommand("selftest", "Run the built-in oracle checks");
  (void)selftest_cmd;

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return run_command(scenario, config_path, out_path, trials, seed, estimators, threads,
                         cache_dir, no_cache, trials_opt->count() > 0, seed_opt->count() > 0);
    }
    if (rank->parsed()) {
      if (!rank_tx && !rank_rx) {
        std::cerr << "error: rank requires --tx or --rx\n";
        return 2;
      }
      return rank_command(rank_tx, rank_config, num_h, num_v, spacing_h, spacing_v, capture);
    }
    return rsls::selftest(std::cout) == 0 ? 0 : 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
