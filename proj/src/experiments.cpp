// SPDX-License-Identifier: Apache-2.0

#include "rsls/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rsls/errors.hpp"
#include "rsls/io.hpp"
#include "rsls/pilot.hpp"

namespace rsls {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Drop thresholds for the scenario construction. Region eigenspaces at tight
// captures carry spectral-leakage tails; confining them to the isotropic
// effective subspace keeps the concatenated transmit rank at the isotropic
// effective rank, and the 1e-2 chain tolerance stops leakage tails of early
// clusters from claiming dimensions that later clusters need.
constexpr double kContainmentDropTol = 1e-3;
constexpr double kChainDropTol = 1e-2;

// Substream purpose tags.
constexpr std::uint64_t kChannelStream = 0x6368616e;
constexpr std::uint64_t kNoiseStream = 0x6e6f6973;

std::string format_double(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

std::vector<AngularRegion> paper_tx_regions() {
  const double p2 = kPi / 2.0;
  const double p6 = kPi / 6.0;
  return {
      {-p2, -p6, -p2, 0.0},
      {-p6, p6, -p2, 0.0},
      {p6, p2, -p2, 0.0},
      {-p2, p2, 0.0, p2},
  };
}

std::vector<AngularRegion> paper_rx_regions() {
  const double p2 = kPi / 2.0;
  const double p3 = kPi / 3.0;
  return {
      {-p2, -p3, -p2, -p3},
      {-p3, 0.0, -p3, 0.0},
      {0.0, p3, 0.0, p3},
      {p3, p2, p3, p2},
  };
}

// Best-effort on-disk cache of quadrature results, keyed by geometry and
// region bounds.
class CorrelationCache {
 public:
  explicit CorrelationCache(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(dir_, ec);
      if (ec) {
        dir_.clear();
      }
    }
  }

  CorrelationMatrix isotropic(const UpaGeometry& geom) {
    return fetch("iso_" + geometry_slug(geom),
                 [&] { return isotropic_correlation(geom); });
  }

  CorrelationMatrix region(const UpaGeometry& geom, const AngularRegion& reg) {
    std::ostringstream key;
    key << "reg_" << geometry_slug(geom) << '_' << format_double(reg.azimuth_min) << '_'
        << format_double(reg.azimuth_max) << '_' << format_double(reg.elevation_min) << '_'
        << format_double(reg.elevation_max);
    return fetch(key.str(), [&] { return region_correlation(geom, reg); });
  }

 private:
  static std::string geometry_slug(const UpaGeometry& geom) {
    std::ostringstream s;
    s << geom.num_h << 'x' << geom.num_v << '_' << format_double(geom.spacing_h) << '_'
      << format_double(geom.spacing_v);
    return s.str();
  }

  template <typename Builder>
  CorrelationMatrix fetch(const std::string& key, Builder&& build) {
    if (dir_.empty()) {
      return build();
    }
    const std::string path = (std::filesystem::path(dir_) / (key + ".rsmat")).string();
    if (std::filesystem::exists(path)) {
      try {
        return load_correlation(path);
      } catch (const Error&) {
        // fall through and rebuild
      }
    }
    CorrelationMatrix built = build();
    try {
      save_correlation(path, built);
    } catch (const Error&) {
      // cache is best effort
    }
    return built;
  }

  std::string dir_;
};

struct MethodPlan {
  Method method;
  bool feasible = false;
  std::string reason;
  std::optional<PilotMatrix> pilot;
};

}  // namespace

ExperimentConfig paper_fig1_config() {
  ExperimentConfig config;
  for (int db = -10; db <= 20; db += 2) {
    config.snr_grid_db.push_back(db);
  }
  config.cluster_regions_tx = paper_tx_regions();
  config.cluster_regions_rx = paper_rx_regions();
  return config;
}

ExperimentConfig paper_fig2_config() {
  ExperimentConfig config = paper_fig1_config();
  config.tau_p = 43;
  return config;
}

PaperScenario build_scenario(const ExperimentConfig& config) {
  if (config.cluster_regions_tx.empty() ||
      config.cluster_regions_tx.size() != config.cluster_regions_rx.size()) {
    throw std::invalid_argument(
        "build_scenario: transmit and receive region lists must be non-empty and of equal "
        "length");
  }
  if (!(config.capture > 0.0 && config.capture < 1.0) ||
      !(config.cluster_rx_capture > 0.0 && config.cluster_rx_capture < 1.0)) {
    throw std::invalid_argument("build_scenario: captures must lie in (0, 1)");
  }
  CorrelationCache cache(config.cache_dir);

  const CorrelationMatrix iso_tx = cache.isotropic(config.geometry_tx);
  const CorrelationMatrix iso_rx = cache.isotropic(config.geometry_rx);
  const Subspace plausible_tx = dominant_subspace(iso_tx, config.capture);
  const Subspace receive_subspace = dominant_subspace(iso_rx, config.capture);

  std::vector<Subspace> tx_confined;
  tx_confined.reserve(config.cluster_regions_tx.size());
  for (const AngularRegion& region : config.cluster_regions_tx) {
    const CorrelationMatrix corr = cache.region(config.geometry_tx, region);
    tx_confined.push_back(project_subspace(dominant_subspace(corr, config.capture),
                                           plausible_tx, kContainmentDropTol));
  }
  const std::vector<Subspace> tx_clusters = orthogonalize_chain(tx_confined, kChainDropTol);

  std::vector<Cluster> clusters;
  clusters.reserve(tx_clusters.size());
  int total_tx_rank = 0;
  for (std::size_t l = 0; l < tx_clusters.size(); ++l) {
    const CorrelationMatrix corr = cache.region(config.geometry_rx, config.cluster_regions_rx[l]);
    Subspace rx = project_subspace(dominant_subspace(corr, config.cluster_rx_capture),
                                   receive_subspace, kContainmentDropTol);
    total_tx_rank += tx_clusters[l].rank();
    clusters.push_back({tx_clusters[l], std::move(rx)});
  }

  Eigen::MatrixXcd concat(config.geometry_tx.size(), total_tx_rank);
  int offset = 0;
  for (const Cluster& cluster : clusters) {
    concat.middleCols(offset, cluster.transmit.rank()) = cluster.transmit.basis();
    offset += cluster.transmit.rank();
  }

  return {ClusterSet(std::move(clusters)), receive_subspace, Subspace(std::move(concat))};
}

PaperScenario build_paper_scenario(double capture, double cluster_rx_capture) {
  ExperimentConfig config = paper_fig1_config();
  config.capture = capture;
  config.cluster_rx_capture = cluster_rx_capture;
  return build_scenario(config);
}

std::vector<ResultRow> run_nmse_sweep(const ExperimentConfig& config) {
  if (config.snr_grid_db.empty()) {
    throw std::invalid_argument("run_nmse_sweep: SNR grid is empty");
  }
  if (config.trials < 1) {
    throw std::invalid_argument("run_nmse_sweep: trials must be >= 1");
  }
  if (config.estimators.empty()) {
    throw std::invalid_argument("run_nmse_sweep: no estimators selected");
  }
  if (config.tau_p < 1 || config.tau_p > config.geometry_tx.size()) {
    throw std::invalid_argument("run_nmse_sweep: tau_p must lie in [1, K]");
  }

  const PaperScenario scenario = build_scenario(config);
  const ClusterSet& clusters = scenario.clusters;
  const int num_rx = clusters.num_rx();
  const int num_tx = clusters.num_tx();
  const Eigen::VectorXd diag_r = implied_correlation_diagonal(clusters);

  // Pilot assignment: RS-LS uses its MSE-optimal reduced-subspace pilot and
  // the cluster-aware estimator the weighted per-cluster design; LS, EW-MMSE
  // and the genie MMSE use the conventional DFT pilot.
  std::vector<MethodPlan> plans;
  for (Method method : config.estimators) {
    MethodPlan plan;
    plan.method = method;
    try {
      switch (method) {
        case Method::RS_LS:
          plan.pilot = optimal_pilot(scenario.transmit_subspace, config.tau_p);
          break;
        case Method::CLUSTER_RS_LS:
          plan.pilot = cluster_pilot_matrix(
              clusters, cluster_pilot_weights(clusters, config.tau_p), config.tau_p);
          break;
        case Method::LS:
          if (config.tau_p < num_tx) {
            throw InfeasiblePilotError("ls requires tau_p >= K");
          }
          plan.pilot = dft_pilot(num_tx, config.tau_p);
          break;
        case Method::EW_MMSE:
        case Method::MMSE:
          plan.pilot = dft_pilot(num_tx, config.tau_p);
          break;
      }
      plan.feasible = true;
    } catch (const Error& err) {
      plan.reason = err.what();
    } catch (const std::invalid_argument& err) {
      plan.reason = err.what();
    }
    plans.push_back(std::move(plan));
  }

  const int num_methods = static_cast<int>(plans.size());
  const int num_snr = static_cast<int>(config.snr_grid_db.size());
  const int trials = config.trials;

  // nmse_samples[(mi * num_snr + si) * trials + t]; workers write disjoint
  // trial slots and the reduction below runs in fixed trial order, so the
  // output is independent of the worker count.
  std::vector<double> nmse_samples(static_cast<std::size_t>(num_methods) * num_snr * trials, 0.0);
  std::vector<double> analytic_mse(static_cast<std::size_t>(num_methods) * num_snr, -1.0);

  for (int mi = 0; mi < num_methods; ++mi) {
    if (!plans[mi].feasible) {
      continue;
    }
    for (int si = 0; si < num_snr; ++si) {
      const double rho = std::pow(10.0, config.snr_grid_db[si] / 10.0);
      try {
        switch (plans[mi].method) {
          case Method::RS_LS:
            analytic_mse[mi * num_snr + si] = rsls_analytic_mse(
                *plans[mi].pilot, rho, scenario.receive_subspace, scenario.transmit_subspace);
            break;
          case Method::CLUSTER_RS_LS:
            analytic_mse[mi * num_snr + si] =
                cluster_rsls_analytic_mse(*plans[mi].pilot->gram_parts, rho, clusters);
            break;
          case Method::LS: {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(plans[mi].pilot->entries);
            analytic_mse[mi * num_snr + si] =
                num_rx / rho * svd.singularValues().cwiseAbs2().cwiseInverse().sum();
            break;
          }
          default:
            break;
        }
      } catch (const Error& err) {
        plans[mi].feasible = false;
        plans[mi].reason = err.what();
      }
    }
  }

  auto run_trial = [&](int t) {
    Rng channel_rng = Rng::substream(config.seed, {kChannelStream, static_cast<std::uint64_t>(t)});
    const ChannelRealization channel = sample_clustered_channel(clusters, channel_rng);
    for (int si = 0; si < num_snr; ++si) {
      const double rho = std::pow(10.0, config.snr_grid_db[si] / 10.0);
      for (int mi = 0; mi < num_methods; ++mi) {
        const MethodPlan& plan = plans[mi];
        if (!plan.feasible) {
          continue;
        }
        Rng noise_rng = Rng::substream(
            config.seed, {kNoiseStream, static_cast<std::uint64_t>(t),
                          static_cast<std::uint64_t>(si), static_cast<std::uint64_t>(mi)});
        const ReceivedPilot received = transmit_pilots(channel, *plan.pilot, rho, noise_rng);
        EstimateReport report;
        switch (plan.method) {
          case Method::LS:
            report = ls_estimate(received, *plan.pilot);
            break;
          case Method::EW_MMSE:
            report = ew_mmse_estimate(received, *plan.pilot, diag_r);
            break;
          case Method::MMSE:
            report = mmse_cluster_estimate(received, *plan.pilot, clusters);
            break;
          case Method::RS_LS:
            report = rsls_estimate(received, *plan.pilot, scenario.receive_subspace,
                                   scenario.transmit_subspace);
            break;
          case Method::CLUSTER_RS_LS:
            report = cluster_rsls_estimate(received, *plan.pilot->gram_parts, clusters);
            break;
        }
        nmse_samples[(static_cast<std::size_t>(mi) * num_snr + si) * trials + t] =
            nmse(report.x_hat, channel.x);
      }
    }
  };

  int workers = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, trials);
  if (workers == 1) {
    for (int t = 0; t < trials; ++t) {
      run_trial(t);
    }
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int t = w; t < trials; t += workers) {
            run_trial(t);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) {
            first_error = std::current_exception();
          }
        }
      });
    }
    for (std::thread& th : pool) {
      th.join();
    }
    if (first_error) {
      std::rethrow_exception(first_error);
    }
  }

  const double channel_energy = static_cast<double>(num_rx) * num_tx *
                                clusters.power_scale() * clusters.power_scale();
  std::vector<ResultRow> rows;
  rows.reserve(static_cast<std::size_t>(num_methods) * num_snr);
  for (int mi = 0; mi < num_methods; ++mi) {
    for (int si = 0; si < num_snr; ++si) {
      ResultRow row;
      row.method = plans[mi].method;
      row.snr_db = config.snr_grid_db[si];
      if (!plans[mi].feasible) {
        row.feasible = false;
        row.nmse_db = std::numeric_limits<double>::quiet_NaN();
        row.stderr_db = std::numeric_limits<double>::quiet_NaN();
        row.trials = 0;
        rows.push_back(row);
        continue;
      }
      const double* samples = &nmse_samples[(static_cast<std::size_t>(mi) * num_snr + si) * trials];
      double mean = 0.0;
      for (int t = 0; t < trials; ++t) {
        mean += samples[t];
      }
      mean /= trials;
      double var = 0.0;
      for (int t = 0; t < trials; ++t) {
        var += (samples[t] - mean) * (samples[t] - mean);
      }
      const double stderr_lin = trials > 1 ? std::sqrt(var / (trials - 1.0) / trials) : 0.0;
      row.nmse_db = 10.0 * std::log10(mean);
      // Delta method: d(10 log10 m)/dm = 10 / (m ln 10).
      row.stderr_db = 10.0 / std::log(10.0) * stderr_lin / mean;
      row.trials = trials;
      const double mse = analytic_mse[mi * num_snr + si];
      if (mse > 0.0) {
        row.analytic_nmse_db = 10.0 * std::log10(mse / channel_energy);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "method,snr_db,nmse_db,stderr_db,analytic_nmse_db,trials\n";
  for (const ResultRow& row : rows) {
    out << method_name(row.method) << ',' << format_double(row.snr_db) << ','
        << format_double(row.nmse_db) << ',' << format_double(row.stderr_db) << ',';
    if (row.analytic_nmse_db) {
      out << format_double(*row.analytic_nmse_db);
    }
    out << ',' << row.trials << '\n';
  }
}

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    items.push_back(trim(item));
  }
  return items;
}

double parse_number(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument("trailing characters");
    }
    return parsed;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: cannot parse number '" + value + "' for key " + key);
  }
}

AngularRegion parse_region_degrees(const std::string& value, const std::string& key) {
  const std::vector<std::string> parts = split_list(value);
  if (parts.size() != 4) {
    throw std::invalid_argument("config: region " + key +
                                " needs az_min,az_max,el_min,el_max (degrees)");
  }
  const double deg = kPi / 180.0;
  return {parse_number(parts[0], key) * deg, parse_number(parts[1], key) * deg,
          parse_number(parts[2], key) * deg, parse_number(parts[3], key) * deg};
}

}  // namespace

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("config: cannot open " + path);
  }
  ExperimentConfig config = paper_fig1_config();
  std::map<int, AngularRegion> tx_regions;
  std::map<int, AngularRegion> rx_regions;
  double tx_geom[4] = {8, 8, 0.25, 0.25};
  double rx_geom[4] = {8, 8, 0.25, 0.25};

  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') {
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(line_number) +
                                  " is not 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));

    if (key == "tx_num_h") tx_geom[0] = parse_number(value, key);
    else if (key == "tx_num_v") tx_geom[1] = parse_number(value, key);
    else if (key == "tx_spacing_h") tx_geom[2] = parse_number(value, key);
    else if (key == "tx_spacing_v") tx_geom[3] = parse_number(value, key);
    else if (key == "rx_num_h") rx_geom[0] = parse_number(value, key);
    else if (key == "rx_num_v") rx_geom[1] = parse_number(value, key);
    else if (key == "rx_spacing_h") rx_geom[2] = parse_number(value, key);
    else if (key == "rx_spacing_v") rx_geom[3] = parse_number(value, key);
    else if (key == "snr_grid_db") {
      config.snr_grid_db.clear();
      for (const std::string& item : split_list(value)) {
        config.snr_grid_db.push_back(parse_number(item, key));
      }
    } else if (key == "tau_p") {
      config.tau_p = static_cast<int>(parse_number(value, key));
    } else if (key == "trials") {
      config.trials = static_cast<int>(parse_number(value, key));
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(parse_number(value, key));
    } else if (key == "capture") {
      config.capture = parse_number(value, key);
    } else if (key == "cluster_rx_capture") {
      config.cluster_rx_capture = parse_number(value, key);
    } else if (key == "threads") {
      config.threads = static_cast<int>(parse_number(value, key));
    } else if (key == "cache_dir") {
      config.cache_dir = value;
    } else if (key == "estimators") {
      config.estimators.clear();
      for (const std::string& item : split_list(value)) {
        config.estimators.push_back(method_from_name(item));
      }
    } else if (key.rfind("tx_region_", 0) == 0) {
      tx_regions.emplace(std::stoi(key.substr(10)), parse_region_degrees(value, key));
    } else if (key.rfind("rx_region_", 0) == 0) {
      rx_regions.emplace(std::stoi(key.substr(10)), parse_region_degrees(value, key));
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "' on line " +
                                  std::to_string(line_number));
    }
  }

  config.geometry_tx = UpaGeometry(static_cast<int>(tx_geom[0]), static_cast<int>(tx_geom[1]),
                                   tx_geom[2], tx_geom[3]);
  config.geometry_rx = UpaGeometry(static_cast<int>(rx_geom[0]), static_cast<int>(rx_geom[1]),
                                   rx_geom[2], rx_geom[3]);
  if (!tx_regions.empty()) {
    config.cluster_regions_tx.clear();
    for (const auto& [index, region] : tx_regions) {
      config.cluster_regions_tx.push_back(region);
    }
  }
  if (!rx_regions.empty()) {
    config.cluster_regions_rx.clear();
    for (const auto& [index, region] : rx_regions) {
      config.cluster_regions_rx.push_back(region);
    }
  }
  if (config.cluster_regions_tx.size() != config.cluster_regions_rx.size()) {
    throw std::invalid_argument("config: tx and rx region counts differ");
  }
  return config;
}

}  // namespace rsls
