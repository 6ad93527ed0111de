// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rsls/channel.hpp"
#include "rsls/correlation.hpp"
#include "rsls/estimators.hpp"
#include "rsls/geometry.hpp"
#include "rsls/subspace.hpp"

namespace rsls {

// Batch sweep description; maps one-to-one onto the key-value config file
// (see parse_config_file).
struct ExperimentConfig {
  UpaGeometry geometry_tx{8, 8, 0.25, 0.25};
  UpaGeometry geometry_rx{8, 8, 0.25, 0.25};
  std::vector<double> snr_grid_db;
  int tau_p = 64;
  int trials = 25;
  std::uint64_t seed = 1;
  double capture = 1.0 - 1e-5;
  // Receive cluster eigenspaces are taken at this (near-full) capture; see
  // build_scenario.
  double cluster_rx_capture = 1.0 - 1e-7;
  std::vector<Method> estimators{Method::EW_MMSE, Method::RS_LS, Method::CLUSTER_RS_LS};
  std::vector<AngularRegion> cluster_regions_tx;
  std::vector<AngularRegion> cluster_regions_rx;
  int threads = 0;             // 0 = hardware concurrency
  std::string cache_dir;       // empty = no on-disk caching
};

struct ResultRow {
  Method method;
  double snr_db = 0.0;
  double nmse_db = 0.0;
  double stderr_db = 0.0;
  int trials = 0;
  std::optional<double> analytic_nmse_db;
  bool feasible = true;
};

// Cluster structure plus the reduced subspaces used by plain RS-LS:
// transmit_subspace is the concatenation of the cluster transmit bases and
// receive_subspace the dominant isotropic receive eigenspace.
struct PaperScenario {
  ClusterSet clusters;
  Subspace receive_subspace;
  Subspace transmit_subspace;
};

// Benchmark configurations: 8x8 quarter-wavelength UPAs on both ends, four
// transmit and four receive angular regions, tau_p = 64 (fig1) or 43 (fig2).
ExperimentConfig paper_fig1_config();
ExperimentConfig paper_fig2_config();

// Builds the cluster scenario for a config: transmit region eigenspaces are
// confined to the transmit isotropic effective subspace and chain
// orthogonalized; receive region eigenspaces are confined to the receive
// isotropic effective subspace without mutual orthogonalization.
PaperScenario build_scenario(const ExperimentConfig& config);

// The tau_p = 64 benchmark scenario at the given capture.
PaperScenario build_paper_scenario(double capture = 1.0 - 1e-5,
                                   double cluster_rx_capture = 1.0 - 1e-7);

// Monte-Carlo NMSE sweep. Per SNR point and method, `trials` channel
// realizations are estimated and averaged; methods whose preconditions are
// violated by the config yield rows marked infeasible. Identical configs
// and seeds give bitwise-identical results for any thread count.
std::vector<ResultRow> run_nmse_sweep(const ExperimentConfig& config);

// Flat key-value config file (UTF-8, `key = value`, comma-separated lists,
// region angles in degrees). Unspecified keys keep paper_fig1_config()
// values.
ExperimentConfig parse_config_file(const std::string& path);

// Header: method,snr_db,nmse_db,stderr_db,analytic_nmse_db,trials
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);

// Quick oracle suite (closed forms, exact recoveries, known ranks); prints
// one line per check and returns the number of failures.
int selftest(std::ostream& out);

}  // namespace rsls
