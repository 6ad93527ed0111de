// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rsls/pilot.hpp"
#include "rsls/rng.hpp"
#include "rsls/subspace.hpp"

namespace rsls {

// One propagation cluster: a transmit subspace (ambient K) paired with a
// receive subspace (ambient M).
struct Cluster {
  Subspace transmit;
  Subspace receive;
};

// Ordered clusters with mutually orthogonal transmit subspaces. Receive
// subspaces may overlap freely. The channel they generate is
//   x = c * sum_l (U_rl kron U_tl) w_l,   w_l ~ CN(0, I),
// with c chosen so that E||x||^2 = power_scale^2 * M * K.
class ClusterSet {
 public:
  explicit ClusterSet(std::vector<Cluster> clusters, double power_scale = 1.0);

  const std::vector<Cluster>& clusters() const { return clusters_; }
  int size() const { return static_cast<int>(clusters_.size()); }
  double power_scale() const { return power_scale_; }

  int num_tx() const { return clusters_.front().transmit.ambient_dim(); }
  int num_rx() const { return clusters_.front().receive.ambient_dim(); }
  int total_dim() const { return total_dim_; }  // sum_l r_rl * r_tl

  // Scale factor c * power_scale applied to the cluster sum.
  double amplitude() const;

 private:
  std::vector<Cluster> clusters_;
  double power_scale_;
  int total_dim_;
};

// Vectorized channel x = vec(H^T): rows of H stacked, x = (h'_1; ...; h'_M).
struct ChannelRealization {
  Eigen::VectorXcd x;
  int num_rx = 0;  // M
  int num_tx = 0;  // K
};

// Received pilot block y = sqrt(snr) (I_M kron Phi) x + n, stacked over
// receive antennas; length M * tau_p.
struct ReceivedPilot {
  Eigen::VectorXcd y;
  double snr = 1.0;  // linear
  PilotMatrix pilot;
};

// Draws one channel realization; w entries are drawn cluster by cluster,
// column-major, so equal seeds give bitwise-identical realizations.
ChannelRealization sample_clustered_channel(const ClusterSet& clusters, Rng& rng);

// Correlation matrix implied by the cluster model (dim MK, trace MK for
// power_scale 1). Dense; intended for small instances and genie baselines.
CorrelationMatrix implied_correlation(const ClusterSet& clusters);

// Diagonal of implied_correlation without forming the dense matrix.
Eigen::VectorXd implied_correlation_diagonal(const ClusterSet& clusters);

// Simulates pilot reception at the given linear SNR. noise_scale is a test
// hook; 0 suppresses the noise term entirely.
ReceivedPilot transmit_pilots(const ChannelRealization& channel, const PilotMatrix& pilot,
                              double snr, Rng& rng, double noise_scale = 1.0);

}  // namespace rsls
