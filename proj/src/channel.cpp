// SPDX-License-Identifier: Apache-2.0

#include "rsls/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rsls/errors.hpp"

namespace rsls {

ClusterSet::ClusterSet(std::vector<Cluster> clusters, double power_scale)
    : clusters_(std::move(clusters)), power_scale_(power_scale), total_dim_(0) {
  if (clusters_.empty()) {
    throw std::invalid_argument("ClusterSet: at least one cluster required");
  }
  if (!(power_scale_ > 0.0)) {
    throw std::invalid_argument("ClusterSet: power_scale must be positive");
  }
  const int k = clusters_.front().transmit.ambient_dim();
  const int m = clusters_.front().receive.ambient_dim();
  int total_tx_rank = 0;
  for (const Cluster& cluster : clusters_) {
    if (cluster.transmit.ambient_dim() != k || cluster.receive.ambient_dim() != m) {
      throw std::invalid_argument("ClusterSet: inconsistent ambient dimensions");
    }
    total_tx_rank += cluster.transmit.rank();
    total_dim_ += cluster.transmit.rank() * cluster.receive.rank();
  }
  if (total_tx_rank > k) {
    throw std::invalid_argument("ClusterSet: transmit ranks sum to " +
                                std::to_string(total_tx_rank) + " > K = " + std::to_string(k));
  }
  for (std::size_t i = 0; i < clusters_.size(); ++i) {
    for (std::size_t l = i + 1; l < clusters_.size(); ++l) {
      const double overlap =
          (clusters_[i].transmit.basis().adjoint() * clusters_[l].transmit.basis()).norm();
      if (overlap > 1e-8) {
        throw std::invalid_argument("ClusterSet: transmit subspaces " + std::to_string(i) +
                                    " and " + std::to_string(l) +
                                    " are not orthogonal (overlap " + std::to_string(overlap) +
                                    ")");
      }
    }
  }
}

double ClusterSet::amplitude() const {
  return power_scale_ * std::sqrt(static_cast<double>(num_rx()) * num_tx() / total_dim_);
}

ChannelRealization sample_clustered_channel(const ClusterSet& clusters, Rng& rng) {
  const int m = clusters.num_rx();
  const int k = clusters.num_tx();
  // X = sum_l U_tl W_l U_rl^T is the K x M matrix with columns h'_m;
  // vec(X) realizes (U_rl kron U_tl) vec(W_l).
  Eigen::MatrixXcd x_mat = Eigen::MatrixXcd::Zero(k, m);
  for (const Cluster& cluster : clusters.clusters()) {
    Eigen::MatrixXcd w(cluster.transmit.rank(), cluster.receive.rank());
    for (Eigen::Index col = 0; col < w.cols(); ++col) {
      for (Eigen::Index row = 0; row < w.rows(); ++row) {
        w(row, col) = rng.complex_normal();
      }
    }
    x_mat += cluster.transmit.basis() * w * cluster.receive.basis().transpose();
  }
  x_mat *= clusters.amplitude();

  ChannelRealization out;
  out.num_rx = m;
  out.num_tx = k;
  out.x = Eigen::Map<const Eigen::VectorXcd>(x_mat.data(), m * k);
  return out;
}

CorrelationMatrix implied_correlation(const ClusterSet& clusters) {
  const int m = clusters.num_rx();
  const int k = clusters.num_tx();
  const double scale = clusters.amplitude() * clusters.amplitude();
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(m * k, m * k);
  for (const Cluster& cluster : clusters.clusters()) {
    const Eigen::MatrixXcd pr = cluster.receive.projector();
    const Eigen::MatrixXcd pt = cluster.transmit.projector();
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        r.block(i * k, j * k, k, k) += (scale * pr(i, j)) * pt;
      }
    }
  }
  return CorrelationMatrix(std::move(r));
}

Eigen::VectorXd implied_correlation_diagonal(const ClusterSet& clusters) {
  const int m = clusters.num_rx();
  const int k = clusters.num_tx();
  const double scale = clusters.amplitude() * clusters.amplitude();
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m * k);
  for (const Cluster& cluster : clusters.clusters()) {
    const Eigen::VectorXd dr = cluster.receive.basis().cwiseAbs2().rowwise().sum();
    const Eigen::VectorXd dt = cluster.transmit.basis().cwiseAbs2().rowwise().sum();
    for (int i = 0; i < m; ++i) {
      diag.segment(i * k, k) += (scale * dr(i)) * dt;
    }
  }
  return diag;
}

ReceivedPilot transmit_pilots(const ChannelRealization& channel, const PilotMatrix& pilot,
                              double snr, Rng& rng, double noise_scale) {
  if (pilot.num_tx() != channel.num_tx) {
    throw std::invalid_argument("transmit_pilots: pilot has " +
                                std::to_string(pilot.num_tx()) + " columns but channel has " +
                                std::to_string(channel.num_tx) + " transmit antennas");
  }
  if (!(snr > 0.0)) {
    throw std::invalid_argument("transmit_pilots: snr must be positive");
  }
  const int m = channel.num_rx;
  const int k = channel.num_tx;
  const int tau = pilot.tau_p;
  const double amp = std::sqrt(snr);

  ReceivedPilot out{Eigen::VectorXcd(m * tau), snr, pilot};
  const Eigen::Map<const Eigen::MatrixXcd> x_mat(channel.x.data(), k, m);
  for (int ant = 0; ant < m; ++ant) {
    Eigen::VectorXcd y = amp * (pilot.entries * x_mat.col(ant));
    if (noise_scale != 0.0) {
      for (int t = 0; t < tau; ++t) {
        y(t) += noise_scale * rng.complex_normal();
      }
    }
    out.y.segment(ant * tau, tau) = y;
  }
  return out;
}

}  // namespace rsls
