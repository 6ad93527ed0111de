// SPDX-License-Identifier: Apache-2.0

#include "rsls/pilot.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rsls/channel.hpp"
#include "rsls/errors.hpp"

namespace rsls {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

PilotMatrix::PilotMatrix(Eigen::MatrixXcd pilot_entries,
                         std::optional<std::vector<Eigen::MatrixXcd>> parts)
    : entries(std::move(pilot_entries)),
      tau_p(static_cast<int>(entries.rows())),
      gram_parts(std::move(parts)) {
  if (entries.rows() < 1 || entries.cols() < 1) {
    throw std::invalid_argument("PilotMatrix: entries must be non-empty");
  }
  const double budget = entries.squaredNorm();
  if (std::abs(budget - tau_p) > 1e-8 * std::max<double>(tau_p, 1)) {
    throw std::invalid_argument("PilotMatrix: squared Frobenius norm " +
                                std::to_string(budget) + " != tau_p = " +
                                std::to_string(tau_p));
  }
  if (gram_parts) {
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(entries.cols(), entries.cols());
    for (const Eigen::MatrixXcd& part : *gram_parts) {
      if (part.rows() != entries.cols() || part.cols() != entries.cols()) {
        throw std::invalid_argument("PilotMatrix: gram part has wrong dimensions");
      }
      sum += part;
    }
    const Eigen::MatrixXcd g = gram();
    if ((sum - g).norm() > 1e-8 * std::max(g.norm(), 1.0)) {
      throw std::invalid_argument("PilotMatrix: gram parts do not sum to Phi^H Phi");
    }
  }
}

Eigen::MatrixXcd dft_matrix(int n) {
  if (n < 1) {
    throw std::invalid_argument("dft_matrix: n must be >= 1");
  }
  Eigen::MatrixXcd f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const double phase = -2.0 * kPi * static_cast<double>(j) * k / n;
      f(j, k) = scale * std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }
  return f;
}

PilotMatrix dft_pilot(int num_tx, int tau_p) {
  if (tau_p < 1 || tau_p > num_tx) {
    throw std::invalid_argument("dft_pilot: requires 1 <= tau_p <= num_tx");
  }
  // Rows of the unitary DFT have unit norm, so tau_p rows meet the power
  // budget without rescaling.
  return PilotMatrix(dft_matrix(num_tx).topRows(tau_p));
}

PilotMatrix optimal_pilot(const Subspace& transmit_sub, int tau_p) {
  const int r_t = transmit_sub.rank();
  const int k = transmit_sub.ambient_dim();
  if (tau_p > k) {
    throw std::invalid_argument("optimal_pilot: tau_p exceeds the number of transmit antennas");
  }
  if (tau_p < r_t) {
    throw InfeasiblePilotError("optimal_pilot: tau_p = " + std::to_string(tau_p) +
                               " < subspace rank " + std::to_string(r_t));
  }
  const Eigen::MatrixXcd s = dft_matrix(tau_p).leftCols(r_t);
  const double scale = std::sqrt(static_cast<double>(tau_p) / r_t);
  return PilotMatrix(scale * s * transmit_sub.basis().adjoint());
}

std::vector<double> cluster_pilot_weights(const ClusterSet& clusters, int tau_p) {
  int total_tx_rank = 0;
  double denom = 0.0;
  for (const Cluster& cluster : clusters.clusters()) {
    total_tx_rank += cluster.transmit.rank();
    denom += cluster.transmit.rank() * std::sqrt(static_cast<double>(cluster.receive.rank()));
  }
  if (tau_p < total_tx_rank) {
    throw InfeasiblePilotError("cluster_pilot_weights: tau_p = " + std::to_string(tau_p) +
                               " < total transmit rank " + std::to_string(total_tx_rank));
  }
  std::vector<double> weights;
  weights.reserve(clusters.clusters().size());
  for (const Cluster& cluster : clusters.clusters()) {
    weights.push_back(tau_p * std::sqrt(static_cast<double>(cluster.receive.rank())) / denom);
  }
  return weights;
}

PilotMatrix cluster_pilot_matrix(const ClusterSet& clusters, const std::vector<double>& weights,
                                 int tau_p) {
  if (weights.size() != clusters.clusters().size()) {
    throw std::invalid_argument("cluster_pilot_matrix: one weight per cluster required");
  }
  int total_tx_rank = 0;
  for (const Cluster& cluster : clusters.clusters()) {
    total_tx_rank += cluster.transmit.rank();
  }
  if (tau_p < total_tx_rank) {
    throw InfeasiblePilotError("cluster_pilot_matrix: tau_p = " + std::to_string(tau_p) +
                               " cannot realize Gram rank " + std::to_string(total_tx_rank));
  }
  if (tau_p > clusters.num_tx()) {
    throw std::invalid_argument("cluster_pilot_matrix: tau_p exceeds transmit antennas");
  }
  for (double w : weights) {
    if (!(w > 0.0)) {
      throw std::invalid_argument("cluster_pilot_matrix: weights must be positive");
    }
  }
  // ||Phi||_F^2 = sum_l s_l r_tl and the pilot power budget fixes it to
  // tau_p, so only budget-feasible weight vectors are representable.
  double budget = 0.0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    budget += weights[l] * clusters.clusters()[l].transmit.rank();
  }
  if (std::abs(budget - tau_p) > 1e-8 * tau_p) {
    std::ostringstream msg;
    msg << "cluster_pilot_matrix: weights spend " << budget << " != tau_p = " << tau_p;
    throw std::invalid_argument(msg.str());
  }

  const Eigen::MatrixXcd f = dft_matrix(tau_p);
  Eigen::MatrixXcd pilot = Eigen::MatrixXcd::Zero(tau_p, clusters.num_tx());
  std::vector<Eigen::MatrixXcd> parts;
  parts.reserve(weights.size());
  int offset = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const Subspace& u_t = clusters.clusters()[l].transmit;
    const Eigen::MatrixXcd block = f.middleCols(offset, u_t.rank());
    offset += u_t.rank();
    pilot += std::sqrt(weights[l]) * block * u_t.basis().adjoint();
    parts.push_back(weights[l] * u_t.projector());
  }
  return PilotMatrix(std::move(pilot), std::move(parts));
}

std::vector<Eigen::MatrixXcd> gram_decompose(const PilotMatrix& pilot,
                                             const ClusterSet& clusters) {
  if (pilot.num_tx() != clusters.num_tx()) {
    throw std::invalid_argument("gram_decompose: pilot/cluster dimension mismatch");
  }
  const Eigen::MatrixXcd gram = pilot.gram();
  std::vector<Eigen::MatrixXcd> parts;
  parts.reserve(clusters.clusters().size());
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(gram.rows(), gram.cols());
  for (const Cluster& cluster : clusters.clusters()) {
    const Eigen::MatrixXcd p = cluster.transmit.projector();
    parts.push_back(p * gram * p);
    sum += parts.back();
  }
  const double residual = (gram - sum).norm();
  if (residual > 1e-6 * std::max(gram.norm(), 1e-300)) {
    std::ostringstream msg;
    msg << "gram_decompose: Gram is not supported on the cluster subspaces "
           "(relative residual "
        << residual / gram.norm() << ")";
    throw DecompositionError(msg.str());
  }
  return parts;
}

}  // namespace rsls
