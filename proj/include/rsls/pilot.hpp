// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "rsls/subspace.hpp"

namespace rsls {

class ClusterSet;

// tau_p x K pilot block with squared Frobenius norm tau_p, optionally
// carrying its per-cluster Gram decomposition (sum of gram_parts equals
// entries^H entries, each part PSD and supported on one transmit subspace).
struct PilotMatrix {
  Eigen::MatrixXcd entries;
  int tau_p = 0;
  std::optional<std::vector<Eigen::MatrixXcd>> gram_parts;

  PilotMatrix(Eigen::MatrixXcd pilot_entries,
              std::optional<std::vector<Eigen::MatrixXcd>> parts = std::nullopt);

  int num_tx() const { return static_cast<int>(entries.cols()); }
  Eigen::MatrixXcd gram() const { return entries.adjoint() * entries; }
};

// Unitary n-point DFT matrix, F(j,k) = exp(-2 pi i j k / n) / sqrt(n).
Eigen::MatrixXcd dft_matrix(int n);

// Conventional pilot: the first tau_p rows of the unitary num_tx-point DFT.
// Full column rank iff tau_p = num_tx; squared Frobenius norm tau_p.
PilotMatrix dft_pilot(int num_tx, int tau_p);

// MSE-optimal pilot for reduced-subspace LS with transmit subspace U_t:
// sqrt(tau_p / r_t) S U_t^H with S the first r_t columns of the tau_p-point
// DFT. Requires r_t <= tau_p <= ambient dimension.
PilotMatrix optimal_pilot(const Subspace& transmit_sub, int tau_p);

// KKT-optimal per-cluster Gram weights s_l = tau_p sqrt(r_rl) /
// sum_i r_ti sqrt(r_ri); satisfies sum_l r_tl s_l = tau_p.
std::vector<double> cluster_pilot_weights(const ClusterSet& clusters, int tau_p);

// Pilot realizing the Gram sum_l s_l U_tl U_tl^H through disjoint DFT
// column blocks; stores gram_parts {s_l U_tl U_tl^H}.
PilotMatrix cluster_pilot_matrix(const ClusterSet& clusters,
                                 const std::vector<double>& weights, int tau_p);

// Projects the pilot Gram onto each cluster's transmit subspace; valid only
// when the Gram has no energy outside the clusters and no cross-cluster
// coupling (checked, DecompositionError otherwise).
std::vector<Eigen::MatrixXcd> gram_decompose(const PilotMatrix& pilot,
                                             const ClusterSet& clusters);

}  // namespace rsls
