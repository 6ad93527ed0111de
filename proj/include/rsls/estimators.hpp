// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsls/channel.hpp"
#include "rsls/correlation.hpp"
#include "rsls/pilot.hpp"
#include "rsls/subspace.hpp"

namespace rsls {

enum class Method { LS, EW_MMSE, MMSE, RS_LS, CLUSTER_RS_LS };

std::string method_name(Method method);
Method method_from_name(std::string_view name);

struct EstimateReport {
  Eigen::VectorXcd x_hat;
  Method method = Method::LS;
  std::optional<double> analytic_mse;
};

// Plain least squares (1/sqrt(rho)) (Phi^H Phi)^-1 Phi^H y per receive
// antenna. Requires tau_p >= K and a well-conditioned pilot.
EstimateReport ls_estimate(const ReceivedPilot& received, const PilotMatrix& pilot);

// Element-wise MMSE using only diag(R); the M tau_p x tau_p inner systems
// are solved per receive antenna block.
EstimateReport ew_mmse_estimate(const ReceivedPilot& received, const PilotMatrix& pilot,
                                const Eigen::VectorXd& diag_r);

// Genie MMSE with the full MK x MK correlation matrix. Dense; intended for
// small-to-moderate dimensions.
EstimateReport mmse_estimate(const ReceivedPilot& received, const PilotMatrix& pilot,
                             const CorrelationMatrix& correlation);

// Genie MMSE specialized to a cluster-structured correlation; algebraically
// identical to mmse_estimate(implied_correlation(clusters)) but solves only
// a sum(r_rl r_tl) dimensional system.
EstimateReport mmse_cluster_estimate(const ReceivedPilot& received, const PilotMatrix& pilot,
                                     const ClusterSet& clusters);

// Reduced-subspace LS on U = U_r kron U_t. The reduced Gram factorizes as
// I_{r_r} kron (U_t^H Phi^H Phi U_t), so only an r_t x r_t system is solved.
EstimateReport rsls_estimate(const ReceivedPilot& received, const PilotMatrix& pilot,
                             const Subspace& receive_sub, const Subspace& transmit_sub);

// (r_r / rho) tr((U_t^H Phi^H Phi U_t)^-1).
double rsls_analytic_mse(const PilotMatrix& pilot, double snr, const Subspace& receive_sub,
                         const Subspace& transmit_sub);

// Cluster-aware RS-LS: per-cluster reduced LS with the Gram decomposition
// {Phi_l}; cross-cluster interference cancels exactly under the
// orthogonality condition U_ti^H Phi_l = 0 for i != l.
EstimateReport cluster_rsls_estimate(const ReceivedPilot& received,
                                     const std::vector<Eigen::MatrixXcd>& gram_parts,
                                     const ClusterSet& clusters);

// (1/rho) sum_l r_rl tr((U_tl^H Phi_l U_tl)^-1).
double cluster_rsls_analytic_mse(const std::vector<Eigen::MatrixXcd>& gram_parts, double snr,
                                 const ClusterSet& clusters);

// ||x_hat - x||^2 / ||x||^2.
double nmse(const Eigen::VectorXcd& x_hat, const Eigen::VectorXcd& x);

}  // namespace rsls
