// SPDX-License-Identifier: Apache-2.0

#include "rsls/estimators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rsls/errors.hpp"

namespace rsls {

namespace {

constexpr double kSingularityThreshold = 1e-10;  // relative, uniform across estimators

// Received samples as a tau_p x M matrix with one column per receive antenna.
Eigen::Map<const Eigen::MatrixXcd> per_antenna(const ReceivedPilot& received, int tau_p) {
  const Eigen::Index len = received.y.size();
  if (tau_p < 1 || len % tau_p != 0) {
    throw std::invalid_argument("received pilot length is not a multiple of tau_p");
  }
  return {received.y.data(), tau_p, len / tau_p};
}

// Hermitian eigendecomposition of a reduced pilot Gram. Throws when the
// smallest eigenvalue falls below threshold times the larger of the Gram's
// own largest eigenvalue and `energy_reference`; the latter anchors the
// check to the pilot power scale so that a pilot orthogonal to the whole
// subspace is flagged rather than passing a purely relative test.
struct ReducedGram {
  Eigen::MatrixXcd vectors;
  Eigen::VectorXd values;

  ReducedGram(const Eigen::MatrixXcd& gram, double energy_reference, const std::string& what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        0.5 * (gram + gram.adjoint()));
    values = solver.eigenvalues();
    vectors = solver.eigenvectors();
    const double largest = values(values.size() - 1);
    const double reference = std::max(largest, energy_reference);
    if (!(reference > 0.0) || values(0) <= kSingularityThreshold * reference) {
      throw PilotExcitationError(what + " (relative smallest eigenvalue " +
                                 std::to_string(reference > 0.0 ? values(0) / reference : 0.0) +
                                 ")");
    }
  }

  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const {
    return vectors * values.cwiseInverse().asDiagonal() * (vectors.adjoint() * rhs).eval();
  }

  double trace_inverse() const { return values.cwiseInverse().sum(); }
};

}  // namespace

std::string method_name(Method method) {
  switch (method) {
    case Method::LS: return "ls";
    case Method::EW_MMSE: return "ew-mmse";
    case Method::MMSE: return "mmse";
    case Method::RS_LS: return "rs-ls";
    case Method::CLUSTER_RS_LS: return "cluster-rs-ls";
  }
  throw std::invalid_argument("method_name: unknown method");
}

Method method_from_name(std::string_view name) {
  if (name == "ls") return Method::LS;
  if (name == "ew-mmse") return Method::EW_MMSE;
  if (name == "mmse") return Method::MMSE;
  if (name == "rs-ls") return Method::RS_LS;
  if (name == "cluster-rs-ls") return Method::CLUSTER_RS_LS;
  throw std::invalid_argument("unknown estimator name: " + std::string(name));
}

EstimateReport ls_estimate(const ReceivedPilot& received, const PilotMatrix& pilot) {
  const int k = pilot.num_tx();
  if (pilot.tau_p < k) {
    throw std::invalid_argument("ls_estimate: requires tau_p >= K");
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pilot.entries,
                                         Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (sigma(k - 1) <= 1e-8 * sigma(0)) {
    throw SingularPilotError("ls_estimate: pilot Gram is rank deficient (condition " +
                             std::to_string(sigma(0) / std::max(sigma(k - 1), 1e-300)) + ")");
  }
  const auto y_mat = per_antenna(received, pilot.tau_p);
  const int m = static_cast<int>(y_mat.cols());
  const double inv_amp = 1.0 / std::sqrt(received.snr);

  // (Phi^H Phi)^-1 Phi^H = V Sigma^-1 U^H from the thin SVD.
  Eigen::MatrixXcd x_mat = inv_amp * (svd.matrixV() * sigma.cwiseInverse().asDiagonal() *
                                      (svd.matrixU().adjoint() * y_mat).eval());

  EstimateReport report{Eigen::Map<const Eigen::VectorXcd>(x_mat.data(), m * k), Method::LS,
                        std::nullopt};
  report.analytic_mse = m / received.snr * sigma.cwiseAbs2().cwiseInverse().sum();
  return report;
}

EstimateReport ew_mmse_estimate(const ReceivedPilot& received, const PilotMatrix& pilot,
                                const Eigen::VectorXd& diag_r) {
  const int k = pilot.num_tx();
  const int tau = pilot.tau_p;
  const auto y_mat = per_antenna(received, tau);
  const int m = static_cast<int>(y_mat.cols());
  if (diag_r.size() != static_cast<Eigen::Index>(m) * k) {
    throw std::invalid_argument("ew_mmse_estimate: diag_r must have length M*K");
  }
  if ((diag_r.array() < 0.0).any()) {
    throw std::invalid_argument("ew_mmse_estimate: diag_r entries must be nonnegative");
  }
  const double rho = received.snr;
  const double amp = std::sqrt(rho);

  Eigen::MatrixXcd x_mat(k, m);
  Eigen::MatrixXcd inner(tau, tau);
  for (int ant = 0; ant < m; ++ant) {
    const Eigen::VectorXd d = diag_r.segment(static_cast<Eigen::Index>(ant) * k, k);
    // rho Phi D_m Phi^H + I is Hermitian positive definite for any D_m >= 0.
    inner.noalias() = rho * (pilot.entries * d.asDiagonal() * pilot.entries.adjoint());
    inner += Eigen::MatrixXcd::Identity(tau, tau);
    const Eigen::VectorXcd z = inner.llt().solve(y_mat.col(ant));
    x_mat.col(ant) = amp * d.asDiagonal() * (pilot.entries.adjoint() * z).eval();
  }
  return {Eigen::Map<const Eigen::VectorXcd>(x_mat.data(), m * k), Method::EW_MMSE,
          std::nullopt};
}

EstimateReport mmse_estimate(const ReceivedPilot& received, const PilotMatrix& pilot,
                             const CorrelationMatrix& correlation) {
  const int k = pilot.num_tx();
  const int tau = pilot.tau_p;
  const auto y_mat = per_antenna(received, tau);
  const int m = static_cast<int>(y_mat.cols());
  if (correlation.dim() != m * k) {
    throw std::invalid_argument("mmse_estimate: correlation must be MK x MK");
  }
  const double rho = received.snr;
  const Eigen::MatrixXcd& r = correlation.entries();

  // Middle matrix rho Phi_M R Phi_M^H + I assembled blockwise; Phi_M itself
  // is never materialized.
  Eigen::MatrixXcd middle(m * tau, m * tau);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      middle.block(i * tau, j * tau, tau, tau).noalias() =
          rho * (pilot.entries * r.block(i * k, j * k, k, k) * pilot.entries.adjoint());
    }
  }
  middle += Eigen::MatrixXcd::Identity(m * tau, m * tau);
  const Eigen::VectorXcd z = middle.llt().solve(received.y);

  Eigen::MatrixXcd zt(k, m);
  for (int ant = 0; ant < m; ++ant) {
    zt.col(ant) = pilot.entries.adjoint() * z.segment(static_cast<Eigen::Index>(ant) * tau, tau);
  }
  const Eigen::VectorXcd x_hat =
      std::sqrt(rho) * (r * Eigen::Map<const Eigen::VectorXcd>(zt.data(), m * k));
  return {x_hat, Method::MMSE, std::nullopt};
}

EstimateReport mmse_cluster_estimate(const ReceivedPilot& received, const PilotMatrix& pilot,
                                     const ClusterSet& clusters) {
  const int k = pilot.num_tx();
  const int tau = pilot.tau_p;
  if (clusters.num_tx() != k) {
    throw std::invalid_argument("mmse_cluster_estimate: pilot/cluster dimension mismatch");
  }
  const auto y_mat = per_antenna(received, tau);
  const int m = static_cast<int>(y_mat.cols());
  if (clusters.num_rx() != m) {
    throw std::invalid_argument("mmse_cluster_estimate: received/cluster dimension mismatch");
  }
  const double rho = received.snr;
  const double c = clusters.amplitude();
  const int total = clusters.total_dim();
  const auto& list = clusters.clusters();

  // With R = C C^H and C = c [U_r1 kron U_t1, ...], the MMSE estimate is
  // sqrt(rho) C (rho B^H B + I)^-1 B^H y for B = Phi_M C, and B inherits the
  // Kronecker block structure B_l = c (U_rl kron Phi U_tl).
  std::vector<Eigen::MatrixXcd> phi_ut(list.size());
  std::vector<int> offsets(list.size());
  int offset = 0;
  for (std::size_t l = 0; l < list.size(); ++l) {
    phi_ut[l] = pilot.entries * list[l].transmit.basis();
    offsets[l] = offset;
    offset += list[l].transmit.rank() * list[l].receive.rank();
  }

  Eigen::MatrixXcd middle = Eigen::MatrixXcd::Identity(total, total);
  for (std::size_t l = 0; l < list.size(); ++l) {
    for (std::size_t i = 0; i <= l; ++i) {
      const Eigen::MatrixXcd rr = list[l].receive.basis().adjoint() * list[i].receive.basis();
      const Eigen::MatrixXcd tt = phi_ut[l].adjoint() * phi_ut[i];
      const int rt_l = list[l].transmit.rank();
      const int rt_i = list[i].transmit.rank();
      for (Eigen::Index a = 0; a < rr.rows(); ++a) {
        for (Eigen::Index b = 0; b < rr.cols(); ++b) {
          middle.block(offsets[l] + a * rt_l, offsets[i] + b * rt_i, rt_l, rt_i) +=
              (rho * c * c) * rr(a, b) * tt;
        }
      }
    }
  }
  // Only the lower triangle is filled; LLT reads exactly that part.
  Eigen::VectorXcd rhs(total);
  for (std::size_t l = 0; l < list.size(); ++l) {
    const Eigen::MatrixXcd t = c * (phi_ut[l].adjoint() * y_mat * list[l].receive.basis().conjugate());
    rhs.segment(offsets[l], t.size()) = Eigen::Map<const Eigen::VectorXcd>(t.data(), t.size());
  }

  const Eigen::VectorXcd w = middle.llt().solve(rhs);
  Eigen::MatrixXcd x_mat = Eigen::MatrixXcd::Zero(k, m);
  for (std::size_t l = 0; l < list.size(); ++l) {
    const int rt = list[l].transmit.rank();
    const int rr = list[l].receive.rank();
    const Eigen::Map<const Eigen::MatrixXcd> w_mat(w.data() + offsets[l], rt, rr);
    x_mat.noalias() +=
        c * (list[l].transmit.basis() * w_mat * list[l].receive.basis().transpose());
  }
  x_mat *= std::sqrt(rho);
  return {Eigen::Map<const Eigen::VectorXcd>(x_mat.data(), m * k), Method::MMSE, std::nullopt};
}

EstimateReport rsls_estimate(const ReceivedPilot& received, const PilotMatrix& pilot,
                             const Subspace& receive_sub, const Subspace& transmit_sub) {
  const int k = pilot.num_tx();
  if (transmit_sub.ambient_dim() != k) {
    throw std::invalid_argument("rsls_estimate: transmit subspace ambient dim != K");
  }
  if (transmit_sub.rank() > pilot.tau_p) {
    throw std::invalid_argument("rsls_estimate: requires r_t <= tau_p");
  }
  const auto y_mat = per_antenna(received, pilot.tau_p);
  const int m = static_cast<int>(y_mat.cols());
  if (receive_sub.ambient_dim() != m) {
    throw std::invalid_argument("rsls_estimate: receive subspace ambient dim != M");
  }

  // U^H Phi_M^H Phi_M U = I_{r_r} kron (U_t^H Phi^H Phi U_t).
  const Eigen::MatrixXcd phi_ut = pilot.entries * transmit_sub.basis();
  const ReducedGram gram(phi_ut.adjoint() * phi_ut,
                         pilot.entries.squaredNorm() / transmit_sub.rank(),
                         "rsls_estimate: pilot does not excite the transmit subspace");

  const Eigen::MatrixXcd z = pilot.entries.adjoint() * y_mat;  // K x M
  const Eigen::MatrixXcd t =
      transmit_sub.basis().adjoint() * z * receive_sub.basis().conjugate();
  const Eigen::MatrixXcd w = gram.solve(t) / std::sqrt(received.snr);
  const Eigen::MatrixXcd x_mat =
      transmit_sub.basis() * w * receive_sub.basis().transpose();

  EstimateReport report{Eigen::Map<const Eigen::VectorXcd>(x_mat.data(), m * k),
                        Method::RS_LS, std::nullopt};
  report.analytic_mse = receive_sub.rank() / received.snr * gram.trace_inverse();
  return report;
}

double rsls_analytic_mse(const PilotMatrix& pilot, double snr, const Subspace& receive_sub,
                         const Subspace& transmit_sub) {
  if (transmit_sub.rank() > pilot.tau_p) {
    throw std::invalid_argument("rsls_analytic_mse: requires r_t <= tau_p");
  }
  const Eigen::MatrixXcd phi_ut = pilot.entries * transmit_sub.basis();
  const ReducedGram gram(phi_ut.adjoint() * phi_ut,
                         pilot.entries.squaredNorm() / transmit_sub.rank(),
                         "rsls_analytic_mse: pilot does not excite the transmit subspace");
  return receive_sub.rank() / snr * gram.trace_inverse();
}

namespace {

void check_gram_parts(const std::vector<Eigen::MatrixXcd>& gram_parts,
                      const ClusterSet& clusters) {
  const auto& list = clusters.clusters();
  if (gram_parts.size() != list.size()) {
    throw std::invalid_argument("cluster RS-LS: one Gram part per cluster required");
  }
  for (std::size_t l = 0; l < list.size(); ++l) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i == l) {
        continue;
      }
      const double leak = (list[i].transmit.basis().adjoint() * gram_parts[l]).norm();
      if (leak > 1e-8) {
        throw DecompositionError("cluster RS-LS: Gram part " + std::to_string(l) +
                                 " leaks into transmit subspace " + std::to_string(i) +
                                 " (norm " + std::to_string(leak) + ")");
      }
    }
  }
}

ReducedGram cluster_gram(const std::vector<Eigen::MatrixXcd>& gram_parts,
                         const ClusterSet& clusters, std::size_t l) {
  const Subspace& u_t = clusters.clusters()[l].transmit;
  return ReducedGram(u_t.basis().adjoint() * gram_parts[l] * u_t.basis(),
                     gram_parts[l].real().trace() / u_t.rank(),
                     "cluster RS-LS: pilot does not excite cluster " + std::to_string(l));
}

}  // namespace

EstimateReport cluster_rsls_estimate(const ReceivedPilot& received,
                                     const std::vector<Eigen::MatrixXcd>& gram_parts,
                                     const ClusterSet& clusters) {
  check_gram_parts(gram_parts, clusters);
  const PilotMatrix& pilot = received.pilot;
  const auto y_mat = per_antenna(received, pilot.tau_p);
  const int m = static_cast<int>(y_mat.cols());
  const int k = pilot.num_tx();
  if (clusters.num_rx() != m || clusters.num_tx() != k) {
    throw std::invalid_argument("cluster_rsls_estimate: dimension mismatch");
  }
  const double inv_amp = 1.0 / std::sqrt(received.snr);

  const Eigen::MatrixXcd z = pilot.entries.adjoint() * y_mat;  // K x M
  Eigen::MatrixXcd x_mat = Eigen::MatrixXcd::Zero(k, m);
  for (std::size_t l = 0; l < gram_parts.size(); ++l) {
    const Cluster& cluster = clusters.clusters()[l];
    const ReducedGram gram = cluster_gram(gram_parts, clusters, l);
    const Eigen::MatrixXcd t =
        cluster.transmit.basis().adjoint() * z * cluster.receive.basis().conjugate();
    x_mat.noalias() +=
        cluster.transmit.basis() * (inv_amp * gram.solve(t)) * cluster.receive.basis().transpose();
  }
  EstimateReport report{Eigen::Map<const Eigen::VectorXcd>(x_mat.data(), m * k),
                        Method::CLUSTER_RS_LS, std::nullopt};
  report.analytic_mse = cluster_rsls_analytic_mse(gram_parts, received.snr, clusters);
  return report;
}

double cluster_rsls_analytic_mse(const std::vector<Eigen::MatrixXcd>& gram_parts, double snr,
                                 const ClusterSet& clusters) {
  check_gram_parts(gram_parts, clusters);
  double mse = 0.0;
  for (std::size_t l = 0; l < gram_parts.size(); ++l) {
    const ReducedGram gram = cluster_gram(gram_parts, clusters, l);
    mse += clusters.clusters()[l].receive.rank() * gram.trace_inverse();
  }
  return mse / snr;
}

double nmse(const Eigen::VectorXcd& x_hat, const Eigen::VectorXcd& x) {
  if (x_hat.size() != x.size()) {
    throw std::invalid_argument("nmse: length mismatch");
  }
  const double denom = x.squaredNorm();
  if (denom <= 0.0) {
    throw std::invalid_argument("nmse: reference vector is zero");
  }
  return (x_hat - x).squaredNorm() / denom;
}

}  // namespace rsls
