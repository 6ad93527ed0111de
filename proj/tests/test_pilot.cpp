// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "rsls/channel.hpp"
#include "rsls/errors.hpp"
#include "rsls/estimators.hpp"
#include "rsls/io.hpp"
#include "rsls/pilot.hpp"
#include "rsls/rng.hpp"

using rsls::Cluster;
using rsls::ClusterSet;
using rsls::PilotMatrix;
using rsls::Rng;
using rsls::Subspace;

namespace {

Subspace random_semi_unitary(int ambient, int rank, Rng& rng) {
  Eigen::MatrixXcd raw(ambient, rank);
  for (Eigen::Index j = 0; j < rank; ++j) {
    for (Eigen::Index i = 0; i < ambient; ++i) {
      raw(i, j) = rng.complex_normal();
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(raw);
  return Subspace(qr.householderQ() * Eigen::MatrixXcd::Identity(ambient, rank));
}

// Orthogonal transmit halves (ranks 2 and 3 in ambient 8) with receive
// ranks 4 and 1.
ClusterSet example_clusters(Rng& rng) {
  const Subspace all = random_semi_unitary(8, 5, rng);
  std::vector<Cluster> list;
  list.push_back({Subspace(all.basis().leftCols(2)), random_semi_unitary(6, 4, rng)});
  list.push_back({Subspace(all.basis().rightCols(3)), random_semi_unitary(6, 1, rng)});
  return ClusterSet(std::move(list));
}

}  // namespace

TEST_CASE("full-rank optimal pilot is the scaled DFT") {
  const int k = 4;
  const Subspace full(Eigen::MatrixXcd::Identity(k, k));
  const PilotMatrix pilot = rsls::optimal_pilot(full, k);
  CHECK((pilot.entries - rsls::dft_matrix(k)).norm() < 1e-12);
  CHECK((pilot.gram() - Eigen::MatrixXcd::Identity(k, k)).norm() < 1e-10);
}

TEST_CASE("optimal pilots always meet the power budget") {
  Rng rng(300);
  for (int repeat = 0; repeat < 10; ++repeat) {
    const int k = 4 + static_cast<int>(rng.next_u64() % 5);
    const int r_t = 1 + static_cast<int>(rng.next_u64() % 3);
    const int tau = r_t + static_cast<int>(rng.next_u64() % (k - r_t + 1));
    const Subspace u_t = random_semi_unitary(k, r_t, rng);
    const PilotMatrix pilot = rsls::optimal_pilot(u_t, tau);
    CHECK(pilot.entries.squaredNorm() == doctest::Approx(tau).epsilon(1e-10));
    // Gram = (tau_p / r_t) U_t U_t^H
    CHECK((pilot.gram() - (static_cast<double>(tau) / r_t) * u_t.projector()).norm() < 1e-10);
  }
}

TEST_CASE("optimal pilot rejects infeasible lengths") {
  Rng rng(301);
  const Subspace u_t = random_semi_unitary(6, 3, rng);
  CHECK_THROWS_AS(rsls::optimal_pilot(u_t, 2), rsls::InfeasiblePilotError);
  CHECK_THROWS_AS(rsls::optimal_pilot(u_t, 7), std::invalid_argument);
}

TEST_CASE("no random pilot beats the optimal pilot") {
  Rng rng(302);
  const Subspace u_t = random_semi_unitary(8, 3, rng);
  const Subspace u_r = random_semi_unitary(6, 2, rng);
  const int tau = 5;
  const double rho = 1.0;
  const double best = rsls::rsls_analytic_mse(rsls::optimal_pilot(u_t, tau), rho, u_r, u_t);
  CHECK(best == doctest::Approx(2.0 * 9.0 / (rho * tau)).epsilon(1e-9));
  for (int repeat = 0; repeat < 100; ++repeat) {
    Eigen::MatrixXcd entries(tau, 8);
    for (Eigen::Index j = 0; j < entries.cols(); ++j) {
      for (Eigen::Index i = 0; i < entries.rows(); ++i) {
        entries(i, j) = rng.complex_normal();
      }
    }
    entries *= std::sqrt(tau / entries.squaredNorm());
    const double mse = rsls::rsls_analytic_mse(PilotMatrix(entries), rho, u_r, u_t);
    CHECK(mse >= best * (1.0 - 1e-12));
  }
}

TEST_CASE("KKT weights: single cluster and symmetric clusters") {
  Rng rng(303);
  const Subspace u_t = random_semi_unitary(6, 3, rng);
  const Subspace u_r = random_semi_unitary(5, 2, rng);
  const ClusterSet single({{u_t, u_r}});
  const std::vector<double> w1 = rsls::cluster_pilot_weights(single, 5);
  CHECK(w1.size() == 1);
  CHECK(w1[0] == doctest::Approx(5.0 / 3.0).epsilon(1e-12));

  const Subspace all = random_semi_unitary(6, 4, rng);
  std::vector<Cluster> symmetric;
  symmetric.push_back({Subspace(all.basis().leftCols(2)), random_semi_unitary(5, 3, rng)});
  symmetric.push_back({Subspace(all.basis().rightCols(2)), random_semi_unitary(5, 3, rng)});
  const std::vector<double> w2 = rsls::cluster_pilot_weights(ClusterSet(std::move(symmetric)), 6);
  CHECK(w2[0] == doctest::Approx(w2[1]).epsilon(1e-12));
}

TEST_CASE("KKT weights: asymmetric example and budget") {
  Rng rng(304);
  const ClusterSet clusters = example_clusters(rng);  // r_t = (2,3), r_r = (4,1)
  const std::vector<double> w = rsls::cluster_pilot_weights(clusters, 10);
  CHECK(w[0] == doctest::Approx(20.0 / 7.0).epsilon(1e-10));
  CHECK(w[1] == doctest::Approx(10.0 / 7.0).epsilon(1e-10));
  CHECK(2.0 * w[0] + 3.0 * w[1] == doctest::Approx(10.0).epsilon(1e-10));

  CHECK_THROWS_AS(rsls::cluster_pilot_weights(clusters, 4), rsls::InfeasiblePilotError);
}

TEST_CASE("cluster pilot matrix realizes the weighted Gram") {
  Rng rng(305);
  const ClusterSet clusters = example_clusters(rng);
  const int tau = 7;
  const std::vector<double> w = rsls::cluster_pilot_weights(clusters, tau);
  const PilotMatrix pilot = rsls::cluster_pilot_matrix(clusters, w, tau);

  CHECK(pilot.entries.squaredNorm() == doctest::Approx(tau).epsilon(1e-8));
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(8, 8);
  for (std::size_t l = 0; l < w.size(); ++l) {
    expected += w[l] * clusters.clusters()[l].transmit.projector();
  }
  CHECK((pilot.gram() - expected).norm() < 1e-8 * expected.norm());

  REQUIRE(pilot.gram_parts.has_value());
  for (std::size_t l = 0; l < pilot.gram_parts->size(); ++l) {
    for (std::size_t i = 0; i < pilot.gram_parts->size(); ++i) {
      if (i != l) {
        CHECK((clusters.clusters()[i].transmit.basis().adjoint() *
               (*pilot.gram_parts)[l]).norm() <= 1e-10);
      }
    }
  }
}

TEST_CASE("single-cluster pilot with the optimal weight matches optimal_pilot") {
  Rng rng(306);
  const Subspace u_t = random_semi_unitary(6, 3, rng);
  const Subspace u_r = random_semi_unitary(5, 2, rng);
  const ClusterSet single({{u_t, u_r}});
  const int tau = 6;
  const PilotMatrix clustered =
      rsls::cluster_pilot_matrix(single, rsls::cluster_pilot_weights(single, tau), tau);
  const PilotMatrix plain = rsls::optimal_pilot(u_t, tau);
  CHECK((clustered.gram() - plain.gram()).norm() < 1e-10);
}

TEST_CASE("optimal weights reach the closed-form cluster MSE and beat random budgets") {
  Rng rng(307);
  const ClusterSet clusters = example_clusters(rng);  // r_t=(2,3), r_r=(4,1)
  const int tau = 8;
  const double rho = 1.3;
  const std::vector<double> opt = rsls::cluster_pilot_weights(clusters, tau);
  const PilotMatrix pilot = rsls::cluster_pilot_matrix(clusters, opt, tau);
  const double best = rsls::cluster_rsls_analytic_mse(*pilot.gram_parts, rho, clusters);
  const double closed_form =
      std::pow(2.0 * std::sqrt(4.0) + 3.0 * std::sqrt(1.0), 2) / (rho * tau);
  CHECK(best == doctest::Approx(closed_form).epsilon(1e-9));

  for (int repeat = 0; repeat < 100; ++repeat) {
    // random positive weights rescaled onto the budget sum r_tl s_l = tau
    double s0 = 0.05 + rng.uniform();
    double s1 = 0.05 + rng.uniform();
    const double scale = tau / (2.0 * s0 + 3.0 * s1);
    s0 *= scale;
    s1 *= scale;
    const PilotMatrix candidate = rsls::cluster_pilot_matrix(clusters, {s0, s1}, tau);
    const double mse = rsls::cluster_rsls_analytic_mse(*candidate.gram_parts, rho, clusters);
    CHECK(mse >= best * (1.0 - 1e-12));
  }
}

TEST_CASE("perturbing the optimal weights along the budget never helps") {
  Rng rng(308);
  const ClusterSet clusters = example_clusters(rng);
  const int tau = 8;
  const double rho = 2.0;
  const std::vector<double> opt = rsls::cluster_pilot_weights(clusters, tau);
  const double best = rsls::cluster_rsls_analytic_mse(
      *rsls::cluster_pilot_matrix(clusters, opt, tau).gram_parts, rho, clusters);
  // Feasible direction for two clusters: ds = (+d, -2d/3) keeps 2 s0 + 3 s1.
  for (const double sign : {1.0, -1.0}) {
    const double d = sign * 0.01 * opt[0];
    const std::vector<double> perturbed{opt[0] + d, opt[1] - 2.0 * d / 3.0};
    const double mse = rsls::cluster_rsls_analytic_mse(
        *rsls::cluster_pilot_matrix(clusters, perturbed, tau).gram_parts, rho, clusters);
    CHECK(mse >= best * (1.0 - 1e-12));
  }
}

TEST_CASE("DFT blocks used by the cluster pilot are orthonormal") {
  const Eigen::MatrixXcd f = rsls::dft_matrix(9);
  const Eigen::MatrixXcd s0 = f.leftCols(4);
  const Eigen::MatrixXcd s1 = f.middleCols(4, 3);
  CHECK((s0.adjoint() * s0 - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((s1.adjoint() * s1 - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((s0.adjoint() * s1).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gram_decompose round-trips pilots built from cluster parts") {
  Rng rng(309);
  const ClusterSet clusters = example_clusters(rng);
  const int tau = 6;
  const PilotMatrix pilot =
      rsls::cluster_pilot_matrix(clusters, rsls::cluster_pilot_weights(clusters, tau), tau);
  const std::vector<Eigen::MatrixXcd> parts = rsls::gram_decompose(pilot, clusters);
  REQUIRE(parts.size() == 2);
  for (std::size_t l = 0; l < parts.size(); ++l) {
    CHECK((parts[l] - (*pilot.gram_parts)[l]).norm() < 1e-10);
  }
}

TEST_CASE("gram_decompose rejects out-of-cluster excitation") {
  Rng rng(310);
  const Subspace all = random_semi_unitary(6, 6, rng);
  std::vector<Cluster> list;
  list.push_back({Subspace(all.basis().leftCols(2)), random_semi_unitary(4, 2, rng)});
  list.push_back({Subspace(all.basis().middleCols(2, 2)), random_semi_unitary(4, 2, rng)});
  const ClusterSet clusters(std::move(list));
  // Pilot exciting a direction outside both cluster subspaces.
  Eigen::MatrixXcd entries = all.basis().rightCols(2).adjoint();
  entries *= std::sqrt(2.0 / entries.squaredNorm());
  CHECK_THROWS_AS(rsls::gram_decompose(PilotMatrix(entries), clusters),
                  rsls::DecompositionError);
}

TEST_CASE("gram_decompose rejects cross-cluster coupling") {
  // Transmit subspaces span(e1,e2) and span(e3,e4); the pilot Gram carries a
  // rank-1 coupling block between e1 and e3.
  Eigen::MatrixXcd u1 = Eigen::MatrixXcd::Zero(4, 2);
  u1(0, 0) = 1.0;
  u1(1, 1) = 1.0;
  Eigen::MatrixXcd u2 = Eigen::MatrixXcd::Zero(4, 2);
  u2(2, 0) = 1.0;
  u2(3, 1) = 1.0;
  Rng rng(311);
  const ClusterSet clusters({{Subspace(u1), random_semi_unitary(3, 1, rng)},
                             {Subspace(u2), random_semi_unitary(3, 2, rng)}});

  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Identity(4, 4);
  gram(0, 2) = 0.5;
  gram(2, 0) = 0.5;
  // Factor the PSD Gram as its Hermitian square root to get a valid pilot.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
  Eigen::MatrixXcd root =
      eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal() *
      eig.eigenvectors().adjoint();
  root *= std::sqrt(4.0 / root.squaredNorm());
  CHECK_THROWS_AS(rsls::gram_decompose(PilotMatrix(root), clusters),
                  rsls::DecompositionError);
}

TEST_CASE("pilot containers round-trip through binary and CSV formats") {
  Rng rng(312);
  const Subspace u_t = random_semi_unitary(5, 2, rng);
  const PilotMatrix pilot = rsls::optimal_pilot(u_t, 4);

  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "rsls_io_test";
  std::filesystem::create_directories(dir);
  const std::string bin_path = (dir / "pilot.rsmat").string();
  rsls::save_matrix(bin_path, pilot.entries);
  const Eigen::MatrixXcd loaded = rsls::load_matrix(bin_path, rsls::MatrixKind::Generic);
  CHECK(loaded == pilot.entries);  // bit-exact round trip

  const std::string csv_path = (dir / "pilot.csv").string();
  rsls::save_pilot_csv(csv_path, pilot);
  std::ifstream csv(csv_path);
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) {
    ++lines;
    CHECK(std::count(line.begin(), line.end(), ',') == 2 * pilot.num_tx() - 1);
  }
  CHECK(lines == pilot.tau_p);
  std::filesystem::remove_all(dir);
}

TEST_CASE("pilot budget violations are rejected at construction") {
  CHECK_THROWS_AS(PilotMatrix(2.0 * Eigen::MatrixXcd::Identity(3, 3)), std::invalid_argument);
}
