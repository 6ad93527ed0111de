// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <functional>
#include <ostream>
#include <string>

#include "rsls/channel.hpp"
#include "rsls/estimators.hpp"
#include "rsls/experiments.hpp"
#include "rsls/pilot.hpp"

namespace rsls {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct Harness {
  std::ostream& out;
  int failures = 0;

  void check(const std::string& name, const std::function<bool()>& body) {
    bool ok = false;
    std::string detail;
    try {
      ok = body();
    } catch (const std::exception& err) {
      detail = err.what();
    }
    if (ok) {
      out << "ok - " << name << "\n";
    } else {
      ++failures;
      out << "FAIL - " << name;
      if (!detail.empty()) {
        out << " (" << detail << ")";
      }
      out << "\n";
    }
  }
};

double sinc(double x) {
  if (x == 0.0) {
    return 1.0;
  }
  return std::sin(kPi * x) / (kPi * x);
}

Subspace random_semi_unitary(int ambient, int rank, Rng& rng) {
  Eigen::MatrixXcd raw(ambient, rank);
  for (Eigen::Index j = 0; j < rank; ++j) {
    for (Eigen::Index i = 0; i < ambient; ++i) {
      raw(i, j) = rng.complex_normal();
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(raw);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(ambient, rank);
  return Subspace(std::move(q));
}

}  // namespace

int selftest(std::ostream& out) {
  Harness h{out};

  h.check("steering vector is all ones at broadside", [] {
    const UpaGeometry geom(8, 8, 0.25, 0.25);
    const Eigen::VectorXcd a = steering_vector(geom, Direction(0.0, 0.0));
    return (a - Eigen::VectorXcd::Ones(64)).norm() < 1e-12;
  });

  h.check("element indexing is column-major over the vertical axis", [] {
    const UpaGeometry geom(2, 2, 0.25, 0.25);
    return element_position(geom, 1).isApprox(Eigen::Vector3d(0, 0, 0.25), 1e-15) &&
           element_position(geom, 3).isApprox(Eigen::Vector3d(0, 0.25, 0.25), 1e-15);
  });

  h.check("isotropic correlation matches the sinc closed form", [] {
    for (const double spacing : {0.25, 0.5}) {
      const UpaGeometry geom(4, 4, spacing, spacing);
      const CorrelationMatrix corr = isotropic_correlation(geom);
      for (int p = 0; p < geom.size(); ++p) {
        for (int q = 0; q < geom.size(); ++q) {
          const double d = (element_position(geom, p) - element_position(geom, q)).norm();
          if (std::abs(corr.entries()(p, q).real() - sinc(2.0 * d)) > 1e-6 ||
              std::abs(corr.entries()(p, q).imag()) > 1e-6) {
            return false;
          }
        }
      }
    }
    return true;
  });

  h.check("8x8 quarter-wavelength isotropic effective rank is 43", [] {
    const CorrelationMatrix corr = isotropic_correlation(UpaGeometry(8, 8, 0.25, 0.25));
    return effective_rank(corr.eigenvalues(), 1.0 - 1e-5) == 43;
  });

  h.check("optimal pilot reaches the closed-form reduced-subspace MSE", [] {
    Rng rng(11);
    const Subspace u_t = random_semi_unitary(16, 5, rng);
    const Subspace u_r = random_semi_unitary(12, 4, rng);
    const int tau_p = 8;
    const double rho = 2.0;
    const double mse = rsls_analytic_mse(optimal_pilot(u_t, tau_p), rho, u_r, u_t);
    const double expected = 4.0 * 5.0 * 5.0 / (rho * tau_p);
    return std::abs(mse - expected) < 1e-9 * expected;
  });

  h.check("KKT weights for ranks (2,3)x(4,1) at tau_p=10 are (20/7, 10/7)", [] {
    Rng rng(12);
    std::vector<Cluster> list;
    const Subspace u_t_all = random_semi_unitary(8, 5, rng);
    list.push_back({Subspace(u_t_all.basis().leftCols(2)), random_semi_unitary(6, 4, rng)});
    list.push_back({Subspace(u_t_all.basis().rightCols(3)), random_semi_unitary(6, 1, rng)});
    const std::vector<double> w = cluster_pilot_weights(ClusterSet(std::move(list)), 10);
    return std::abs(w[0] - 20.0 / 7.0) < 1e-10 && std::abs(w[1] - 10.0 / 7.0) < 1e-10;
  });

  h.check("noiseless LS with identity pilot recovers the channel exactly", [] {
    Rng rng(13);
    const int m = 4;
    const int k = 4;
    ClusterSet white({{Subspace(Eigen::MatrixXcd::Identity(k, k)),
                       Subspace(Eigen::MatrixXcd::Identity(m, m))}});
    const ChannelRealization channel = sample_clustered_channel(white, rng);
    const PilotMatrix pilot(Eigen::MatrixXcd::Identity(k, k));
    const ReceivedPilot received = transmit_pilots(channel, pilot, 4.0, rng, 0.0);
    return nmse(ls_estimate(received, pilot).x_hat, channel.x) < 1e-24;
  });

  h.check("noiseless cluster RS-LS cancels cross-cluster interference", [] {
    Rng rng(14);
    const int m = 8;
    const int k = 8;
    const Subspace all = random_semi_unitary(k, 5, rng);
    std::vector<Cluster> list;
    list.push_back({Subspace(all.basis().leftCols(2)), random_semi_unitary(m, 3, rng)});
    list.push_back({Subspace(all.basis().rightCols(3)), random_semi_unitary(m, 2, rng)});
    ClusterSet clusters(std::move(list));
    const PilotMatrix pilot =
        cluster_pilot_matrix(clusters, cluster_pilot_weights(clusters, 6), 6);
    const ChannelRealization channel = sample_clustered_channel(clusters, rng);
    const ReceivedPilot received = transmit_pilots(channel, pilot, 9.0, rng, 0.0);
    const EstimateReport report = cluster_rsls_estimate(received, *pilot.gram_parts, clusters);
    return nmse(report.x_hat, channel.x) < 1e-18;
  });

  out << (h.failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return h.failures;
}

}  // namespace rsls
