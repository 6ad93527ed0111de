// SPDX-License-Identifier: Apache-2.0

#include "rsls/correlation.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "rsls/errors.hpp"
#include "rsls/quadrature.hpp"

namespace rsls {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kHalfPi = kPi / 2.0;

constexpr int kStartNodes = 32;
constexpr int kMaxNodes = 512;
constexpr double kConvergenceTol = 1e-8;

// Table of displacement integrals
//   g(dh, dv) = iint w(el) exp(i 2 pi (dh sh sin(az) cos(el) + dv sv sin(el))) daz del
// indexed by dh in [-(nh-1), nh-1], dv in [-(nv-1), nv-1]. Every entry of
// a(az,el) a(az,el)^H depends on the element index displacement only, so the
// full correlation matrix assembles from this table.
class DisplacementTable {
 public:
  DisplacementTable(const UpaGeometry& geom, double az_min, double az_max,
                    double el_min, double el_max,
                    const std::function<double(double)>& el_weight, int nodes)
      : nh_(geom.num_h), nv_(geom.num_v), table_(2 * nh_ - 1, Eigen::VectorXcd::Zero(2 * nv_ - 1)) {
    const QuadratureRule az = gauss_legendre(nodes, az_min, az_max);
    const QuadratureRule el = gauss_legendre(nodes, el_min, el_max);
    std::vector<std::complex<double>> inner(2 * nh_ - 1);
    for (int t = 0; t < nodes; ++t) {
      const double cos_el = std::cos(el.nodes[t]);
      const double sin_el = std::sin(el.nodes[t]);
      const double wt = el.weights[t] * el_weight(el.nodes[t]);
      for (int dh = -(nh_ - 1); dh <= nh_ - 1; ++dh) {
        std::complex<double> acc = 0.0;
        const double k = 2.0 * kPi * dh * geom.spacing_h * cos_el;
        for (int p = 0; p < nodes; ++p) {
          const double phase = k * std::sin(az.nodes[p]);
          acc += az.weights[p] * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        inner[dh + nh_ - 1] = acc;
      }
      for (int dv = -(nv_ - 1); dv <= nv_ - 1; ++dv) {
        const double phase = 2.0 * kPi * dv * geom.spacing_v * sin_el;
        const std::complex<double> ev =
            wt * std::complex<double>(std::cos(phase), std::sin(phase));
        for (int dh = 0; dh < 2 * nh_ - 1; ++dh) {
          table_[dh](dv + nv_ - 1) += ev * inner[dh];
        }
      }
    }
  }

  std::complex<double> at(int dh, int dv) const {
    return table_[dh + nh_ - 1](dv + nv_ - 1);
  }

  double max_abs_difference(const DisplacementTable& other) const {
    double diff = 0.0;
    for (int dh = 0; dh < 2 * nh_ - 1; ++dh) {
      diff = std::max(diff, (table_[dh] - other.table_[dh]).cwiseAbs().maxCoeff());
    }
    return diff;
  }

 private:
  int nh_;
  int nv_;
  std::vector<Eigen::VectorXcd> table_;
};

// Adaptive node doubling: start at 32x32 and stop once the maximum entry
// change between successive node counts falls below 1e-8 (cap 512x512).
CorrelationMatrix integrate_correlation(const UpaGeometry& geom, double az_min,
                                        double az_max, double el_min, double el_max,
                                        const std::function<double(double)>& el_weight,
                                        const char* what) {
  DisplacementTable coarse(geom, az_min, az_max, el_min, el_max, el_weight, kStartNodes);
  double change = std::numeric_limits<double>::infinity();
  for (int nodes = 2 * kStartNodes; nodes <= kMaxNodes; nodes *= 2) {
    DisplacementTable fine(geom, az_min, az_max, el_min, el_max, el_weight, nodes);
    change = fine.max_abs_difference(coarse);
    coarse = std::move(fine);
    if (change < kConvergenceTol) {
      break;
    }
    if (nodes == kMaxNodes) {
      std::ostringstream msg;
      msg << what << ": quadrature did not converge (entry change " << change
          << " > " << kConvergenceTol << " at " << kMaxNodes << "x" << kMaxNodes
          << " nodes)";
      throw QuadratureError(msg.str());
    }
  }

  const int n = geom.size();
  const double diag = coarse.at(0, 0).real();
  Eigen::MatrixXcd entries(n, n);
  for (int p = 0; p < n; ++p) {
    const int hp = p / geom.num_v;
    const int vp = p % geom.num_v;
    entries(p, p) = 1.0;
    for (int q = 0; q < p; ++q) {
      const int hq = q / geom.num_v;
      const int vq = q % geom.num_v;
      const std::complex<double> value = coarse.at(hp - hq, vp - vq) / diag;
      entries(p, q) = value;
      entries(q, p) = std::conj(value);
    }
  }
  return CorrelationMatrix(std::move(entries));
}

}  // namespace

AngularRegion::AngularRegion(double az_min, double az_max, double el_min, double el_max)
    : azimuth_min(az_min), azimuth_max(az_max), elevation_min(el_min), elevation_max(el_max) {
  const bool in_range = az_min >= -kHalfPi && az_max <= kHalfPi && el_min >= -kHalfPi &&
                        el_max <= kHalfPi;
  if (!in_range || !(az_min < az_max) || !(el_min < el_max)) {
    throw std::invalid_argument(
        "AngularRegion: bounds must satisfy min < max within [-pi/2, pi/2]");
  }
}

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw std::invalid_argument("CorrelationMatrix: entries must be square and non-empty");
  }
  const double scale = std::max(entries_.norm(), 1e-300);
  const double asym = (entries_ - entries_.adjoint()).norm() / scale;
  if (asym > 1e-10) {
    throw std::invalid_argument("CorrelationMatrix: entries are not Hermitian (relative "
                                "asymmetry " + std::to_string(asym) + ")");
  }
  entries_ = 0.5 * (entries_ + entries_.adjoint()).eval();
}

void CorrelationMatrix::ensure_eigen() const {
  std::call_once(*once_, [this] {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_);
    if (solver.info() != Eigen::Success) {
      throw Error("CorrelationMatrix: eigendecomposition failed");
    }
    auto cache = std::make_shared<EigenCache>();
    cache->values = solver.eigenvalues().reverse();
    cache->vectors = solver.eigenvectors().rowwise().reverse();
    const double largest = std::max(cache->values(0), 0.0);
    if (cache->values(cache->values.size() - 1) < -1e-10 * std::max(largest, 1.0)) {
      throw Error("CorrelationMatrix: matrix is not numerically PSD");
    }
    cache_ = std::move(cache);
  });
}

const Eigen::VectorXd& CorrelationMatrix::eigenvalues() const {
  ensure_eigen();
  return cache_->values;
}

const Eigen::MatrixXcd& CorrelationMatrix::eigenvectors() const {
  ensure_eigen();
  return cache_->vectors;
}

CorrelationMatrix isotropic_correlation(const UpaGeometry& geom) {
  return integrate_correlation(
      geom, -kHalfPi, kHalfPi, -kHalfPi, kHalfPi,
      [](double el) { return std::cos(el) / (2.0 * kPi); }, "isotropic_correlation");
}

CorrelationMatrix region_correlation(const UpaGeometry& geom, const AngularRegion& region) {
  const double density = 1.0 / region.area();
  return integrate_correlation(
      geom, region.azimuth_min, region.azimuth_max, region.elevation_min,
      region.elevation_max, [density](double) { return density; }, "region_correlation");
}

}  // namespace rsls
