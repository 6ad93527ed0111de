// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <complex>

#include "rsls/correlation.hpp"
#include "rsls/errors.hpp"
#include "rsls/geometry.hpp"
#include "rsls/rng.hpp"
#include "rsls/subspace.hpp"

using rsls::AngularRegion;
using rsls::CorrelationMatrix;
using rsls::UpaGeometry;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double sinc(double x) {
  return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x);
}

// Independent oracle: dense midpoint Riemann sum of the uniform-density
// region integrand for a single displacement, deliberately sharing nothing
// with the Gauss-Legendre path.
std::complex<double> riemann_region_entry(double dy, double dz, const AngularRegion& region,
                                          int grid) {
  const double daz = (region.azimuth_max - region.azimuth_min) / grid;
  const double del = (region.elevation_max - region.elevation_min) / grid;
  std::complex<double> acc = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double az = region.azimuth_min + (i + 0.5) * daz;
    for (int j = 0; j < grid; ++j) {
      const double el = region.elevation_min + (j + 0.5) * del;
      const double phase = 2.0 * kPi * (dy * std::sin(az) * std::cos(el) + dz * std::sin(el));
      acc += std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }
  return acc * (daz * del / region.area());
}

void check_hermitian_psd(const CorrelationMatrix& corr) {
  CHECK((corr.entries() - corr.entries().adjoint()).norm() < 1e-12 * corr.entries().norm());
  CHECK(corr.eigenvalues()(corr.dim() - 1) > -1e-10 * std::max(corr.eigenvalues()(0), 1.0));
}

}  // namespace

TEST_CASE("single-element isotropic correlation is [1]") {
  const CorrelationMatrix corr = rsls::isotropic_correlation(UpaGeometry(1, 1, 0.5, 0.5));
  CHECK(corr.dim() == 1);
  CHECK(std::abs(corr.entries()(0, 0) - std::complex<double>(1.0, 0.0)) < 1e-12);
}

TEST_CASE("isotropic pair correlations hit the sinc values") {
  const CorrelationMatrix half = rsls::isotropic_correlation(UpaGeometry(2, 1, 0.5, 0.5));
  CHECK(std::abs(half.entries()(0, 1)) < 1e-6);  // sinc(1) = 0

  const CorrelationMatrix quarter = rsls::isotropic_correlation(UpaGeometry(2, 1, 0.25, 0.25));
  CHECK(std::abs(quarter.entries()(0, 1).real() - 2.0 / kPi) < 1e-6);
  CHECK(std::abs(quarter.entries()(0, 1).imag()) < 1e-6);
}

TEST_CASE("isotropic correlation agrees with the sinc closed form entrywise") {
  for (const double spacing : {0.25, 0.5}) {
    for (const auto [nh, nv] : {std::pair{1, 5}, {3, 2}, {4, 4}, {8, 1}}) {
      const UpaGeometry geom(nh, nv, spacing, spacing);
      const CorrelationMatrix corr = rsls::isotropic_correlation(geom);
      check_hermitian_psd(corr);
      CHECK(corr.trace() == doctest::Approx(geom.size()).epsilon(1e-10));
      for (int p = 0; p < geom.size(); ++p) {
        for (int q = 0; q < geom.size(); ++q) {
          const double d =
              (rsls::element_position(geom, p) - rsls::element_position(geom, q)).norm();
          CHECK(std::abs(corr.entries()(p, q) - sinc(2.0 * d)) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("region correlation matches a dense Riemann oracle") {
  const UpaGeometry geom(2, 1, 0.25, 0.25);
  const AngularRegion full(-kPi / 2.0, kPi / 2.0, -kPi / 2.0, kPi / 2.0);
  const CorrelationMatrix corr = rsls::region_correlation(geom, full);
  const std::complex<double> oracle = riemann_region_entry(0.25, 0.0, full, 2000);
  CHECK(std::abs(corr.entries()(1, 0) - oracle) < 1e-5);

  const AngularRegion skew(-0.9, 0.3, -0.2, 1.1);
  const CorrelationMatrix corr2 = rsls::region_correlation(UpaGeometry(3, 2, 0.3, 0.4), skew);
  check_hermitian_psd(corr2);
  const std::complex<double> oracle2 = riemann_region_entry(0.3, -0.4, skew, 2000);
  // entry (p=2 -> h=1,v=0; q=1 -> h=0,v=1): displacement (+0.3, -0.4)
  CHECK(std::abs(corr2.entries()(2, 1) - oracle2) < 1e-5);
}

TEST_CASE("region correlation of a single element is [1]") {
  const AngularRegion region(-0.4, 0.2, 0.1, 0.9);
  const CorrelationMatrix corr = rsls::region_correlation(UpaGeometry(1, 1, 0.5, 0.5), region);
  CHECK(corr.dim() == 1);
  CHECK(std::abs(corr.entries()(0, 0) - std::complex<double>(1.0, 0.0)) < 1e-12);
}

TEST_CASE("a degenerate region collapses to the rank-1 steering outer product") {
  const UpaGeometry geom(3, 3, 0.25, 0.25);
  const double az = 0.35;
  const double el = -0.5;
  const double eps = 5e-7;
  const AngularRegion tiny(az - eps, az + eps, el - eps, el + eps);
  const CorrelationMatrix corr = rsls::region_correlation(geom, tiny);
  const Eigen::VectorXcd a = rsls::steering_vector(geom, rsls::Direction(az, el));
  const Eigen::MatrixXcd expected = a * a.adjoint();
  CHECK((corr.entries() - expected).norm() / expected.norm() < 1e-3);
}

TEST_CASE("correlation matrices expose a nonincreasing PSD spectrum") {
  const CorrelationMatrix corr =
      rsls::region_correlation(UpaGeometry(4, 2, 0.3, 0.3), AngularRegion(-1.0, 0.2, -0.8, 0.9));
  const Eigen::VectorXd& values = corr.eigenvalues();
  for (int i = 1; i < values.size(); ++i) {
    CHECK(values(i) <= values(i - 1) + 1e-12);
  }
  check_hermitian_psd(corr);
  // Eigenvectors diagonalize the matrix.
  const Eigen::MatrixXcd recon = corr.eigenvectors() * values.asDiagonal() *
                                 corr.eigenvectors().adjoint();
  CHECK((recon - corr.entries()).norm() < 1e-10 * corr.entries().norm());
}

TEST_CASE("non-Hermitian input is rejected") {
  Eigen::MatrixXcd bad(2, 2);
  bad << 1.0, std::complex<double>(0.5, 0.1), std::complex<double>(0.5, 0.2), 1.0;
  CHECK_THROWS_AS(CorrelationMatrix{bad}, std::invalid_argument);
}

TEST_CASE("region correlation stays inside the isotropic dominant subspace") {
  // Containment property: with U spanning the 1-1e-7 isotropic eigenspace,
  // any in-sector correlation matrix projects onto U up to a small residual.
  const UpaGeometry geom(4, 4, 0.25, 0.25);
  const rsls::Subspace u =
      rsls::dominant_subspace(rsls::isotropic_correlation(geom), 1.0 - 1e-7);
  const Eigen::MatrixXcd residual_proj =
      Eigen::MatrixXcd::Identity(geom.size(), geom.size()) - u.projector();
  rsls::Rng rng(3);
  for (int repeat = 0; repeat < 10; ++repeat) {
    const double margin = 0.02;
    double az0 = (kPi - 2 * margin) * (rng.uniform() - 0.5);
    double az1 = (kPi - 2 * margin) * (rng.uniform() - 0.5);
    double el0 = (kPi - 2 * margin) * (rng.uniform() - 0.5);
    double el1 = (kPi - 2 * margin) * (rng.uniform() - 0.5);
    if (az0 > az1) std::swap(az0, az1);
    if (el0 > el1) std::swap(el0, el1);
    const AngularRegion region(az0, az1 + margin, el0, el1 + margin);
    const CorrelationMatrix corr = rsls::region_correlation(geom, region);
    CHECK((residual_proj * corr.entries()).norm() / corr.entries().norm() <= 1e-3);
  }
}
