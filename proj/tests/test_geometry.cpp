// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <set>

#include "rsls/geometry.hpp"
#include "rsls/rng.hpp"

using rsls::Direction;
using rsls::UpaGeometry;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("element positions follow the column-major vertical indexing") {
  const UpaGeometry single(1, 1, 0.3, 0.7);
  CHECK(rsls::element_position(single, 0).isApprox(Eigen::Vector3d(0, 0, 0), 0.0));

  const UpaGeometry geom(2, 2, 0.25, 0.25);
  CHECK(rsls::element_position(geom, 1).isApprox(Eigen::Vector3d(0, 0, 0.25), 1e-15));
  CHECK(rsls::element_position(geom, 3).isApprox(Eigen::Vector3d(0, 0.25, 0.25), 1e-15));

  CHECK_THROWS_AS(rsls::element_position(geom, 4), std::invalid_argument);
  CHECK_THROWS_AS(rsls::element_position(geom, -1), std::invalid_argument);
}

TEST_CASE("element positions are distinct over the index range") {
  const UpaGeometry geom(5, 3, 0.4, 0.6);
  std::set<std::pair<double, double>> seen;
  for (int n = 0; n < geom.size(); ++n) {
    const Eigen::Vector3d p = rsls::element_position(geom, n);
    CHECK(p.x() == 0.0);
    seen.insert({p.y(), p.z()});
  }
  CHECK(seen.size() == static_cast<std::size_t>(geom.size()));
}

TEST_CASE("steering vector at broadside is all ones") {
  const UpaGeometry geom(3, 4, 0.5, 0.25);
  const Eigen::VectorXcd a = rsls::steering_vector(geom, Direction(0.0, 0.0));
  CHECK((a - Eigen::VectorXcd::Ones(geom.size())).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("half-wavelength pair flips sign at endfire") {
  const UpaGeometry geom(2, 1, 0.5, 0.5);
  const Eigen::VectorXcd a = rsls::steering_vector(geom, Direction(kPi / 2.0, 0.0));
  CHECK(std::abs(a(0) - std::complex<double>(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(a(1) - std::complex<double>(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("steering vectors have unit-modulus entries and norm sqrt(N)") {
  rsls::Rng rng(42);
  for (int repeat = 0; repeat < 20; ++repeat) {
    const UpaGeometry geom(1 + static_cast<int>(rng.next_u64() % 6),
                           1 + static_cast<int>(rng.next_u64() % 6),
                           0.1 + 0.5 * rng.uniform(), 0.1 + 0.5 * rng.uniform());
    const Direction dir(kPi * (rng.uniform() - 0.5), kPi * (rng.uniform() - 0.5));
    const Eigen::VectorXcd a = rsls::steering_vector(geom, dir);
    for (int n = 0; n < geom.size(); ++n) {
      CHECK(std::abs(std::abs(a(n)) - 1.0) < 1e-12);
    }
    CHECK(a.squaredNorm() == doctest::Approx(geom.size()).epsilon(1e-12));
  }
}

TEST_CASE("negating azimuth at zero elevation conjugates the steering vector") {
  rsls::Rng rng(7);
  const UpaGeometry geom(4, 3, 0.3, 0.45);
  for (int repeat = 0; repeat < 10; ++repeat) {
    const double az = kPi * (rng.uniform() - 0.5);
    const Eigen::VectorXcd a = rsls::steering_vector(geom, Direction(az, 0.0));
    const Eigen::VectorXcd b = rsls::steering_vector(geom, Direction(-az, 0.0));
    CHECK((b - a.conjugate()).norm() < 1e-12);
  }
}

TEST_CASE("invalid geometries and directions are rejected") {
  CHECK_THROWS_AS(UpaGeometry(0, 1, 0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(UpaGeometry(1, 1, 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(UpaGeometry(1, 1, 0.5, -0.25), std::invalid_argument);
  CHECK_THROWS_AS(Direction(1.8, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Direction(0.0, -1.8), std::invalid_argument);
}
