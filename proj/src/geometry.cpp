// SPDX-License-Identifier: Apache-2.0

#include "rsls/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rsls {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kHalfPi = kPi / 2.0;
}  // namespace

UpaGeometry::UpaGeometry(int nh, int nv, double sh, double sv)
    : num_h(nh), num_v(nv), spacing_h(sh), spacing_v(sv) {
  if (nh < 1 || nv < 1) {
    throw std::invalid_argument("UpaGeometry: antenna counts must be >= 1");
  }
  if (!(sh > 0.0) || !(sv > 0.0) || !std::isfinite(sh) || !std::isfinite(sv)) {
    throw std::invalid_argument("UpaGeometry: spacings must be positive and finite");
  }
}

Direction::Direction(double az, double el) : azimuth(az), elevation(el) {
  if (!(az >= -kHalfPi && az <= kHalfPi) || !(el >= -kHalfPi && el <= kHalfPi)) {
    throw std::invalid_argument("Direction: angles must lie in [-pi/2, pi/2]");
  }
}

Eigen::Vector3d element_position(const UpaGeometry& geom, int index) {
  if (index < 0 || index >= geom.size()) {
    throw std::invalid_argument("element_position: index " + std::to_string(index) +
                                " out of range [0, " + std::to_string(geom.size()) + ")");
  }
  const int h = index / geom.num_v;
  const int v = index % geom.num_v;
  return {0.0, h * geom.spacing_h, v * geom.spacing_v};
}

Eigen::VectorXcd steering_vector(const UpaGeometry& geom, const Direction& dir) {
  const double ky = std::sin(dir.azimuth) * std::cos(dir.elevation);
  const double kz = std::sin(dir.elevation);
  Eigen::VectorXcd response(geom.size());
  for (int n = 0; n < geom.size(); ++n) {
    const Eigen::Vector3d p = element_position(geom, n);
    const double phase = 2.0 * kPi * (p.y() * ky + p.z() * kz);
    response(n) = std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return response;
}

}  // namespace rsls
