// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

namespace rsls {

// Uniform planar array in the y-z plane, broadside along +x.
// Element spacings are expressed in wavelengths.
struct UpaGeometry {
  int num_h = 1;          // antennas per row (horizontal, y axis)
  int num_v = 1;          // antennas per column (vertical, z axis)
  double spacing_h = 0.5; // horizontal element spacing [wavelengths]
  double spacing_v = 0.5; // vertical element spacing [wavelengths]

  UpaGeometry(int nh, int nv, double sh, double sv);

  int size() const { return num_h * num_v; }

  bool operator==(const UpaGeometry&) const = default;
};

// Azimuth/elevation pair in radians, restricted to the front half-space.
struct Direction {
  double azimuth = 0.0;
  double elevation = 0.0;

  Direction(double az, double el);
};

// Position of an element in wavelengths. Elements are indexed column-major
// over the vertical axis: index = h * num_v + v.
Eigen::Vector3d element_position(const UpaGeometry& geom, int index);

// Array response for a plane wave from `dir`; entry n has unit modulus
// exp(i 2 pi (y_n sin(az) cos(el) + z_n sin(el))).
Eigen::VectorXcd steering_vector(const UpaGeometry& geom, const Direction& dir);

}  // namespace rsls
