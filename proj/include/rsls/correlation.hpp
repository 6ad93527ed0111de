// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <memory>
#include <mutex>

#include "rsls/geometry.hpp"

namespace rsls {

// Rectangular angular region in azimuth x elevation, radians.
struct AngularRegion {
  double azimuth_min;
  double azimuth_max;
  double elevation_min;
  double elevation_max;

  AngularRegion(double az_min, double az_max, double el_min, double el_max);

  double area() const {
    return (azimuth_max - azimuth_min) * (elevation_max - elevation_min);
  }

  bool operator==(const AngularRegion&) const = default;
};

// Hermitian PSD spatial correlation matrix of a vectorized channel, with a
// lazily computed eigendecomposition cache (eigenvalues nonincreasing).
// Compute the cache once (first call to eigenvalues()/eigenvectors()) before
// sharing an instance across threads; it is immutable afterwards.
class CorrelationMatrix {
 public:
  explicit CorrelationMatrix(Eigen::MatrixXcd entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  double trace() const { return entries_.trace().real(); }

  // Eigenvalues sorted nonincreasing, paired with eigenvectors() columns.
  const Eigen::VectorXd& eigenvalues() const;
  const Eigen::MatrixXcd& eigenvectors() const;

 private:
  struct EigenCache {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
  };
  void ensure_eigen() const;

  Eigen::MatrixXcd entries_;
  mutable std::shared_ptr<const EigenCache> cache_;
  mutable std::shared_ptr<std::once_flag> once_{std::make_shared<std::once_flag>()};
};

// Spatial correlation under isotropic scattering over the front half-space
// with density cos(el)/(2 pi); dim N, unit diagonal, trace N. Entries equal
// sinc(2 d / lambda) for element distance d.
CorrelationMatrix isotropic_correlation(const UpaGeometry& geom);

// Spatial correlation for scattering uniformly distributed over `region`
// (uniform density in angle, no cosine weight); trace normalized to N.
CorrelationMatrix region_correlation(const UpaGeometry& geom, const AngularRegion& region);

}  // namespace rsls
