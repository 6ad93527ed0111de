// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rsls/correlation.hpp"

namespace rsls {

// Semi-unitary basis of a reduced channel subspace (rank columns in an
// ambient_dim-dimensional space).
class Subspace {
 public:
  explicit Subspace(Eigen::MatrixXcd basis);

  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int rank() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXcd& basis() const { return basis_; }

  // Orthogonal projector U U^H onto the subspace.
  Eigen::MatrixXcd projector() const { return basis_ * basis_.adjoint(); }

 private:
  Eigen::MatrixXcd basis_;
};

// Smallest r such that the largest r eigenvalues capture `capture` of the
// total eigenvalue sum. Negative inputs are clipped to zero.
int effective_rank(const Eigen::VectorXd& eigenvalues_nonincreasing, double capture);

// Span of the eigenvectors belonging to the effective_rank(.) largest
// eigenvalues of R.
Subspace dominant_subspace(const CorrelationMatrix& correlation, double capture);

// Kronecker product basis (receive x transmit); ranks and ambient
// dimensions multiply, semi-unitarity is inherited.
Subspace kron_subspace(const Subspace& receive, const Subspace& transmit);

// Sequentially projects each basis onto the orthogonal complement of the
// previously produced ones, re-orthonormalizes, and drops directions whose
// post-projection norm falls below `tolerance`. A fully annihilated
// subspace raises DegenerateClusterError.
std::vector<Subspace> orthogonalize_chain(const std::vector<Subspace>& subspaces,
                                          double tolerance = 1e-8);

// Projection of `sub` onto `onto`, re-orthonormalized; directions with
// projected norm below `drop_tolerance` are removed.
Subspace project_subspace(const Subspace& sub, const Subspace& onto,
                          double drop_tolerance = 1e-3);

}  // namespace rsls
