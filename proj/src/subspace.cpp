// SPDX-License-Identifier: Apache-2.0

#include "rsls/subspace.hpp"

#include <stdexcept>
#include <string>

#include "rsls/errors.hpp"

namespace rsls {

namespace {

// Keep left singular vectors of `block` whose singular value is at least
// `tolerance`. The singular values are the norms of the orthonormal input
// combinations after projection, which is exactly the drop criterion.
Eigen::MatrixXcd orthonormal_part(const Eigen::MatrixXcd& block, double tolerance) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block, Eigen::ComputeThinU);
  int keep = 0;
  while (keep < svd.singularValues().size() && svd.singularValues()(keep) >= tolerance) {
    ++keep;
  }
  return svd.matrixU().leftCols(keep);
}

}  // namespace

Subspace::Subspace(Eigen::MatrixXcd basis) : basis_(std::move(basis)) {
  if (basis_.rows() < 1 || basis_.cols() < 1 || basis_.cols() > basis_.rows()) {
    throw std::invalid_argument("Subspace: basis must be tall with 1 <= rank <= ambient_dim");
  }
  const Eigen::MatrixXcd gram = basis_.adjoint() * basis_;
  const double deviation =
      (gram - Eigen::MatrixXcd::Identity(rank(), rank())).cwiseAbs().maxCoeff();
  if (deviation > 1e-10) {
    throw std::invalid_argument("Subspace: basis is not semi-unitary (max deviation " +
                                std::to_string(deviation) + ")");
  }
}

int effective_rank(const Eigen::VectorXd& eigenvalues_nonincreasing, double capture) {
  if (!(capture > 0.0 && capture < 1.0)) {
    throw std::invalid_argument("effective_rank: capture must lie in (0, 1)");
  }
  const Eigen::Index n = eigenvalues_nonincreasing.size();
  if (n < 1) {
    throw std::invalid_argument("effective_rank: empty spectrum");
  }
  Eigen::VectorXd clipped = eigenvalues_nonincreasing.cwiseMax(0.0);
  for (Eigen::Index i = 1; i < n; ++i) {
    if (clipped(i) > clipped(i - 1) + 1e-12 * clipped(0)) {
      throw std::invalid_argument("effective_rank: eigenvalues must be nonincreasing");
    }
  }
  const double total = clipped.sum();
  if (total <= 0.0) {
    throw std::invalid_argument("effective_rank: spectrum has no positive eigenvalue");
  }
  double partial = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    partial += clipped(r);
    if (partial >= capture * total) {
      return static_cast<int>(r + 1);
    }
  }
  return static_cast<int>(n);
}

Subspace dominant_subspace(const CorrelationMatrix& correlation, double capture) {
  const int r = effective_rank(correlation.eigenvalues(), capture);
  return Subspace(correlation.eigenvectors().leftCols(r));
}

Subspace kron_subspace(const Subspace& receive, const Subspace& transmit) {
  const Eigen::MatrixXcd& a = receive.basis();
  const Eigen::MatrixXcd& b = transmit.basis();
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return Subspace(std::move(out));
}

std::vector<Subspace> orthogonalize_chain(const std::vector<Subspace>& subspaces,
                                          double tolerance) {
  std::vector<Subspace> out;
  out.reserve(subspaces.size());
  Eigen::MatrixXcd accumulated;  // ambient x total, orthonormal columns
  for (std::size_t idx = 0; idx < subspaces.size(); ++idx) {
    const Subspace& sub = subspaces[idx];
    if (!subspaces.empty() && sub.ambient_dim() != subspaces.front().ambient_dim()) {
      throw std::invalid_argument("orthogonalize_chain: ambient dimensions differ");
    }
    Eigen::MatrixXcd block = sub.basis();
    // Two projection passes: a single pass leaves residues of order
    // eps/sigma in nearly-annihilated directions, which breaks
    // orthogonality after renormalization.
    for (int pass = 0; pass < 2; ++pass) {
      if (accumulated.cols() > 0) {
        block -= accumulated * (accumulated.adjoint() * block).eval();
      }
    }
    Eigen::MatrixXcd kept = orthonormal_part(block, tolerance);
    if (kept.cols() == 0) {
      throw DegenerateClusterError("orthogonalize_chain: subspace " + std::to_string(idx) +
                                   " is annihilated by the preceding subspaces");
    }
    if (accumulated.cols() > 0) {
      Eigen::MatrixXcd joined(kept.rows(), accumulated.cols() + kept.cols());
      joined << accumulated, kept;
      accumulated = std::move(joined);
    } else {
      accumulated = kept;
    }
    out.emplace_back(std::move(kept));
  }
  return out;
}

Subspace project_subspace(const Subspace& sub, const Subspace& onto, double drop_tolerance) {
  if (sub.ambient_dim() != onto.ambient_dim()) {
    throw std::invalid_argument("project_subspace: ambient dimensions differ");
  }
  const Eigen::MatrixXcd projected =
      onto.basis() * (onto.basis().adjoint() * sub.basis()).eval();
  Eigen::MatrixXcd kept = orthonormal_part(projected, drop_tolerance);
  if (kept.cols() == 0) {
    throw DegenerateClusterError("project_subspace: subspace is orthogonal to the target");
  }
  return Subspace(std::move(kept));
}

}  // namespace rsls
