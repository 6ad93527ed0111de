// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace rsls {

// Base class for domain errors raised by the library. Argument/precondition
// violations use std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Angular quadrature failed to converge within the node budget.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

// Pilot Gram matrix is rank deficient for a full least-squares solve.
class SingularPilotError : public Error {
 public:
  using Error::Error;
};

// Pilot does not excite the requested reduced subspace.
class PilotExcitationError : public Error {
 public:
  using Error::Error;
};

// A per-cluster Gram decomposition is inconsistent or unavailable.
class DecompositionError : public Error {
 public:
  using Error::Error;
};

// A cluster subspace was annihilated during orthogonalization.
class DegenerateClusterError : public Error {
 public:
  using Error::Error;
};

// Requested pilot length cannot realize the requested subspace ranks.
class InfeasiblePilotError : public Error {
 public:
  using Error::Error;
};

}  // namespace rsls
