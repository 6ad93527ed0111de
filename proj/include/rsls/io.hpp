// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <string>

#include "rsls/correlation.hpp"
#include "rsls/pilot.hpp"
#include "rsls/subspace.hpp"

namespace rsls {

// Binary container for complex matrices. Layout (all little-endian):
//   bytes 0-7   magic "RSLSMAT\0"
//   u32         format version (1)
//   u32         kind (0 generic, 1 correlation matrix, 2 subspace basis)
//   u64         rows
//   u64         cols
//   rows*cols complex entries, row-major, each as (re, im) float64
enum class MatrixKind : std::uint32_t { Generic = 0, Correlation = 1, Subspace = 2 };

void save_matrix(const std::string& path, const Eigen::MatrixXcd& matrix,
                 MatrixKind kind = MatrixKind::Generic);
Eigen::MatrixXcd load_matrix(const std::string& path, MatrixKind expected_kind);

void save_correlation(const std::string& path, const CorrelationMatrix& correlation);
CorrelationMatrix load_correlation(const std::string& path);

void save_subspace(const std::string& path, const Subspace& subspace);
Subspace load_subspace(const std::string& path);

// Pilot entries as CSV, row-major, one pilot symbol per line, each entry
// written as a "re,im" pair.
void save_pilot_csv(const std::string& path, const PilotMatrix& pilot);

}  // namespace rsls
