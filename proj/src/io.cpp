// SPDX-License-Identifier: Apache-2.0

#include "rsls/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "rsls/errors.hpp"

namespace rsls {

namespace {

constexpr char kMagic[8] = {'R', 'S', 'L', 'S', 'M', 'A', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "binary container writer assumes a little-endian host");

template <typename T>
void write_raw(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  return value;
}

}  // namespace

void save_matrix(const std::string& path, const Eigen::MatrixXcd& matrix, MatrixKind kind) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("save_matrix: cannot open " + path);
  }
  out.write(kMagic, sizeof(kMagic));
  write_raw(out, kVersion);
  write_raw(out, static_cast<std::uint32_t>(kind));
  write_raw(out, static_cast<std::uint64_t>(matrix.rows()));
  write_raw(out, static_cast<std::uint64_t>(matrix.cols()));
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      write_raw(out, matrix(i, j).real());
      write_raw(out, matrix(i, j).imag());
    }
  }
  if (!out) {
    throw Error("save_matrix: write failed for " + path);
  }
}

Eigen::MatrixXcd load_matrix(const std::string& path, MatrixKind expected_kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("load_matrix: cannot open " + path);
  }
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error("load_matrix: " + path + " is not a matrix container");
  }
  const auto version = read_raw<std::uint32_t>(in);
  if (version != kVersion) {
    throw Error("load_matrix: unsupported container version in " + path);
  }
  const auto kind = read_raw<std::uint32_t>(in);
  if (kind != static_cast<std::uint32_t>(expected_kind)) {
    throw Error("load_matrix: unexpected matrix kind in " + path);
  }
  const auto rows = read_raw<std::uint64_t>(in);
  const auto cols = read_raw<std::uint64_t>(in);
  if (rows == 0 || cols == 0 || rows > (1u << 20) || cols > (1u << 20)) {
    throw Error("load_matrix: implausible dimensions in " + path);
  }
  Eigen::MatrixXcd matrix(rows, cols);
  for (std::uint64_t i = 0; i < rows; ++i) {
    for (std::uint64_t j = 0; j < cols; ++j) {
      const double re = read_raw<double>(in);
      const double im = read_raw<double>(in);
      matrix(i, j) = {re, im};
    }
  }
  if (!in) {
    throw Error("load_matrix: truncated container " + path);
  }
  return matrix;
}

void save_correlation(const std::string& path, const CorrelationMatrix& correlation) {
  save_matrix(path, correlation.entries(), MatrixKind::Correlation);
}

CorrelationMatrix load_correlation(const std::string& path) {
  return CorrelationMatrix(load_matrix(path, MatrixKind::Correlation));
}

void save_subspace(const std::string& path, const Subspace& subspace) {
  save_matrix(path, subspace.basis(), MatrixKind::Subspace);
}

Subspace load_subspace(const std::string& path) {
  return Subspace(load_matrix(path, MatrixKind::Subspace));
}

void save_pilot_csv(const std::string& path, const PilotMatrix& pilot) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw Error("save_pilot_csv: cannot open " + path);
  }
  char buf[64];
  for (Eigen::Index i = 0; i < pilot.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < pilot.entries.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g", pilot.entries(i, j).real(),
                    pilot.entries(i, j).imag());
      out << buf;
      if (j + 1 < pilot.entries.cols()) {
        out << ',';
      }
    }
    out << '\n';
  }
  if (!out) {
    throw Error("save_pilot_csv: write failed for " + path);
  }
}

}  // namespace rsls
