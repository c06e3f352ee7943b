#include "prem/decompose.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "prem/errors.h"

namespace prem {

namespace {

bool column_major_less(const BandEntry& a, const BandEntry& b) {
  return a.col != b.col ? a.col < b.col : a.row < b.row;
}

void check_order(int n, int w, const char* what) {
  if (w < 0 || w > n) {
    throw RangeError(std::string(what) + " " + std::to_string(w) + " outside [0, " +
                     std::to_string(n) + "]");
  }
}

void check_length(int n, const Vector& v, const char* what) {
  if (v.size() != static_cast<Eigen::Index>(dimension(n))) {
    throw DimensionError(std::string(what) + ": vector has length " +
                         std::to_string(v.size()) + ", expected " +
                         std::to_string(dimension(n)));
  }
}

}  // namespace

WeightBand::WeightBand(int n, int j, std::vector<BandEntry> entries)
    : n_(n), j_(j), entries_(std::move(entries)) {
  check_qubit_count(n);
  check_order(n, j, "band index");
  const std::uint64_t dim = dimension(n);
  std::sort(entries_.begin(), entries_.end(), column_major_less);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const BandEntry& e = entries_[i];
    if (e.row >= dim || e.col >= dim) {
      throw ValidationError("band " + std::to_string(j) + " entry (" +
                            std::to_string(e.row) + "," + std::to_string(e.col) +
                            ") out of range");
    }
    if (weight(e.row ^ e.col) != j) {
      throw ValidationError("band " + std::to_string(j) + " entry (" +
                            std::to_string(e.row) + "," + std::to_string(e.col) +
                            ") has XOR distance " + std::to_string(weight(e.row ^ e.col)));
    }
    if (!std::isfinite(e.value)) {
      throw ValidationError("band " + std::to_string(j) + " has a non-finite entry");
    }
    if (i > 0 && entries_[i - 1].row == e.row && entries_[i - 1].col == e.col) {
      throw ValidationError("band " + std::to_string(j) + " repeats entry (" +
                            std::to_string(e.row) + "," + std::to_string(e.col) + ")");
    }
  }
}

std::span<const BandEntry> WeightBand::column(std::uint32_t col) const {
  auto lo = std::partition_point(entries_.begin(), entries_.end(),
                                 [col](const BandEntry& e) { return e.col < col; });
  auto hi = std::partition_point(lo, entries_.end(),
                                 [col](const BandEntry& e) { return e.col <= col; });
  return {lo, hi};
}

void WeightBand::multiply_add(const Vector& x, Vector& y) const {
  for (const BandEntry& e : entries_) y(e.row) += e.value * x(e.col);
}

BandDecomposition::BandDecomposition(int n, std::vector<WeightBand> bands)
    : n_(n), bands_(std::move(bands)) {
  check_qubit_count(n);
  if (bands_.empty()) {
    throw ValidationError("band decomposition needs at least band 0");
  }
  if (static_cast<int>(bands_.size()) > n + 1) {
    throw ValidationError("band decomposition has more than n + 1 bands");
  }
  for (std::size_t j = 0; j < bands_.size(); ++j) {
    if (bands_[j].num_qubits() != n || bands_[j].order() != static_cast<int>(j)) {
      throw ValidationError("band " + std::to_string(j) + " is mislabeled");
    }
  }
  const std::size_t dim = dimension(n);
  const WeightBand& b0 = bands_.front();
  if (b0.nnz() != dim) {
    throw SingularError("band 0 stores " + std::to_string(b0.nnz()) + " of " +
                        std::to_string(dim) + " diagonal entries; R_0 is not invertible");
  }
  diagonal_.resize(static_cast<Eigen::Index>(dim));
  for (const BandEntry& e : b0.entries()) {
    if (!(e.value > 0.0)) {
      throw SingularError("diagonal entry " + std::to_string(e.row) +
                          " is not positive; R_0 is not invertible");
    }
    diagonal_(e.row) = e.value;
  }
}

BandDecomposition decompose(const ResponseMatrix& r, int w_max) {
  const int n = r.num_qubits();
  check_order(n, w_max, "w_max");
  const auto dim = static_cast<std::uint32_t>(dimension(n));
  std::vector<std::vector<BandEntry>> buckets(static_cast<std::size_t>(w_max) + 1);
  for (std::uint32_t c = 0; c < dim; ++c) {
    for (std::uint32_t row = 0; row < dim; ++row) {
      const int j = weight(row ^ c);
      if (j > w_max) continue;
      const double v = r(row, c);
      if (v == 0.0) continue;
      buckets[static_cast<std::size_t>(j)].push_back({row, c, v});
    }
  }
  std::vector<WeightBand> bands;
  bands.reserve(buckets.size());
  for (std::size_t j = 0; j < buckets.size(); ++j) {
    bands.emplace_back(n, static_cast<int>(j), std::move(buckets[j]));
  }
  return BandDecomposition(n, std::move(bands));
}

BandDecomposition decompose_tensor(std::span<const SingleQubitResponse> factors,
                                   int w_max) {
  const int n = static_cast<int>(factors.size());
  check_qubit_count(n);
  check_order(n, w_max, "w_max");
  const auto dim = static_cast<std::uint32_t>(dimension(n));

  // Flip patterns grouped by weight.
  std::vector<std::vector<std::uint32_t>> patterns(static_cast<std::size_t>(w_max) + 1);
  for (int j = 0; j <= w_max; ++j) {
    const SubspaceSelector shell = ball_subspace(n, BitIndex(n, 0), j);
    for (std::uint32_t z : shell.members()) {
      if (weight(z) == j) patterns[static_cast<std::size_t>(j)].push_back(z);
    }
  }

  std::vector<std::vector<BandEntry>> buckets(patterns.size());
  for (std::size_t j = 0; j < patterns.size(); ++j) {
    buckets[j].reserve(static_cast<std::size_t>(dim) * patterns[j].size());
  }
  for (std::uint32_t c = 0; c < dim; ++c) {
    for (std::size_t j = 0; j < patterns.size(); ++j) {
      for (std::uint32_t z : patterns[j]) {
        const std::uint32_t row = c ^ z;
        double v = 1.0;
        for (int k = 0; k < n && v != 0.0; ++k) {
          v *= factors[static_cast<std::size_t>(k)](qubit_bit(row, k, n),
                                                    qubit_bit(c, k, n));
        }
        if (v != 0.0) buckets[j].push_back({row, c, v});
      }
    }
  }
  std::vector<WeightBand> bands;
  bands.reserve(buckets.size());
  for (std::size_t j = 0; j < buckets.size(); ++j) {
    bands.emplace_back(n, static_cast<int>(j), std::move(buckets[j]));
  }
  return BandDecomposition(n, std::move(bands));
}

std::uint64_t band_nnz_bound(int n, int j) {
  check_qubit_count(n);
  check_order(n, j, "band index");
  return (std::uint64_t{1} << n) * binomial(n, j);
}

double sparsity(int n, int j) {
  check_qubit_count(n);
  check_order(n, j, "band index");
  return std::ldexp(static_cast<double>(binomial(n, j)), -n);
}

Matrix reassemble(const BandDecomposition& bands, int w) {
  if (w < 0 || w > bands.max_order()) {
    throw RangeError("reassemble: order " + std::to_string(w) +
                     " exceeds retained bands (w_max = " +
                     std::to_string(bands.max_order()) + ")");
  }
  const auto dim = static_cast<Eigen::Index>(dimension(bands.num_qubits()));
  Matrix out = Matrix::Zero(dim, dim);
  for (int j = 0; j <= w; ++j) {
    for (const BandEntry& e : bands.band(j).entries()) out(e.row, e.col) += e.value;
  }
  return out;
}

Vector band_matvec(const BandDecomposition& bands, int w, const Vector& v) {
  if (w < 0 || w > bands.max_order()) {
    throw RangeError("band_matvec: order " + std::to_string(w) +
                     " exceeds retained bands (w_max = " +
                     std::to_string(bands.max_order()) + ")");
  }
  check_length(bands.num_qubits(), v, "band_matvec");
  Vector y = Vector::Zero(v.size());
  for (int j = 0; j <= w; ++j) bands.band(j).multiply_add(v, y);
  return y;
}

Vector apply_r0_inverse(const BandDecomposition& bands, const Vector& v) {
  check_length(bands.num_qubits(), v, "apply_r0_inverse");
  const Vector& d = bands.diagonal();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(d(i) > 0.0)) {
      throw SingularError("R_0 has a zero diagonal entry at " + std::to_string(i));
    }
  }
  return v.cwiseQuotient(d);
}

}  // namespace prem
