#ifndef PREM_DECOMPOSE_H_
#define PREM_DECOMPOSE_H_

// Hamming-weight band decomposition R = sum_j R_j, where band j holds exactly
// the entries R_{row,col} with w(row XOR col) = j. Band 0 is the diagonal.
// Bands are stored as coordinate lists sorted by (col, row) and are never
// densified on the mitigation paths.

#include <cstdint>
#include <span>
#include <vector>

#include "prem/bitspace.h"
#include "prem/response.h"

namespace prem {

struct BandEntry {
  std::uint32_t row;
  std::uint32_t col;
  double value;

  friend bool operator==(const BandEntry&, const BandEntry&) = default;
};

class WeightBand {
 public:
  // Sorts entries by (col, row); throws ValidationError if any coordinate is
  // out of range, sits at the wrong XOR distance, or repeats.
  WeightBand(int n, int j, std::vector<BandEntry> entries);

  int num_qubits() const { return n_; }
  int order() const { return j_; }
  std::span<const BandEntry> entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }

  // Entries whose column equals `col`.
  std::span<const BandEntry> column(std::uint32_t col) const;

  // y += band * x.
  void multiply_add(const Vector& x, Vector& y) const;

 private:
  int n_;
  int j_;
  std::vector<BandEntry> entries_;
};

class BandDecomposition {
 public:
  // Bands must be given for j = 0 .. bands.size() - 1 in order. Throws
  // SingularError when a diagonal entry is missing or not strictly positive.
  BandDecomposition(int n, std::vector<WeightBand> bands);

  int num_qubits() const { return n_; }
  int max_order() const { return static_cast<int>(bands_.size()) - 1; }
  const WeightBand& band(int j) const { return bands_.at(static_cast<std::size_t>(j)); }
  std::span<const WeightBand> bands() const { return bands_; }
  // Band-0 entries in natural order.
  const Vector& diagonal() const { return diagonal_; }

 private:
  int n_;
  std::vector<WeightBand> bands_;
  Vector diagonal_;
};

// Splits a dense response matrix into bands 0..w_max; entries farther than
// w_max and exact zeros are dropped.
BandDecomposition decompose(const ResponseMatrix& r, int w_max);

// Builds the same bands directly from tensor factors without materializing R,
// usable beyond the dense qubit limit.
BandDecomposition decompose_tensor(std::span<const SingleQubitResponse> factors,
                                   int w_max);

// 2^n C(n, j), the entry count of a fully populated band j.
std::uint64_t band_nnz_bound(int n, int j);

// s_j = 2^{-n} C(n, j).
double sparsity(int n, int j);

// Dense sum of bands 0..w.
Matrix reassemble(const BandDecomposition& bands, int w);

// (sum_{j<=w} R_j) v.
Vector band_matvec(const BandDecomposition& bands, int w, const Vector& v);

// R_0^{-1} v.
Vector apply_r0_inverse(const BandDecomposition& bands, const Vector& v);

}  // namespace prem

#endif  // PREM_DECOMPOSE_H_
