#ifndef PREM_BITSPACE_H_
#define PREM_BITSPACE_H_

// Bitstring index arithmetic over n-qubit computational basis labels.
//
// Bit convention: qubit 1 is the most significant bit of the integer label,
// so the string i_1 i_2 ... i_n reads left to right as a binary number. All
// tensor products in this library place the first factor on the most
// significant bit.

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace prem {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr int kMaxQubits = 24;

// Number of basis states 2^n.
inline std::size_t dimension(int n) { return std::size_t{1} << n; }

// Throws RangeError unless 1 <= n <= kMaxQubits.
void check_qubit_count(int n);

// Popcount of a raw label.
inline int weight(std::uint32_t x) { return std::popcount(x); }

// Bit of qubit `k` (0-based, qubit 0 is the most significant) in `x`.
inline int qubit_bit(std::uint32_t x, int k, int n) {
  return static_cast<int>((x >> (n - 1 - k)) & 1u);
}

// An n-qubit computational basis label.
class BitIndex {
 public:
  BitIndex(int n, std::uint32_t value);

  int num_qubits() const { return n_; }
  std::uint32_t value() const { return value_; }

  // Bitstring with qubit 1 first, e.g. "011" for (n=3, value=3).
  std::string to_string() const;

  friend bool operator==(const BitIndex&, const BitIndex&) = default;

 private:
  int n_;
  std::uint32_t value_;
};

int hamming_weight(const BitIndex& x);

// w(x XOR y). Throws DimensionError when the qubit counts differ.
int xor_distance(const BitIndex& x, const BitIndex& y);

// Binomial coefficient C(n, k); zero outside 0 <= k <= n.
std::uint64_t binomial(int n, int k);

// t_w = sum_{k<=w} C(n, k).
std::uint64_t weight_ball_size(int n, int w);

// All labels sorted by (weight, value), with the inverse permutation.
class WeightOrderedSpace {
 public:
  explicit WeightOrderedSpace(int n);

  int num_qubits() const { return n_; }
  std::span<const std::uint32_t> order() const { return order_; }
  // position(order()[a]) == a.
  std::uint32_t position(std::uint32_t label) const { return inverse_[label]; }

 private:
  int n_;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint32_t> inverse_;
};

// The XOR ball {m : w(m XOR center) <= radius}. Members are stored in weight
// order: ascending weight of the label, ties broken by ascending value.
class SubspaceSelector {
 public:
  int num_qubits() const { return n_; }
  std::uint32_t center() const { return center_; }
  int radius() const { return radius_; }
  std::span<const std::uint32_t> members() const { return members_; }
  std::size_t size() const { return members_.size(); }

  bool contains(std::uint32_t label) const {
    return weight(label ^ center_) <= radius_;
  }

  // Position of `label` within members(), or -1 when absent.
  std::ptrdiff_t local_index(std::uint32_t label) const;

 private:
  friend SubspaceSelector ball_subspace(int n, const BitIndex& center, int w);

  SubspaceSelector(int n, std::uint32_t center, int radius,
                   std::vector<std::uint32_t> members);

  int n_;
  std::uint32_t center_;
  int radius_;
  std::vector<std::uint32_t> members_;
};

// S_w: all labels of weight <= w.
SubspaceSelector weight_subspace(int n, int w);

// S_{center,w}: all labels within XOR distance w of `center`.
SubspaceSelector ball_subspace(int n, const BitIndex& center, int w);

// The full space in weight order (ball of radius n around zero).
SubspaceSelector full_space(int n);

// P A P^T: rows and columns of `a` (natural order) restricted to sel.
Matrix project_matrix(const Matrix& a, const SubspaceSelector& sel);

// P v: entries of `v` (natural order) restricted to sel.
Vector project_vector(const Vector& v, const SubspaceSelector& sel);

// Inverse of project_matrix for the full-space selector: scatters a
// weight-ordered matrix back into natural order.
Matrix unproject_full(const Matrix& projected, const SubspaceSelector& full);

}  // namespace prem

#endif  // PREM_BITSPACE_H_
