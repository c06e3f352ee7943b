#include "prem/bitspace.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "prem/errors.h"

namespace prem {

void check_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw RangeError("qubit count " + std::to_string(n) + " outside [1, " +
                     std::to_string(kMaxQubits) + "]");
  }
}

BitIndex::BitIndex(int n, std::uint32_t value) : n_(n), value_(value) {
  check_qubit_count(n);
  if (value >= dimension(n)) {
    throw RangeError("label " + std::to_string(value) + " does not fit in " +
                     std::to_string(n) + " qubits");
  }
}

std::string BitIndex::to_string() const {
  std::string s(static_cast<std::size_t>(n_), '0');
  for (int k = 0; k < n_; ++k) {
    if (qubit_bit(value_, k, n_)) s[static_cast<std::size_t>(k)] = '1';
  }
  return s;
}

int hamming_weight(const BitIndex& x) { return weight(x.value()); }

int xor_distance(const BitIndex& x, const BitIndex& y) {
  if (x.num_qubits() != y.num_qubits()) {
    throw DimensionError("xor_distance: labels over " +
                         std::to_string(x.num_qubits()) + " and " +
                         std::to_string(y.num_qubits()) + " qubits");
  }
  return weight(x.value() ^ y.value());
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return c;
}

std::uint64_t weight_ball_size(int n, int w) {
  std::uint64_t total = 0;
  for (int k = 0; k <= std::min(w, n); ++k) total += binomial(n, k);
  return total;
}

namespace {

bool weight_less(std::uint32_t a, std::uint32_t b) {
  const int wa = weight(a);
  const int wb = weight(b);
  return wa != wb ? wa < wb : a < b;
}

void check_radius(int n, int w) {
  if (w < 0 || w > n) {
    throw RangeError("subspace radius " + std::to_string(w) + " outside [0, " +
                     std::to_string(n) + "]");
  }
}

}  // namespace

WeightOrderedSpace::WeightOrderedSpace(int n) : n_(n) {
  check_qubit_count(n);
  const std::size_t dim = dimension(n);
  order_.resize(dim);
  std::iota(order_.begin(), order_.end(), 0u);
  std::stable_sort(order_.begin(), order_.end(), weight_less);
  inverse_.resize(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    inverse_[order_[a]] = static_cast<std::uint32_t>(a);
  }
}

SubspaceSelector::SubspaceSelector(int n, std::uint32_t center, int radius,
                                   std::vector<std::uint32_t> members)
    : n_(n), center_(center), radius_(radius), members_(std::move(members)) {}

std::ptrdiff_t SubspaceSelector::local_index(std::uint32_t label) const {
  if (!contains(label)) return -1;
  // members_ is sorted by weight_less, so binary search applies.
  auto it = std::lower_bound(members_.begin(), members_.end(), label, weight_less);
  if (it == members_.end() || *it != label) return -1;
  return it - members_.begin();
}

SubspaceSelector ball_subspace(int n, const BitIndex& center, int w) {
  check_qubit_count(n);
  if (center.num_qubits() != n) {
    throw DimensionError("ball center has " +
                         std::to_string(center.num_qubits()) +
                         " qubits, expected " + std::to_string(n));
  }
  check_radius(n, w);

  // Enumerate flip patterns of weight <= w by Gosper's hack per weight class.
  std::vector<std::uint32_t> members;
  members.reserve(weight_ball_size(n, w));
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (int k = 0; k <= w; ++k) {
    if (k == 0) {
      members.push_back(center.value());
      continue;
    }
    std::uint64_t z = (std::uint64_t{1} << k) - 1;
    while (z < limit) {
      members.push_back(center.value() ^ static_cast<std::uint32_t>(z));
      const std::uint64_t c = z & (~z + 1);
      const std::uint64_t r = z + c;
      z = (((r ^ z) >> 2) / c) | r;
    }
  }
  std::sort(members.begin(), members.end(), weight_less);
  return SubspaceSelector(n, center.value(), w, std::move(members));
}

SubspaceSelector weight_subspace(int n, int w) {
  check_qubit_count(n);
  return ball_subspace(n, BitIndex(n, 0), w);
}

SubspaceSelector full_space(int n) { return weight_subspace(n, n); }

namespace {

void check_square(const Matrix& a, const SubspaceSelector& sel) {
  const auto dim = static_cast<Eigen::Index>(dimension(sel.num_qubits()));
  if (a.rows() != dim || a.cols() != dim) {
    throw DimensionError("matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", selector expects " +
                         std::to_string(dim));
  }
}

}  // namespace

Matrix project_matrix(const Matrix& a, const SubspaceSelector& sel) {
  check_square(a, sel);
  const auto m = sel.members();
  const auto size = static_cast<Eigen::Index>(m.size());
  Matrix out(size, size);
  for (Eigen::Index c = 0; c < size; ++c) {
    for (Eigen::Index r = 0; r < size; ++r) {
      out(r, c) = a(m[static_cast<std::size_t>(r)], m[static_cast<std::size_t>(c)]);
    }
  }
  return out;
}

Vector project_vector(const Vector& v, const SubspaceSelector& sel) {
  const auto dim = static_cast<Eigen::Index>(dimension(sel.num_qubits()));
  if (v.size() != dim) {
    throw DimensionError("vector has length " + std::to_string(v.size()) +
                         ", selector expects " + std::to_string(dim));
  }
  const auto m = sel.members();
  Vector out(static_cast<Eigen::Index>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = v(m[i]);
  }
  return out;
}

Matrix unproject_full(const Matrix& projected, const SubspaceSelector& full) {
  const auto dim = static_cast<Eigen::Index>(dimension(full.num_qubits()));
  if (full.size() != static_cast<std::size_t>(dim)) {
    throw DimensionError("unproject_full requires the full-space selector");
  }
  if (projected.rows() != dim || projected.cols() != dim) {
    throw DimensionError("projected matrix does not match selector size");
  }
  const auto m = full.members();
  Matrix out(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      out(m[static_cast<std::size_t>(r)], m[static_cast<std::size_t>(c)]) = projected(r, c);
    }
  }
  return out;
}

}  // namespace prem
