#ifndef PREM_RESPONSE_H_
#define PREM_RESPONSE_H_

// Response matrices R with R_ij = p(observed i | prepared j), probability
// vectors, and the dense reference inversion p = R^{-1} p'.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prem/bitspace.h"

namespace prem {

// Largest n for which a dense 2^n x 2^n matrix is materialized.
inline constexpr int kMaxDenseQubits = 14;

inline constexpr double kStochasticTolerance = 1e-10;
inline constexpr double kFactorTolerance = 1e-12;
// Direct solves switch to least squares when rcond drops below this.
inline constexpr double kMinReciprocalCondition = 1e-12;

// 2x2 column-stochastic matrix [[p(0|0), p(0|1)], [p(1|0), p(1|1)]].
class SingleQubitResponse {
 public:
  explicit SingleQubitResponse(const Eigen::Matrix2d& m);

  // [[1 - eta, eps], [eta, 1 - eps]]: eps is the 1->0 (relaxation) rate,
  // eta the 0->1 (excitation) rate.
  static SingleQubitResponse from_rates(double relaxation, double excitation);
  static SingleQubitResponse identity() { return from_rates(0.0, 0.0); }

  const Eigen::Matrix2d& matrix() const { return m_; }
  double operator()(int observed, int prepared) const { return m_(observed, prepared); }
  double relaxation() const { return m_(0, 1); }
  double excitation() const { return m_(1, 0); }

 private:
  Eigen::Matrix2d m_;
};

struct Provenance {
  std::string model;  // "tensor", "relaxation_only", "random_tensor", "file"
  std::vector<SingleQubitResponse> factors;
  std::optional<std::uint64_t> seed;
  std::optional<double> rate;
};

// Dense column-stochastic matrix in natural (numeric) index order.
class ResponseMatrix {
 public:
  // Validates shape, nonnegativity and column sums.
  ResponseMatrix(int n, Matrix data, Provenance provenance = {});

  int num_qubits() const { return n_; }
  const Matrix& matrix() const { return data_; }
  double operator()(std::uint32_t row, std::uint32_t col) const { return data_(row, col); }
  const Provenance& provenance() const { return provenance_; }

 private:
  int n_;
  Matrix data_;
  Provenance provenance_;
};

enum class Flavor { kPrior, kObserved, kMitigated };

const char* to_string(Flavor f);

// Length-2^n distribution. Prior and observed vectors are nonnegative and
// normalized; mitigated vectors are only required to be finite.
class ProbabilityVector {
 public:
  ProbabilityVector(int n, Vector values, Flavor flavor);

  int num_qubits() const { return n_; }
  Flavor flavor() const { return flavor_; }
  const Vector& values() const { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::uint32_t i) const { return values_(i); }
  double sum() const { return values_.sum(); }

 private:
  int n_;
  Vector values_;
  Flavor flavor_;
};

// Kronecker product with factors[0] acting on the most significant bit.
ResponseMatrix tensor_response(std::span<const SingleQubitResponse> factors);

// Tensor power of [[1, q], [0, 1 - q]], 0 <= q < 0.5.
ResponseMatrix relaxation_only(int n, double q);

// Per-qubit factors with relaxation and excitation rates drawn independently
// from Uniform(0, q) in qubit order, relaxation first.
std::vector<SingleQubitResponse> random_tensor_factors(int n, double q,
                                                       std::uint64_t seed);
ResponseMatrix random_tensor(int n, double q, std::uint64_t seed);

// p' = R p.
ProbabilityVector apply(const ResponseMatrix& r, const ProbabilityVector& prior);

struct DenseSolve {
  Vector x;
  bool least_squares = false;
  double rcond = 0.0;
};

// rcond estimate from a partial-pivot LU; 0 when a pivot is exactly zero,
// where Eigen's estimator is unreliable.
double reciprocal_condition(const Eigen::PartialPivLU<Matrix>& lu);

// Solves a x = b by LU when rcond(a) >= kMinReciprocalCondition, otherwise
// returns the minimum-norm least-squares solution.
DenseSolve solve_dense(const Matrix& a, const Vector& b);

struct DenseMitigation {
  ProbabilityVector mitigated;
  bool least_squares = false;
  double rcond = 0.0;
};

// Reference inversion of the full response matrix.
DenseMitigation dense_invert_mitigate(const ResponseMatrix& r,
                                      const ProbabilityVector& observed);

}  // namespace prem

#endif  // PREM_RESPONSE_H_
