#include "prem/response.h"

#include <cmath>
#include <string>

#include "prem/errors.h"
#include "prem/random.h"

namespace prem {

SingleQubitResponse::SingleQubitResponse(const Eigen::Matrix2d& m) : m_(m) {
  for (int c = 0; c < 2; ++c) {
    for (int r = 0; r < 2; ++r) {
      const double v = m(r, c);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw ValidationError("single-qubit response entry (" + std::to_string(r) +
                              "," + std::to_string(c) + ") = " + std::to_string(v) +
                              " outside [0, 1]");
      }
    }
    if (std::abs(m(0, c) + m(1, c) - 1.0) > kFactorTolerance) {
      throw ValidationError("single-qubit response column " + std::to_string(c) +
                            " does not sum to 1");
    }
  }
}

SingleQubitResponse SingleQubitResponse::from_rates(double relaxation,
                                                    double excitation) {
  Eigen::Matrix2d m;
  m << 1.0 - excitation, relaxation,
       excitation, 1.0 - relaxation;
  return SingleQubitResponse(m);
}

ResponseMatrix::ResponseMatrix(int n, Matrix data, Provenance provenance)
    : n_(n), data_(std::move(data)), provenance_(std::move(provenance)) {
  check_qubit_count(n);
  if (n > kMaxDenseQubits) {
    throw RangeError("dense response matrices are limited to " +
                     std::to_string(kMaxDenseQubits) + " qubits");
  }
  const auto dim = static_cast<Eigen::Index>(dimension(n));
  if (data_.rows() != dim || data_.cols() != dim) {
    throw DimensionError("response matrix is " + std::to_string(data_.rows()) + "x" +
                         std::to_string(data_.cols()) + ", expected " +
                         std::to_string(dim) + "x" + std::to_string(dim));
  }
  for (Eigen::Index c = 0; c < dim; ++c) {
    double sum = 0.0;
    for (Eigen::Index r = 0; r < dim; ++r) {
      const double v = data_(r, c);
      if (!std::isfinite(v) || v < 0.0) {
        throw ValidationError("response matrix entry (" + std::to_string(r) + "," +
                              std::to_string(c) + ") is negative or not finite");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kStochasticTolerance) {
      throw ValidationError("response matrix column " + std::to_string(c) +
                            " sums to " + std::to_string(sum));
    }
  }
}

const char* to_string(Flavor f) {
  switch (f) {
    case Flavor::kPrior: return "prior";
    case Flavor::kObserved: return "observed";
    case Flavor::kMitigated: return "mitigated";
  }
  return "unknown";
}

ProbabilityVector::ProbabilityVector(int n, Vector values, Flavor flavor)
    : n_(n), values_(std::move(values)), flavor_(flavor) {
  check_qubit_count(n);
  if (values_.size() != static_cast<Eigen::Index>(dimension(n))) {
    throw DimensionError("probability vector has length " +
                         std::to_string(values_.size()) + ", expected " +
                         std::to_string(dimension(n)));
  }
  if (!values_.allFinite()) {
    throw ValidationError("probability vector has non-finite entries");
  }
  if (flavor_ == Flavor::kMitigated) return;
  if (values_.minCoeff() < 0.0) {
    throw ValidationError(std::string(to_string(flavor_)) +
                          " distribution has negative entries");
  }
  if (std::abs(values_.sum() - 1.0) > kStochasticTolerance) {
    throw ValidationError(std::string(to_string(flavor_)) +
                          " distribution sums to " + std::to_string(values_.sum()));
  }
}

ResponseMatrix tensor_response(std::span<const SingleQubitResponse> factors) {
  const int n = static_cast<int>(factors.size());
  check_qubit_count(n);
  if (n > kMaxDenseQubits) {
    throw RangeError("dense response matrices are limited to " +
                     std::to_string(kMaxDenseQubits) + " qubits");
  }
  Matrix r = Matrix::Ones(1, 1);
  for (const auto& f : factors) {
    const Eigen::Index d = r.rows();
    Matrix next(2 * d, 2 * d);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        // New factor occupies the least significant bit.
        for (Eigen::Index c = 0; c < d; ++c) {
          for (Eigen::Index i = 0; i < d; ++i) {
            next(2 * i + a, 2 * c + b) = r(i, c) * f(a, b);
          }
        }
      }
    }
    r = std::move(next);
  }
  Provenance prov;
  prov.model = "tensor";
  prov.factors.assign(factors.begin(), factors.end());
  return ResponseMatrix(n, std::move(r), std::move(prov));
}

ResponseMatrix relaxation_only(int n, double q) {
  if (!(q >= 0.0 && q < 0.5)) {
    throw RangeError("relaxation rate q = " + std::to_string(q) + " outside [0, 0.5)");
  }
  check_qubit_count(n);
  std::vector<SingleQubitResponse> factors(static_cast<std::size_t>(n),
                                           SingleQubitResponse::from_rates(q, 0.0));
  ResponseMatrix built = tensor_response(factors);
  Provenance prov = built.provenance();
  prov.model = "relaxation_only";
  prov.rate = q;
  return ResponseMatrix(n, built.matrix(), std::move(prov));
}

std::vector<SingleQubitResponse> random_tensor_factors(int n, double q,
                                                       std::uint64_t seed) {
  if (!(q >= 0.0 && q <= 0.5)) {
    throw RangeError("random tensor rate q = " + std::to_string(q) +
                     " outside [0, 0.5]");
  }
  check_qubit_count(n);
  Rng rng(seed);
  std::vector<SingleQubitResponse> factors;
  factors.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double relaxation = rng.uniform(0.0, q);
    const double excitation = rng.uniform(0.0, q);
    factors.push_back(SingleQubitResponse::from_rates(relaxation, excitation));
  }
  return factors;
}

ResponseMatrix random_tensor(int n, double q, std::uint64_t seed) {
  ResponseMatrix built = tensor_response(random_tensor_factors(n, q, seed));
  Provenance prov = built.provenance();
  prov.model = "random_tensor";
  prov.seed = seed;
  prov.rate = q;
  return ResponseMatrix(n, built.matrix(), std::move(prov));
}

ProbabilityVector apply(const ResponseMatrix& r, const ProbabilityVector& prior) {
  if (r.num_qubits() != prior.num_qubits()) {
    throw DimensionError("apply: response over " + std::to_string(r.num_qubits()) +
                         " qubits, distribution over " +
                         std::to_string(prior.num_qubits()));
  }
  Vector observed = r.matrix() * prior.values();
  return ProbabilityVector(r.num_qubits(), std::move(observed), Flavor::kObserved);
}

double reciprocal_condition(const Eigen::PartialPivLU<Matrix>& lu) {
  const Vector pivots = lu.matrixLU().diagonal().cwiseAbs();
  if (pivots.size() == 0) return 1.0;
  if (!pivots.allFinite() || pivots.minCoeff() == 0.0) return 0.0;
  const double rc = lu.rcond();
  return std::isfinite(rc) ? rc : 0.0;
}

DenseSolve solve_dense(const Matrix& a, const Vector& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) {
    throw DimensionError("solve_dense: system is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " with rhs of length " +
                         std::to_string(b.size()));
  }
  DenseSolve out;
  Eigen::PartialPivLU<Matrix> lu(a);
  out.rcond = reciprocal_condition(lu);
  if (out.rcond >= kMinReciprocalCondition) {
    out.x = lu.solve(b);
    return out;
  }
  out.least_squares = true;
  out.x = a.completeOrthogonalDecomposition().solve(b);
  return out;
}

DenseMitigation dense_invert_mitigate(const ResponseMatrix& r,
                                      const ProbabilityVector& observed) {
  if (r.num_qubits() != observed.num_qubits()) {
    throw DimensionError("dense_invert_mitigate: response over " +
                         std::to_string(r.num_qubits()) + " qubits, distribution over " +
                         std::to_string(observed.num_qubits()));
  }
  DenseSolve s = solve_dense(r.matrix(), observed.values());
  return DenseMitigation{
      ProbabilityVector(r.num_qubits(), std::move(s.x), Flavor::kMitigated),
      s.least_squares, s.rcond};
}

}  // namespace prem
