#include "prem/metrics.h"

#include <cmath>
#include <string>

#include "prem/errors.h"

namespace prem {

DiagonalObservable::DiagonalObservable(int n, Vector diagonal)
    : n_(n), diagonal_(std::move(diagonal)) {
  check_qubit_count(n);
  if (diagonal_.size() != static_cast<Eigen::Index>(dimension(n))) {
    throw DimensionError("observable diagonal has length " +
                         std::to_string(diagonal_.size()) + ", expected " +
                         std::to_string(dimension(n)));
  }
  if (!diagonal_.allFinite() || diagonal_.cwiseAbs().maxCoeff() > 1.0) {
    throw ValidationError("observable entries must lie in [-1, 1]");
  }
}

double trace_distance(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("trace_distance: lengths " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
  }
  return (a - b).cwiseAbs().sum();
}

double trace_distance(const ProbabilityVector& a, const ProbabilityVector& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw DimensionError("trace_distance: distributions over " +
                         std::to_string(a.num_qubits()) + " and " +
                         std::to_string(b.num_qubits()) + " qubits");
  }
  return trace_distance(a.values(), b.values());
}

double expectation(const DiagonalObservable& obs, const ProbabilityVector& p) {
  if (obs.num_qubits() != p.num_qubits()) {
    throw DimensionError("expectation: observable over " +
                         std::to_string(obs.num_qubits()) + " qubits, distribution over " +
                         std::to_string(p.num_qubits()));
  }
  return obs.diagonal().dot(p.values());
}

}  // namespace prem
