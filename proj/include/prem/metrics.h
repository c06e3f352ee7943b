#ifndef PREM_METRICS_H_
#define PREM_METRICS_H_

#include "prem/response.h"

namespace prem {

// Diagonal observable with entries in [-1, 1].
class DiagonalObservable {
 public:
  DiagonalObservable(int n, Vector diagonal);

  int num_qubits() const { return n_; }
  const Vector& diagonal() const { return diagonal_; }

 private:
  int n_;
  Vector diagonal_;
};

// sum_j |a_j - b_j|. Signed or unnormalized vectors are accepted as-is.
double trace_distance(const ProbabilityVector& a, const ProbabilityVector& b);
double trace_distance(const Vector& a, const Vector& b);

// E_O = sum_j O_j p_j.
double expectation(const DiagonalObservable& obs, const ProbabilityVector& p);

}  // namespace prem

#endif  // PREM_METRICS_H_
