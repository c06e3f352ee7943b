#ifndef PREM_MITIGATE_ZERO_H_
#define PREM_MITIGATE_ZERO_H_

// All-zeros recovery from the response matrix projected onto low-weight
// labels: p0 ~= r_T . P_w p', where r_T is the first row of (P_w R P_w^T)^{-1}.

#include <span>

#include "prem/bitspace.h"
#include "prem/response.h"

namespace prem {

class TruncatedResponse {
 public:
  int num_qubits() const { return selector_.num_qubits(); }
  int order() const { return selector_.radius(); }
  const SubspaceSelector& selector() const { return selector_; }
  // t_w x t_w, rows and columns in weight order.
  const Matrix& matrix() const { return matrix_; }

 private:
  friend TruncatedResponse truncate(const ResponseMatrix& r, int w);
  friend TruncatedResponse truncate(const Matrix& r, int n, int w);

  TruncatedResponse(SubspaceSelector selector, Matrix matrix)
      : selector_(std::move(selector)), matrix_(std::move(matrix)) {}

  SubspaceSelector selector_;
  Matrix matrix_;
};

TruncatedResponse truncate(const ResponseMatrix& r, int w);
// Same projection for a raw matrix in natural order, e.g. a hardware-sampled
// block that is not normalized.
TruncatedResponse truncate(const Matrix& r, int n, int w);

// r_T, obtained from one solve of R_T^T x = e_0. Throws SingularError when
// rcond(R_T) < kMinReciprocalCondition.
Vector truncated_first_row(const TruncatedResponse& t);

// Estimate of p_0. At order 0 this is the uncorrected p'_0 by definition.
double recover_p0(const TruncatedResponse& t, const ProbabilityVector& observed);

// (2q)^{w+1} for the identical-rate relaxation-only model.
double theorem1_bound(double q, int w);

// (2 max_k q_k)^{w+1} for distinct-rate relaxation-only tensors.
double corollary2_bound(std::span<const double> rates, int w);

// |r_j| = prod_k (q_k / (1 - q_k))^{j_k}, rates[0] on the most significant bit.
double first_row_magnitude(std::span<const double> rates, std::uint32_t j);

// Largest |r_j| over labels of weight > w, i.e. the product of the w + 1
// largest ratios q_k / (1 - q_k). Never exceeds corollary2_bound.
double corollary2_refined_bound(std::span<const double> rates, int w);

// Signed first row of R^{-1} for a relaxation-only tensor, restricted to sel
// and ordered like sel.members(): r_j = prod_{k: j_k = 1} (-q_k / (1 - q_k)).
Vector first_row_closed_form(std::span<const double> rates, const SubspaceSelector& sel);

struct Proposition1Result {
  // R is upper triangular in weight order, which guarantees the identity.
  bool applicable = false;
  bool holds = false;
  double max_deviation = 0.0;
};

// Compares P_w R^{-1} P_w^T with (P_w R P_w^T)^{-1} entrywise.
Proposition1Result proposition1_check(const ResponseMatrix& r, int w,
                                      double tolerance = 1e-10);

}  // namespace prem

#endif  // PREM_MITIGATE_ZERO_H_
