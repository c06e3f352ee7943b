#include "prem/mitigate_zero.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "prem/errors.h"

namespace prem {

namespace {

void check_rate(double q, const char* what) {
  if (!(q >= 0.0 && q < 0.5)) {
    throw RangeError(std::string(what) + " = " + std::to_string(q) +
                     " outside [0, 0.5)");
  }
}

void check_rates(std::span<const double> rates) {
  if (rates.empty()) throw RangeError("rate list is empty");
  for (double q : rates) check_rate(q, "rate");
}

}  // namespace

TruncatedResponse truncate(const Matrix& r, int n, int w) {
  SubspaceSelector sel = weight_subspace(n, w);
  Matrix m = project_matrix(r, sel);
  return TruncatedResponse(std::move(sel), std::move(m));
}

TruncatedResponse truncate(const ResponseMatrix& r, int w) {
  return truncate(r.matrix(), r.num_qubits(), w);
}

Vector truncated_first_row(const TruncatedResponse& t) {
  const Matrix& m = t.matrix();
  Eigen::PartialPivLU<Matrix> lu(m.transpose());
  const double rcond = reciprocal_condition(lu);
  if (rcond < kMinReciprocalCondition) {
    throw SingularError("truncated response at w = " + std::to_string(t.order()) +
                        " is singular (rcond " + std::to_string(rcond) +
                        "); increase w or use the dense least-squares inversion");
  }
  Vector e0 = Vector::Zero(m.rows());
  e0(0) = 1.0;
  return lu.solve(e0);
}

double recover_p0(const TruncatedResponse& t, const ProbabilityVector& observed) {
  if (observed.num_qubits() != t.num_qubits()) {
    throw DimensionError("recover_p0: truncation over " + std::to_string(t.num_qubits()) +
                         " qubits, distribution over " +
                         std::to_string(observed.num_qubits()));
  }
  if (t.order() == 0) return observed[0];
  const Vector row = truncated_first_row(t);
  return row.dot(project_vector(observed.values(), t.selector()));
}

double theorem1_bound(double q, int w) {
  check_rate(q, "q");
  if (w < 0) throw RangeError("truncation order must be nonnegative");
  return std::pow(2.0 * q, w + 1);
}

double corollary2_bound(std::span<const double> rates, int w) {
  check_rates(rates);
  return theorem1_bound(*std::max_element(rates.begin(), rates.end()), w);
}

double first_row_magnitude(std::span<const double> rates, std::uint32_t j) {
  check_rates(rates);
  const int n = static_cast<int>(rates.size());
  if (j >= dimension(n)) throw RangeError("label exceeds rate list length");
  double mag = 1.0;
  for (int k = 0; k < n; ++k) {
    if (qubit_bit(j, k, n)) {
      const double q = rates[static_cast<std::size_t>(k)];
      mag *= q / (1.0 - q);
    }
  }
  return mag;
}

double corollary2_refined_bound(std::span<const double> rates, int w) {
  check_rates(rates);
  const int n = static_cast<int>(rates.size());
  if (w < 0) throw RangeError("truncation order must be nonnegative");
  if (w >= n) return 0.0;  // nothing is truncated
  std::vector<double> ratios;
  ratios.reserve(rates.size());
  for (double q : rates) ratios.push_back(q / (1.0 - q));
  std::sort(ratios.begin(), ratios.end(), std::greater<>());
  double bound = 1.0;
  for (int k = 0; k <= w; ++k) bound *= ratios[static_cast<std::size_t>(k)];
  return bound;
}

Vector first_row_closed_form(std::span<const double> rates, const SubspaceSelector& sel) {
  check_rates(rates);
  const int n = static_cast<int>(rates.size());
  if (sel.num_qubits() != n) {
    throw DimensionError("first_row_closed_form: " + std::to_string(n) +
                         " rates for a selector over " +
                         std::to_string(sel.num_qubits()) + " qubits");
  }
  Vector row(static_cast<Eigen::Index>(sel.size()));
  const auto members = sel.members();
  for (std::size_t i = 0; i < members.size(); ++i) {
    const double sign = weight(members[i]) % 2 == 0 ? 1.0 : -1.0;
    row(static_cast<Eigen::Index>(i)) = sign * first_row_magnitude(rates, members[i]);
  }
  return row;
}

Proposition1Result proposition1_check(const ResponseMatrix& r, int w, double tolerance) {
  Proposition1Result out;
  const int n = r.num_qubits();
  const SubspaceSelector full = full_space(n);
  const Matrix ordered = project_matrix(r.matrix(), full);
  out.applicable = ordered.triangularView<Eigen::StrictlyLower>().toDenseMatrix().isZero(0.0);

  const SubspaceSelector sel = weight_subspace(n, w);
  const Matrix inverse = r.matrix().inverse();
  const Matrix projected_inverse = project_matrix(inverse, sel);
  const Matrix inverse_of_projection = project_matrix(r.matrix(), sel).inverse();
  out.max_deviation = (projected_inverse - inverse_of_projection).cwiseAbs().maxCoeff();
  out.holds = out.max_deviation < tolerance;
  return out;
}

}  // namespace prem
