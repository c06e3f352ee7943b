#ifndef PREM_MITIGATE_FULL_H_
#define PREM_MITIGATE_FULL_H_

// Full-distribution mitigation from the band decomposition.
//
// With S = -sum_{j=1..w} R_0^{-1} R_j, the truncated Neumann estimate is
//   p~ = sum_{k=0..w} S^k R_0^{-1} p'
// evaluated with sparse band products only. When ||S|| >= 1 the direct
// variant solves (sum_{j<=w} R_j) p~ = p' densely instead.

#include <optional>
#include <vector>

#include "prem/bitspace.h"
#include "prem/decompose.h"
#include "prem/response.h"

namespace prem {

enum class SeriesMode { kNeumann, kDirectInverse };

struct SeriesConfig {
  int w = 1;
  SeriesMode mode = SeriesMode::kNeumann;
  // Refuse the Neumann series when ||S||_1 >= 1.
  bool norm_guard = false;
  // Zero negative entries and renormalize the output.
  bool clip_negatives = false;
};

struct ConvergenceDiagnostic {
  // Induced 1-norm (max absolute column sum) of S.
  double norm_value = 0.0;
  bool converges = true;
  // ||R_0^{-1} R_j||_1 for j = 1..w (index 0 holds j = 1).
  std::vector<double> band_norms;
  std::optional<int> required_order;
};

ConvergenceDiagnostic convergence_norm(const BandDecomposition& bands, int w);

// Also fills required_order for the target accuracy epsilon at rate q.
ConvergenceDiagnostic convergence_norm(const BandDecomposition& bands, int w,
                                       double epsilon, double q);

// Smallest integer w >= ceil((log(1/eps) + log 2) / log(1/q)) - 1.
int required_order(double epsilon, double q);

struct SeriesResult {
  ProbabilityVector mitigated;
  ConvergenceDiagnostic diagnostic;
  bool least_squares = false;
};

// Algorithm: v <- R_0^{-1} p'; p~ <- v; repeat w times { v <- S v; p~ += v }.
// Throws DivergenceError if cfg.norm_guard and ||S||_1 >= 1.
SeriesResult neumann_mitigate(const BandDecomposition& bands,
                              const ProbabilityVector& observed,
                              const SeriesConfig& cfg);

// Dense solve of (sum_{j<=w} R_j) p~ = p', falling back to least squares
// when the truncated sum is ill conditioned.
SeriesResult direct_truncated_mitigate(const BandDecomposition& bands, int w,
                                       const ProbabilityVector& observed,
                                       bool clip_negatives = false);

// Dispatches on cfg.mode.
SeriesResult mitigate_full(const BandDecomposition& bands,
                           const ProbabilityVector& observed,
                           const SeriesConfig& cfg);

// p~_target from the series restricted to the ball of radius w around
// target. Cost is cubic in the ball size at most.
double single_bitstring_mitigate(const BandDecomposition& bands, const BitIndex& target,
                                 int w, const ProbabilityVector& observed);

// Conjugates labels by XOR with target: out[x] = in[x ^ target].
ProbabilityVector relabel_for_target(const BitIndex& target,
                                     const ProbabilityVector& observed);
BandDecomposition relabel_bands(const BandDecomposition& bands, const BitIndex& target);

// Clip negatives to zero and renormalize.
Vector clip_and_renormalize(const Vector& v);

}  // namespace prem

#endif  // PREM_MITIGATE_FULL_H_
