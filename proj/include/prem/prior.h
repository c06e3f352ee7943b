#ifndef PREM_PRIOR_H_
#define PREM_PRIOR_H_

// Prior distributions used by the experiments.
//
// The two Gaussian shapes follow p_j ~ exp(s (x_j - 0.5)^2 / sigma^2) with
//   gaussian_overflow:  x_j = 2^{-n} ((j + 2^{n-1}) mod 2^n)
//   truncated_gaussian: x_j = 2^{-n} j
// The sign s is +1 unless `decaying` is set, in which case s = -1.

#include <cstdint>
#include <string_view>

#include "prem/response.h"

namespace prem {

enum class PriorKind {
  kGaussianOverflow,
  kTruncatedGaussian,
  kUniform,
  kRandomUniform,
  kPointMass,
};

const char* to_string(PriorKind kind);
// Throws ConfigError on unknown names.
PriorKind parse_prior_kind(std::string_view name);

struct PriorSpec {
  PriorKind kind = PriorKind::kUniform;
  double sigma = 0.25;
  bool decaying = false;
  std::uint64_t seed = 0;      // random_uniform
  std::uint32_t target = 0;    // point_mass

  friend bool operator==(const PriorSpec&, const PriorSpec&) = default;
};

ProbabilityVector build_prior(const PriorSpec& spec, int n);

}  // namespace prem

#endif  // PREM_PRIOR_H_
