#include "prem/prior.h"

#include <cmath>
#include <string>

#include "prem/errors.h"
#include "prem/random.h"

namespace prem {

const char* to_string(PriorKind kind) {
  switch (kind) {
    case PriorKind::kGaussianOverflow: return "gaussian_overflow";
    case PriorKind::kTruncatedGaussian: return "truncated_gaussian";
    case PriorKind::kUniform: return "uniform";
    case PriorKind::kRandomUniform: return "random_uniform";
    case PriorKind::kPointMass: return "point_mass";
  }
  return "unknown";
}

PriorKind parse_prior_kind(std::string_view name) {
  for (PriorKind k : {PriorKind::kGaussianOverflow, PriorKind::kTruncatedGaussian,
                      PriorKind::kUniform, PriorKind::kRandomUniform,
                      PriorKind::kPointMass}) {
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown prior kind '" + std::string(name) + "'");
}

ProbabilityVector build_prior(const PriorSpec& spec, int n) {
  check_qubit_count(n);
  const std::size_t dim = dimension(n);
  Vector p(static_cast<Eigen::Index>(dim));
  switch (spec.kind) {
    case PriorKind::kUniform:
      p.setConstant(1.0 / static_cast<double>(dim));
      return ProbabilityVector(n, std::move(p), Flavor::kPrior);
    case PriorKind::kPointMass:
      if (spec.target >= dim) {
        throw ConfigError("point_mass target " + std::to_string(spec.target) +
                          " does not fit in " + std::to_string(n) + " qubits");
      }
      p.setZero();
      p(spec.target) = 1.0;
      return ProbabilityVector(n, std::move(p), Flavor::kPrior);
    case PriorKind::kRandomUniform: {
      Rng rng(spec.seed);
      for (Eigen::Index j = 0; j < p.size(); ++j) p(j) = rng.uniform();
      break;
    }
    case PriorKind::kGaussianOverflow:
    case PriorKind::kTruncatedGaussian: {
      if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) {
        throw ConfigError("Gaussian prior needs sigma > 0");
      }
      const double sign = spec.decaying ? -1.0 : 1.0;
      const std::size_t half = dim / 2;
      for (std::size_t j = 0; j < dim; ++j) {
        const std::size_t shifted =
            spec.kind == PriorKind::kGaussianOverflow ? (j + half) % dim : j;
        const double x = std::ldexp(static_cast<double>(shifted), -n);
        const double z = (x - 0.5) / spec.sigma;
        p(static_cast<Eigen::Index>(j)) = std::exp(sign * z * z);
      }
      break;
    }
  }
  p /= p.sum();
  return ProbabilityVector(n, std::move(p), Flavor::kPrior);
}

}  // namespace prem
