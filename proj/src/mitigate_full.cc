#include "prem/mitigate_full.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "prem/errors.h"

namespace prem {

namespace {

void check_series_order(const BandDecomposition& bands, int w, bool allow_zero) {
  const int lo = allow_zero ? 0 : 1;
  if (w < lo || w > bands.max_order()) {
    throw RangeError("series order " + std::to_string(w) + " outside [" +
                     std::to_string(lo) + ", " + std::to_string(bands.max_order()) +
                     "] (retained bands)");
  }
}

void check_match(const BandDecomposition& bands, const ProbabilityVector& p) {
  if (bands.num_qubits() != p.num_qubits()) {
    throw DimensionError("bands over " + std::to_string(bands.num_qubits()) +
                         " qubits, distribution over " + std::to_string(p.num_qubits()));
  }
}

// v <- S v = -R_0^{-1} sum_{j=1..w} R_j v.
Vector apply_series_operator(const BandDecomposition& bands, int w, const Vector& v) {
  Vector y = Vector::Zero(v.size());
  for (int j = 1; j <= w; ++j) bands.band(j).multiply_add(v, y);
  return -y.cwiseQuotient(bands.diagonal());
}

ProbabilityVector finish(int n, Vector v, bool clip) {
  if (clip) v = clip_and_renormalize(v);
  return ProbabilityVector(n, std::move(v), Flavor::kMitigated);
}

}  // namespace

ConvergenceDiagnostic convergence_norm(const BandDecomposition& bands, int w) {
  check_series_order(bands, w, true);
  const Vector& d = bands.diagonal();
  ConvergenceDiagnostic diag;
  Vector total = Vector::Zero(d.size());
  for (int j = 1; j <= w; ++j) {
    Vector col = Vector::Zero(d.size());
    for (const BandEntry& e : bands.band(j).entries()) {
      col(e.col) += std::abs(e.value) / d(e.row);
    }
    diag.band_norms.push_back(col.size() > 0 ? col.maxCoeff() : 0.0);
    total += col;
  }
  diag.norm_value = total.size() > 0 ? total.maxCoeff() : 0.0;
  diag.converges = diag.norm_value < 1.0;
  return diag;
}

ConvergenceDiagnostic convergence_norm(const BandDecomposition& bands, int w,
                                       double epsilon, double q) {
  ConvergenceDiagnostic diag = convergence_norm(bands, w);
  diag.required_order = required_order(epsilon, q);
  return diag;
}

int required_order(double epsilon, double q) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw RangeError("target accuracy " + std::to_string(epsilon) + " outside (0, 1)");
  }
  if (!(q > 0.0 && q < 1.0)) {
    throw RangeError("rate " + std::to_string(q) + " outside (0, 1)");
  }
  const double x = (std::log(1.0 / epsilon) + std::log(2.0)) / std::log(1.0 / q);
  // Absorb rounding when x lands on an integer, e.g. epsilon = 2 q^k.
  const double nearest = std::round(x);
  const double c = std::abs(x - nearest) < 1e-9 ? nearest : std::ceil(x);
  return std::max(0, static_cast<int>(c) - 1);
}

SeriesResult neumann_mitigate(const BandDecomposition& bands,
                              const ProbabilityVector& observed,
                              const SeriesConfig& cfg) {
  if (cfg.mode != SeriesMode::kNeumann) {
    throw ConfigError("neumann_mitigate called with a non-Neumann mode");
  }
  check_match(bands, observed);
  check_series_order(bands, cfg.w, false);
  ConvergenceDiagnostic diag = convergence_norm(bands, cfg.w);
  if (cfg.norm_guard && !diag.converges) {
    throw DivergenceError("Neumann series refused: ||S||_1 = " +
                          std::to_string(diag.norm_value) + " >= 1 at w = " +
                          std::to_string(cfg.w));
  }
  Vector v = apply_r0_inverse(bands, observed.values());
  Vector estimate = v;
  for (int k = 1; k <= cfg.w; ++k) {
    v = apply_series_operator(bands, cfg.w, v);
    estimate += v;
  }
  return SeriesResult{finish(observed.num_qubits(), std::move(estimate), cfg.clip_negatives),
                      std::move(diag), false};
}

SeriesResult direct_truncated_mitigate(const BandDecomposition& bands, int w,
                                       const ProbabilityVector& observed,
                                       bool clip_negatives) {
  check_match(bands, observed);
  check_series_order(bands, w, true);
  if (bands.num_qubits() > kMaxDenseQubits) {
    throw RangeError("direct inversion is limited to " +
                     std::to_string(kMaxDenseQubits) + " qubits");
  }
  DenseSolve s = solve_dense(reassemble(bands, w), observed.values());
  ConvergenceDiagnostic diag = convergence_norm(bands, w);
  return SeriesResult{finish(observed.num_qubits(), std::move(s.x), clip_negatives),
                      std::move(diag), s.least_squares};
}

SeriesResult mitigate_full(const BandDecomposition& bands,
                           const ProbabilityVector& observed,
                           const SeriesConfig& cfg) {
  if (cfg.mode == SeriesMode::kDirectInverse) {
    return direct_truncated_mitigate(bands, cfg.w, observed, cfg.clip_negatives);
  }
  return neumann_mitigate(bands, observed, cfg);
}

double single_bitstring_mitigate(const BandDecomposition& bands, const BitIndex& target,
                                 int w, const ProbabilityVector& observed) {
  check_match(bands, observed);
  if (target.num_qubits() != bands.num_qubits()) {
    throw DimensionError("target label has " + std::to_string(target.num_qubits()) +
                         " qubits, bands have " + std::to_string(bands.num_qubits()));
  }
  check_series_order(bands, w, true);
  const int n = bands.num_qubits();
  const SubspaceSelector ball = ball_subspace(n, target, w);
  const auto members = ball.members();
  const auto size = static_cast<Eigen::Index>(members.size());

  std::unordered_map<std::uint32_t, std::uint32_t> local;
  local.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    local.emplace(members[i], static_cast<std::uint32_t>(i));
  }

  // Bands 1..w restricted to the ball, in local coordinates.
  struct LocalEntry {
    std::uint32_t row;
    std::uint32_t col;
    double value;
  };
  std::vector<LocalEntry> restricted;
  for (int j = 1; j <= w; ++j) {
    for (std::size_t c = 0; c < members.size(); ++c) {
      for (const BandEntry& e : bands.band(j).column(members[c])) {
        if (!ball.contains(e.row)) continue;
        restricted.push_back({local.at(e.row), static_cast<std::uint32_t>(c), e.value});
      }
    }
  }
  Vector d(size);
  Vector v(size);
  for (std::size_t i = 0; i < members.size(); ++i) {
    d(static_cast<Eigen::Index>(i)) = bands.diagonal()(members[i]);
    v(static_cast<Eigen::Index>(i)) = observed[members[i]];
  }
  v = v.cwiseQuotient(d);
  Vector estimate = v;
  for (int k = 1; k <= w; ++k) {
    Vector y = Vector::Zero(size);
    for (const LocalEntry& e : restricted) y(e.row) += e.value * v(e.col);
    v = -y.cwiseQuotient(d);
    estimate += v;
  }
  return estimate(local.at(target.value()));
}

ProbabilityVector relabel_for_target(const BitIndex& target,
                                     const ProbabilityVector& observed) {
  if (target.num_qubits() != observed.num_qubits()) {
    throw DimensionError("target label has " + std::to_string(target.num_qubits()) +
                         " qubits, distribution has " +
                         std::to_string(observed.num_qubits()));
  }
  const Vector& in = observed.values();
  Vector out(in.size());
  const std::uint32_t t = target.value();
  for (Eigen::Index x = 0; x < in.size(); ++x) {
    out(x) = in(static_cast<Eigen::Index>(static_cast<std::uint32_t>(x) ^ t));
  }
  return ProbabilityVector(observed.num_qubits(), std::move(out), observed.flavor());
}

BandDecomposition relabel_bands(const BandDecomposition& bands, const BitIndex& target) {
  if (target.num_qubits() != bands.num_qubits()) {
    throw DimensionError("target label has " + std::to_string(target.num_qubits()) +
                         " qubits, bands have " + std::to_string(bands.num_qubits()));
  }
  const std::uint32_t t = target.value();
  std::vector<WeightBand> out;
  out.reserve(bands.bands().size());
  for (const WeightBand& b : bands.bands()) {
    std::vector<BandEntry> entries;
    entries.reserve(b.nnz());
    for (const BandEntry& e : b.entries()) {
      entries.push_back({e.row ^ t, e.col ^ t, e.value});
    }
    out.emplace_back(b.num_qubits(), b.order(), std::move(entries));
  }
  return BandDecomposition(bands.num_qubits(), std::move(out));
}

Vector clip_and_renormalize(const Vector& v) {
  Vector out = v.cwiseMax(0.0);
  const double total = out.sum();
  if (!(total > 0.0)) {
    throw ValidationError("clipping removed all probability mass");
  }
  return out / total;
}

}  // namespace prem
