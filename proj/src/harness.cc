#include "prem/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>
#include <thread>

#include "prem/errors.h"
#include "prem/metrics.h"
#include "prem/mitigate_full.h"
#include "prem/mitigate_zero.h"
#include "prem/random.h"

namespace prem {

const char* to_string(Method m) {
  switch (m) {
    case Method::kZeroTruncated: return "zero_truncated";
    case Method::kFullNeumann: return "full_neumann";
    case Method::kFullDirect: return "full_direct";
    case Method::kSingleTarget: return "single_target";
  }
  return "unknown";
}

const char* to_string(ModelKind m) {
  switch (m) {
    case ModelKind::kRelaxationOnly: return "relaxation_only";
    case ModelKind::kRandomTensor: return "random_tensor";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kZeroTruncated, Method::kFullNeumann, Method::kFullDirect,
                   Method::kSingleTarget}) {
    if (name == to_string(m)) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

ModelKind parse_model(std::string_view name) {
  for (ModelKind m : {ModelKind::kRelaxationOnly, ModelKind::kRandomTensor}) {
    if (name == to_string(m)) return m;
  }
  throw ConfigError("unknown response model '" + std::string(name) + "'");
}

ReportFormat parse_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw ConfigError("unknown output format '" + std::string(name) + "'");
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.schema_version != kConfigSchemaVersion) {
    throw ConfigError("unsupported schema_version " + std::to_string(cfg.schema_version));
  }
  if (cfg.n.empty() || cfg.q.empty() || cfg.w.empty()) {
    throw ConfigError("n, q and w lists must be non-empty");
  }
  for (int n : cfg.n) {
    if (n < 1 || n > kMaxDenseQubits) {
      throw ConfigError("n = " + std::to_string(n) + " outside [1, " +
                        std::to_string(kMaxDenseQubits) + "]");
    }
  }
  for (double q : cfg.q) {
    const bool ok = cfg.model == ModelKind::kRelaxationOnly ? (q >= 0.0 && q < 0.5)
                                                            : (q >= 0.0 && q <= 0.5);
    if (!ok) {
      throw ConfigError("q = " + std::to_string(q) + " outside the range of model " +
                        to_string(cfg.model));
    }
  }
  const int n_min = *std::min_element(cfg.n.begin(), cfg.n.end());
  for (int w : cfg.w) {
    if (w < 0 || w > n_min) {
      throw ConfigError("w = " + std::to_string(w) + " outside [0, " +
                        std::to_string(n_min) + "]");
    }
  }
  if (cfg.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (cfg.target) {
    for (int n : cfg.n) {
      if (*cfg.target >= dimension(n)) {
        throw ConfigError("target " + std::to_string(*cfg.target) + " does not fit in " +
                          std::to_string(n) + " qubits");
      }
    }
  }
  if (cfg.prior.kind == PriorKind::kPointMass) {
    for (int n : cfg.n) {
      if (cfg.prior.target >= dimension(n)) {
        throw ConfigError("point_mass target does not fit in " + std::to_string(n) +
                          " qubits");
      }
    }
  }
  if (cfg.prior.kind == PriorKind::kGaussianOverflow ||
      cfg.prior.kind == PriorKind::kTruncatedGaussian) {
    if (!(cfg.prior.sigma > 0.0)) throw ConfigError("prior sigma must be > 0");
  }
}

json to_json(const ExperimentConfig& cfg) {
  json prior{{"kind", to_string(cfg.prior.kind)},
             {"sigma", cfg.prior.sigma},
             {"decaying", cfg.prior.decaying},
             {"target", cfg.prior.target}};
  json j{{"schema_version", cfg.schema_version},
         {"n", cfg.n},
         {"q", cfg.q},
         {"w", cfg.w},
         {"method", to_string(cfg.method)},
         {"model", to_string(cfg.model)},
         {"prior", std::move(prior)},
         {"seed", cfg.seed},
         {"repetitions", cfg.repetitions},
         {"norm_guard", cfg.norm_guard}};
  if (cfg.target) j["target"] = *cfg.target;
  return j;
}

namespace {

template <typename T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

template <typename T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("config lacks '") + key + "'");
  return field<T>(j, key, T{});
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  cfg.schema_version = required<int>(j, "schema_version");
  cfg.n = required<std::vector<int>>(j, "n");
  cfg.q = required<std::vector<double>>(j, "q");
  cfg.w = required<std::vector<int>>(j, "w");
  cfg.method = parse_method(required<std::string>(j, "method"));
  cfg.model = parse_model(field<std::string>(j, "model", to_string(cfg.model)));
  cfg.seed = field<std::uint64_t>(j, "seed", 0);
  cfg.repetitions = field<int>(j, "repetitions", 1);
  cfg.norm_guard = field<bool>(j, "norm_guard", false);
  if (j.contains("target")) cfg.target = field<std::uint32_t>(j, "target", 0);
  if (j.contains("prior")) {
    const json& p = j.at("prior");
    if (!p.is_object()) throw ConfigError("config field 'prior' must be an object");
    cfg.prior.kind = parse_prior_kind(required<std::string>(p, "kind"));
    cfg.prior.sigma = field<double>(p, "sigma", 0.25);
    cfg.prior.decaying = field<bool>(p, "decaying", false);
    cfg.prior.target = field<std::uint32_t>(p, "target", 0);
  }
  validate(cfg);
  return cfg;
}

bool has_flag(const MitigationReport& r, std::string_view flag) {
  return std::find(r.flags.begin(), r.flags.end(), flag) != r.flags.end();
}

std::uint64_t instance_seed(std::uint64_t base, std::size_t n_index, std::size_t q_index,
                            int rep) {
  return derive_seed(base, n_index, q_index, static_cast<std::uint64_t>(rep));
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void add_flag(MitigationReport& r, std::string_view flag) {
  if (!has_flag(r, flag)) r.flags.emplace_back(flag);
}

// Runs `body` and records library failures as flags on the report.
template <typename Body>
void guarded(MitigationReport& report, Body&& body) {
  try {
    body();
  } catch (const SingularError&) {
    add_flag(report, kFlagSingular);
  } catch (const DivergenceError&) {
    add_flag(report, kFlagDivergent);
  } catch (const Error&) {
    add_flag(report, kFlagError);
  }
}

std::optional<double> try_bound(double q, int w, double scale) {
  if (!(q >= 0.0 && q < 0.5)) return std::nullopt;
  return scale * theorem1_bound(q, w);
}

std::vector<MitigationReport> run_instance(const ExperimentConfig& cfg, std::size_t ni,
                                           std::size_t qi, int rep) {
  const int n = cfg.n[ni];
  const double q = cfg.q[qi];
  const std::uint64_t seed = instance_seed(cfg.seed, ni, qi, rep);

  const ResponseMatrix r = cfg.model == ModelKind::kRelaxationOnly
                               ? relaxation_only(n, q)
                               : random_tensor(n, q, seed);
  PriorSpec spec = cfg.prior;
  spec.seed = derive_seed(seed, 0x7072696f72ull);
  const ProbabilityVector prior = build_prior(spec, n);
  const ProbabilityVector observed = apply(r, prior);
  const DenseMitigation oracle = dense_invert_mitigate(r, observed);
  const Vector& reference = oracle.mitigated.values();

  MitigationReport base;
  base.n = n;
  base.q = q;
  base.method = cfg.method;
  base.prior = cfg.prior.kind;
  base.seed = seed;
  base.rep = rep;
  if (oracle.least_squares) base.flags.emplace_back(kFlagOracleLeastSquares);

  std::optional<BandDecomposition> bands;
  if (cfg.method != Method::kZeroTruncated) {
    const int w_max = *std::max_element(cfg.w.begin(), cfg.w.end());
    bands = decompose(r, std::max(w_max, 1));
  }
  const std::uint32_t target =
      cfg.target.value_or(static_cast<std::uint32_t>(dimension(n) - 1));

  std::vector<MitigationReport> out;
  out.reserve(cfg.w.size());
  for (int w : cfg.w) {
    MitigationReport rep_w = base;
    rep_w.w = w;
    switch (cfg.method) {
      case Method::kZeroTruncated: {
        rep_w.d_uncorrected = std::abs(observed[0] - reference(0));
        const double scale = cfg.model == ModelKind::kRelaxationOnly ? 1.0 : 2.0;
        rep_w.bound = try_bound(q, w, scale);
        guarded(rep_w, [&] {
          const auto start = Clock::now();
          const double estimate = recover_p0(truncate(r, w), observed);
          rep_w.time_ms = elapsed_ms(start);
          rep_w.d_mitigated = std::abs(estimate - reference(0));
        });
        break;
      }
      case Method::kFullNeumann:
      case Method::kFullDirect: {
        rep_w.d_uncorrected = trace_distance(reference, observed.values());
        if (w == 0) {
          rep_w.d_mitigated = rep_w.d_uncorrected;
          break;
        }
        if (cfg.method == Method::kFullNeumann) rep_w.bound = 2.0 * std::pow(q, w + 1);
        guarded(rep_w, [&] {
          SeriesConfig sc;
          sc.w = w;
          sc.mode = cfg.method == Method::kFullNeumann ? SeriesMode::kNeumann
                                                       : SeriesMode::kDirectInverse;
          sc.norm_guard = cfg.norm_guard;
          rep_w.norm_s = convergence_norm(*bands, w).norm_value;
          const auto start = Clock::now();
          const SeriesResult res = mitigate_full(*bands, observed, sc);
          rep_w.time_ms = elapsed_ms(start);
          rep_w.d_mitigated = trace_distance(reference, res.mitigated.values());
          if (res.least_squares) add_flag(rep_w, kFlagLeastSquares);
          if (!res.diagnostic.converges) add_flag(rep_w, kFlagNonConvergent);
        });
        break;
      }
      case Method::kSingleTarget: {
        rep_w.d_uncorrected = std::abs(observed[target] - reference(target));
        if (w == 0) {
          rep_w.d_mitigated = rep_w.d_uncorrected;
          break;
        }
        guarded(rep_w, [&] {
          rep_w.norm_s = convergence_norm(*bands, w).norm_value;
          const auto start = Clock::now();
          const double estimate =
              single_bitstring_mitigate(*bands, BitIndex(n, target), w, observed);
          rep_w.time_ms = elapsed_ms(start);
          rep_w.d_mitigated = std::abs(estimate - reference(target));
        });
        break;
      }
    }
    if (rep_w.d_mitigated && rep_w.bound && *rep_w.d_mitigated > *rep_w.bound) {
      add_flag(rep_w, kFlagBoundExceeded);
    }
    out.push_back(std::move(rep_w));
  }
  return out;
}

}  // namespace

std::vector<MitigationReport> run_sweep(const ExperimentConfig& cfg, int parallel) {
  validate(cfg);
  struct Slot {
    std::size_t ni, qi;
    int rep;
    std::vector<MitigationReport> reports;
    std::exception_ptr failure;
  };
  std::vector<Slot> slots;
  for (std::size_t ni = 0; ni < cfg.n.size(); ++ni) {
    for (std::size_t qi = 0; qi < cfg.q.size(); ++qi) {
      for (int rep = 0; rep < cfg.repetitions; ++rep) slots.push_back({ni, qi, rep, {}, {}});
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < slots.size(); i = next++) {
      Slot& s = slots[i];
      try {
        s.reports = run_instance(cfg, s.ni, s.qi, s.rep);
      } catch (...) {
        s.failure = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(parallel, 1, static_cast<int>(std::max<std::size_t>(slots.size(), 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const Slot& s : slots) {
    if (s.failure) std::rethrow_exception(s.failure);
  }

  // Slots are laid out (n, q, rep); emit in (n, q, w, rep) order.
  std::vector<MitigationReport> out;
  out.reserve(slots.size() * cfg.w.size());
  const auto reps = static_cast<std::size_t>(cfg.repetitions);
  for (std::size_t ni = 0; ni < cfg.n.size(); ++ni) {
    for (std::size_t qi = 0; qi < cfg.q.size(); ++qi) {
      const std::size_t first = (ni * cfg.q.size() + qi) * reps;
      for (std::size_t wi = 0; wi < cfg.w.size(); ++wi) {
        for (std::size_t rep = 0; rep < reps; ++rep) {
          out.push_back(slots[first + rep].reports[wi]);
        }
      }
    }
  }
  return out;
}

namespace {

// Shortest of %.15g / %.17g that reads back exactly.
std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

void write_csv(std::span<const MitigationReport> reports, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const MitigationReport& r : reports) {
    out << r.n << ',' << format_double(r.q) << ',' << r.w << ',' << to_string(r.method)
        << ',' << to_string(r.prior) << ',' << r.seed << ',' << r.rep << ','
        << format_double(r.d_uncorrected) << ',' << format_optional(r.d_mitigated) << ','
        << format_optional(r.bound) << ',' << format_optional(r.norm_s) << ','
        << format_double(r.time_ms) << ',' << join_flags(r.flags) << '\n';
  }
}

json reports_to_json(std::span<const MitigationReport> reports) {
  json arr = json::array();
  for (const MitigationReport& r : reports) {
    arr.push_back(json{{"n", r.n},
                       {"q", r.q},
                       {"w", r.w},
                       {"method", to_string(r.method)},
                       {"prior", to_string(r.prior)},
                       {"seed", r.seed},
                       {"rep", r.rep},
                       {"d_uncorrected", r.d_uncorrected},
                       {"d_mitigated", optional_json(r.d_mitigated)},
                       {"bound", optional_json(r.bound)},
                       {"norm_S", optional_json(r.norm_s)},
                       {"time_ms", r.time_ms},
                       {"flags", r.flags}});
  }
  return arr;
}

std::vector<MitigationReport> reports_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("report document must be a JSON array");
  std::vector<MitigationReport> out;
  out.reserve(j.size());
  try {
    for (const json& e : j) {
      MitigationReport r;
      r.n = e.at("n").get<int>();
      r.q = e.at("q").get<double>();
      r.w = e.at("w").get<int>();
      r.method = parse_method(e.at("method").get<std::string>());
      r.prior = parse_prior_kind(e.at("prior").get<std::string>());
      r.seed = e.at("seed").get<std::uint64_t>();
      r.rep = e.at("rep").get<int>();
      r.d_uncorrected = e.at("d_uncorrected").get<double>();
      r.d_mitigated = optional_from(e, "d_mitigated");
      r.bound = optional_from(e, "bound");
      r.norm_s = optional_from(e, "norm_S");
      r.time_ms = e.at("time_ms").get<double>();
      r.flags = e.at("flags").get<std::vector<std::string>>();
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed report document: ") + e.what());
  }
  return out;
}

void emit(std::span<const MitigationReport> reports, ReportFormat format,
          const std::filesystem::path& path) {
  if (format == ReportFormat::kJson) {
    write_json_file(path, reports_to_json(reports));
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(reports, out);
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace prem
