#ifndef PREM_HARNESS_H_
#define PREM_HARNESS_H_

// Experiment sweeps. Each (n, q, repetition) instance draws a response
// matrix and a prior, forms p' = R p, inverts densely for the reference, then
// runs the configured method for every truncation order w.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prem/prior.h"
#include "prem/serialize.h"

namespace prem {

inline constexpr int kConfigSchemaVersion = 1;

enum class Method { kZeroTruncated, kFullNeumann, kFullDirect, kSingleTarget };
enum class ModelKind { kRelaxationOnly, kRandomTensor };
enum class ReportFormat { kCsv, kJson };

const char* to_string(Method m);
const char* to_string(ModelKind m);
Method parse_method(std::string_view name);
ModelKind parse_model(std::string_view name);
ReportFormat parse_format(std::string_view name);

struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  std::vector<int> n;
  std::vector<double> q;
  std::vector<int> w;
  Method method = Method::kZeroTruncated;
  PriorSpec prior;
  ModelKind model = ModelKind::kRandomTensor;
  std::uint64_t seed = 0;
  int repetitions = 1;
  // single_target only; defaults to the all-ones label of each n.
  std::optional<std::uint32_t> target;
  bool norm_guard = false;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Throws ConfigError describing the first offending field.
void validate(const ExperimentConfig& cfg);

json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const json& j);

struct MitigationReport {
  int n = 0;
  double q = 0.0;
  int w = 0;
  Method method = Method::kZeroTruncated;
  PriorKind prior = PriorKind::kUniform;
  std::uint64_t seed = 0;  // seed of this instance's response matrix and prior
  int rep = 0;
  // Distances to the dense reference: trace distance for full-distribution
  // methods, |estimate - reference| of the single target probability otherwise.
  double d_uncorrected = 0.0;
  std::optional<double> d_mitigated;
  std::optional<double> bound;
  std::optional<double> norm_s;
  double time_ms = 0.0;
  std::vector<std::string> flags;

  friend bool operator==(const MitigationReport&, const MitigationReport&) = default;
};

// Report flags.
inline constexpr std::string_view kFlagLeastSquares = "lstsq";
inline constexpr std::string_view kFlagOracleLeastSquares = "oracle_lstsq";
inline constexpr std::string_view kFlagDivergent = "divergent";
inline constexpr std::string_view kFlagNonConvergent = "nonconvergent";
inline constexpr std::string_view kFlagSingular = "singular";
inline constexpr std::string_view kFlagBoundExceeded = "bound_exceeded";
inline constexpr std::string_view kFlagError = "error";

bool has_flag(const MitigationReport& r, std::string_view flag);

// Seed used for instance (n index, q index, repetition).
std::uint64_t instance_seed(std::uint64_t base, std::size_t n_index,
                            std::size_t q_index, int rep);

// Reports are ordered by (n, q, w, rep) following the config lists, whatever
// the degree of parallelism.
std::vector<MitigationReport> run_sweep(const ExperimentConfig& cfg, int parallel = 1);

inline constexpr std::string_view kCsvHeader =
    "n,q,w,method,prior,seed,rep,d_uncorrected,d_mitigated,bound,norm_S,time_ms,flags";

void write_csv(std::span<const MitigationReport> reports, std::ostream& out);
json reports_to_json(std::span<const MitigationReport> reports);
std::vector<MitigationReport> reports_from_json(const json& j);

void emit(std::span<const MitigationReport> reports, ReportFormat format,
          const std::filesystem::path& path);

}  // namespace prem

#endif  // PREM_HARNESS_H_
