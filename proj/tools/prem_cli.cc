// prem: command-line front end for readout-error mitigation experiments.
//
// Exit codes: 0 success, 1 configuration/input error, 2 numerical failure,
// 3 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prem/decompose.h"
#include "prem/errors.h"
#include "prem/harness.h"
#include "prem/mitigate_full.h"
#include "prem/mitigate_zero.h"
#include "prem/prior.h"
#include "prem/random.h"
#include "prem/serialize.h"

namespace fs = std::filesystem;
using prem::json;

namespace {

enum ExitCode { kOk = 0, kConfigFailure = 1, kNumericalFailure = 2, kIoFailure = 3 };

void write_output(const std::optional<std::string>& out, const json& doc) {
  if (out) {
    prem::write_json_file(*out, doc);
  } else {
    std::cout << doc.dump(2) << '\n';
  }
}

prem::BandDecomposition load_bands(const std::optional<std::string>& response,
                                   const std::vector<std::string>& band_files, int w) {
  if (response && !band_files.empty()) {
    throw prem::ConfigError("give either --response or --bands, not both");
  }
  if (response) {
    const prem::ResponseMatrix r = prem::response_from_json(prem::read_json_file(*response));
    return prem::decompose(r, w);
  }
  if (band_files.empty()) throw prem::ConfigError("one of --response or --bands is required");
  std::vector<json> docs;
  for (const auto& f : band_files) docs.push_back(prem::read_json_file(f));
  return prem::bands_from_json(docs);
}

std::uint32_t parse_label(const std::string& text) {
  try {
    std::size_t used = 0;
    unsigned long v = 0;
    if (text.rfind("0b", 0) == 0) {
      v = std::stoul(text.substr(2), &used, 2);
      used += 2;
    } else {
      v = std::stoul(text, &used, 10);
    }
    if (used != text.size()) throw std::invalid_argument(text);
    return static_cast<std::uint32_t>(v);
  } catch (const std::logic_error&) {
    throw prem::ConfigError("cannot parse label '" + text +
                            "' (use a decimal integer or 0b-prefixed bits)");
  }
}

prem::ExperimentConfig load_config(const std::string& path) {
  return prem::config_from_json(prem::read_json_file(path));
}

void emit_reports(const std::vector<prem::MitigationReport>& reports,
                  const std::optional<std::string>& out, const std::string& format) {
  const prem::ReportFormat fmt = prem::parse_format(format);
  if (out) {
    prem::emit(reports, fmt, *out);
  } else if (fmt == prem::ReportFormat::kJson) {
    std::cout << prem::reports_to_json(reports).dump(2) << '\n';
  } else {
    prem::write_csv(reports, std::cout);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perturbative readout-error mitigation"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate R, p and p' fixtures");
  std::optional<std::string> sim_config;
  std::string sim_out;
  int sim_n = 4;
  double sim_q = 0.05;
  std::string sim_model = "random_tensor";
  std::string sim_prior = "random_uniform";
  double sim_sigma = 0.25;
  bool sim_decaying = false;
  std::uint32_t sim_target = 0;
  std::uint64_t sim_seed = 0;
  std::optional<int> sim_bands;
  simulate->add_option("--config", sim_config, "Take n, q, model and prior from a sweep config");
  simulate->add_option("--out", sim_out, "Output directory")->required();
  simulate->add_option("--n", sim_n, "Qubit count");
  simulate->add_option("--q", sim_q, "Characteristic rate");
  simulate->add_option("--model", sim_model, "relaxation_only | random_tensor");
  simulate->add_option("--prior", sim_prior, "Prior kind");
  simulate->add_option("--sigma", sim_sigma, "Gaussian prior width");
  simulate->add_flag("--decaying", sim_decaying, "Use exp(-(x-0.5)^2/sigma^2) for Gaussian priors");
  simulate->add_option("--point-target", sim_target, "Label for the point_mass prior");
  simulate->add_option("--seed", sim_seed, "Seed for R and the random prior");
  simulate->add_option("--bands", sim_bands, "Also write band files for j = 0..W");

  // mitigate-zero
  auto* zero = app.add_subcommand("mitigate-zero", "Recover p_0 from a truncated response");
  std::string zero_response, zero_observed;
  int zero_w = 1;
  std::optional<double> zero_q;
  std::optional<std::string> zero_out;
  zero->add_option("--response", zero_response, "Response matrix JSON")->required();
  zero->add_option("--observed", zero_observed, "Observed distribution JSON")->required();
  zero->add_option("--w", zero_w, "Truncation weight")->required();
  zero->add_option("--q", zero_q, "Rate for reporting the (2q)^(w+1) bound");
  zero->add_option("--out", zero_out, "Write the result JSON here");

  // mitigate-full
  auto* full = app.add_subcommand("mitigate-full", "Mitigate the full distribution");
  std::optional<std::string> full_response;
  std::vector<std::string> full_bands;
  std::string full_observed, full_mode = "neumann";
  int full_w = 1;
  bool full_guard = false, full_clip = false;
  std::optional<std::string> full_out;
  full->add_option("--response", full_response, "Response matrix JSON");
  full->add_option("--bands", full_bands, "Band JSON files");
  full->add_option("--observed", full_observed, "Observed distribution JSON")->required();
  full->add_option("--w", full_w, "Truncation order")->required();
  full->add_option("--mode", full_mode, "neumann | direct");
  full->add_flag("--norm-guard", full_guard, "Refuse a non-convergent series");
  full->add_flag("--clip", full_clip, "Clip negative probabilities and renormalize");
  full->add_option("--out", full_out, "Write the mitigated vector JSON here");

  // mitigate-target
  auto* target = app.add_subcommand("mitigate-target", "Mitigate one bitstring probability");
  std::optional<std::string> tgt_response;
  std::vector<std::string> tgt_bands;
  std::string tgt_observed, tgt_label, tgt_route = "ball";
  int tgt_w = 1;
  std::optional<std::string> tgt_out;
  target->add_option("--response", tgt_response, "Response matrix JSON");
  target->add_option("--bands", tgt_bands, "Band JSON files");
  target->add_option("--observed", tgt_observed, "Observed distribution JSON")->required();
  target->add_option("--target", tgt_label, "Label (decimal or 0b...)")->required();
  target->add_option("--w", tgt_w, "Truncation order")->required();
  target->add_option("--route", tgt_route, "ball | relabel");
  target->add_option("--out", tgt_out, "Write the result JSON here");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run an experiment sweep");
  std::string sweep_config;
  std::optional<std::string> sweep_out;
  std::string sweep_format = "csv";
  std::optional<std::uint64_t> sweep_seed;
  int sweep_parallel = 1;
  sweep->add_option("--config", sweep_config, "Sweep config JSON")->required();
  sweep->add_option("--out", sweep_out, "Report file (stdout if omitted)");
  sweep->add_option("--format", sweep_format, "csv | json");
  sweep->add_option("--seed", sweep_seed, "Override the config seed");
  sweep->add_option("--parallel", sweep_parallel, "Worker threads");

  // check-bounds
  auto* check = app.add_subcommand("check-bounds",
                                    "Check all-zeros recovery against its analytic bound");
  std::optional<std::string> check_config;
  std::optional<std::string> check_out;
  std::string check_format = "csv";
  std::optional<std::uint64_t> check_seed;
  int check_parallel = 1;
  check->add_option("--config", check_config, "Sweep config JSON (method is forced to zero_truncated)");
  check->add_option("--out", check_out, "Report file");
  check->add_option("--format", check_format, "csv | json");
  check->add_option("--seed", check_seed, "Override the config seed");
  check->add_option("--parallel", check_parallel, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigFailure;
  }

  try {
    if (simulate->parsed()) {
      prem::PriorSpec spec;
      prem::ModelKind model = prem::parse_model(sim_model);
      if (sim_config) {
        const prem::ExperimentConfig cfg = load_config(*sim_config);
        sim_n = cfg.n.front();
        sim_q = cfg.q.front();
        model = cfg.model;
        spec = cfg.prior;
        if (simulate->count("--seed") == 0) sim_seed = prem::instance_seed(cfg.seed, 0, 0, 0);
      } else {
        spec.kind = prem::parse_prior_kind(sim_prior);
        spec.sigma = sim_sigma;
        spec.decaying = sim_decaying;
        spec.target = sim_target;
      }
      spec.seed = prem::derive_seed(sim_seed, 0x7072696f72ull);
      const prem::ResponseMatrix r = model == prem::ModelKind::kRelaxationOnly
                                         ? prem::relaxation_only(sim_n, sim_q)
                                         : prem::random_tensor(sim_n, sim_q, sim_seed);
      const prem::ProbabilityVector prior = prem::build_prior(spec, sim_n);
      const prem::ProbabilityVector observed = prem::apply(r, prior);
      std::error_code ec;
      fs::create_directories(sim_out, ec);
      if (ec) throw prem::IoError("cannot create '" + sim_out + "': " + ec.message());
      const fs::path dir(sim_out);
      prem::write_json_file(dir / "response.json", prem::to_json(r));
      prem::write_json_file(dir / "prior.json", prem::to_json(prior));
      prem::write_json_file(dir / "observed.json", prem::to_json(observed));
      json summary{{"n", sim_n}, {"q", sim_q}, {"model", prem::to_string(model)},
                   {"prior", prem::to_string(spec.kind)}, {"seed", sim_seed}};
      if (sim_bands) {
        const prem::BandDecomposition bands = prem::decompose(r, *sim_bands);
        for (const auto& band : bands.bands()) {
          prem::write_json_file(dir / ("band_" + std::to_string(band.order()) + ".json"),
                                prem::to_json(band));
        }
        summary["bands"] = *sim_bands;
      }
      std::cout << summary.dump(2) << '\n';
    } else if (zero->parsed()) {
      const prem::ResponseMatrix r = prem::response_from_json(prem::read_json_file(zero_response));
      const prem::ProbabilityVector observed =
          prem::vector_from_json(prem::read_json_file(zero_observed));
      const prem::TruncatedResponse t = prem::truncate(r, zero_w);
      json result{{"w", zero_w},
                  {"t_w", t.selector().size()},
                  {"p0", prem::recover_p0(t, observed)},
                  {"p0_uncorrected", observed[0]}};
      if (zero_q) result["bound"] = prem::theorem1_bound(*zero_q, zero_w);
      write_output(zero_out, result);
    } else if (full->parsed()) {
      const prem::BandDecomposition bands = load_bands(full_response, full_bands, full_w);
      const prem::ProbabilityVector observed =
          prem::vector_from_json(prem::read_json_file(full_observed));
      prem::SeriesConfig cfg;
      cfg.w = full_w;
      if (full_mode == "neumann") {
        cfg.mode = prem::SeriesMode::kNeumann;
      } else if (full_mode == "direct") {
        cfg.mode = prem::SeriesMode::kDirectInverse;
      } else {
        throw prem::ConfigError("unknown mode '" + full_mode + "'");
      }
      cfg.norm_guard = full_guard;
      cfg.clip_negatives = full_clip;
      const prem::SeriesResult res = prem::mitigate_full(bands, observed, cfg);
      json diag{{"w", full_w},
                {"mode", full_mode},
                {"norm_S", res.diagnostic.norm_value},
                {"converges", res.diagnostic.converges},
                {"band_norms", res.diagnostic.band_norms},
                {"least_squares", res.least_squares},
                {"sum", res.mitigated.sum()}};
      if (full_out) {
        prem::write_json_file(*full_out, prem::to_json(res.mitigated));
      } else {
        diag["mitigated"] = prem::to_json(res.mitigated);
      }
      std::cout << diag.dump(2) << '\n';
    } else if (target->parsed()) {
      const prem::BandDecomposition bands = load_bands(tgt_response, tgt_bands, tgt_w);
      const prem::ProbabilityVector observed =
          prem::vector_from_json(prem::read_json_file(tgt_observed));
      const prem::BitIndex label(bands.num_qubits(), parse_label(tgt_label));
      double estimate = 0.0;
      if (tgt_route == "ball") {
        estimate = prem::single_bitstring_mitigate(bands, label, tgt_w, observed);
      } else if (tgt_route == "relabel") {
        estimate = prem::single_bitstring_mitigate(
            prem::relabel_bands(bands, label), prem::BitIndex(bands.num_qubits(), 0), tgt_w,
            prem::relabel_for_target(label, observed));
      } else {
        throw prem::ConfigError("unknown route '" + tgt_route + "'");
      }
      write_output(tgt_out, json{{"target", label.value()},
                                 {"bits", label.to_string()},
                                 {"w", tgt_w},
                                 {"route", tgt_route},
                                 {"estimate", estimate},
                                 {"uncorrected", observed[label.value()]}});
    } else if (sweep->parsed()) {
      prem::ExperimentConfig cfg = load_config(sweep_config);
      if (sweep_seed) cfg.seed = *sweep_seed;
      emit_reports(prem::run_sweep(cfg, sweep_parallel), sweep_out, sweep_format);
    } else if (check->parsed()) {
      std::vector<prem::ExperimentConfig> configs;
      if (check_config) {
        configs.push_back(load_config(*check_config));
      } else {
        for (prem::PriorKind kind : {prem::PriorKind::kUniform, prem::PriorKind::kGaussianOverflow,
                                     prem::PriorKind::kTruncatedGaussian,
                                     prem::PriorKind::kPointMass}) {
          prem::ExperimentConfig cfg;
          cfg.n = {4, 6, 8, 10};
          cfg.q = {0.01, 0.05, 0.1, 0.2, 0.3};
          cfg.w = {0, 1, 2, 3, 4};
          cfg.model = prem::ModelKind::kRelaxationOnly;
          cfg.prior.kind = kind;
          configs.push_back(cfg);
        }
      }
      std::vector<prem::MitigationReport> all;
      for (auto& cfg : configs) {
        cfg.method = prem::Method::kZeroTruncated;
        if (check_seed) cfg.seed = *check_seed;
        auto reports = prem::run_sweep(cfg, check_parallel);
        all.insert(all.end(), reports.begin(), reports.end());
      }
      std::size_t checked = 0, violations = 0, failures = 0;
      for (const auto& r : all) {
        if (!r.bound) continue;
        ++checked;
        if (!r.d_mitigated) ++failures;
        if (prem::has_flag(r, prem::kFlagBoundExceeded)) ++violations;
      }
      if (check_out) emit_reports(all, check_out, check_format);
      std::cout << json{{"cells", all.size()},
                        {"checked", checked},
                        {"violations", violations},
                        {"failures", failures}}
                       .dump(2)
                << '\n';
      if (violations > 0 || failures > 0) return kNumericalFailure;
    }
  } catch (const prem::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const prem::SingularError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const prem::DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const prem::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigFailure;
  }
  return kOk;
}
