#include "prem/harness.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "prem/errors.h"

using namespace prem;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.n = {3, 4};
  cfg.q = {0.05, 0.1};
  cfg.w = {0, 1, 2};
  cfg.method = Method::kFullNeumann;
  cfg.prior.kind = PriorKind::kRandomUniform;
  cfg.seed = 11;
  cfg.repetitions = 2;
  return cfg;
}

std::vector<MitigationReport> without_time(std::vector<MitigationReport> r) {
  for (auto& x : r) x.time_ms = 0.0;
  return r;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

TEST(Harness, empty_report_list_writes_header_only) {
  std::ostringstream out;
  write_csv({}, out);
  EXPECT_EQ(out.str(), std::string(kCsvHeader) + "\n");
}

TEST(Harness, single_report_is_one_row_of_thirteen_columns) {
  MitigationReport r;
  r.n = 3;
  r.q = 0.1;
  r.w = 2;
  r.method = Method::kFullNeumann;
  r.prior = PriorKind::kUniform;
  r.seed = 42;
  r.d_uncorrected = 0.25;
  r.d_mitigated = 0.001;
  r.flags = {"lstsq", "nonconvergent"};
  std::ostringstream out;
  const std::vector<MitigationReport> one{r};
  write_csv(one, out);
  std::istringstream in(out.str());
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_FALSE(std::getline(in, extra));
  const auto fields = split(row, ',');
  ASSERT_EQ(fields.size(), 13u);
  EXPECT_EQ(fields[0], "3");
  EXPECT_EQ(fields[1], "0.1");
  EXPECT_EQ(fields[3], "full_neumann");
  EXPECT_EQ(fields[4], "uniform");
  EXPECT_EQ(fields[9], "");  // no bound
  EXPECT_EQ(fields[12], "lstsq;nonconvergent");
}

TEST(Harness, config_json_round_trip) {
  ExperimentConfig cfg = small_config();
  cfg.target = 5;
  cfg.norm_guard = true;
  cfg.prior.sigma = 0.3;
  const ExperimentConfig back = config_from_json(json::parse(to_json(cfg).dump()));
  EXPECT_EQ(back, cfg);
}

TEST(Harness, config_validation) {
  auto expect_rejected = [](const ExperimentConfig& c) {
    EXPECT_THROW(validate(c), ConfigError);
  };
  ExperimentConfig c = small_config();
  EXPECT_NO_THROW(validate(c));
  c.w = {5};
  expect_rejected(c);
  c = small_config();
  c.q = {0.6};
  expect_rejected(c);
  c = small_config();
  c.model = ModelKind::kRelaxationOnly;
  c.q = {0.5};
  expect_rejected(c);
  c = small_config();
  c.n = {15};
  expect_rejected(c);
  c = small_config();
  c.n = {};
  expect_rejected(c);
  c = small_config();
  c.repetitions = 0;
  expect_rejected(c);
  c = small_config();
  c.schema_version = 2;
  expect_rejected(c);
  c = small_config();
  c.method = Method::kSingleTarget;
  c.target = 8;
  expect_rejected(c);
  EXPECT_THROW(config_from_json(json{{"n", {3}}, {"q", {0.1}}}), ConfigError);
  EXPECT_THROW(parse_method("svd"), ConfigError);
  EXPECT_THROW(parse_model("depolarizing"), ConfigError);
}

TEST(Harness, sweep_order_and_determinism) {
  const ExperimentConfig cfg = small_config();
  const auto serial = run_sweep(cfg, 1);
  ASSERT_EQ(serial.size(), 2u * 2u * 3u * 2u);
  std::size_t k = 0;
  for (int n : cfg.n)
    for (double q : cfg.q)
      for (int w : cfg.w)
        for (int rep = 0; rep < cfg.repetitions; ++rep, ++k) {
          ASSERT_EQ(serial[k].n, n);
          ASSERT_EQ(serial[k].q, q);
          ASSERT_EQ(serial[k].w, w);
          ASSERT_EQ(serial[k].rep, rep);
        }
  EXPECT_EQ(without_time(serial), without_time(run_sweep(cfg, 1)));
  EXPECT_EQ(without_time(serial), without_time(run_sweep(cfg, 3)));

  ExperimentConfig other = cfg;
  other.seed = 12;
  EXPECT_NE(without_time(serial), without_time(run_sweep(other, 1)));
}

TEST(Harness, csv_is_byte_identical_without_timing) {
  const ExperimentConfig cfg = small_config();
  std::ostringstream a, b;
  write_csv(without_time(run_sweep(cfg, 1)), a);
  write_csv(without_time(run_sweep(cfg, 2)), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Harness, reports_json_round_trip) {
  const auto reports = run_sweep(small_config(), 1);
  const auto back = reports_from_json(json::parse(reports_to_json(reports).dump()));
  EXPECT_EQ(back, reports);
}

TEST(Harness, zero_truncated_rows_respect_bound) {
  ExperimentConfig cfg;
  cfg.n = {2, 4, 6};
  cfg.q = {0.02, 0.1, 0.3};
  cfg.w = {0, 1, 2};
  cfg.method = Method::kZeroTruncated;
  cfg.model = ModelKind::kRelaxationOnly;
  cfg.prior.kind = PriorKind::kUniform;
  for (const MitigationReport& r : run_sweep(cfg)) {
    ASSERT_TRUE(r.d_mitigated.has_value());
    ASSERT_TRUE(r.bound.has_value());
    EXPECT_LE(*r.d_mitigated, *r.bound);
    EXPECT_FALSE(has_flag(r, kFlagBoundExceeded));
  }
}

TEST(Harness, failing_cells_are_flagged_not_fatal) {
  ExperimentConfig cfg;
  cfg.n = {6};
  cfg.q = {0.02, 0.48};
  cfg.w = {2};
  cfg.method = Method::kFullNeumann;
  cfg.norm_guard = true;
  cfg.prior.kind = PriorKind::kRandomUniform;
  cfg.seed = 3;
  const auto reports = run_sweep(cfg);
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_FALSE(has_flag(reports[0], kFlagDivergent));
  EXPECT_TRUE(reports[0].d_mitigated.has_value());
  EXPECT_TRUE(has_flag(reports[1], kFlagDivergent));
  EXPECT_FALSE(reports[1].d_mitigated.has_value());
}

TEST(Harness, single_target_defaults_to_all_ones) {
  ExperimentConfig cfg;
  cfg.n = {5};
  cfg.q = {0.05};
  cfg.w = {0, 1, 2, 3};
  cfg.method = Method::kSingleTarget;
  cfg.prior.kind = PriorKind::kUniform;
  cfg.seed = 4;
  const auto reports = run_sweep(cfg);
  ASSERT_EQ(reports.size(), 4u);
  EXPECT_EQ(reports[0].d_mitigated, reports[0].d_uncorrected);
  for (std::size_t i = 1; i < reports.size(); ++i) {
    EXPECT_LT(*reports[i].d_mitigated, *reports[i - 1].d_mitigated);
  }
  ExperimentConfig explicit_target = cfg;
  explicit_target.target = 31;
  EXPECT_EQ(without_time(run_sweep(explicit_target)), without_time(reports));
}

TEST(Harness, emit_writes_files) {
  const auto dir = std::filesystem::temp_directory_path() / "prem_harness_test";
  std::filesystem::create_directories(dir);
  const auto reports = run_sweep(small_config());
  emit(reports, ReportFormat::kCsv, dir / "out.csv");
  emit(reports, ReportFormat::kJson, dir / "out.json");
  EXPECT_GT(std::filesystem::file_size(dir / "out.csv"), std::string(kCsvHeader).size());
  std::ifstream in(dir / "out.json");
  EXPECT_EQ(reports_from_json(json::parse(in)), reports);
  EXPECT_THROW(emit(reports, ReportFormat::kCsv, dir / "missing" / "x.csv"), IoError);
  std::filesystem::remove_all(dir);
}
