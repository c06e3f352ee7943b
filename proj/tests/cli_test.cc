#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct CliRun {
  int code;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(PREM_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) out += buf.data();
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

json read(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("prem_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const json& doc) const {
    std::ofstream(dir_ / name) << doc.dump();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, simulate_then_mitigate) {
  CliRun r = run("simulate --out " + path("fx") + " --n 5 --q 0.05 --model random_tensor"
              " --prior random_uniform --seed 3 --bands 2");
  ASSERT_EQ(r.code, 0) << r.out;
  for (const char* f : {"response.json", "prior.json", "observed.json", "band_0.json",
                        "band_1.json", "band_2.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "fx" / f)) << f;
  }
  const json prior = read(dir_ / "fx" / "prior.json");

  r = run("mitigate-zero --response " + path("fx/response.json") + " --observed " +
          path("fx/observed.json") + " --w 2 --q 0.05");
  ASSERT_EQ(r.code, 0);
  const json zero = json::parse(r.out);
  EXPECT_EQ(zero.at("t_w"), 16);
  EXPECT_LT(std::abs(zero.at("p0").get<double>() - prior.at("data")[0].get<double>()),
            std::abs(zero.at("p0_uncorrected").get<double>() - prior.at("data")[0].get<double>()));

  r = run("mitigate-full --bands " + path("fx/band_0.json") + " " + path("fx/band_1.json") +
          " " + path("fx/band_2.json") + " --observed " + path("fx/observed.json") +
          " --w 2 --out " + path("m.json"));
  ASSERT_EQ(r.code, 0);
  const json diag = json::parse(r.out);
  EXPECT_TRUE(diag.at("converges").get<bool>());
  const json mitigated = read(dir_ / "m.json");
  EXPECT_EQ(mitigated.at("flavor"), "mitigated");
  EXPECT_EQ(mitigated.at("data").size(), 32u);

  const std::string common = " --response " + path("fx/response.json") + " --observed " +
                             path("fx/observed.json") + " --target 0b10110 --w 2";
  const CliRun ball = run("mitigate-target" + common + " --route ball");
  const CliRun relabel = run("mitigate-target" + common + " --route relabel");
  ASSERT_EQ(ball.code, 0);
  ASSERT_EQ(relabel.code, 0);
  EXPECT_EQ(json::parse(ball.out).at("target"), 22);
  EXPECT_NEAR(json::parse(ball.out).at("estimate").get<double>(),
              json::parse(relabel.out).at("estimate").get<double>(), 1e-12);
}

TEST_F(Cli, sweep_writes_csv_and_json) {
  write("cfg.json", {{"schema_version", 1}, {"n", {3}}, {"q", {0.05}}, {"w", {0, 1}},
                     {"method", "full_neumann"}, {"prior", {{"kind", "uniform"}}},
                     {"model", "random_tensor"}, {"seed", 1}, {"repetitions", 2}});
  CliRun r = run("sweep --config " + path("cfg.json") + " --out " + path("out.csv"));
  ASSERT_EQ(r.code, 0);
  std::ifstream in(dir_ / "out.csv");
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 1 + 4);

  r = run("sweep --config " + path("cfg.json") + " --format json");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out).size(), 4u);
}

TEST_F(Cli, check_bounds_passes_on_relaxation_model) {
  write("cfg.json", {{"schema_version", 1}, {"method", "zero_truncated"}, {"n", {3, 4}}, {"q", {0.05, 0.2}}, {"w", {0, 1, 2}},
                     {"prior", {{"kind", "uniform"}}}, {"model", "relaxation_only"}});
  const CliRun r = run("check-bounds --config " + path("cfg.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(json::parse(r.out).at("violations"), 0);
}

TEST_F(Cli, exit_codes) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("no-such-command").code, 1);
  EXPECT_EQ(run("sweep").code, 1);
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("sweep --config " + path("missing.json")).code, 3);

  write("bad.json", {{"n", {3}}, {"q", {0.9}}, {"w", {1}}});
  EXPECT_EQ(run("sweep --config " + path("bad.json")).code, 1);

  ASSERT_EQ(run("simulate --out " + path("fx") + " --n 6 --q 0.48 --model random_tensor"
                " --prior uniform --seed 1").code, 0);
  const std::string args = " --response " + path("fx/response.json") + " --observed " +
                           path("fx/observed.json") + " --w 2";
  EXPECT_EQ(run("mitigate-full" + args + " --norm-guard").code, 2);
  EXPECT_EQ(run("mitigate-full" + args).code, 0);
  EXPECT_EQ(run("mitigate-full" + args + " --mode cholesky").code, 1);
  EXPECT_EQ(run("mitigate-zero" + args.substr(0, args.size() - 2) + " 9").code, 1);
}
