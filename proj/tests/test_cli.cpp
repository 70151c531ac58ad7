#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qgeom/cli.hpp"
#include "qgeom/io.hpp"

namespace {

namespace fs = std::filesystem;
using qgeom::cli::run;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// Parses "quantity,value" output into a map.
std::map<std::string, std::string> key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    kv[line.substr(0, comma)] = line.substr(comma + 1);
  }
  return kv;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("qgeom_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, AlgebraCheck) {
  const auto r = invoke({"algebra", "--spin", "50", "--check"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto kv = key_values(r.out);
  const double lam = qgeom::PlanckScale().lambda();
  EXPECT_LT(std::stod(kv.at("commutator_residual")), 1e-12);
  EXPECT_NEAR(std::stod(kv.at("x3_max_m")) / (50.0 * lam), 1.0, 1e-12);
  EXPECT_NEAR(std::stod(kv.at("x3_min_m")) / (-50.0 * lam), 1.0, 1e-12);
}

TEST_F(CliTest, AlgebraJsonAndDump) {
  const auto r = invoke({"--json", "algebra", "--spin", "1/2", "--dump", path("x2.csv"), "--matrix", "x2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("spin"), "1/2");
  EXPECT_EQ(j.at("dimension"), 2);
  const std::string csv = slurp(path("x2.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "row,col,re,im");
  EXPECT_TRUE(fs::exists(path("x2.csv.manifest.json")));
}

TEST_F(CliTest, JsonFlagAfterSubcommand) {
  const auto r = invoke({"bounds", "--mass", "1.989e30", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j.at(0).at("schwarzschild_m").get<double>(), 2953.0, 2.0);
}

TEST_F(CliTest, BoundsSingleMass) {
  const auto r = invoke({"bounds", "--mass", "1.989e30"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "mass_kg,compton_m,schwarzschild_m");
  EXPECT_NEAR(std::stod(row.substr(row.rfind(',') + 1)), 2953.0, 2.0);
}

TEST_F(CliTest, BoundsGridFileAndClassification) {
  ASSERT_EQ(invoke({"bounds", "--points", "50", "--out", path("curves.csv")}).code, 0);
  const std::string csv = slurp(path("curves.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "mass_kg,compton_m,schwarzschild_m");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 51);
  const auto r = invoke({"bounds", "--mass", "9.109e-31", "--size", "1e-15"});
  EXPECT_EQ(key_values(r.out).at("regime"), "forbidden_quantum");
}

TEST_F(CliTest, NoiseExampleRowsAndRms) {
  const auto r = invoke({"noise", "--arm-length", "40", "--rate", "2.5e7", "--duration", "0.1", "--seed", "7",
                         "--out", path("series.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream f(path("series.csv"));
  const auto raw = qgeom::read_series_csv(f);
  EXPECT_EQ(raw.values.size(), 2'500'000u);
  double ss = 0.0, mean = 0.0;
  for (double v : raw.values) mean += v / raw.values.size();
  for (double v : raw.values) ss += (v - mean) * (v - mean);
  EXPECT_NEAR(std::sqrt(ss / raw.values.size()) / 1.350e-17, 1.0, 0.05);
}

TEST_F(CliTest, ManifestReplayIsBitwiseIdentical) {
  ASSERT_EQ(invoke({"noise", "--arm-length", "40", "--rate", "3e7", "--duration", "2e-4", "--seed", "19", "--out",
                    path("a.csv")})
                .code,
            0);
  const auto manifest = qgeom::cli::load_manifest(path("a.csv.manifest.json"));
  EXPECT_EQ(manifest.command, "noise");
  ASSERT_TRUE(manifest.seed.has_value());
  EXPECT_EQ(*manifest.seed, 19u);
  EXPECT_EQ(manifest.output_paths, std::vector<std::string>{path("a.csv")});

  const auto replay = invoke({"noise", "--manifest", path("a.csv.manifest.json"), "--out", path("b.csv")});
  ASSERT_EQ(replay.code, 0) << replay.err;
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));

  // Without the subcommand, the manifest supplies it.
  ASSERT_EQ(invoke({"--manifest", path("a.csv.manifest.json"), "noise", "--out", path("c.csv")}).code, 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("c.csv")));
  // Summary-only replay records the same parameters.
  ASSERT_EQ(invoke({"--manifest", path("b.csv.manifest.json"), "--manifest-out", path("d.json")}).code, 0);
  const auto again = qgeom::cli::load_manifest(path("d.json"));
  EXPECT_EQ(again.parameters, manifest.parameters);
  EXPECT_EQ(again.seed, manifest.seed);
}

TEST_F(CliTest, SpectrumFromFile) {
  ASSERT_EQ(invoke({"noise", "--duration", "2e-3", "--seed", "2", "--out", path("s.csv")}).code, 0);
  const auto r = invoke({"spectrum", "--in", path("s.csv"), "--segment-length", "1024", "--out", path("p.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto kv = key_values(r.out);
  EXPECT_NEAR(std::stod(kv.at("integrated_psd_m2")) / std::stod(kv.at("sample_variance_m2")), 1.0, 0.05);
  EXPECT_NEAR(std::stod(kv.at("sample_rate_hz")), 2.5e7, 1.0);
  const std::string csv = slurp(path("p.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "f_hz,psd_m2_per_hz");
}

TEST_F(CliTest, InterferometerConfigFilesAndCrossSpectrum) {
  {
    std::ofstream a(path("a.cfg"));
    a << "label = north\narm_length_m = 40\nposition_m = 0,0,0\n";
    std::ofstream b(path("b.cfg"));
    b << "label = south\narm_length_m = 40\nposition_m = 0,40,0\n";
  }
  const auto r = invoke({"interferometer", "--config", path("a.cfg"), "--config-b", path("b.cfg"), "--out",
                         path("x.csv"), "--floor", "1e-40"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto kv = key_values(r.out);
  EXPECT_EQ(kv.at("label"), "north");
  EXPECT_EQ(kv.at("label_b"), "south");
  EXPECT_DOUBLE_EQ(std::stod(kv.at("overlap_factor")), 0.5);
  EXPECT_EQ(kv.at("verdict"), "detect");
  const std::string csv = slurp(path("x.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "f_hz,psd_m2_per_hz");

  // The manifest is self-contained: replay works after the config files are gone.
  fs::remove(path("a.cfg"));
  fs::remove(path("b.cfg"));
  ASSERT_EQ(invoke({"interferometer", "--manifest", path("x.csv.manifest.json"), "--out", path("y.csv")}).code, 0);
  EXPECT_EQ(slurp(path("x.csv")), slurp(path("y.csv")));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"noise", "--no-such-flag"}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
  const auto domain = invoke({"noise", "--arm-length", "40", "--rate", "1e6"});
  EXPECT_EQ(domain.code, 1);
  EXPECT_NE(domain.err.find("undersampling"), std::string::npos);
  EXPECT_EQ(invoke({"algebra", "--spin", "0.3"}).code, 1);
  EXPECT_EQ(invoke({"bounds", "--mass", "-1"}).code, 1);
}

TEST_F(CliTest, SeedFromEnvironment) {
  ::setenv("QGEOM_SEED", "123", 1);
  const auto a = invoke({"noise", "--duration", "1e-4"});
  ::unsetenv("QGEOM_SEED");
  const auto b = invoke({"noise", "--duration", "1e-4", "--seed", "123"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(key_values(a.out).at("seed"), "123");
}

TEST_F(CliTest, EnsembleAcrossThreads) {
  const auto one = invoke({"noise", "--duration", "2e-3", "--ensemble", "6", "--threads", "1", "--seed", "4"});
  const auto many = invoke({"noise", "--duration", "2e-3", "--ensemble", "6", "--threads", "3", "--seed", "4"});
  ASSERT_EQ(one.code, 0) << one.err;
  EXPECT_EQ(one.out, many.out);
  EXPECT_LT(std::abs(std::stod(key_values(one.out).at("z_score"))), 5.0);
}

}  // namespace
