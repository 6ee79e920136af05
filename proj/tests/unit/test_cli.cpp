#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "orbiton/kindex.hpp"

using nlohmann::json;
using namespace orbiton;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "orbiton");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("orbiton_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::size_t line_count(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) ++n;
  }
  return n;
}

}  // namespace

TEST(Cli, ClassifyBuiltins) {
  CliRun r = run({"classify", "--builtin", "real-diamond"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json doc = json::parse(r.out);
  EXPECT_EQ(doc.at("family"), "g442");

  r = run({"classify", "--builtin", "abelian4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  doc = json::parse(r.out);
  EXPECT_EQ(doc.at("family"), "DecomposableRnPlus");
  EXPECT_EQ(doc.at("label"), "decomposable[R^4 + 0]");
}

TEST(Cli, ClassifyInputErrors) {
  const auto dir = temp_dir("classify");
  const auto bad = dir / "bad.json";
  std::ofstream(bad) << "{\"dim\": 4, \"brackets\": [";
  CliRun r = run({"classify", "--input", bad.string()});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos) << r.err;

  r = run({"classify", "--input", (dir / "missing.json").string()});
  EXPECT_EQ(r.code, kExitInputError);
  r = run({"classify", "--builtin", "nonsense"});
  EXPECT_EQ(r.code, kExitInputError);
  r = run({"no-such-command"});
  EXPECT_EQ(r.code, kExitInputError);
}

TEST(Cli, ClassifyFromFile) {
  const auto dir = temp_dir("classify_file");
  const auto path = dir / "g.json";
  std::ofstream(path) << R"({"dim": 4, "brackets": [
    {"i": 0, "j": 1, "coeffs": {"2": 1}},
    {"i": 3, "j": 0, "coeffs": {"0": -1}},
    {"i": 3, "j": 1, "coeffs": {"1": 1}}]})";
  const CliRun r = run({"classify", "--input", path.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(json::parse(r.out).at("family"), "g442");
}

TEST(Cli, AtlasResidualSummary) {
  const CliRun r = run({"atlas", "--family", "g442", "--F", "1,1,1,0", "--samples", "500"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_LT(doc.at("max_residual").get<double>(), 1e-8);
}

TEST(Cli, AtlasPointStratumWritesOneRow) {
  const auto dir = temp_dir("atlas_point");
  const CliRun r = run({"atlas", "--family", "g411", "--F", "1,2,0,3", "--out", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  const auto& orbit = doc.at("orbits").at(0);
  EXPECT_EQ(orbit.at("kind"), "Point");
  const std::filesystem::path csv = orbit.at("csv").get<std::string>();
  ASSERT_TRUE(std::filesystem::exists(csv));
  // Header plus the single point.
  EXPECT_EQ(line_count(csv), 2u);
  EXPECT_TRUE(std::filesystem::exists(doc.at("model_file").get<std::string>()));
}

TEST(Cli, AtlasOpenOrbitOfAffC) {
  const CliRun r = run({"atlas", "--family", "g424", "--F", "0.3,1,0.5,0.2", "--samples", "50"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(json::parse(r.out).at("orbits").at(0).at("kind"), "OpenDense4D");
}

TEST(Cli, AtlasUnknownFamily) {
  EXPECT_EQ(run({"atlas", "--family", "g499", "--F", "1,1,1,1"}).code, kExitInputError);
  EXPECT_EQ(run({"atlas", "--family", "g442", "--F", "1,1"}).code, kExitInputError);
}

TEST(Cli, Foliation) {
  const CliRun r = run({"foliation", "--family", "g424", "--family", "g442", "--points", "50"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  ASSERT_EQ(doc.at("systems").size(), 2u);
  for (const auto& s : doc.at("systems")) {
    EXPECT_TRUE(s.at("passed").get<bool>());
    const int want = s.at("family") == "g424" ? 4 : 2;
    EXPECT_EQ(s.at("expected_rank").get<int>(), want);
    EXPECT_EQ(s.at("min_rank").get<int>(), want);
    EXPECT_EQ(s.at("max_rank").get<int>(), want);
  }
}

TEST(Cli, KindexDefaultRun) {
  const CliRun r = run({"kindex", "--format", "text"});
  ASSERT_EQ(r.code, kExitOk) << r.err << r.out;
  EXPECT_NE(r.out.find("delta0_gamma4: PASS (matrix matches)"), std::string::npos) << r.out;
}

TEST(Cli, KindexCoarseGridFails) {
  const CliRun r = run({"kindex", "--grid", "16", "--case", "winding", "--format", "text"});
  EXPECT_EQ(r.code, kExitCheckFailed);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("NonIntegerResult"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("--grid"), std::string::npos) << r.out;
}

TEST(Cli, KindexExportFixtures) {
  const auto dir = temp_dir("fixtures");
  const CliRun r = run({"kindex", "--export-fixtures", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(json::parse(r.out).at("exported").size(), 5u);
  for (const SixTermDiagram& d : fixture_hexagons()) {
    std::ifstream in(dir / (d.name + ".json"));
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_TRUE(six_term_check(diagram_from_json(text.str())).all_exact()) << d.name;
  }
}

TEST(Cli, KindexAffR) {
  const CliRun r = run({"kindex", "--case", "affR", "--format", "text"});
  ASSERT_EQ(r.code, kExitOk) << r.err << r.out;
  EXPECT_NE(r.out.find("index (1,1)"), std::string::npos) << r.out;
}

TEST(Cli, FredholmSingleOperator) {
  const CliRun r = run({"fredholm", "--which", "2", "--L", "6", "--N", "512", "--no-ladder"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  ASSERT_EQ(doc.at("operators").size(), 1u);
  EXPECT_EQ(doc.at("operators").at(0).at("dim_ker"), 1);
  EXPECT_EQ(doc.at("operators").at(0).at("dim_coker"), 0);
}

TEST(Cli, FredholmSmallGridIsReportedEitherWay) {
  const CliRun r = run({"fredholm", "--N", "64", "--no-ladder"});
  ASSERT_TRUE(r.code == kExitOk || r.code == kExitCheckFailed) << r.err;
  const json doc = json::parse(r.out);
  bool reported = doc.contains("warnings") && !doc.at("warnings").empty();
  for (const auto& op : doc.at("operators")) reported = reported || op.contains("error");
  EXPECT_TRUE(reported || r.code == kExitOk) << r.out;
}

TEST(Cli, DeterministicOutputAndSeedOverride) {
  const std::vector<std::string> args = {"atlas", "--family", "g434", "--random", "3", "--samples", "20"};
  auto with_seed = args;
  with_seed.insert(with_seed.end(), {"--seed", "777"});
  const CliRun a = run(with_seed);
  const CliRun b = run(with_seed);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);

  setenv("ORBITON_SEED", "777", 1);
  const CliRun c = run(args);
  unsetenv("ORBITON_SEED");
  EXPECT_EQ(c.out, a.out);
  const CliRun d = run(args);
  EXPECT_NE(d.out, a.out);
}

TEST(Cli, OutputFile) {
  const auto dir = temp_dir("output");
  const auto path = dir / "report.json";
  const CliRun r = run({"classify", "--builtin", "g421", "-o", path.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream in(path);
  const json doc = json::parse(in);
  EXPECT_EQ(doc.at("family"), "g421");
}
