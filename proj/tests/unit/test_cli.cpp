#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "randfun/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("randfun_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    setenv("RANDFUN_OUT", dir_.c_str(), 1);
  }
  void TearDown() override {
    unsetenv("RANDFUN_OUT");
    fs::remove_all(dir_);
  }
  Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "randfun");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = randfun::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
  }
  std::string read(const std::string& name) {
    std::ifstream in(dir_ / name);
    return {std::istreambuf_iterator<char>(in), {}};
  }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GrowthAtTwo) {
  const auto r = run({"growth", "--seq", "gef", "--r", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["summary"]["S"].get<double>(), 13.747129301577303, 1e-12);
  EXPECT_EQ(j["summary"]["n"], 9);
  EXPECT_EQ(j["summary"]["m"], 144);
  EXPECT_TRUE(fs::exists(dir_ / "growth.csv"));
}

TEST_F(Cli, ZerosCsvMatchesArgumentPrinciple) {
  const auto r = run({"zeros", "--seq", "gef", "--ensemble", "gaussian", "--r", "2", "--trials", "1", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  const std::int64_t ap = j["summary"]["trials"][0]["argument_principle"];
  const auto csv = read("zeros.csv");
  std::istringstream lines(csv);
  std::string line;
  std::int64_t counted = 0;
  bool header = false;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      EXPECT_EQ(line, "trial_id,re,im,modulus,multiplicity,method");
      header = true;
      continue;
    }
    const auto cells = randfun::plot::split(line, ',');
    counted += std::stoll(cells[4]);
  }
  EXPECT_EQ(counted, ap);
}

TEST_F(Cli, GoldenTinyRun) {
  // a fixed seed reproduces the same report byte for byte
  const auto a = run({"concentration", "--r-grid", "1,2", "--trials", "100", "--seed", "3"});
  const auto first = read("concentration.csv");
  const auto b = run({"concentration", "--r-grid", "1,2", "--trials", "100", "--seed", "3", "--threads", "2"});
  ASSERT_EQ(a.code, b.code);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(first, read("concentration.csv"));
}

TEST_F(Cli, NegativeRadiusNamesKey) {
  const auto r = run({"growth", "--seq", "gef", "--r", "-1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--r"), std::string::npos);
}

TEST_F(Cli, UnknownInputs) {
  EXPECT_EQ(run({"nonsense"}).code, 1);
  EXPECT_EQ(run({"growth", "--bogus", "1"}).code, 1);
  const auto seq = run({"growth", "--seq", "nope"});
  EXPECT_EQ(seq.code, 1);
  EXPECT_NE(seq.err.find("--seq"), std::string::npos);
  EXPECT_EQ(run({}).code, 1);
}

TEST_F(Cli, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST_F(Cli, LibraryErrorsExitOne) {
  const auto r = run({"hole", "--r-grid", "3", "--trials", "100"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("RareEventInfeasible"), std::string::npos);
}

TEST_F(Cli, ConfigFileAndOverride) {
  fs::create_directories(dir_);
  const auto ini = dir_ / "run.ini";
  std::ofstream(ini) << "[growth]\nr = 3\nseq = \"gamma:0.5\"\n";
  const auto a = run({"--config", ini.string(), "growth"});
  ASSERT_EQ(a.code, 0) << a.err;
  auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["config"]["run"]["r"], "3");
  EXPECT_EQ(j["config"]["run"]["seq"], "gamma:0.5");
  const auto b = run({"--config", ini.string(), "growth", "--r", "1.5"});
  j = nlohmann::json::parse(b.out);
  EXPECT_EQ(j["config"]["run"]["r"], "1.5");
  std::ofstream(ini) << "[growth]\nbogus = 1\n";
  EXPECT_EQ(run({"--config", ini.string(), "growth"}).code, 1);
}

TEST_F(Cli, PlotsAreWritten) {
  ASSERT_EQ(run({"growth", "--r-grid", "1,2,4", "--emit-plots"}).code, 0);
  ASSERT_EQ(run({"zeros", "--r", "2", "--emit-plots"}).code, 0);
  ASSERT_EQ(run({"hole", "--r-grid", "0.25,0.5", "--trials", "500", "--emit-plots"}).code, 0);
  ASSERT_EQ(run({"sectors", "--r-grid", "2", "--trials", "20", "--emit-plots"}).code, 0);
  for (const char* f : {"growth.svg", "zeros.svg", "hole.svg", "sectors.svg"}) {
    const auto svg = read(f);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u) << f;
  }
  EXPECT_NE(read("zeros.svg").find("<circle"), std::string::npos);
}

TEST(CliBinary, ExitCodes) {
  const std::string bin = RANDFUN_CLI_PATH;
  const auto out = (fs::temp_directory_path() / "randfun_cli_binary").string();
  EXPECT_EQ(std::system((bin + " growth --r 2 --out " + out + " > /dev/null 2>&1").c_str()), 0);
  EXPECT_NE(std::system((bin + " growth --r -1 > /dev/null 2>&1").c_str()), 0);
  fs::remove_all(out);
}
