#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ctscuc/analysis.hpp"
#include "ctscuc/cli.hpp"
#include "ctscuc/result_file.hpp"

namespace fs = std::filesystem;
using namespace ctscuc;
using ctscuc::cli::main_entry;
namespace exit_code = ctscuc::cli::exit_code;

namespace {

std::string data(const std::string& file) { return std::string(CTSCUC_DATA_DIR) + "/" + file; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ctscuc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "ctscuc");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return main_entry(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(Cli, HelpListsEnvironment) {
  EXPECT_EQ(run({"--help"}), exit_code::kOk);
  EXPECT_NE(out_.str().find("CTSCUC_SOLVER"), std::string::npos);
}

TEST_F(Cli, ParseErrors) {
  EXPECT_EQ(run({}), exit_code::kInputError);
  EXPECT_EQ(run({"solve"}), exit_code::kInputError);
  EXPECT_EQ(run({"solve", "--case", data("fig123.json"), "--cts", "maybe"}), exit_code::kInputError);
  EXPECT_EQ(run({"solve", "--case", data("fig123.json"), "--big-m", "huge"}), exit_code::kInputError);
  EXPECT_EQ(run({"solve", "--case", path("missing.json")}), exit_code::kInputError);
}

TEST_F(Cli, SolveThenVerify) {
  const auto off = path("off.json"), on = path("on.json");
  ASSERT_EQ(run({"solve", "--case", data("fig123.json"), "--cts", "off", "--out", off}), exit_code::kOk)
      << err_.str();
  ASSERT_EQ(run({"solve", "--case", data("fig123.json"), "--cts", "on", "--zmax", "1",
                 "--emergency-rating", "regular", "--gap", "0.01", "--out", on}),
            exit_code::kOk)
      << err_.str();

  const auto a = read_json_file(off), b = read_json_file(on);
  EXPECT_EQ(a["format"], kResultFormat);
  EXPECT_EQ(a["config"]["options"]["cts_enabled"], false);
  EXPECT_EQ(b["config"]["options"]["cts_enabled"], true);
  EXPECT_TRUE(b["verification"]["passed"].get<bool>());
  const double slack = gap_slack(a["solve"]["gap"].get<double>(), a["solve"]["objective"].get<double>(),
                                 b["solve"]["gap"].get<double>(), b["solve"]["objective"].get<double>());
  EXPECT_LE(b["solve"]["objective"].get<double>(), a["solve"]["objective"].get<double>() + slack);
  EXPECT_FALSE(b["analyses"]["switching"].empty());

  EXPECT_EQ(run({"verify", "--result", on}), exit_code::kOk) << err_.str();
  const auto report = path("verify.json");
  EXPECT_EQ(run({"verify", "--result", on, "--case", data("fig123.json"), "--out", report}), exit_code::kOk);
  EXPECT_EQ(read_json_file(report)["verification"]["passed"], b["verification"]["passed"]);
}

TEST_F(Cli, TamperedResultFailsVerification) {
  const auto res = path("res.json");
  ASSERT_EQ(run({"solve", "--case", data("fig123.json"), "--out", res}), exit_code::kOk);
  auto doc = read_json_file(res);
  doc["variables"]["pk[k=2,t=1]"] = doc["variables"]["pk[k=2,t=1]"].get<double>() + 5.0;
  write_json_file(res, doc);
  EXPECT_EQ(run({"verify", "--case", data("fig123.json"), "--result", res}),
            exit_code::kVerificationFailed);
  EXPECT_NE(out_.str().find("flow_def"), std::string::npos);
}

TEST_F(Cli, MalformedResultIsAnInputError) {
  const auto res = path("bad.json");
  std::ofstream(res) << "{\"format\": \"something-else\"}";
  EXPECT_EQ(run({"verify", "--result", res, "--case", data("fig123.json")}), exit_code::kInputError);
}

TEST_F(Cli, InfeasibleCase) {
  auto doc = read_json_file(data("fig123.json"));
  for (auto& row : doc["demand"])
    for (auto& d : row) d = d.get<double>() * 10;
  const auto big = path("big.json");
  write_json_file(big, doc);
  EXPECT_EQ(run({"solve", "--case", big, "--out", path("r.json")}), exit_code::kInfeasible);
  EXPECT_EQ(read_json_file(path("r.json"))["solve"]["has_solution"], false);
}

TEST_F(Cli, ReportCongestionAndOverload) {
  const auto I = path("I.json"), II = path("II.json"), noCts = path("n.json");
  ASSERT_EQ(run({"solve", "--case", data("fig123.json"), "--cts", "on", "--out", I}), exit_code::kOk);
  ASSERT_EQ(run({"solve", "--case", data("fig123.json"), "--emergency-rating", "infinite", "--out", II}),
            exit_code::kOk);
  ASSERT_EQ(run({"solve", "--case", data("fig123.json"), "--out", noCts}), exit_code::kOk);

  const auto cc = path("cc.json");
  ASSERT_EQ(run({"report", "--result", I, "--compare", II, "--out", cc}), exit_code::kOk) << err_.str();
  const auto congestion = read_json_file(cc)["analyses"]["congestion"];
  EXPECT_GE(congestion["congestion_cost"].get<double>(), 0.0);

  const auto ov = path("ov.json");
  ASSERT_EQ(run({"report", "--result", noCts, "--compare", I, "--out", ov}), exit_code::kOk) << err_.str();
  EXPECT_TRUE(read_json_file(ov)["analyses"].contains("overload"));

  // Infinite against CTS-on regular differs in two settings at once.
  EXPECT_EQ(run({"report", "--result", noCts, "--compare", path("none.json")}), exit_code::kInputError);
}

TEST_F(Cli, SweepWritesCsv) {
  const auto csv = path("sweep.csv"), out = path("sweep.json");
  ASSERT_EQ(run({"sweep-zmax", "--case", data("fig123.json"), "--zmax-values", "1,all", "--csv", csv,
                 "--out", out}),
            exit_code::kOk)
      << err_.str();
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "z_max,congestion_cost");
  EXPECT_EQ(read_json_file(out)["sweep"]["points"].size(), 2u);
  EXPECT_EQ(run({"sweep-zmax", "--case", data("fig123.json"), "--zmax-values", "0,1"}),
            exit_code::kInputError);
  EXPECT_EQ(run({"sweep-zmax", "--case", data("fig123.json"), "--zmax-values", "1,two"}),
            exit_code::kInputError);
}

TEST_F(Cli, RepeatedRunsDifferOnlyInTiming) {
  const auto a = path("a.json"), b = path("b.json");
  ASSERT_EQ(run({"solve", "--case", data("five_bus.json"), "--cts", "on", "--out", a}), exit_code::kOk);
  ASSERT_EQ(run({"solve", "--case", data("five_bus.json"), "--cts", "on", "--out", b}), exit_code::kOk);
  auto x = read_json_file(a), y = read_json_file(b);
  EXPECT_NE(x["timing"], nullptr);
  x.erase("timing");
  y.erase("timing");
  EXPECT_EQ(x, y);
}

TEST_F(Cli, PeriodsFlagTruncatesAndIsRecorded) {
  const auto res = path("short.json");
  ASSERT_EQ(run({"solve", "--case", data("five_bus.json"), "--periods", "2", "--out", res}), exit_code::kOk);
  const auto doc = read_json_file(res);
  EXPECT_EQ(doc["config"]["periods"], 2);
  EXPECT_TRUE(doc["variables"].contains("pg[g=1,t=2]"));
  EXPECT_FALSE(doc["variables"].contains("pg[g=1,t=3]"));
  EXPECT_EQ(run({"verify", "--result", res}), exit_code::kOk);
  EXPECT_EQ(run({"solve", "--case", data("five_bus.json"), "--periods", "40"}), exit_code::kInputError);
}

TEST_F(Cli, WriteLp) {
  const auto lp = path("model.lp");
  ASSERT_EQ(run({"solve", "--case", data("fig123.json"), "--write-lp", lp}), exit_code::kOk);
  std::ifstream in(lp);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_NE(text.str().find("switch_budget[c=1,t=1]"), std::string::npos);
}

TEST(ResultFile, OptionsRoundTrip) {
  SolveOptions o;
  o.cts_enabled = true;
  o.z_max = 3;
  o.emergency_rating_mode = EmergencyRatingMode::Infinite;
  o.big_m = BigMPolicy::fixed(25000);
  o.reference_bus = 4;
  o.reserve_enabled = false;
  EXPECT_EQ(options_from_json(options_to_json(o)), o);
  EXPECT_EQ(options_from_json(options_to_json(SolveOptions{})), SolveOptions{});
  EXPECT_THROW(parse_big_m("fixed:abc"), ResultFileError);
  EXPECT_THROW(parse_emergency_rating_mode("short"), ResultFileError);
}
