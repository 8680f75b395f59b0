#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nilprob/cli.hpp"
#include "oracles.hpp"

using nlohmann::json;
namespace cli = nilprob::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "nilprob");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string table(const std::string& name) { return oracle::corpus_path(name); }

std::string without_elapsed(const std::string& s) {
  static const std::regex re(R"("elapsed_ms": [-+0-9.eE]+)");
  return std::regex_replace(s, re, "\"elapsed_ms\": _");
}

}  // namespace

TEST(CliExamples, ExactD2OfSmallestFamilyMember) {
  const auto r = invoke({"d2", "--family", "--p", "2", "--n", "1", "--exact"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto d = r.doc();
  EXPECT_EQ(d["schema"], 1);
  EXPECT_EQ(d["status"], "ok");
  const auto rep = d["result"]["report"];
  EXPECT_EQ(rep["kind"], "exact");
  EXPECT_EQ(rep["value_num"], 65);
  EXPECT_EQ(rep["value_den"], 128);
  EXPECT_GE(rep["value_num"].get<long>() * 8, rep["value_den"].get<long>());
}

TEST(CliExamples, CoverWithIdentityPasses) {
  const auto r = invoke({"cover", "--family", "--p", "2", "--n", "1", "--n-bound", "8", "--s", "identity"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto w = r.doc()["result"]["witness"];
  EXPECT_EQ(w["verified"], true);
  EXPECT_EQ(w["mode"], "exhaustive");
}

TEST(CliExamples, D1OfS3) {
  const auto r = invoke({"d1", "--table", table("s3"), "--exact"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto rep = r.doc()["result"]["report"];
  EXPECT_EQ(rep["value_num"], 1);
  EXPECT_EQ(rep["value_den"], 2);
}

TEST(CliSubcommands, FamilyReportsClassFour) {
  for (const char* n : {"1", "2"}) {
    const auto r = invoke({"family", "--p", "2", "--n", n});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    const auto d = r.doc();
    EXPECT_EQ(d["result"]["class"], 4);
    EXPECT_EQ(d["result"]["witness"]["found"], true);
  }
  const auto r = invoke({"family", "--p", "2", "--n", "1"});
  EXPECT_EQ(r.doc()["result"]["group"]["order"], 512);
}

TEST(CliSubcommands, FamilyAcceptsFormKeyword) {
  const auto r = invoke({"family", "--form", "hyperbolic:3:1"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(r.doc()["result"]["group"]["p"], 3);
}

TEST(CliSubcommands, SeriesOnQ8) {
  const auto r = invoke({"series", "--table", table("q8"), "--s", "1", "--t", "1"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto res = r.doc()["result"];
  EXPECT_EQ(res["nilpotency_class"], 2);
  EXPECT_EQ(res["baer"]["index_gamma_s"], 4);
  EXPECT_EQ(res["baer"]["index_gamma_s1"], 2);
}

TEST(CliSubcommands, NeumannOnQ8) {
  const auto r = invoke({"neumann", "--table", table("q8"), "--norm", "discrete", "--C", "2"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto res = r.doc()["result"]["result"];
  EXPECT_EQ(res["hypothesis_probability"], "5/8");
  EXPECT_LE(res["index_H"].get<double>(), 4.0);
}

TEST(CliSubcommands, ProbeAllHyperplanes) {
  const auto r = invoke({"probe-class3", "--p", "2", "--n", "2", "--exhaustive-hyperplanes"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto res = r.doc()["result"];
  EXPECT_EQ(res["hyperplanes"], 15);
  EXPECT_EQ(res["witnessed"], 15);
}

TEST(CliSubcommands, BiasCertificates) {
  auto r = invoke({"bias", "--verify-quad", "--p", "2", "--n", "1"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(r.doc()["result"]["verification"]["points"], 256);
  EXPECT_EQ(r.doc()["result"]["expression"]["rank"], 16);
  r = invoke({"bias", "--verify-quad", "--p", "2", "--n", "3", "--mode", "sampled", "--samples", "5000"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(r.doc()["result"]["verification"]["mode"], "sampled");
  r = invoke({"bias", "--trilinear-bound", "--p", "2", "--n", "1"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(r.doc()["result"]["consistent"], true);
}

TEST(CliExitCodes, VerificationFailureKeepsPartialReport) {
  const auto r = invoke({"cover", "--table", table("s3"), "--n-bound", "1", "--s", "identity"});
  EXPECT_EQ(r.code, cli::kVerificationFailed);
  EXPECT_FALSE(r.err.empty());
  const auto d = r.doc();
  EXPECT_EQ(d["status"], "verification_failed");
  EXPECT_EQ(d["result"]["witness"]["verified"], false);
  EXPECT_FALSE(d["result"]["witness"]["counterexample"].is_null());
}

TEST(CliExitCodes, UsageErrors) {
  EXPECT_EQ(invoke({"d1", "--bogus"}).code, cli::kUsage);
  EXPECT_EQ(invoke({}).code, cli::kUsage);
  EXPECT_EQ(invoke({"cover", "--family"}).code, cli::kUsage);  // --n-bound missing
  EXPECT_EQ(invoke({"d1", "--table", "/nonexistent/file.tbl"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"d1", "--p", "4", "--n", "1"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"d1", "--exact", "--mc"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"d1", "--format", "xml"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"--help"}).code, cli::kOk);
}

TEST(CliExitCodes, CapExceeded) {
  const auto r = invoke({"d2", "--family", "--p", "2", "--n", "2", "--exact"});
  EXPECT_EQ(r.code, cli::kCapExceeded);
  EXPECT_NE(r.err.find("cap"), std::string::npos);
  EXPECT_EQ(invoke({"bias", "--verify-quad", "--p", "2", "--n", "1", "--exhaustive-cap", "100"}).code,
            cli::kCapExceeded);
}

TEST(CliOutput, IdenticalConfigGivesIdenticalJson) {
  const std::vector<std::string> args{"d2", "--mc", "--p", "2", "--n", "1", "--samples", "20000", "--seed", "17"};
  const auto a = invoke(args), b = invoke(args);
  ASSERT_EQ(a.code, cli::kOk);
  EXPECT_EQ(without_elapsed(a.out), without_elapsed(b.out));
  auto other = args;
  other.back() = "18";
  EXPECT_NE(without_elapsed(invoke(other).out), without_elapsed(a.out));
  const auto rep = a.doc()["result"]["report"];
  EXPECT_EQ(rep["kind"], "monte_carlo");
  EXPECT_EQ(rep["seed"], 17);
  EXPECT_LE(rep["ci_low"].get<double>(), 65.0 / 128);
  EXPECT_GE(rep["ci_high"].get<double>(), 65.0 / 128);
}

TEST(CliOutput, IndependentOfThreadCount) {
  const auto a = invoke({"d2", "--mc", "--p", "2", "--n", "1", "--samples", "5000", "--threads", "1"});
  const auto b = invoke({"d2", "--mc", "--p", "2", "--n", "1", "--samples", "5000", "--threads", "3"});
  EXPECT_EQ(a.doc()["result"]["report"]["estimate"], b.doc()["result"]["report"]["estimate"]);
  EXPECT_EQ(b.doc()["config"]["threads"], 3);
}

TEST(CliOutput, DefaultSeedIsRecorded) {
  const auto r = invoke({"d1", "--mc", "--table", table("q8"), "--samples", "100"});
  EXPECT_EQ(r.doc()["config"]["seed"], cli::kDefaultSeed);
}

TEST(CliOutput, CsvHasFixedColumns) {
  const auto r = invoke({"d1", "--table", table("s3"), "--format", "csv"});
  ASSERT_EQ(r.code, cli::kOk);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "schema,command,key,value");
  bool saw_value = false;
  while (std::getline(in, line)) {
    EXPECT_EQ(line.rfind("1,d1,", 0), 0U) << line;
    if (line == "1,d1,result.report.value_num,1") saw_value = true;
  }
  EXPECT_TRUE(saw_value);
}

TEST(CliOutput, TextFormat) {
  const auto r = invoke({"d1", "--table", table("s3"), "--format", "text"});
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.out.find("result.report.value_den: 2\n"), std::string::npos);
}

TEST(CliOutput, OutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "nilprob_cli_test.json";
  std::filesystem::remove(path);
  const auto r = invoke({"d1", "--table", table("q8"), "--output", path.string()});
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const auto d = json::parse(in);
  EXPECT_EQ(d["result"]["report"]["value_num"], 5);
  EXPECT_EQ(d["result"]["report"]["value_den"], 8);
  std::filesystem::remove(path);
}

TEST(CliThreads, FlagThenEnvironmentThenHardware) {
  ::unsetenv("NILPROB_THREADS");
  EXPECT_GE(cli::resolve_threads(std::nullopt), 1U);
  ::setenv("NILPROB_THREADS", "5", 1);
  EXPECT_EQ(cli::resolve_threads(std::nullopt), 5U);
  EXPECT_EQ(cli::resolve_threads(2U), 2U);
  EXPECT_EQ(invoke({"d1", "--table", table("s3")}).doc()["config"]["threads"], 5);
  ::unsetenv("NILPROB_THREADS");
}
