#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "cli.hpp"
#include "sqf/errors.hpp"
#include "sqf/text_io.hpp"
#include "sqf/weights.hpp"
#include "support/temp_dir.hpp"

namespace sqf::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "sqf");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

TEST(Cli, BuildReportsCounts) {
  sqf::testing::TempDir dir;
  const auto one = run_args({"build", "-p", "1", "--out-dir", dir.path().string()});
  EXPECT_EQ(one.code, kOk);
  EXPECT_TRUE(contains(one.out, "count=2"));
  const auto three = run_args({"build", "-p", "3", "--out-dir", dir.path().string(), "--validate"});
  EXPECT_EQ(three.code, kOk);
  EXPECT_TRUE(contains(three.out, "count=7"));
  EXPECT_TRUE(fs::exists(dir.path() / "lambda_p3_a4.txt"));
}

TEST(Cli, LargeBuildRefused) {
  sqf::testing::TempDir dir;
  const auto r = run_args({"build", "-p", "21", "--alphabet", "21", "--out-dir", dir.path().string()});
  EXPECT_EQ(r.code, kResourceGuard);
  EXPECT_FALSE(fs::exists(dir.path() / "lambda_p21_a21.txt"));
}

TEST(Cli, CertifyPinsAlpha) {
  sqf::testing::TempDir dir;
  const auto two = run_args({"certify", "-p", "2", "--out-dir", dir.path().string(), "--validate"});
  EXPECT_EQ(two.code, kOk) << two.err;
  EXPECT_TRUE(contains(two.out, "alpha=288243/178145"));
  const auto three = run_args({"certify", "-p", "3", "--out-dir", dir.path().string()});
  EXPECT_TRUE(contains(three.out, "alpha=13489/9204"));
  const auto ok = run_args({"verify", (dir.path() / "certificate_p3_a4_l3.txt").string(), "--out-dir",
                            dir.path().string()});
  EXPECT_EQ(ok.code, kOk) << ok.err;
  EXPECT_TRUE(contains(ok.out, "certificate OK"));
}

TEST(Cli, CorruptedExternalWeights) {
  sqf::testing::TempDir dir;
  ASSERT_EQ(run_args({"certify", "-p", "3", "--out-dir", dir.path().string()}).code, kOk);
  const Certificate cert = read_certificate(read_file(dir.path() / "certificate_p3_a4_l3.txt"));
  const fs::path cert_path = dir.path() / "external.txt";
  write_file(cert_path, write_certificate(cert, "w.txt"));

  // Weights tagged with a different Λ.
  write_file(dir.path() / "w.txt", write_weights(cert.weights, cert.lambda_digest ^ 1U));
  const auto digest = run_args({"verify", cert_path.string(), "--out-dir", dir.path().string()});
  EXPECT_EQ(digest.code, kVerificationFailed);
  EXPECT_TRUE(contains(digest.err, "digest"));

  // Right tag, one value inflated past what the inequality allows.
  WeightVector bad = cert.weights;
  bad.back() *= 1000;
  write_file(dir.path() / "w.txt", write_weights(bad, cert.lambda_digest));
  const auto value = run_args({"verify", cert_path.string(), "--out-dir", dir.path().string()});
  EXPECT_EQ(value.code, kVerificationFailed);
  EXPECT_TRUE(contains(value.out, "FAILED at vertex"));
}

TEST(Cli, ArtifactsIndependentOfThreads) {
  std::string reference[3];
  for (const char* threads : {"1", "2", "4"}) {
    sqf::testing::TempDir dir;
    const std::string d = dir.path().string();
    ASSERT_EQ(run_args({"build", "-p", "6", "--out-dir", d, "--threads", threads}).code, kOk);
    ASSERT_EQ(run_args({"graph", "-p", "6", "--out-dir", d, "--threads", threads}).code, kOk);
    ASSERT_EQ(run_args({"certify", "-p", "6", "--out-dir", d, "--threads", threads}).code, kOk);
    const std::string files[3] = {read_file(dir.path() / "lambda_p6_a4.txt"), read_file(dir.path() / "graph_p6_a4.txt"),
                                  read_file(dir.path() / "certificate_p6_a4_l3.txt")};
    for (int i = 0; i < 3; ++i) {
      if (reference[i].empty()) reference[i] = files[i];
      ASSERT_EQ(files[i], reference[i]) << "threads=" << threads << " file " << i;
    }
  }
}

TEST(Cli, BadInputExitCode) {
  EXPECT_EQ(run_args({"certify", "-p", "0"}).code, kBadInput);
  EXPECT_EQ(run_args({"frobnicate"}).code, kBadInput);
  EXPECT_EQ(run_args({"build", "--alphabet", "40"}).code, kBadInput);
  EXPECT_EQ(run_args({"certify", "--list-size", "5"}).code, kBadInput);
  EXPECT_EQ(run_args({"bound", "--beta", "x/y", "--alpha-override", "2"}).code, kBadInput);
  EXPECT_EQ(run_args({"verify", "/nonexistent/certificate.txt"}).code, kBadInput);
}

TEST(Cli, OutDirFromEnvironment) {
  sqf::testing::TempDir dir;
  ::setenv("SQF_OUT_DIR", dir.path().c_str(), 1);
  const auto r = run_args({"build", "-p", "2"});
  ::unsetenv("SQF_OUT_DIR");
  EXPECT_EQ(r.code, kOk);
  EXPECT_TRUE(fs::exists(dir.path() / "lambda_p2_a4.txt"));
}

TEST(Cli, BoundReports) {
  const auto found = run_args({"bound", "-p", "21", "--alpha-override", "13948/10721"});
  EXPECT_EQ(found.code, kOk);
  EXPECT_TRUE(contains(found.out, "beta=1269/1000"));
  EXPECT_TRUE(contains(found.out, "count of square-free words >= (1269/1000)^n"));
  const auto none = run_args({"bound", "-p", "21", "--alpha-override", "1.295"});
  EXPECT_EQ(none.code, kOk);
  EXPECT_TRUE(contains(none.out, "no beta found"));
  const auto four = run_args({"bound", "--four-lists", "--beta", "49/20"});
  EXPECT_TRUE(contains(four.out, "condition holds"));
}

TEST(Cli, BoundFromSmallCertificateIsHonest) {
  sqf::testing::TempDir dir;
  ASSERT_EQ(run_args({"certify", "-p", "4", "--out-dir", dir.path().string()}).code, kOk);
  const auto r = run_args({"bound", "--certificate", (dir.path() / "certificate_p4_a4_l3.txt").string(), "--out-dir",
                           dir.path().string()});
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(contains(r.out, "no beta found"));
}

TEST(Cli, Estimate) {
  const auto r = run_args({"estimate", "-p", "21", "--alphabet", "21"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_TRUE(contains(r.out, "3309553654671897"));
  const auto strict = run_args({"estimate", "-p", "21", "--alphabet", "21", "--strict-cells"});
  EXPECT_TRUE(contains(strict.out, "3309553654671895"));
}

TEST(Cli, OracleCommands) {
  sqf::testing::TempDir dir;
  const auto count = run_args({"oracle", "count", "-n", "3", "--alphabet", "3"});
  EXPECT_EQ(count.code, kOk);
  EXPECT_TRUE(contains(count.out, ": 12"));
  const auto lambda = run_args({"oracle", "lambda", "-p", "4", "--alphabet", "5", "--out-dir", dir.path().string()});
  EXPECT_EQ(lambda.code, kOk) << lambda.err;
  const fs::path trace = dir.path() / "trace.txt";
  const auto game = run_args({"oracle", "game", "-n", "2", "--exact", "--trace", trace.string()});
  EXPECT_EQ(game.code, kOk);
  EXPECT_TRUE(contains(game.out, "6"));
  EXPECT_EQ(split_lines(read_file(trace)).size(), 2U);
}

TEST(Parsing, ThreadsAndBytes) {
  EXPECT_EQ(parse_threads("3"), 3U);
  EXPECT_GE(parse_threads("auto"), 1U);
  EXPECT_THROW(parse_threads("0"), sqf::InputError);
  EXPECT_EQ(parse_bytes("512"), 512U);
  EXPECT_EQ(parse_bytes("2K"), 2048U);
  EXPECT_EQ(parse_bytes("8G"), std::uint64_t{8} << 30);
  EXPECT_THROW(parse_bytes("lots"), sqf::InputError);
}

}  // namespace
}  // namespace sqf::cli
