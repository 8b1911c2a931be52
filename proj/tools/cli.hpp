#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sqf::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 2,
  kResourceGuard = 3,
  kBadInput = 4,
};

struct RunConfig {
  int p = 3;
  int alphabet_size = 4;
  int list_size = 3;
  int iterations = 50;
  std::string norm_target = "100000";
  std::filesystem::path out_dir = ".";
  bool validate = false;
  unsigned threads = 1;
  std::uint64_t max_mem = std::uint64_t{8} << 30;
  bool allow_large = false;
  std::optional<std::string> alpha_override;
  std::uint64_t seed_vector = 0;
  bool strict_cells = false;

  /// Throws InputError when the combination is invalid.
  void check() const;

  std::filesystem::path lambda_path() const;
  std::filesystem::path graph_path() const;
  std::filesystem::path weights_path() const;
  std::filesystem::path certificate_path() const;
};

/// Parses "auto" or a positive integer.
unsigned parse_threads(const std::string& text);
/// Parses a byte count with an optional K/M/G suffix (powers of 1024).
std::uint64_t parse_bytes(const std::string& text);

// Each command writes its report to out and returns an ExitCode. Library
// errors propagate as exceptions; run() maps them to exit codes.
int cmd_build(const RunConfig& cfg, std::ostream& out);
int cmd_graph(const RunConfig& cfg, std::ostream& out);
int cmd_iterate(const RunConfig& cfg, std::ostream& out);
int cmd_certify(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, const std::filesystem::path& certificate, std::ostream& out);

struct BoundRequest {
  std::optional<std::filesystem::path> certificate;
  std::optional<std::string> beta;
  std::string precision = "1/1000";
  bool four_lists = false;
};
int cmd_bound(const RunConfig& cfg, const BoundRequest& request, std::ostream& out);
int cmd_estimate(const RunConfig& cfg, std::ostream& out);

struct OracleRequest {
  std::string what;  ///< lambda | count | game | growth
  int length = 0;
  std::optional<std::filesystem::path> certificate;
  bool exact = false;
  std::optional<std::filesystem::path> trace;
  int random_assignments = 0;
  std::uint64_t seed = 1;
  bool exhaustive = false;
};
int cmd_oracle(const RunConfig& cfg, const OracleRequest& request, std::ostream& out);

/// Full command line entry point, including exception-to-exit-code mapping.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace sqf::cli
