#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "saferoute/model.hpp"

namespace saferoute::cli {

enum ExitCode : int {
  kOk = 0,
  kGapExceeded = 1,
  kUsage = 2,
  kInput = 3,
  kInfeasible = 4,
  kOracleRefusal = 5,
};

// A case-study directory, an instance file (v1) or a Solomon text file.
Instance load_instance_any(const std::string& path, std::ostream& log);

struct SpeedsOptions {
  std::string flows;
  std::string nominal;
  double quantile = 0.854;
  double beta = 1.0;
  std::string out;
};
int cmd_speeds(const SpeedsOptions& o, std::ostream& out, std::ostream& log);

struct RunOptions {
  std::string instance;
  std::optional<std::string> objective;  // empty: config value (solve) or all (verify)
  std::optional<int> scenario;  // empty: all 24
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;
  std::string solutions_dir;  // solve: one solution file per scenario
  bool gaps = true;           // solve: baseline gap columns
  int threads = 0;            // 0: hardware concurrency
  double tolerance = 1e-9;    // verify
};
int cmd_solve(const RunOptions& o, std::ostream& out, std::ostream& log);
int cmd_verify(const RunOptions& o, std::ostream& out, std::ostream& log);

struct GenerateOptions {
  std::string spec;
  std::optional<std::uint64_t> seed;
  std::string out;
};
int cmd_generate(const GenerateOptions& o, std::ostream& out, std::ostream& log);

struct ConvertOptions {
  std::string input;
  double crash = 1e-4;
  int dummies = 0;
  std::string out;
};
int cmd_convert_solomon(const ConvertOptions& o, std::ostream& out, std::ostream& log);

}  // namespace saferoute::cli
