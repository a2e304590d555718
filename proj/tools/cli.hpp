#pragma once

// Batch front-end. `run` executes one command and writes CSV (or JSON for
// `partition`) plus a JSON sidecar when writing to files.
//
// Exit codes: 0 success, 2 invalid configuration or input, 1 a numerical
// invariant was violated during the run.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chernoff/io.hpp"
#include "chernoff/partitions.hpp"

namespace chernoff::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "CHERNOFF_OUTPUT_DIR";

struct RunConfig {
  std::string command;  // partition | converge | trotter | quantum | clt | lemma4

  std::string scheme = "uniform";
  std::size_t n = 4;
  double theta = 1.0;
  std::uint64_t seed = kDefaultSeed;
  double concentration = 1000.0;

  double t = 1.0;
  std::vector<std::size_t> ns;  // empty: the command's default grid

  std::string family = "implicit-euler";  // implicit-euler | exact | trotter
  // Operator payloads: inline JSON or a path to a JSON file.
  std::string matrix;
  std::string matrix2;
  std::string observable;
  std::string rho;

  double gamma = 1.0;
  std::size_t nodes = 21;
  std::string variant = "quadrature";  // quadrature | closed

  std::string law = "uniform";
  double dx = 0.005;

  std::string output;       // CSV path; empty means stdout or $CHERNOFF_OUTPUT_DIR
  std::string density_out;  // clt only: two-column x,p CSV of the final density
};

/// Reads a RunConfig from JSON. Unknown keys are rejected. Matrix payloads may
/// be given as JSON values or as strings.
RunConfig config_from_json(const Json& j);

Json config_to_json(const RunConfig& config);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace chernoff::cli
