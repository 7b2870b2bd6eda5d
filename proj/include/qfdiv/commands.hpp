#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfdiv/ext_real.hpp"

namespace qfdiv::cli {

using Json = nlohmann::ordered_json;

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;      // parse/validation/configuration errors
inline constexpr int kExitViolation = 2;  // a checked property failed

struct ComputeOptions {
  std::string input_path;
  std::vector<std::string> divergences = {"relative-entropy"};
  std::optional<double> alpha;        // parameter for the power family
  std::string route = "both";         // ns | direct | both
  double tolerance = 1e-8;
  bool include_atoms = false;
  std::optional<double> renyi_alpha;  // Petz-Renyi report field, alpha in (1, 2]
};

struct TrialEnsembleOptions {
  int max_blocks = 3;
  int max_dim = 4;
  double weight_lo = 0.5;
  double weight_hi = 2.0;
  std::string ranks = "mixed";  // full | mixed
};

struct VerifyOptions {
  int trials = 100;
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  TrialEnsembleOptions ensemble;
};

struct InequalityOptions {
  int trials = 100;
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  TrialEnsembleOptions ensemble;  // ranks forced to full
};

struct CommandResult {
  int exit_code = kExitOk;
  Json report;        // machine-readable form; byte-stable for fixed inputs
  std::string table;  // human-readable form (may include timings)
};

// Computes the requested divergences of one problem file by the requested
// route(s). With route=both the report carries |ns - direct| per divergence
// and the exit code is kExitViolation whenever a delta exceeds the tolerance.
CommandResult cmd_compute(const ComputeOptions& options);

// Randomized check of the two-route equality on seeded random algebras and
// state pairs, together with the Nussbaum-Szkola normalization, the
// support-defect cross-check and the Jensen lower bound.
CommandResult cmd_verify(const VerifyOptions& options);

// Randomized check of the relative-entropy bounds
//   D <= ln(1 + chi^2)   and   D <= (|phi - omega| + chi^2) / 2
// on full-rank pairs (natural logarithms).
CommandResult cmd_inequalities(const InequalityOptions& options);

// ExtReal <-> JSON: finite values as numbers, +inf as the string "+inf".
Json ext_real_to_json(const ExtReal& v);
ExtReal ext_real_from_json(const Json& j);

}  // namespace qfdiv::cli
