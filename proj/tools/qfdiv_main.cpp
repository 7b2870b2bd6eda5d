#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qfdiv/commands.hpp"
#include "qfdiv/errors.hpp"

namespace {

struct WeightRange {
  double lo = 0.5;
  double hi = 2.0;
};

// "--weight-range LO:HI"
WeightRange parse_weight_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw qfdiv::DomainError("--weight-range: expected LO:HI");
  }
  WeightRange r;
  try {
    r.lo = std::stod(text.substr(0, colon));
    r.hi = std::stod(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw qfdiv::DomainError("--weight-range: expected numeric LO:HI");
  }
  return r;
}

void add_ensemble_flags(CLI::App* cmd, int& max_dim, int& max_blocks, std::string& weight_range,
                        std::string* ranks) {
  cmd->add_option("--max-dim", max_dim, "Largest block dimension")->capture_default_str();
  cmd->add_option("--max-blocks", max_blocks, "Largest number of blocks")->capture_default_str();
  cmd->add_option("--weight-range", weight_range, "Trace weights drawn uniformly from LO:HI")
      ->capture_default_str();
  if (ranks != nullptr) {
    cmd->add_option("--ranks", *ranks, "Rank policy for random states: full|mixed")
        ->check(CLI::IsMember({"full", "mixed"}))
        ->capture_default_str();
  }
}

int emit(const qfdiv::cli::CommandResult& result, const std::string& output) {
  if (output == "json") {
    std::cout << result.report.dump(2) << "\n";
  } else {
    std::cout << result.table;
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"f-divergences between density matrices on direct sums of weighted matrix "
               "blocks, computed by two independent routes"};
  app.require_subcommand(1);

  // compute
  auto* compute = app.add_subcommand("compute", "Divergences of one problem file");
  qfdiv::cli::ComputeOptions copt;
  std::string compute_output = "table";
  compute->add_option("--input", copt.input_path, "Problem file (JSON)")->required();
  compute->add_option("--f", copt.divergences, "Divergence name(s), comma separated")
      ->delimiter(',')
      ->capture_default_str();
  double alpha_flag = 0.0;
  auto* alpha_opt =
      compute->add_option("--alpha", alpha_flag, "Parameter for the power family, in (1, 2]");
  compute->add_option("--route", copt.route, "ns|direct|both")
      ->check(CLI::IsMember({"ns", "direct", "both"}))
      ->capture_default_str();
  compute->add_option("--tol", copt.tolerance, "Agreement tolerance for route=both")
      ->capture_default_str();
  compute->add_flag("--atoms", copt.include_atoms, "Include the Nussbaum-Szkola atom table");
  double renyi_flag = 0.0;
  auto* renyi_opt = compute->add_option("--renyi", renyi_flag,
                                        "Also report the Petz-Renyi divergence of this order");
  compute->add_option("--output", compute_output, "table|json")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();

  // verify
  auto* verify = app.add_subcommand("verify", "Randomized two-route equality check");
  qfdiv::cli::VerifyOptions vopt;
  std::string verify_output = "table";
  std::string verify_weights = "0.5:2.0";
  verify->add_option("--trials", vopt.trials, "Number of random trials")->capture_default_str();
  verify->add_option("--seed", vopt.seed, "Base seed")->capture_default_str();
  verify->add_option("--tol", vopt.tolerance, "Relative agreement tolerance")
      ->capture_default_str();
  add_ensemble_flags(verify, vopt.ensemble.max_dim, vopt.ensemble.max_blocks, verify_weights,
                     &vopt.ensemble.ranks);
  verify->add_option("--output", verify_output, "table|json")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();

  // inequalities
  auto* ineq = app.add_subcommand("inequalities", "Randomized relative-entropy bound checks");
  qfdiv::cli::InequalityOptions iopt;
  std::string ineq_output = "table";
  std::string ineq_weights = "0.5:2.0";
  ineq->add_option("--trials", iopt.trials, "Number of random trials")->capture_default_str();
  ineq->add_option("--seed", iopt.seed, "Base seed")->capture_default_str();
  ineq->add_option("--tol", iopt.tolerance, "Slack added to the right-hand sides")
      ->capture_default_str();
  add_ensemble_flags(ineq, iopt.ensemble.max_dim, iopt.ensemble.max_blocks, ineq_weights,
                     nullptr);
  ineq->add_option("--output", ineq_output, "table|json")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qfdiv::cli::kExitUsage;
  }

  try {
    if (compute->parsed()) {
      if (*alpha_opt) {
        copt.alpha = alpha_flag;
      }
      if (*renyi_opt) {
        copt.renyi_alpha = renyi_flag;
      }
      return emit(qfdiv::cli::cmd_compute(copt), compute_output);
    }
    if (verify->parsed()) {
      const WeightRange r = parse_weight_range(verify_weights);
      vopt.ensemble.weight_lo = r.lo;
      vopt.ensemble.weight_hi = r.hi;
      return emit(qfdiv::cli::cmd_verify(vopt), verify_output);
    }
    const WeightRange r = parse_weight_range(ineq_weights);
    iopt.ensemble.weight_lo = r.lo;
    iopt.ensemble.weight_hi = r.hi;
    return emit(qfdiv::cli::cmd_inequalities(iopt), ineq_output);
  } catch (const qfdiv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qfdiv::cli::kExitUsage;
  }
}
