#include "qfdiv/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "qfdiv/divergence.hpp"
#include "qfdiv/problem_io.hpp"
#include "qfdiv/rng.hpp"
#include "qfdiv/tolerances.hpp"

namespace qfdiv::cli {

namespace {

// Internal check tolerances, fixed here rather than configurable: the
// marginal sums of the Nussbaum-Szkola distributions, the agreement of the
// two support-defect computations, and the Jensen lower bound.
constexpr double kMarginalTol = 1e-10;
constexpr double kDefectCrossTol = 1e-9;
constexpr double kJensenTol = 1e-9;

Json result_to_json(const DivergenceResult& r) {
  Json j;
  j["value"] = ext_real_to_json(r.value);
  j["term_main"] = ext_real_to_json(r.term_main);
  j["term_f0"] = ext_real_to_json(r.term_f0);
  j["term_fpinf"] = ext_real_to_json(r.term_fpinf);
  return j;
}

// |a - b| with both-infinite counting as exact agreement.
ExtReal route_delta(const ExtReal& a, const ExtReal& b) {
  if (a.is_infinite() && b.is_infinite()) {
    return ExtReal(0.0);
  }
  if (a.is_infinite() || b.is_infinite()) {
    return ExtReal::infinity();
  }
  return ExtReal(std::abs(a.finite_value() - b.finite_value()));
}

bool routes_agree(const ExtReal& a, const ExtReal& b, double tolerance) {
  if (a.is_infinite() || b.is_infinite()) {
    return a.is_infinite() && b.is_infinite();
  }
  return std::abs(a.finite_value() - b.finite_value()) <=
         tolerance * std::max(1.0, std::abs(a.finite_value()));
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

Json algebra_to_json(const AlgebraSpec& spec) {
  Json blocks = Json::array();
  for (const auto& b : spec.blocks()) {
    blocks.push_back(Json{{"dim", b.dim}, {"weight", b.weight}});
  }
  return Json{{"blocks", blocks}};
}

std::vector<ConvexFunctionSpec> verification_catalog() {
  std::vector<ConvexFunctionSpec> fs;
  for (const auto& name : catalog_names()) {
    fs.push_back(catalog(name));
  }
  fs.push_back(catalog("power", 1.5));
  fs.push_back(catalog("power", 2.0));
  return fs;
}

// One random algebra per trial: 1..max_blocks blocks, dims 1..max_dim,
// weights uniform in [lo, hi]. Consumption order of the generator is part of
// the deterministic contract of a seed.
AlgebraSpec draw_algebra(std::mt19937_64& gen, const TrialEnsembleOptions& ens) {
  const int nblocks = 1 + static_cast<int>(gen() % static_cast<std::uint64_t>(ens.max_blocks));
  std::vector<BlockSpec> blocks;
  blocks.reserve(static_cast<std::size_t>(nblocks));
  for (int k = 0; k < nblocks; ++k) {
    const int dim = 1 + static_cast<int>(gen() % static_cast<std::uint64_t>(ens.max_dim));
    const double weight = ens.weight_lo + rng::uniform01(gen) * (ens.weight_hi - ens.weight_lo);
    blocks.push_back(BlockSpec{dim, weight});
  }
  return AlgebraSpec(std::move(blocks));
}

std::optional<std::vector<int>> draw_ranks(std::mt19937_64& gen, const AlgebraSpec& spec,
                                           const std::string& policy) {
  if (policy == "full") {
    return std::nullopt;
  }
  // mixed: half the states are full rank, the rest get uniform ranks.
  if ((gen() & 1u) == 0u) {
    return std::nullopt;
  }
  std::vector<int> ranks;
  ranks.reserve(static_cast<std::size_t>(spec.block_count()));
  for (int k = 0; k < spec.block_count(); ++k) {
    ranks.push_back(1 + static_cast<int>(gen() % static_cast<std::uint64_t>(spec.dim(k))));
  }
  return ranks;
}

void check_ensemble(const TrialEnsembleOptions& ens) {
  if (ens.max_blocks < 1 || ens.max_dim < 1) {
    throw DomainError("trial ensemble: max-blocks and max-dim must be >= 1");
  }
  if (!(ens.weight_lo > 0.0) || !(ens.weight_hi >= ens.weight_lo) ||
      !std::isfinite(ens.weight_hi)) {
    throw DomainError("trial ensemble: weight range must satisfy 0 < lo <= hi < inf");
  }
  if (ens.ranks != "full" && ens.ranks != "mixed") {
    throw DomainError("trial ensemble: ranks must be full or mixed");
  }
}

std::string fixed_width(const std::string& s, std::size_t width) {
  if (s.size() >= width) {
    return s + " ";
  }
  return s + std::string(width - s.size(), ' ');
}

}  // namespace

Json ext_real_to_json(const ExtReal& v) {
  if (v.is_infinite()) {
    return Json("+inf");
  }
  return Json(v.finite_value());
}

ExtReal ext_real_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "+inf") {
      return ExtReal::infinity();
    }
    throw DomainError("ext_real_from_json: unexpected string \"" + j.get<std::string>() + "\"");
  }
  if (!j.is_number()) {
    throw DomainError("ext_real_from_json: expected a number or \"+inf\"");
  }
  return ExtReal(j.get<double>());
}

CommandResult cmd_compute(const ComputeOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (options.route != "ns" && options.route != "direct" && options.route != "both") {
    throw DomainError("compute: route must be ns, direct or both");
  }
  if (!(options.tolerance > 0.0)) {
    throw DomainError("compute: tolerance must be positive");
  }
  const bool run_ns = options.route != "direct";
  const bool run_direct = options.route != "ns";

  Problem problem = load_problem(options.input_path);

  std::vector<ConvexFunctionSpec> fs;
  for (const auto& name : options.divergences) {
    fs.push_back(name == "power" ? catalog(name, options.alpha) : catalog(name));
  }

  // The NS construction is shared by every requested divergence.
  std::optional<NSOutput> ns_out;
  if (run_ns || options.include_atoms) {
    ns_out = build_ns(problem.algebra,
                      simultaneous_spectrum(problem.algebra, problem.phi, problem.omega));
  }
  const auto [defect_omega_direct, defect_phi_direct] =
      support_defects_direct(problem.algebra, problem.phi, problem.omega);

  Json report;
  report["command"] = "compute";
  report["input"] = options.input_path;
  report["algebra"] = algebra_to_json(problem.algebra);
  report["options"] = Json{{"route", options.route},
                           {"tol", options.tolerance},
                           {"renormalize", problem.renormalize},
                           {"atoms", options.include_atoms}};

  bool violation = false;
  Json divs = Json::array();
  std::ostringstream table;
  table << "compute: " << options.input_path << "\n";
  for (const auto& f : fs) {
    Json entry;
    entry["f"] = f.name;
    std::optional<DivergenceResult> ns_result;
    std::optional<DivergenceResult> direct_result;
    if (run_ns) {
      ns_result = f_div_from_ns(*ns_out, f);
      entry["ns"] = result_to_json(*ns_result);
    }
    if (run_direct) {
      direct_result = quantum_f_div_direct(problem.algebra, problem.phi, problem.omega, f);
      entry["direct"] = result_to_json(*direct_result);
    }
    if (ns_result && direct_result) {
      const ExtReal delta = route_delta(ns_result->value, direct_result->value);
      entry["delta"] = ext_real_to_json(delta);
      const bool ok = delta.is_finite() && delta.finite_value() <= options.tolerance;
      entry["within_tol"] = ok;
      violation = violation || !ok;
    }
    divs.push_back(entry);

    table << "  " << fixed_width(f.name, 20);
    if (ns_result) {
      table << " ns=" << ns_result->value.str();
    }
    if (direct_result) {
      table << " direct=" << direct_result->value.str();
    }
    if (ns_result && direct_result) {
      table << " delta=" << route_delta(ns_result->value, direct_result->value).str();
    }
    if (ns_result) {
      table << "  [main=" << ns_result->term_main.str() << " f0=" << ns_result->term_f0.str()
            << " fpinf=" << ns_result->term_fpinf.str() << "]";
    } else {
      table << "  [main=" << direct_result->term_main.str()
            << " f0=" << direct_result->term_f0.str()
            << " fpinf=" << direct_result->term_fpinf.str() << "]";
    }
    table << "\n";
  }
  report["divergences"] = divs;

  Json defects;
  if (ns_out) {
    defects["ns"] = Json{{"omega_outside_phi_support", ns_out->omega_mass_outside_phi_support},
                         {"phi_outside_omega_support", ns_out->phi_mass_outside_omega_support}};
  }
  defects["direct"] = Json{{"omega_outside_phi_support", defect_omega_direct},
                           {"phi_outside_omega_support", defect_phi_direct}};
  report["support_defects"] = defects;
  table << "  support defects: omega|ker(phi) = " << defect_omega_direct
        << ", phi|ker(omega) = " << defect_phi_direct << "\n";

  if (options.renyi_alpha) {
    const double alpha = *options.renyi_alpha;
    const ConvexFunctionSpec power = catalog("power", alpha);
    const DivergenceResult s =
        run_ns ? f_div_from_ns(*ns_out, power)
               : quantum_f_div_direct(problem.algebra, problem.phi, problem.omega, power);
    ExtReal renyi = ExtReal::infinity();
    if (s.value.is_finite()) {
      renyi = ExtReal(std::log(s.value.finite_value()) / (alpha - 1.0));
    }
    report["renyi"] = Json{{"alpha", alpha}, {"value", ext_real_to_json(renyi)}};
    table << "  petz-renyi(" << alpha << ") = " << renyi.str() << "\n";
  }

  if (options.include_atoms) {
    Json atoms = Json::array();
    for (const auto& a : ns_out->atoms) {
      atoms.push_back(Json{{"block", a.block},
                           {"i", a.i},
                           {"j", a.j},
                           {"nu", a.nu},
                           {"fphi", a.fphi},
                           {"fomega", a.fomega},
                           {"overlap", a.overlap}});
    }
    report["ns_atoms"] = atoms;
  }

  table << "  elapsed: " << elapsed_ms(start) << " ms\n";

  CommandResult out;
  out.exit_code = violation ? kExitViolation : kExitOk;
  out.report = std::move(report);
  out.table = table.str();
  return out;
}

CommandResult cmd_verify(const VerifyOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (options.trials < 1) {
    throw DomainError("verify: trials must be >= 1");
  }
  if (!(options.tolerance > 0.0)) {
    throw DomainError("verify: tolerance must be positive");
  }
  check_ensemble(options.ensemble);

  const std::vector<ConvexFunctionSpec> fs = verification_catalog();

  int route_failures = 0;
  int marginal_failures = 0;
  int defect_failures = 0;
  int jensen_failures = 0;
  long long divergence_checks = 0;
  long long infinite_pairs = 0;
  double max_route_delta_rel = 0.0;
  double max_marginal_error = 0.0;
  double max_defect_error = 0.0;
  Json failures = Json::array();

  auto record = [&failures](int trial, const char* check, const std::string& detail) {
    failures.push_back(Json{{"trial", trial}, {"check", check}, {"detail", detail}});
  };

  for (int trial = 0; trial < options.trials; ++trial) {
    std::mt19937_64 gen(rng::derive_seed(options.seed, static_cast<std::uint64_t>(trial)));
    const AlgebraSpec spec = draw_algebra(gen, options.ensemble);
    const auto ranks_phi = draw_ranks(gen, spec, options.ensemble.ranks);
    const auto ranks_omega = draw_ranks(gen, spec, options.ensemble.ranks);
    const State phi = random_state(spec, gen(), ranks_phi);
    const State omega = random_state(spec, gen(), ranks_omega);

    const NSOutput ns = build_ns(spec, simultaneous_spectrum(spec, phi, omega));

    double sum_p = 0.0;
    double sum_q = 0.0;
    for (const auto& atom : ns.atoms) {
      sum_p += atom.fphi * atom.nu;
      sum_q += atom.fomega * atom.nu;
    }
    const double marginal_error = std::max(std::abs(sum_p - 1.0), std::abs(sum_q - 1.0));
    max_marginal_error = std::max(max_marginal_error, marginal_error);
    if (marginal_error > kMarginalTol) {
      ++marginal_failures;
      record(trial, "ns-marginals",
             "sum fphi*nu = " + ExtReal(sum_p).str() + ", sum fomega*nu = " + ExtReal(sum_q).str());
    }

    const auto [omega_outside, phi_outside] = support_defects_direct(spec, phi, omega);
    const double defect_error =
        std::max(std::abs(ns.omega_mass_outside_phi_support - omega_outside),
                 std::abs(ns.phi_mass_outside_omega_support - phi_outside));
    max_defect_error = std::max(max_defect_error, defect_error);
    if (defect_error > kDefectCrossTol) {
      ++defect_failures;
      record(trial, "support-defects", "atom-sum vs projection-pairing differ by " +
                                           ExtReal(defect_error).str());
    }

    for (const auto& f : fs) {
      const DivergenceResult a = f_div_from_ns(ns, f);
      const DivergenceResult b = quantum_f_div_direct(spec, phi, omega, f);
      ++divergence_checks;
      if (a.value.is_infinite() && b.value.is_infinite()) {
        ++infinite_pairs;
      }
      if (!routes_agree(a.value, b.value, options.tolerance)) {
        ++route_failures;
        record(trial, "route-agreement",
               f.name + ": ns = " + a.value.str() + ", direct = " + b.value.str());
      } else if (a.value.is_finite() && b.value.is_finite()) {
        const double rel = std::abs(a.value.finite_value() - b.value.finite_value()) /
                           std::max(1.0, std::abs(a.value.finite_value()));
        max_route_delta_rel = std::max(max_route_delta_rel, rel);
      }
      const double f_at_one = f.eval(1.0);
      for (const DivergenceResult* r : {&a, &b}) {
        if (r->value.is_finite() && r->value.finite_value() < f_at_one - kJensenTol) {
          ++jensen_failures;
          record(trial, "jensen-bound",
                 f.name + ": value " + r->value.str() + " below f(1) = " + ExtReal(f_at_one).str());
        }
      }
    }
  }

  const int total_failures =
      route_failures + marginal_failures + defect_failures + jensen_failures;

  Json report;
  report["command"] = "verify";
  report["options"] = Json{{"trials", options.trials},
                           {"seed", options.seed},
                           {"max_dim", options.ensemble.max_dim},
                           {"max_blocks", options.ensemble.max_blocks},
                           {"weight_range", Json::array({options.ensemble.weight_lo,
                                                         options.ensemble.weight_hi})},
                           {"ranks", options.ensemble.ranks},
                           {"tol", options.tolerance}};
  Json names = Json::array();
  for (const auto& f : fs) {
    names.push_back(f.name);
  }
  report["catalog"] = names;
  report["totals"] = Json{{"trials", options.trials},
                          {"divergence_checks", divergence_checks},
                          {"failures", total_failures}};
  report["checks"] = Json{{"route_agreement_failures", route_failures},
                          {"marginal_failures", marginal_failures},
                          {"defect_failures", defect_failures},
                          {"jensen_failures", jensen_failures}};
  report["stats"] = Json{{"max_route_delta_rel", max_route_delta_rel},
                         {"max_marginal_error", max_marginal_error},
                         {"max_defect_error", max_defect_error},
                         {"infinite_pairs", infinite_pairs}};
  report["tolerances"] = Json{{"route_rel", options.tolerance},
                              {"marginal", kMarginalTol},
                              {"defect_cross", kDefectCrossTol},
                              {"jensen", kJensenTol}};
  report["failures"] = failures;

  std::ostringstream table;
  table << "verify: " << options.trials << " trials, seed " << options.seed << ", "
        << divergence_checks << " divergence checks\n"
        << "  failures: " << total_failures << " (route " << route_failures << ", marginals "
        << marginal_failures << ", defects " << defect_failures << ", jensen " << jensen_failures
        << ")\n"
        << "  max relative route delta: " << ExtReal(max_route_delta_rel).str() << "\n"
        << "  max marginal error: " << ExtReal(max_marginal_error).str() << "\n"
        << "  max defect cross-check error: " << ExtReal(max_defect_error).str() << "\n"
        << "  route pairs agreeing at +inf: " << infinite_pairs << "\n";
  for (const auto& f : failures) {
    table << "  FAIL trial " << f.at("trial") << " [" << f.at("check").get<std::string>()
          << "] " << f.at("detail").get<std::string>() << "\n";
  }
  table << "  elapsed: " << elapsed_ms(start) << " ms\n";

  CommandResult out;
  out.exit_code = total_failures > 0 ? kExitViolation : kExitOk;
  out.report = std::move(report);
  out.table = table.str();
  return out;
}

CommandResult cmd_inequalities(const InequalityOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (options.trials < 1) {
    throw DomainError("inequalities: trials must be >= 1");
  }
  if (!(options.tolerance > 0.0)) {
    throw DomainError("inequalities: tolerance must be positive");
  }
  TrialEnsembleOptions ens = options.ensemble;
  ens.ranks = "full";  // the bounds are checked on full-rank pairs
  check_ensemble(ens);

  const ConvexFunctionSpec rel_entropy = catalog("relative-entropy");
  const ConvexFunctionSpec chi_squared = catalog("chi-squared");
  const ConvexFunctionSpec total_variation = catalog("total-variation");

  int violations = 0;
  long long vacuous = 0;
  double max_margin_log_chi = -std::numeric_limits<double>::infinity();
  double max_margin_tv_chi = -std::numeric_limits<double>::infinity();
  Json failures = Json::array();

  for (int trial = 0; trial < options.trials; ++trial) {
    std::mt19937_64 gen(rng::derive_seed(options.seed, static_cast<std::uint64_t>(trial)));
    const AlgebraSpec spec = draw_algebra(gen, ens);
    const State phi = random_state(spec, gen());
    const State omega = random_state(spec, gen());

    const NSOutput ns = build_ns(spec, simultaneous_spectrum(spec, phi, omega));
    const ExtReal d = f_div_from_ns(ns, rel_entropy).value;
    const ExtReal chi = f_div_from_ns(ns, chi_squared).value;
    const ExtReal tv = f_div_from_ns(ns, total_variation).value;

    if (chi.is_infinite()) {
      // D <= ln(1 + inf) and D <= (tv + inf)/2 hold vacuously.
      ++vacuous;
      continue;
    }
    const double dv = d.finite_value();
    const double chiv = chi.finite_value();
    const double tvv = tv.finite_value();

    const double margin1 = dv - std::log1p(chiv);
    const double margin2 = dv - 0.5 * (tvv + chiv);
    max_margin_log_chi = std::max(max_margin_log_chi, margin1);
    max_margin_tv_chi = std::max(max_margin_tv_chi, margin2);
    if (margin1 > options.tolerance) {
      ++violations;
      failures.push_back(Json{{"trial", trial},
                              {"check", "log-chi"},
                              {"detail", "D = " + ExtReal(dv).str() + " > ln(1 + chi2) = " +
                                             ExtReal(std::log1p(chiv)).str()}});
    }
    if (margin2 > options.tolerance) {
      ++violations;
      failures.push_back(Json{{"trial", trial},
                              {"check", "tv-chi"},
                              {"detail", "D = " + ExtReal(dv).str() + " > (tv + chi2)/2 = " +
                                             ExtReal(0.5 * (tvv + chiv)).str()}});
    }
  }

  Json report;
  report["command"] = "inequalities";
  report["options"] = Json{{"trials", options.trials},
                           {"seed", options.seed},
                           {"max_dim", ens.max_dim},
                           {"max_blocks", ens.max_blocks},
                           {"weight_range", Json::array({ens.weight_lo, ens.weight_hi})},
                           {"tol", options.tolerance}};
  const auto margin_json = [](double m) {
    return std::isfinite(m) ? Json(m) : Json(nullptr);
  };
  const auto margin_str = [](double m) {
    return std::isfinite(m) ? ExtReal(m).str() : std::string("n/a");
  };
  report["totals"] =
      Json{{"trials", options.trials}, {"violations", violations}, {"vacuous", vacuous}};
  report["stats"] = Json{{"max_margin_log_chi", margin_json(max_margin_log_chi)},
                         {"max_margin_tv_chi", margin_json(max_margin_tv_chi)}};
  report["failures"] = failures;

  std::ostringstream table;
  table << "inequalities: " << options.trials << " trials, seed " << options.seed << "\n"
        << "  violations: " << violations << " (vacuous: " << vacuous << ")\n"
        << "  max margin D - ln(1 + chi2): " << margin_str(max_margin_log_chi) << "\n"
        << "  max margin D - (tv + chi2)/2: " << margin_str(max_margin_tv_chi) << "\n";
  for (const auto& f : failures) {
    table << "  FAIL trial " << f.at("trial") << " [" << f.at("check").get<std::string>()
          << "] " << f.at("detail").get<std::string>() << "\n";
  }
  table << "  elapsed: " << elapsed_ms(start) << " ms\n";

  CommandResult out;
  out.exit_code = violations > 0 ? kExitViolation : kExitOk;
  out.report = std::move(report);
  out.table = table.str();
  return out;
}

}  // namespace qfdiv::cli
