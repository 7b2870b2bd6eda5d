#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <vector>

#include "qfdiv/commands.hpp"
#include "qfdiv/divergence.hpp"
#include "qfdiv/problem_io.hpp"

namespace py = pybind11;
using namespace qfdiv;

namespace {

Element element_from_blocks(const AlgebraSpec& spec, const std::vector<Matrix>& blocks) {
  Element e;
  e.blocks = blocks;
  check_conforms(spec, e, "element");
  return e;
}

py::dict result_dict(const DivergenceResult& r) {
  py::dict d;
  d["value"] = r.value.as_double();
  d["term_main"] = r.term_main.as_double();
  d["term_f0"] = r.term_f0.as_double();
  d["term_fpinf"] = r.term_fpinf.as_double();
  d["route"] = r.route == Route::kNS ? "ns" : "direct";
  return d;
}

py::object json_to_py(const nlohmann::ordered_json& j) {
  using Json = nlohmann::ordered_json;
  switch (j.type()) {
    case Json::value_t::null:
      return py::none();
    case Json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case Json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case Json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case Json::value_t::number_float:
      return py::float_(j.get<double>());
    case Json::value_t::string:
      return py::str(j.get<std::string>());
    case Json::value_t::array: {
      py::list out;
      for (const auto& item : j) {
        out.append(json_to_py(item));
      }
      return out;
    }
    case Json::value_t::object: {
      py::dict out;
      for (const auto& item : j.items()) {
        out[py::str(item.key())] = json_to_py(item.value());
      }
      return out;
    }
    default:
      return py::none();
  }
}

ConvexFunctionSpec resolve_f(const std::string& name, std::optional<double> alpha) {
  return name == "power" ? catalog(name, alpha) : catalog(name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "f-divergences between density matrices on direct sums of weighted matrix blocks";

  py::register_exception<Error>(m, "QfdivError", PyExc_ValueError);

  py::class_<AlgebraSpec>(m, "AlgebraSpec")
      .def(py::init([](const std::vector<std::pair<int, double>>& blocks) {
             std::vector<BlockSpec> specs;
             specs.reserve(blocks.size());
             for (const auto& [dim, weight] : blocks) {
               specs.push_back(BlockSpec{dim, weight});
             }
             return AlgebraSpec(std::move(specs));
           }),
           py::arg("blocks"), "blocks: list of (dim, weight) pairs")
      .def_property_readonly("blocks",
                             [](const AlgebraSpec& spec) {
                               std::vector<std::pair<int, double>> out;
                               for (const auto& b : spec.blocks()) {
                                 out.emplace_back(b.dim, b.weight);
                               }
                               return out;
                             })
      .def("__repr__", [](const AlgebraSpec& spec) {
        std::string r = "AlgebraSpec([";
        for (int k = 0; k < spec.block_count(); ++k) {
          if (k > 0) {
            r += ", ";
          }
          r += "(" + std::to_string(spec.dim(k)) + ", " + std::to_string(spec.weight(k)) + ")";
        }
        return r + "])";
      });

  py::class_<State>(m, "State")
      .def_property_readonly("h", [](const State& s) { return s.h.blocks; },
                             "Density blocks, tau(h) = 1")
      .def_property_readonly("xi", [](const State& s) { return s.xi.blocks; },
                             "Vector representative h^{1/2}");

  m.def(
      "validate_state",
      [](const AlgebraSpec& spec, const std::vector<Matrix>& blocks, bool renormalize) {
        return validate_state(spec, element_from_blocks(spec, blocks), renormalize);
      },
      py::arg("spec"), py::arg("blocks"), py::arg("renormalize") = false);

  m.def(
      "random_state",
      [](const AlgebraSpec& spec, std::uint64_t seed,
         const std::optional<std::vector<int>>& ranks) { return random_state(spec, seed, ranks); },
      py::arg("spec"), py::arg("seed"), py::arg("ranks") = py::none());

  m.def(
      "trace",
      [](const AlgebraSpec& spec, const std::vector<Matrix>& blocks) {
        return trace(spec, element_from_blocks(spec, blocks));
      },
      py::arg("spec"), py::arg("blocks"));

  m.def(
      "inner",
      [](const AlgebraSpec& spec, const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
        return inner(spec, element_from_blocks(spec, a), element_from_blocks(spec, b));
      },
      py::arg("spec"), py::arg("a"), py::arg("b"));

  m.def(
      "ns_atoms",
      [](const AlgebraSpec& spec, const State& phi, const State& omega) {
        const NSOutput ns = build_ns(spec, simultaneous_spectrum(spec, phi, omega));
        py::list atoms;
        for (const auto& a : ns.atoms) {
          py::dict d;
          d["block"] = a.block;
          d["i"] = a.i;
          d["j"] = a.j;
          d["nu"] = a.nu;
          d["fphi"] = a.fphi;
          d["fomega"] = a.fomega;
          d["overlap"] = a.overlap;
          atoms.append(d);
        }
        py::dict out;
        out["atoms"] = atoms;
        out["omega_outside_phi_support"] = ns.omega_mass_outside_phi_support;
        out["phi_outside_omega_support"] = ns.phi_mass_outside_omega_support;
        return out;
      },
      py::arg("spec"), py::arg("phi"), py::arg("omega"));

  m.def(
      "support_defects",
      [](const AlgebraSpec& spec, const State& phi, const State& omega) {
        return support_defects_direct(spec, phi, omega);
      },
      py::arg("spec"), py::arg("phi"), py::arg("omega"),
      "(omega mass outside supp phi, phi mass outside supp omega) via projection pairings");

  m.def(
      "f_divergence",
      [](const AlgebraSpec& spec, const State& phi, const State& omega, const std::string& name,
         std::optional<double> alpha, const std::string& route) {
        if (route != "ns" && route != "direct" && route != "both") {
          throw DomainError("f_divergence: route must be ns, direct or both");
        }
        const ConvexFunctionSpec f = resolve_f(name, alpha);
        py::dict out;
        out["f"] = f.name;
        std::optional<DivergenceResult> a;
        std::optional<DivergenceResult> b;
        if (route != "direct") {
          a = quantum_f_div_ns(spec, phi, omega, f);
          out["ns"] = result_dict(*a);
        }
        if (route != "ns") {
          b = quantum_f_div_direct(spec, phi, omega, f);
          out["direct"] = result_dict(*b);
        }
        if (a && b) {
          const bool both_inf = a->value.is_infinite() && b->value.is_infinite();
          out["delta"] = both_inf ? 0.0
                                  : std::abs(a->value.as_double() - b->value.as_double());
        }
        return out;
      },
      py::arg("spec"), py::arg("phi"), py::arg("omega"), py::arg("name"),
      py::arg("alpha") = py::none(), py::arg("route") = "both");

  m.def("catalog_names", &catalog_names);

  m.def(
      "verify",
      [](int trials, std::uint64_t seed, double tol, int max_dim, int max_blocks,
         double weight_lo, double weight_hi, const std::string& ranks) {
        cli::VerifyOptions opt;
        opt.trials = trials;
        opt.seed = seed;
        opt.tolerance = tol;
        opt.ensemble = cli::TrialEnsembleOptions{max_blocks, max_dim, weight_lo, weight_hi, ranks};
        return json_to_py(cli::cmd_verify(opt).report);
      },
      py::arg("trials") = 100, py::arg("seed") = 0, py::arg("tol") = 1e-8,
      py::arg("max_dim") = 4, py::arg("max_blocks") = 3, py::arg("weight_lo") = 0.5,
      py::arg("weight_hi") = 2.0, py::arg("ranks") = "mixed");

  m.def(
      "inequalities",
      [](int trials, std::uint64_t seed, double tol, int max_dim, int max_blocks,
         double weight_lo, double weight_hi) {
        cli::InequalityOptions opt;
        opt.trials = trials;
        opt.seed = seed;
        opt.tolerance = tol;
        opt.ensemble =
            cli::TrialEnsembleOptions{max_blocks, max_dim, weight_lo, weight_hi, "full"};
        return json_to_py(cli::cmd_inequalities(opt).report);
      },
      py::arg("trials") = 100, py::arg("seed") = 0, py::arg("tol") = 1e-8,
      py::arg("max_dim") = 4, py::arg("max_blocks") = 3, py::arg("weight_lo") = 0.5,
      py::arg("weight_hi") = 2.0);

  m.attr("__version__") = "0.1.0";
}
