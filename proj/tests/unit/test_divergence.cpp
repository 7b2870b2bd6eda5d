#include <doctest.h>

#include <cmath>
#include <vector>

#include "qfdiv/divergence.hpp"
#include "qfdiv/spectral.hpp"
#include "test_helpers.hpp"

using namespace qfdiv;
using namespace qfdiv::testing;

namespace {

// Weighted classical divergence of two diagonal densities, coded directly
// from the three-region formula; the oracle for commuting and abelian cases.
ExtReal classical_oracle(const std::vector<double>& weights,
                         const std::vector<std::vector<double>>& p,
                         const std::vector<std::vector<double>>& q,
                         const ConvexFunctionSpec& f) {
  double main = 0.0;
  double mass0 = 0.0;
  double massinf = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    for (std::size_t i = 0; i < p[k].size(); ++i) {
      if (p[k][i] > 0.0 && q[k][i] > 0.0) {
        main += weights[k] * q[k][i] * f.eval(p[k][i] / q[k][i]);
      } else if (p[k][i] == 0.0 && q[k][i] > 0.0) {
        mass0 += weights[k] * q[k][i];
      } else if (p[k][i] > 0.0) {
        massinf += weights[k] * p[k][i];
      }
    }
  }
  return ext_add(ext_add(ExtReal(main), ext_scale(mass0, f.f_at_zero)),
                 ext_scale(massinf, f.slope_at_inf));
}

std::vector<ConvexFunctionSpec> all_catalog() {
  std::vector<ConvexFunctionSpec> fs;
  for (const auto& name : catalog_names()) {
    fs.push_back(catalog(name));
  }
  fs.push_back(catalog("power", 1.5));
  fs.push_back(catalog("power", 2.0));
  return fs;
}

void check_terms_sum(const DivergenceResult& r) {
  CHECK(r.value == ext_add(ext_add(r.term_main, r.term_f0), r.term_fpinf));
}

State pure_zero(const AlgebraSpec& spec) {
  return validate_state(spec, diag_element(spec, {{1.0, 0.0}}));
}

State pure_plus(const AlgebraSpec& spec) {
  Element h = Element::zero(spec);
  h.blocks[0] << 0.5, 0.5, 0.5, 0.5;
  return validate_state(spec, h);
}

}  // namespace

TEST_SUITE_BEGIN("divergence");

TEST_CASE("catalog entries carry the right boundary data") {
  const auto re = catalog("relative-entropy");
  CHECK(re.eval(1.0) == 0.0);
  CHECK(re.f_at_zero == ExtReal(0.0));
  CHECK(re.slope_at_inf.is_infinite());

  const auto tv = catalog("total-variation");
  CHECK(tv.eval(2.0) == doctest::Approx(1.0));
  CHECK(tv.f_at_zero == ExtReal(1.0));
  CHECK(tv.slope_at_inf == ExtReal(1.0));

  const auto chi = catalog("chi-squared");
  CHECK(chi.eval(0.5) == doctest::Approx(0.25));
  CHECK(chi.f_at_zero == ExtReal(1.0));
  CHECK(chi.slope_at_inf.is_infinite());

  const auto nl = catalog("neg-log");
  CHECK(nl.f_at_zero.is_infinite());
  CHECK(nl.slope_at_inf == ExtReal(0.0));

  const auto pw = catalog("power", 1.5);
  CHECK(pw.eval(4.0) == doctest::Approx(8.0));
  CHECK(pw.f_at_zero == ExtReal(0.0));
  CHECK(pw.slope_at_inf.is_infinite());

  CHECK_THROWS_AS(catalog("no-such-divergence"), DomainError);
  CHECK_THROWS_AS(catalog("power"), DomainError);
  CHECK_THROWS_AS(catalog("power", 1.0), DomainError);
  CHECK_THROWS_AS(catalog("power", 2.5), DomainError);
  CHECK_THROWS_AS(catalog("relative-entropy", 1.5), DomainError);
}

TEST_CASE("catalog entries are midpoint convex on sampled points") {
  for (const auto& f : all_catalog()) {
    for (double s : {0.05, 0.3, 1.0, 2.5, 17.0}) {
      for (double t : {0.08, 0.9, 4.0, 40.0}) {
        CHECK(f.eval(0.5 * (s + t)) <= 0.5 * (f.eval(s) + f.eval(t)) + 1e-9);
      }
    }
  }
}

TEST_CASE("classical divergence of hand-sized atom lists") {
  const auto re = catalog("relative-entropy");

  // equal distributions sit at f(1)
  const std::vector<WeightedAtom> same = {{1.0, 0.5, 0.5}, {1.0, 0.5, 0.5}};
  CHECK(classical_f_div(same, re) == ExtReal(0.0));

  const std::vector<WeightedAtom> pair = {{1.0, 0.5, 0.75}, {1.0, 0.5, 0.25}};
  const ExtReal d = classical_f_div(pair, re);
  CHECK(d.finite_value() ==
        doctest::Approx(0.5 * std::log(4.0 / 3.0)).epsilon(1e-13));  // = 0.143841...
  CHECK(d.finite_value() == doctest::Approx(0.143841).epsilon(1e-5));

  // an atom with p > 0, q = 0 pushes a slope-at-infinity divergence to +inf
  const std::vector<WeightedAtom> singular = {{1.0, 1.0, 0.0}};
  CHECK(classical_f_div(singular, re).is_infinite());

  // but not when f'(inf) is finite
  const auto tv = catalog("total-variation");
  CHECK(classical_f_div(singular, tv) == ExtReal(1.0));

  // p = q = 0 contributes nothing even against +inf boundary values
  const auto nl = catalog("neg-log");
  const std::vector<WeightedAtom> padded = {{1.0, 0.5, 0.5}, {5.0, 0.0, 0.0}, {1.0, 0.5, 0.5}};
  CHECK(classical_f_div(padded, nl) == ExtReal(0.0));

  const std::vector<WeightedAtom> negative = {{1.0, -0.5, 0.5}};
  CHECK_THROWS_AS(classical_f_div(negative, re), DomainError);
}

TEST_CASE("both routes on the diagonal qubit pair") {
  const AlgebraSpec spec = qubit();
  const State phi = validate_state(spec, diag_element(spec, {{0.5, 0.5}}));
  const State omega = validate_state(spec, diag_element(spec, {{0.75, 0.25}}));

  const double expected_re = 0.5 * std::log(4.0 / 3.0);
  const double expected_chi = 0.25 / 0.75 + 0.25 / 0.25 - 1.0;  // sum p^2/q - 1 = 1/3
  const double expected_tv = std::abs(0.5 - 0.75) + std::abs(0.5 - 0.25);

  for (Route route : {Route::kNS, Route::kDirect}) {
    const auto run = [&](const ConvexFunctionSpec& f) {
      return route == Route::kNS ? quantum_f_div_ns(spec, phi, omega, f)
                                 : quantum_f_div_direct(spec, phi, omega, f);
    };
    const DivergenceResult re = run(catalog("relative-entropy"));
    CHECK(std::abs(re.value.finite_value() - expected_re) <= 1e-10);
    check_terms_sum(re);
    CHECK(std::abs(run(catalog("chi-squared")).value.finite_value() - expected_chi) <= 1e-10);
    CHECK(std::abs(run(catalog("total-variation")).value.finite_value() - expected_tv) <= 1e-10);
  }

  const ExtReal a = quantum_f_div_ns(spec, phi, omega, catalog("relative-entropy")).value;
  const ExtReal b = quantum_f_div_direct(spec, phi, omega, catalog("relative-entropy")).value;
  CHECK(std::abs(a.finite_value() - b.finite_value()) <= 1e-10);
}

TEST_CASE("commuting pairs reduce to the weighted classical formula") {
  const AlgebraSpec spec({{2, 1.0}, {2, 1.7}, {1, 0.4}});
  const std::vector<std::vector<double>> p = {{0.2, 0.3}, {0.05, 0.1}, {0.5 / 0.4 * 0.28}};
  const std::vector<std::vector<double>> q = {{0.1, 0.4}, {0.12, 0.08}, {0.5 / 0.4 * 0.26}};
  // normalize: weights times sums must be one; rescale explicitly
  double zp = 0.0;
  double zq = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < p[k].size(); ++i) {
      zp += spec.weight(static_cast<int>(k)) * p[k][i];
      zq += spec.weight(static_cast<int>(k)) * q[k][i];
    }
  }
  std::vector<std::vector<double>> pn = p;
  std::vector<std::vector<double>> qn = q;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < p[k].size(); ++i) {
      pn[k][i] /= zp;
      qn[k][i] /= zq;
    }
  }
  const State phi = validate_state(spec, diag_element(spec, pn));
  const State omega = validate_state(spec, diag_element(spec, qn));

  for (const auto& f : all_catalog()) {
    const ExtReal oracle =
        classical_oracle({1.0, 1.7, 0.4}, pn, qn, f);
    const DivergenceResult ns = quantum_f_div_ns(spec, phi, omega, f);
    const DivergenceResult direct = quantum_f_div_direct(spec, phi, omega, f);
    REQUIRE(oracle.is_finite());
    CHECK(std::abs(ns.value.finite_value() - oracle.finite_value()) <= 1e-10);
    CHECK(std::abs(direct.value.finite_value() - oracle.finite_value()) <= 1e-10);
  }
}

TEST_CASE("abelian algebras match the classical formula at 1e-12") {
  const AlgebraSpec spec({{1, 0.5}, {1, 1.25}, {1, 2.0}, {1, 0.25}});
  const std::vector<std::vector<double>> p = {{0.4}, {0.24}, {0.2}, {0.4}};
  const std::vector<std::vector<double>> q = {{1.0}, {0.2}, {0.1}, {0.2}};
  // tau-normalized by construction: 0.5*0.4 + 1.25*0.24 + 2*0.2 + 0.25*0.4 = 1
  const State phi = validate_state(spec, diag_element(spec, p));
  const State omega = validate_state(spec, diag_element(spec, q));
  for (const auto& f : all_catalog()) {
    const ExtReal oracle = classical_oracle({0.5, 1.25, 2.0, 0.25}, p, q, f);
    const double got_ns = quantum_f_div_ns(spec, phi, omega, f).value.finite_value();
    const double got_direct = quantum_f_div_direct(spec, phi, omega, f).value.finite_value();
    CHECK(std::abs(got_ns - oracle.finite_value()) <= 1e-12);
    CHECK(std::abs(got_direct - oracle.finite_value()) <= 1e-12);
  }
}

TEST_CASE("self-divergence is f(1)") {
  const AlgebraSpec spec = mixed_algebra();
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const State s = random_state(spec, 9000 + seed);
    for (const auto& f : all_catalog()) {
      const double f1 = f.eval(1.0);
      CHECK(std::abs(quantum_f_div_ns(spec, s, s, f).value.finite_value() - f1) <= 1e-10);
      CHECK(std::abs(quantum_f_div_direct(spec, s, s, f).value.finite_value() - f1) <= 1e-10);
    }
  }
}

TEST_CASE("self-divergence of a rank-deficient state stays finite") {
  const AlgebraSpec spec = mixed_algebra();
  const State s = random_state(spec, 42, std::vector<int>{1, 2, 1});
  for (const auto& f : all_catalog()) {
    const double f1 = f.eval(1.0);
    CHECK(std::abs(quantum_f_div_ns(spec, s, s, f).value.finite_value() - f1) <= 1e-10);
    CHECK(std::abs(quantum_f_div_direct(spec, s, s, f).value.finite_value() - f1) <= 1e-10);
  }
}

TEST_CASE("singular-support pair: |0><0| against |+><+|") {
  const AlgebraSpec spec = qubit();
  const State phi = pure_zero(spec);
  const State omega = pure_plus(spec);

  const DivergenceResult re_ns = quantum_f_div_ns(spec, phi, omega, catalog("relative-entropy"));
  const DivergenceResult re_direct =
      quantum_f_div_direct(spec, phi, omega, catalog("relative-entropy"));
  CHECK(re_ns.value.is_infinite());
  CHECK(re_direct.value.is_infinite());
  CHECK(re_ns.term_fpinf.is_infinite());
  CHECK(re_direct.term_fpinf.is_infinite());
  CHECK(re_ns.term_main.is_finite());
  CHECK(std::abs(re_ns.term_main.finite_value()) <= 1e-12);  // only the (1,1) atom, f(1) = 0
  check_terms_sum(re_ns);
  check_terms_sum(re_direct);

  // total variation stays finite: 0 + 1 * 0.5 + 1 * 0.5 = 1
  const DivergenceResult tv_ns = quantum_f_div_ns(spec, phi, omega, catalog("total-variation"));
  const DivergenceResult tv_direct =
      quantum_f_div_direct(spec, phi, omega, catalog("total-variation"));
  CHECK(tv_ns.value.finite_value() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(tv_ns.value.finite_value() - tv_direct.value.finite_value()) <= 1e-10);
}

TEST_CASE("the two routes agree on random pairs") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    std::mt19937_64 gen(rng::derive_seed(77, seed));
    const int nblocks = 1 + static_cast<int>(gen() % 3);
    std::vector<BlockSpec> blocks;
    for (int k = 0; k < nblocks; ++k) {
      blocks.push_back(BlockSpec{1 + static_cast<int>(gen() % 4),
                                 0.5 + 1.5 * rng::uniform01(gen)});
    }
    const AlgebraSpec spec(blocks);
    std::optional<std::vector<int>> ranks;
    if ((gen() & 1u) != 0u) {
      std::vector<int> r;
      for (int k = 0; k < nblocks; ++k) {
        r.push_back(1 + static_cast<int>(gen() % static_cast<std::uint64_t>(spec.dim(k))));
      }
      ranks = std::move(r);
    }
    const State phi = random_state(spec, gen(), ranks);
    const State omega = random_state(spec, gen());

    for (const auto& f : all_catalog()) {
      const DivergenceResult a = quantum_f_div_ns(spec, phi, omega, f);
      const DivergenceResult b = quantum_f_div_direct(spec, phi, omega, f);
      check_terms_sum(a);
      check_terms_sum(b);
      if (a.value.is_infinite() || b.value.is_infinite()) {
        CHECK(a.value.is_infinite());
        CHECK(b.value.is_infinite());
      } else {
        const double scale = std::max(1.0, std::abs(a.value.finite_value()));
        CHECK(std::abs(a.value.finite_value() - b.value.finite_value()) <= 1e-8 * scale);
        // Jensen lower bound, testable because the marginals are classical states
        CHECK(a.value.finite_value() >= f.eval(1.0) - 1e-9);
        CHECK(b.value.finite_value() >= f.eval(1.0) - 1e-9);
      }
    }
  }
}

TEST_CASE("divergences are invariant under blockwise unitary conjugation") {
  const AlgebraSpec spec = mixed_algebra();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const State phi = random_state(spec, 100 + seed, std::vector<int>{2, 3, 1});
    const State omega = random_state(spec, 200 + seed);
    const Element u = random_unitary(spec, 300 + seed);
    const State phi_rot = validate_state(spec, u * phi.h * adjoint(u));
    const State omega_rot = validate_state(spec, u * omega.h * adjoint(u));
    for (const auto& f : all_catalog()) {
      for (const bool direct : {false, true}) {
        const auto run = [&](const State& a, const State& b) {
          return direct ? quantum_f_div_direct(spec, a, b, f).value
                        : quantum_f_div_ns(spec, a, b, f).value;
        };
        const ExtReal before = run(phi, omega);
        const ExtReal after = run(phi_rot, omega_rot);
        if (before.is_infinite() || after.is_infinite()) {
          CHECK(before.is_infinite());
          CHECK(after.is_infinite());
        } else {
          CHECK(std::abs(before.finite_value() - after.finite_value()) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("divergence values ignore the basis chosen inside degenerate eigenspaces") {
  // phi has a doubly degenerate eigenvalue; rotating the degenerate columns
  // of its eigenbasis changes individual atoms but no divergence value.
  const AlgebraSpec spec({{3, 1.0}});
  Element h_phi = diag_element(spec, {{0.2, 0.2, 0.6}});
  const State phi = validate_state(spec, h_phi);
  const State omega = random_state(spec, 55);

  SimultaneousSpectrum sim = simultaneous_spectrum(spec, phi, omega);
  const NSOutput plain = build_ns(spec, sim);

  // mix the two degenerate columns (eigenvalues sqrt(0.2) at indices 0, 1)
  Matrix mix = Matrix::Identity(3, 3);
  const double c = std::cos(0.71);
  const double s = std::sin(0.71);
  mix(0, 0) = Complex(c, 0.0);
  mix(0, 1) = Complex(-s, 0.0);
  mix(1, 0) = Complex(s * c, s * s);  // complex phase inside the rotation
  mix(1, 1) = Complex(c * c, -c * s);
  // orthonormalize the 2x2 corner to make it exactly unitary
  Eigen::HouseholderQR<Matrix> qr(mix.topLeftCorner(2, 2));
  mix.topLeftCorner(2, 2) = qr.householderQ();

  SimultaneousSpectrum rotated = sim;
  rotated.blocks[0].u = sim.blocks[0].u * mix;
  rotated.blocks[0].overlap =
      (rotated.blocks[0].u.adjoint() * rotated.blocks[0].v).cwiseAbs2();
  const NSOutput mixed = build_ns(spec, rotated);

  bool atoms_differ = false;
  for (std::size_t i = 0; i < plain.atoms.size(); ++i) {
    atoms_differ = atoms_differ || std::abs(plain.atoms[i].nu - mixed.atoms[i].nu) > 1e-6;
  }
  CHECK(atoms_differ);  // the rotation is visible at atom level

  for (const auto& f : all_catalog()) {
    const ExtReal a = f_div_from_ns(plain, f).value;
    const ExtReal b = f_div_from_ns(mixed, f).value;
    REQUIRE(a.is_finite() == b.is_finite());
    if (a.is_finite()) {
      CHECK(std::abs(a.finite_value() - b.finite_value()) <= 1e-9);
    }
  }
}

TEST_CASE("the direct route never evaluates f at excluded spectrum") {
  const AlgebraSpec spec = qubit();
  const State phi = pure_zero(spec);
  const State omega = pure_plus(spec);

  ConvexFunctionSpec tweaked = catalog("total-variation");
  const auto base = tweaked.eval;
  // Delta has a three-dimensional kernel here; poisoning f below the cutoff
  // scale must not change the main term.
  tweaked.eval = [base](double t) { return t < 1e-9 ? 1e50 : base(t); };

  const DivergenceResult clean = quantum_f_div_direct(spec, phi, omega, catalog("total-variation"));
  const DivergenceResult poisoned = quantum_f_div_direct(spec, phi, omega, tweaked);
  CHECK(clean.term_main == poisoned.term_main);
  CHECK(clean.value == poisoned.value);
}

TEST_SUITE_END();
