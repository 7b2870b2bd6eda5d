#include "qfdiv/divergence.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "qfdiv/spectral.hpp"
#include "qfdiv/tolerances.hpp"

namespace qfdiv {

namespace {

double checked_eval(const ConvexFunctionSpec& f, double t) {
  const double value = f.eval(t);
  if (!std::isfinite(value)) {
    throw DomainError("divergence: f = " + f.name + " is non-finite at t = " +
                      std::to_string(t));
  }
  return value;
}

// The three raw ingredients of D_f over an atom list with strict zero tests:
// the main sum over {p>0, q>0} and the boundary masses of {p=0, q>0} and
// {p>0, q=0}. Atoms with p = q = 0 contribute nothing.
struct SplitSums {
  double main = 0.0;
  double mass_q_where_p0 = 0.0;
  double mass_p_where_q0 = 0.0;
};

template <typename AtomRange, typename NuOf, typename POf, typename QOf>
SplitSums split_sums(const AtomRange& atoms, NuOf nu_of, POf p_of, QOf q_of,
                     const ConvexFunctionSpec& f) {
  SplitSums s;
  for (const auto& atom : atoms) {
    const double nu = nu_of(atom);
    const double p = p_of(atom);
    const double q = q_of(atom);
    if (p > 0.0 && q > 0.0) {
      s.main += q * checked_eval(f, p / q) * nu;
    } else if (p == 0.0 && q > 0.0) {
      s.mass_q_where_p0 += q * nu;
    } else if (p > 0.0) {
      s.mass_p_where_q0 += p * nu;
    }
  }
  return s;
}

DivergenceResult assemble(double main, double mass_for_f0, double mass_for_fpinf,
                          const ConvexFunctionSpec& f, Route route) {
  DivergenceResult r;
  r.route = route;
  r.term_main = ExtReal(main);
  r.term_f0 = ext_scale(mass_for_f0, f.f_at_zero);
  r.term_fpinf = ext_scale(mass_for_fpinf, f.slope_at_inf);
  r.value = ext_add(ext_add(r.term_main, r.term_f0), r.term_fpinf);
  return r;
}

}  // namespace

ExtReal classical_f_div(std::span<const WeightedAtom> atoms, const ConvexFunctionSpec& f) {
  for (const auto& atom : atoms) {
    if (!(std::isfinite(atom.nu) && std::isfinite(atom.p) && std::isfinite(atom.q)) ||
        atom.nu < 0.0 || atom.p < 0.0 || atom.q < 0.0) {
      throw DomainError("classical_f_div: atoms must be nonnegative and finite");
    }
  }
  const SplitSums s = split_sums(
      atoms, [](const WeightedAtom& a) { return a.nu; }, [](const WeightedAtom& a) { return a.p; },
      [](const WeightedAtom& a) { return a.q; }, f);
  return ext_add(ext_add(ExtReal(s.main), ext_scale(s.mass_q_where_p0, f.f_at_zero)),
                 ext_scale(s.mass_p_where_q0, f.slope_at_inf));
}

DivergenceResult f_div_from_ns(const NSOutput& ns, const ConvexFunctionSpec& f) {
  const SplitSums s = split_sums(
      ns.atoms, [](const NSAtom& a) { return a.nu; }, [](const NSAtom& a) { return a.fphi; },
      [](const NSAtom& a) { return a.fomega; }, f);
  // The boundary masses are exactly the stored support defects, which have
  // been cleaned of kernel-alignment rounding noise; use those.
  return assemble(s.main, ns.omega_mass_outside_phi_support, ns.phi_mass_outside_omega_support,
                  f, Route::kNS);
}

DivergenceResult quantum_f_div_ns(const AlgebraSpec& spec, const State& phi, const State& omega,
                                  const ConvexFunctionSpec& f) {
  return f_div_from_ns(build_ns(spec, simultaneous_spectrum(spec, phi, omega)), f);
}

DivergenceResult quantum_f_div_direct(const AlgebraSpec& spec, const State& phi,
                                      const State& omega, const ConvexFunctionSpec& f) {
  const Element pseudo = w_apply(spec, omega.xi);

  double main = 0.0;
  for (int k = 0; k < spec.block_count(); ++k) {
    const auto& xphi = phi.xi.blocks[static_cast<std::size_t>(k)];
    const auto& womega = pseudo.blocks[static_cast<std::size_t>(k)];
    const auto& xomega = omega.xi.blocks[static_cast<std::size_t>(k)];
    const int n = spec.dim(k);
    const double t = spec.weight(k);

    // Matrix of x -> xi_phi x w(xi_omega) on column-stacked matrices. The
    // column for the matrix unit E_ab is vec(xi_phi E_ab W) =
    // vec(outer(xi_phi e_a, W^T e_b)); the scaled matrix-unit basis
    // E_ab / sqrt(t) is orthonormal for tau(a* b) and the uniform scaling
    // leaves this matrix unchanged.
    Matrix half(n * n, n * n);
    for (int b = 0; b < n; ++b) {
      for (int a = 0; a < n; ++a) {
        const Matrix image = xphi.col(a) * womega.row(b);
        half.col(b * n + a) = Eigen::Map<const Eigen::VectorXcd>(image.data(), n * n);
      }
    }

    const Matrix delta = half.adjoint() * half;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(delta);
    if (solver.info() != Eigen::Success) {
      throw Error("quantum_f_div_direct: eigensolver failed on block " + std::to_string(k));
    }

    // Squaring through half.adjoint() * half costs relative accuracy on the
    // small eigenvalues; re-evaluating the quadratic form as |half psi|^2
    // restores it without touching the eigenbasis.
    Eigen::VectorXd lambda(solver.eigenvalues().size());
    for (Eigen::Index m = 0; m < lambda.size(); ++m) {
      lambda(m) = (half * solver.eigenvectors().col(m)).squaredNorm();
    }

    const double cutoff = support_cutoff(lambda);
    const Eigen::VectorXcd vec_xi =
        Eigen::Map<const Eigen::VectorXcd>(xomega.data(), n * n);
    for (Eigen::Index m = 0; m < lambda.size(); ++m) {
      if (lambda(m) > cutoff) {
        const double weight = t * std::norm(solver.eigenvectors().col(m).dot(vec_xi));
        main += checked_eval(f, lambda(m)) * weight;
      }
    }
  }

  const auto [omega_outside, phi_outside] = support_defects_direct(spec, phi, omega);
  return assemble(main, omega_outside, phi_outside, f, Route::kDirect);
}

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

ConvexFunctionSpec catalog(const std::string& name, std::optional<double> parameter) {
  if (name == "power") {
    if (!parameter) {
      throw DomainError("catalog: power needs a parameter alpha in (1, 2]");
    }
    const double alpha = *parameter;
    if (!(alpha > 1.0 && alpha <= 2.0)) {
      throw DomainError("catalog: power alpha = " + std::to_string(alpha) +
                        " outside the convex range (1, 2]");
    }
    return ConvexFunctionSpec{"power(" + format_double(alpha) + ")",
                              [alpha](double t) { return std::pow(t, alpha); }, ExtReal(0.0),
                              ExtReal::infinity()};
  }
  if (parameter) {
    throw DomainError("catalog: " + name + " takes no parameter");
  }
  if (name == "relative-entropy") {
    return ConvexFunctionSpec{name, [](double t) { return t * std::log(t); }, ExtReal(0.0),
                              ExtReal::infinity()};
  }
  if (name == "chi-squared") {
    return ConvexFunctionSpec{name, [](double t) { return (t - 1.0) * (t - 1.0); }, ExtReal(1.0),
                              ExtReal::infinity()};
  }
  if (name == "total-variation") {
    return ConvexFunctionSpec{name, [](double t) { return std::abs(t - 1.0); }, ExtReal(1.0),
                              ExtReal(1.0)};
  }
  if (name == "neg-log") {
    return ConvexFunctionSpec{name, [](double t) { return -std::log(t); }, ExtReal::infinity(),
                              ExtReal(0.0)};
  }
  throw DomainError("catalog: unknown divergence name \"" + name + "\"");
}

std::vector<std::string> catalog_names() {
  return {"relative-entropy", "chi-squared", "total-variation", "neg-log"};
}

}  // namespace qfdiv
