#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qfdiv/algebra.hpp"
#include "qfdiv/ext_real.hpp"
#include "qfdiv/nussbaum_szkola.hpp"

namespace qfdiv {

// A convex function on (0, +inf) together with its boundary data
// f(0+) = lim_{t->0+} f(t) and f'(+inf) = lim_{t->+inf} f(t)/t, both in
// (-inf, +inf] by convexity.
struct ConvexFunctionSpec {
  std::string name;
  std::function<double(double)> eval;
  ExtReal f_at_zero;
  ExtReal slope_at_inf;
};

enum class Route { kNS, kDirect };

// value = term_main + f(0+) * (omega mass outside supp phi)
//               + f'(+inf) * (phi mass outside supp omega),
// combined with ext_add so the invariant value == sum of terms holds exactly.
struct DivergenceResult {
  ExtReal value;
  ExtReal term_main;
  ExtReal term_f0;
  ExtReal term_fpinf;
  Route route = Route::kNS;
};

struct WeightedAtom {
  double nu = 0.0;
  double p = 0.0;
  double q = 0.0;
};

// D_f(p dnu || q dnu) over a finite atom list:
//   sum_{p,q>0} q f(p/q) nu + f(0+) sum_{p=0,q>0} q nu
//                           + f'(+inf) sum_{p>0,q=0} p nu,
// with strict zero tests (densities arrive pre-clamped) and atoms with
// p = q = 0 contributing nothing.
ExtReal classical_f_div(std::span<const WeightedAtom> atoms, const ConvexFunctionSpec& f);

// Divergence of a prebuilt Nussbaum-Szkola output, with the three-term split.
DivergenceResult f_div_from_ns(const NSOutput& ns, const ConvexFunctionSpec& f);

// Quantum f-divergence via the Nussbaum-Szkola reduction.
DivergenceResult quantum_f_div_ns(const AlgebraSpec& spec, const State& phi, const State& omega,
                                  const ConvexFunctionSpec& f);

// Quantum f-divergence via the relative modular operator: per block builds
// the dim^2 x dim^2 matrix of x -> xi_phi x w(xi_omega) on vectorized
// matrices, squares it into Delta, diagonalizes with a dense Hermitian
// eigensolver (independent of the joint basis the NS route uses), and sums
// f(lambda) |<psi, xi_omega>|^2 over the spectrum restricted to (0, +inf).
// Boundary terms come from the tau-pairing support defects.
DivergenceResult quantum_f_div_direct(const AlgebraSpec& spec, const State& phi,
                                      const State& omega, const ConvexFunctionSpec& f);

// Named catalog:
//   relative-entropy  f(t) = t ln t        f(0+) = 0,    f'(inf) = +inf
//   chi-squared       f(t) = (t-1)^2       f(0+) = 1,    f'(inf) = +inf
//   total-variation   f(t) = |t-1|         f(0+) = 1,    f'(inf) = 1
//   neg-log           f(t) = -ln t         f(0+) = +inf, f'(inf) = 0
//   power             f(t) = t^alpha, alpha in (1, 2]; needs `parameter`
ConvexFunctionSpec catalog(const std::string& name,
                           std::optional<double> parameter = std::nullopt);

// The named entries above (power excluded; it needs a parameter).
std::vector<std::string> catalog_names();

}  // namespace qfdiv
