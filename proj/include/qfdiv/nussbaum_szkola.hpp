#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "qfdiv/algebra.hpp"

namespace qfdiv {

// Joint spectral data of the left multiplication by xi_phi and the right
// multiplication by xi_omega on one block: these commute, and their joint
// eigenvectors are the rank-one matrices u_i v_j*. alpha/beta are the
// eigenvalues of xi_phi/xi_omega (ascending, support-clamped to exact zeros);
// overlap(i, j) = |<u_i, v_j>|^2 is doubly stochastic.
struct BlockJointSpectrum {
  Eigen::VectorXd alpha;
  Matrix u;
  Eigen::VectorXd beta;
  Matrix v;
  Eigen::MatrixXd overlap;
};

struct SimultaneousSpectrum {
  std::vector<BlockJointSpectrum> blocks;
};

// One atom of the discrete measure space X = {(k, i, j)}: nu is the measure
// of the atom, fphi = alpha_i^2 and fomega = beta_j^2 are the
// Nussbaum-Szkola densities against nu.
struct NSAtom {
  int block = 0;
  int i = 0;
  int j = 0;
  double nu = 0.0;
  double fphi = 0.0;
  double fomega = 0.0;
  double overlap = 0.0;
};

struct NSOutput {
  // Lexicographic in (block, i, j); atoms with nu = 0 are kept.
  std::vector<NSAtom> atoms;
  // omega(1 - s(phi)) = sum over {fphi = 0} of fomega * nu.
  double omega_mass_outside_phi_support = 0.0;
  // phi(1 - s(omega)) = sum over {fomega = 0} of fphi * nu.
  double phi_mass_outside_omega_support = 0.0;
};

SimultaneousSpectrum simultaneous_spectrum(const AlgebraSpec& spec, const State& phi,
                                           const State& omega);

// nu({k,i,j}) = t_k * overlap(i,j) when alpha_i > 0 or beta_j > 0, else 0.
NSOutput build_ns(const AlgebraSpec& spec, const SimultaneousSpectrum& sim);

// The same two support defects computed as tau-pairings with support
// projections, independent of the atom list:
//   first  = tau(h_omega (1 - s(phi)))  = omega(1 - s(phi))
//   second = tau(h_phi   (1 - s(omega))) = phi(1 - s(omega))
std::pair<double, double> support_defects_direct(const AlgebraSpec& spec, const State& phi,
                                                 const State& omega);

}  // namespace qfdiv
