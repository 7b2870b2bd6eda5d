#include "qfdiv/nussbaum_szkola.hpp"

#include <algorithm>
#include <cmath>

#include "qfdiv/spectral.hpp"
#include "qfdiv/tolerances.hpp"

namespace qfdiv {

namespace {

// Eigenvalues at or below the block cutoff become exact zeros so that
// membership in {f = 0} downstream is a strict comparison, not a tolerance.
Eigen::VectorXd clamp_support(const Eigen::VectorXd& eigenvalues) {
  const double cutoff = support_cutoff(eigenvalues);
  Eigen::VectorXd out(eigenvalues.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out(i) = eigenvalues(i) <= cutoff ? 0.0 : eigenvalues(i);
  }
  return out;
}

double clamp_defect(double mass) {
  if (mass <= tol::kDefect) {
    return 0.0;
  }
  return std::min(mass, 1.0);
}

}  // namespace

SimultaneousSpectrum simultaneous_spectrum(const AlgebraSpec& spec, const State& phi,
                                           const State& omega) {
  SpectralData left = eigh(spec, phi.xi);
  SpectralData right = eigh(spec, omega.xi);
  SimultaneousSpectrum sim;
  sim.blocks.reserve(left.blocks.size());
  for (std::size_t k = 0; k < left.blocks.size(); ++k) {
    BlockJointSpectrum blk;
    blk.alpha = clamp_support(left.blocks[k].eigenvalues);
    blk.u = left.blocks[k].eigenvectors;
    blk.beta = clamp_support(right.blocks[k].eigenvalues);
    blk.v = right.blocks[k].eigenvectors;
    blk.overlap = (blk.u.adjoint() * blk.v).cwiseAbs2();
    sim.blocks.push_back(std::move(blk));
  }
  return sim;
}

NSOutput build_ns(const AlgebraSpec& spec, const SimultaneousSpectrum& sim) {
  if (sim.blocks.size() != static_cast<std::size_t>(spec.block_count())) {
    throw ShapeError("build_ns: spectrum does not match algebra");
  }
  NSOutput out;
  double omega_outside = 0.0;
  double phi_outside = 0.0;
  for (int k = 0; k < spec.block_count(); ++k) {
    const auto& blk = sim.blocks[static_cast<std::size_t>(k)];
    const double t = spec.weight(k);
    const int n = static_cast<int>(blk.alpha.size());
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double a = blk.alpha(i);
        const double b = blk.beta(j);
        const double lap = blk.overlap(i, j);
        NSAtom atom;
        atom.block = k;
        atom.i = i;
        atom.j = j;
        atom.overlap = lap;
        atom.fphi = a * a;
        atom.fomega = b * b;
        atom.nu = (a > 0.0 || b > 0.0) ? t * lap : 0.0;
        if (a == 0.0) {
          omega_outside += atom.fomega * atom.nu;
        }
        if (b == 0.0) {
          phi_outside += atom.fphi * atom.nu;
        }
        out.atoms.push_back(atom);
      }
    }
  }
  out.omega_mass_outside_phi_support = clamp_defect(omega_outside);
  out.phi_mass_outside_omega_support = clamp_defect(phi_outside);
  return out;
}

std::pair<double, double> support_defects_direct(const AlgebraSpec& spec, const State& phi,
                                                 const State& omega) {
  const Element one = Element::identity(spec);
  const Element ker_phi = one - support_projection(spec, phi);
  const Element ker_omega = one - support_projection(spec, omega);
  const double omega_outside = trace(spec, omega.h * ker_phi).real();
  const double phi_outside = trace(spec, phi.h * ker_omega).real();
  return {clamp_defect(std::max(omega_outside, 0.0)), clamp_defect(std::max(phi_outside, 0.0))};
}

}  // namespace qfdiv
