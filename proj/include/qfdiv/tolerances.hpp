#pragma once

// All numerical thresholds in one place. Everything downstream (state
// validation, support detection, the two divergence routes) must share these
// so that "zero eigenvalue" means the same thing across the whole pipeline.

namespace qfdiv::tol {

// Hermiticity check, relative to the largest entry magnitude of the element.
inline constexpr double kHermitian = 1e-10;

// Positive semidefiniteness: eigenvalues >= -kPositive * spectral radius are
// accepted and clamped to zero.
inline constexpr double kPositive = 1e-10;

// |tau(h) - 1| for state normalization.
inline constexpr double kTrace = 1e-9;

// Functional-calculus reconstruction accuracy and projector identities.
inline constexpr double kFuncCalc = 1e-10;

// Faithfulness floor for the L2 inner product on random elements.
inline constexpr double kFaithful = 1e-12;

// Support cutoff: an eigenvalue counts as zero when it is <= kSupport times
// the largest eigenvalue of the same block. The absolute floor guards blocks
// that are identically zero.
inline constexpr double kSupport = 1e-12;
inline constexpr double kSupportFloor = 1e-300;

// A tau-mass (pairing of a density with a projection, always in [0,1]) below
// this counts as exactly zero. Keeps 0 * (+inf) conventions away from
// rounding noise when two states share part of their kernel.
inline constexpr double kDefect = 1e-12;

}  // namespace qfdiv::tol
