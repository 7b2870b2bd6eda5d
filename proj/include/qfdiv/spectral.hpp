#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "qfdiv/algebra.hpp"

namespace qfdiv {

// Eigendecomposition of one Hermitian block: ascending eigenvalues, columns
// of `eigenvectors` paired with them.
struct BlockSpectrum {
  Eigen::VectorXd eigenvalues;
  Matrix eigenvectors;
};

struct SpectralData {
  std::vector<BlockSpectrum> blocks;
};

// Dense Hermitian eigendecomposition per block. Eigenvalues ascending;
// deterministic for identical input bits.
SpectralData eigh(const AlgebraSpec& spec, const Element& x);

// V diag(g(lambda)) V* from an existing decomposition. Throws DomainError if
// g is non-finite on a present eigenvalue.
Element apply_function(const SpectralData& data, const std::function<double(double)>& g);

// Borel functional calculus g(x) for Hermitian x.
Element func_calc(const AlgebraSpec& spec, const Element& x,
                  const std::function<double(double)>& g);

// Eigenvalues at or below this cutoff count as zero within their block:
// kSupport * (largest eigenvalue of the block), floored at kSupportFloor.
double support_cutoff(const Eigen::VectorXd& eigenvalues);

// The pseudo-inverse function w(lambda) = 1/lambda for lambda > 0, w(0) = 0,
// applied to a Hermitian PSD element. Eigenvalues at or below the support
// cutoff are mapped to 0, not inverted.
Element w_apply(const AlgebraSpec& spec, const Element& x);

// Orthogonal projection onto the range of a PSD element.
Element support_projection_of(const AlgebraSpec& spec, const Element& x);

// Projection onto the range of xi (equivalently of h) of a state.
Element support_projection(const AlgebraSpec& spec, const State& s);

// Spectral data of U x U*: eigenvalues unchanged, eigenvectors left-multiplied
// by the blockwise unitary U.
SpectralData conjugate_spectral(const AlgebraSpec& spec, const Element& unitary,
                                const SpectralData& data);

}  // namespace qfdiv
