#include "qfdiv/spectral.hpp"

#include <cmath>
#include <string>

#include "qfdiv/tolerances.hpp"

namespace qfdiv {

SpectralData eigh(const AlgebraSpec& spec, const Element& x) {
  check_conforms(spec, x, "eigh");
  if (!is_hermitian(x, tol::kHermitian)) {
    throw NotHermitianError("eigh: input is not Hermitian within tolerance");
  }
  SpectralData out;
  out.blocks.reserve(x.blocks.size());
  for (std::size_t k = 0; k < x.blocks.size(); ++k) {
    const Matrix sym = (x.blocks[k] + x.blocks[k].adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
      throw Error("eigh: eigensolver failed on block " + std::to_string(k));
    }
    out.blocks.push_back(BlockSpectrum{solver.eigenvalues(), solver.eigenvectors()});
  }
  return out;
}

Element apply_function(const SpectralData& data, const std::function<double(double)>& g) {
  Element out;
  out.blocks.reserve(data.blocks.size());
  for (std::size_t k = 0; k < data.blocks.size(); ++k) {
    const auto& blk = data.blocks[k];
    Eigen::VectorXd mapped(blk.eigenvalues.size());
    for (Eigen::Index i = 0; i < mapped.size(); ++i) {
      const double value = g(blk.eigenvalues(i));
      if (!std::isfinite(value)) {
        throw DomainError("functional calculus: g is non-finite at eigenvalue " +
                          std::to_string(blk.eigenvalues(i)) + " (block " + std::to_string(k) +
                          ")");
      }
      mapped(i) = value;
    }
    out.blocks.push_back(blk.eigenvectors * mapped.asDiagonal() * blk.eigenvectors.adjoint());
  }
  return out;
}

Element func_calc(const AlgebraSpec& spec, const Element& x,
                  const std::function<double(double)>& g) {
  return apply_function(eigh(spec, x), g);
}

double support_cutoff(const Eigen::VectorXd& eigenvalues) {
  const double top = eigenvalues.size() > 0 ? std::max(eigenvalues.maxCoeff(), 0.0) : 0.0;
  return std::max(tol::kSupport * top, tol::kSupportFloor);
}

namespace {

Element apply_with_support(const AlgebraSpec& spec, const Element& x,
                           const std::function<double(double)>& on_support, const char* what) {
  SpectralData data = eigh(spec, x);
  double spectral_radius = 0.0;
  for (const auto& blk : data.blocks) {
    spectral_radius = std::max(spectral_radius, blk.eigenvalues.cwiseAbs().maxCoeff());
  }
  for (std::size_t k = 0; k < data.blocks.size(); ++k) {
    const double lo = data.blocks[k].eigenvalues.minCoeff();
    if (lo < -tol::kPositive * spectral_radius) {
      throw NotPositiveError(std::string(what) + ": block " + std::to_string(k) +
                             " has eigenvalue " + std::to_string(lo));
    }
  }
  Element out;
  out.blocks.reserve(data.blocks.size());
  for (auto& blk : data.blocks) {
    const double cutoff = support_cutoff(blk.eigenvalues);
    Eigen::VectorXd mapped(blk.eigenvalues.size());
    for (Eigen::Index i = 0; i < mapped.size(); ++i) {
      const double lam = blk.eigenvalues(i);
      mapped(i) = lam <= cutoff ? 0.0 : on_support(lam);
    }
    Matrix m = blk.eigenvectors * mapped.asDiagonal() * blk.eigenvectors.adjoint();
    out.blocks.push_back(((m + m.adjoint()) * 0.5).eval());
  }
  return out;
}

}  // namespace

Element w_apply(const AlgebraSpec& spec, const Element& x) {
  return apply_with_support(spec, x, [](double lam) { return 1.0 / lam; }, "w_apply");
}

Element support_projection_of(const AlgebraSpec& spec, const Element& x) {
  return apply_with_support(spec, x, [](double) { return 1.0; }, "support_projection");
}

Element support_projection(const AlgebraSpec& spec, const State& s) {
  return support_projection_of(spec, s.xi);
}

SpectralData conjugate_spectral(const AlgebraSpec& spec, const Element& unitary,
                                const SpectralData& data) {
  check_conforms(spec, unitary, "conjugate_spectral: unitary");
  if (data.blocks.size() != static_cast<std::size_t>(spec.block_count())) {
    throw ShapeError("conjugate_spectral: spectral data does not match algebra");
  }
  for (std::size_t k = 0; k < unitary.blocks.size(); ++k) {
    const auto& u = unitary.blocks[k];
    const double dev =
        (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
    if (dev > tol::kFuncCalc) {
      throw NotUnitaryError("conjugate_spectral: block " + std::to_string(k) +
                            " deviates from unitary by " + std::to_string(dev));
    }
  }
  SpectralData out;
  out.blocks.reserve(data.blocks.size());
  for (std::size_t k = 0; k < data.blocks.size(); ++k) {
    out.blocks.push_back(
        BlockSpectrum{data.blocks[k].eigenvalues, unitary.blocks[k] * data.blocks[k].eigenvectors});
  }
  return out;
}

}  // namespace qfdiv
