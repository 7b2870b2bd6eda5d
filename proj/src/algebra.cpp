#include "qfdiv/algebra.hpp"

#include <cmath>
#include <string>

#include "qfdiv/rng.hpp"
#include "qfdiv/spectral.hpp"
#include "qfdiv/tolerances.hpp"

namespace qfdiv {

AlgebraSpec::AlgebraSpec(std::vector<BlockSpec> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) {
    throw DomainError("AlgebraSpec: at least one block required");
  }
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    if (blocks_[k].dim < 1) {
      throw DomainError("AlgebraSpec: block " + std::to_string(k) + " has dim " +
                        std::to_string(blocks_[k].dim) + ", expected >= 1");
    }
    if (!(blocks_[k].weight > 0.0) || !std::isfinite(blocks_[k].weight)) {
      throw DomainError("AlgebraSpec: block " + std::to_string(k) +
                        " needs a positive finite weight");
    }
  }
}

Element Element::zero(const AlgebraSpec& spec) {
  Element e;
  e.blocks.reserve(static_cast<std::size_t>(spec.block_count()));
  for (const auto& b : spec.blocks()) {
    e.blocks.push_back(Matrix::Zero(b.dim, b.dim));
  }
  return e;
}

Element Element::identity(const AlgebraSpec& spec) {
  Element e;
  e.blocks.reserve(static_cast<std::size_t>(spec.block_count()));
  for (const auto& b : spec.blocks()) {
    e.blocks.push_back(Matrix::Identity(b.dim, b.dim));
  }
  return e;
}

namespace {

void check_same_shape(const Element& a, const Element& b, const char* op) {
  if (a.blocks.size() != b.blocks.size()) {
    throw ShapeError(std::string(op) + ": block count mismatch");
  }
  for (std::size_t k = 0; k < a.blocks.size(); ++k) {
    if (a.blocks[k].rows() != b.blocks[k].rows()) {
      throw ShapeError(std::string(op) + ": block " + std::to_string(k) + " shape mismatch");
    }
  }
}

}  // namespace

Element operator+(const Element& a, const Element& b) {
  check_same_shape(a, b, "operator+");
  Element r = a;
  for (std::size_t k = 0; k < r.blocks.size(); ++k) {
    r.blocks[k] += b.blocks[k];
  }
  return r;
}

Element operator-(const Element& a, const Element& b) {
  check_same_shape(a, b, "operator-");
  Element r = a;
  for (std::size_t k = 0; k < r.blocks.size(); ++k) {
    r.blocks[k] -= b.blocks[k];
  }
  return r;
}

Element operator*(const Element& a, const Element& b) {
  check_same_shape(a, b, "operator*");
  Element r;
  r.blocks.reserve(a.blocks.size());
  for (std::size_t k = 0; k < a.blocks.size(); ++k) {
    r.blocks.push_back(a.blocks[k] * b.blocks[k]);
  }
  return r;
}

Element operator*(const Complex& c, const Element& a) {
  Element r = a;
  for (auto& blk : r.blocks) {
    blk *= c;
  }
  return r;
}

Element adjoint(const Element& a) {
  Element r;
  r.blocks.reserve(a.blocks.size());
  for (const auto& blk : a.blocks) {
    r.blocks.push_back(blk.adjoint());
  }
  return r;
}

double max_abs_entry(const Element& a) {
  double m = 0.0;
  for (const auto& blk : a.blocks) {
    if (blk.size() > 0) {
      m = std::max(m, blk.cwiseAbs().maxCoeff());
    }
  }
  return m;
}

void check_conforms(const AlgebraSpec& spec, const Element& x, const char* what) {
  if (static_cast<int>(x.blocks.size()) != spec.block_count()) {
    throw ShapeError(std::string(what) + ": has " + std::to_string(x.blocks.size()) +
                     " blocks, algebra has " + std::to_string(spec.block_count()));
  }
  for (int k = 0; k < spec.block_count(); ++k) {
    const auto& blk = x.blocks[static_cast<std::size_t>(k)];
    if (blk.rows() != spec.dim(k) || blk.cols() != spec.dim(k)) {
      throw ShapeError(std::string(what) + ": block " + std::to_string(k) + " is " +
                       std::to_string(blk.rows()) + "x" + std::to_string(blk.cols()) +
                       ", expected " + std::to_string(spec.dim(k)) + "x" +
                       std::to_string(spec.dim(k)));
    }
    if (!blk.allFinite()) {
      throw DomainError(std::string(what) + ": block " + std::to_string(k) +
                        " has a non-finite entry");
    }
  }
}

bool is_hermitian(const Element& x, double rel_tol) {
  const double scale = max_abs_entry(x);
  for (const auto& blk : x.blocks) {
    const double dev = (blk - blk.adjoint()).cwiseAbs().maxCoeff();
    if (dev > rel_tol * scale) {
      return false;
    }
  }
  return true;
}

Complex trace(const AlgebraSpec& spec, const Element& x) {
  check_conforms(spec, x, "trace");
  Complex t = 0.0;
  for (int k = 0; k < spec.block_count(); ++k) {
    t += spec.weight(k) * x.blocks[static_cast<std::size_t>(k)].trace();
  }
  return t;
}

Complex inner(const AlgebraSpec& spec, const Element& a, const Element& b) {
  check_conforms(spec, a, "inner: left argument");
  check_conforms(spec, b, "inner: right argument");
  Complex t = 0.0;
  for (int k = 0; k < spec.block_count(); ++k) {
    t += spec.weight(k) *
         (a.blocks[static_cast<std::size_t>(k)].adjoint() * b.blocks[static_cast<std::size_t>(k)])
             .trace();
  }
  return t;
}

namespace {

// Shared tail of validate_state / random_state: h is Hermitian (already
// symmetrized) and conforming; checks positivity and normalization, then
// builds xi = h^{1/2} with sub-cutoff eigenvalues mapped to exact zeros.
State finish_state(const AlgebraSpec& spec, Element h, bool renormalize) {
  SpectralData decomp = eigh(spec, h);

  double spectral_radius = 0.0;
  for (const auto& blk : decomp.blocks) {
    if (blk.eigenvalues.size() > 0) {
      spectral_radius = std::max(spectral_radius, blk.eigenvalues.cwiseAbs().maxCoeff());
    }
  }
  for (int k = 0; k < spec.block_count(); ++k) {
    const double lo = decomp.blocks[static_cast<std::size_t>(k)].eigenvalues.minCoeff();
    if (lo < -tol::kPositive * spectral_radius) {
      throw NotPositiveError("state density: block " + std::to_string(k) +
                             " has eigenvalue " + std::to_string(lo));
    }
  }

  double tau = 0.0;
  for (int k = 0; k < spec.block_count(); ++k) {
    tau += spec.weight(k) * decomp.blocks[static_cast<std::size_t>(k)].eigenvalues.sum();
  }
  if (tau < tol::kTrace) {
    throw ZeroTraceError("state density: tau(h) = " + std::to_string(tau));
  }
  if (renormalize) {
    for (auto& blk : h.blocks) {
      blk /= tau;
    }
    for (auto& blk : decomp.blocks) {
      blk.eigenvalues /= tau;
    }
  } else if (std::abs(tau - 1.0) > tol::kTrace) {
    throw NotNormalizedError("state density: tau(h) = " + std::to_string(tau) +
                             ", expected 1 (pass renormalize to rescale)");
  }

  Element xi;
  xi.blocks.reserve(decomp.blocks.size());
  for (auto& blk : decomp.blocks) {
    const double cutoff = support_cutoff(blk.eigenvalues);
    Eigen::VectorXd roots(blk.eigenvalues.size());
    for (Eigen::Index i = 0; i < roots.size(); ++i) {
      const double lam = blk.eigenvalues(i);
      roots(i) = lam <= cutoff ? 0.0 : std::sqrt(lam);
    }
    Matrix m = blk.eigenvectors * roots.asDiagonal() * blk.eigenvectors.adjoint();
    xi.blocks.push_back(((m + m.adjoint()) * 0.5).eval());
  }
  return State{std::move(h), std::move(xi)};
}

}  // namespace

State validate_state(const AlgebraSpec& spec, const Element& h, bool renormalize) {
  check_conforms(spec, h, "state density");
  const double scale = max_abs_entry(h);
  Element sym;
  sym.blocks.reserve(h.blocks.size());
  for (std::size_t k = 0; k < h.blocks.size(); ++k) {
    const double dev = (h.blocks[k] - h.blocks[k].adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol::kHermitian * scale) {
      throw NotHermitianError("state density: block " + std::to_string(k) +
                              " deviates from Hermitian by " + std::to_string(dev));
    }
    sym.blocks.push_back(((h.blocks[k] + h.blocks[k].adjoint()) * 0.5).eval());
  }
  return finish_state(spec, std::move(sym), renormalize);
}

State random_state(const AlgebraSpec& spec, std::uint64_t seed,
                   const std::optional<std::vector<int>>& ranks) {
  if (ranks) {
    if (static_cast<int>(ranks->size()) != spec.block_count()) {
      throw ShapeError("random_state: rank profile has " + std::to_string(ranks->size()) +
                       " entries, algebra has " + std::to_string(spec.block_count()) +
                       " blocks");
    }
    bool any = false;
    for (int k = 0; k < spec.block_count(); ++k) {
      const int r = (*ranks)[static_cast<std::size_t>(k)];
      if (r < 0 || r > spec.dim(k)) {
        throw DomainError("random_state: rank " + std::to_string(r) + " out of [0, " +
                          std::to_string(spec.dim(k)) + "] for block " + std::to_string(k));
      }
      any = any || r > 0;
    }
    if (!any) {
      throw DomainError("random_state: all ranks are zero");
    }
  }

  std::mt19937_64 gen(seed);
  Element h = Element::zero(spec);
  for (int k = 0; k < spec.block_count(); ++k) {
    const int n = spec.dim(k);
    const int r = ranks ? (*ranks)[static_cast<std::size_t>(k)] : n;
    Matrix g(n, r);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < r; ++j) {
        g(i, j) = rng::complex_gaussian(gen);
      }
    }
    h.blocks[static_cast<std::size_t>(k)] = g * g.adjoint();
  }
  double tau = 0.0;
  for (int k = 0; k < spec.block_count(); ++k) {
    tau += spec.weight(k) * h.blocks[static_cast<std::size_t>(k)].real().trace();
  }
  for (auto& blk : h.blocks) {
    blk = ((blk + blk.adjoint()) * (0.5 / tau)).eval();
  }
  return finish_state(spec, std::move(h), /*renormalize=*/false);
}

}  // namespace qfdiv
