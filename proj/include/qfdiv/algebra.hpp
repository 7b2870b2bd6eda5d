#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "qfdiv/errors.hpp"

namespace qfdiv {

using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

struct BlockSpec {
  int dim = 0;
  double weight = 0.0;
};

// A finite semifinite von Neumann algebra: a direct sum of full matrix blocks
// M_{n_1} + ... + M_{n_K} carrying the faithful normal trace
// tau(x) = sum_k t_k Tr(x_k) with weights t_k > 0.
class AlgebraSpec {
 public:
  explicit AlgebraSpec(std::vector<BlockSpec> blocks);

  const std::vector<BlockSpec>& blocks() const { return blocks_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  int dim(int k) const { return blocks_[static_cast<std::size_t>(k)].dim; }
  double weight(int k) const { return blocks_[static_cast<std::size_t>(k)].weight; }

 private:
  std::vector<BlockSpec> blocks_;
};

// An element of the algebra (equivalently, of any L_p space in finite
// dimensions): one complex square matrix per block.
struct Element {
  std::vector<Matrix> blocks;

  static Element zero(const AlgebraSpec& spec);
  static Element identity(const AlgebraSpec& spec);
};

Element operator+(const Element& a, const Element& b);
Element operator-(const Element& a, const Element& b);
Element operator*(const Element& a, const Element& b);
Element operator*(const Complex& c, const Element& a);
Element adjoint(const Element& a);

// Largest |entry| over all blocks.
double max_abs_entry(const Element& a);

// Throws ShapeError unless block count and shapes match the spec; `what`
// names the element in diagnostics. Also rejects NaN/inf entries.
void check_conforms(const AlgebraSpec& spec, const Element& x, const char* what);

bool is_hermitian(const Element& x, double rel_tol);

// tau(x) = sum_k t_k Tr(x_k).
Complex trace(const AlgebraSpec& spec, const Element& x);

// <a, b> = tau(a* b): conjugate-linear in a, linear in b.
Complex inner(const AlgebraSpec& spec, const Element& a, const Element& b);

// A normal state: density h >= 0 with tau(h) = 1, together with its vector
// representative xi = h^{1/2}. xi is computed once here, with eigenvalues of
// h at or below the support cutoff mapped to exactly zero, so every
// downstream support decision sees a clean kernel.
struct State {
  Element h;
  Element xi;
};

// Validates Hermiticity, positivity and normalization of h and builds xi.
// With renormalize set, h is divided by tau(h) instead of requiring
// tau(h) = 1 (a vanishing trace is still an error).
State validate_state(const AlgebraSpec& spec, const Element& h, bool renormalize = false);

// Per block draws a dim_k x r_k complex Gaussian matrix G and forms
// h_k = G G*, then normalizes by tau(h). `ranks` gives r_k per block
// (0 <= r_k <= dim_k, not all zero); absent means full rank. Deterministic:
// the same (spec, seed, ranks) produce bit-identical states.
State random_state(const AlgebraSpec& spec, std::uint64_t seed,
                   const std::optional<std::vector<int>>& ranks = std::nullopt);

}  // namespace qfdiv
