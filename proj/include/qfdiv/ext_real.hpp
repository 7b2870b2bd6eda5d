#pragma once

#include <string>

#include "qfdiv/errors.hpp"

namespace qfdiv {

// A value in R union {+inf}. Divergences take values in (-inf, +inf], so
// -inf is not representable and finite payloads are never NaN. +inf is a
// tagged state, not an IEEE infinity: the conventions 0 * inf = 0 and
// c * inf = inf (c > 0) are explicit branches, which IEEE arithmetic would
// get wrong (0 * inf = NaN).
class ExtReal {
 public:
  ExtReal() = default;

  // Finite values only; NaN and IEEE infinities are rejected so that an
  // overflow can never silently turn into a legitimate +inf.
  ExtReal(double value);  // NOLINT(google-explicit-constructor)

  static ExtReal infinity();

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  // Throws if the value is +inf.
  double finite_value() const;

  // IEEE view: +inf maps to std::numeric_limits<double>::infinity().
  double as_double() const;

  // "+inf", or the shortest decimal that round-trips the payload.
  std::string str() const;

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend bool operator!=(const ExtReal& a, const ExtReal& b) { return !(a == b); }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

// Sum with +inf absorbing. Finite + finite is plain double addition; a sum
// that leaves the double range is reported as an error, not as +inf.
ExtReal ext_add(const ExtReal& a, const ExtReal& b);

// c * a for c >= 0 with the conventions 0 * (+inf) = 0 and c * (+inf) = +inf
// for c > 0. Rejects c < 0 and c = NaN.
ExtReal ext_scale(double c, const ExtReal& a);

}  // namespace qfdiv
