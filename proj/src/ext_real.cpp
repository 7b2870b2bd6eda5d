#include "qfdiv/ext_real.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace qfdiv {

ExtReal::ExtReal(double value) : value_(value) {
  if (std::isnan(value)) {
    throw DomainError("ExtReal: NaN payload");
  }
  if (std::isinf(value)) {
    throw DomainError("ExtReal: IEEE infinity payload; use ExtReal::infinity()");
  }
}

ExtReal ExtReal::infinity() {
  ExtReal e;
  e.infinite_ = true;
  return e;
}

double ExtReal::finite_value() const {
  if (infinite_) {
    throw DomainError("ExtReal: finite_value() called on +inf");
  }
  return value_;
}

double ExtReal::as_double() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

std::string ExtReal::str() const {
  if (infinite_) {
    return "+inf";
  }
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value_);
  (void)ec;
  return std::string(buf, ptr);
}

ExtReal ext_add(const ExtReal& a, const ExtReal& b) {
  if (a.is_infinite() || b.is_infinite()) {
    return ExtReal::infinity();
  }
  const double sum = a.finite_value() + b.finite_value();
  if (std::isinf(sum)) {
    throw DomainError("ext_add: finite sum overflowed the double range");
  }
  return ExtReal(sum);
}

ExtReal ext_scale(double c, const ExtReal& a) {
  if (!std::isfinite(c)) {
    throw DomainError("ext_scale: scale must be a finite nonnegative real");
  }
  if (c < 0.0) {
    throw DomainError("ext_scale: negative scale " + std::to_string(c));
  }
  if (c == 0.0) {
    return ExtReal(0.0);
  }
  if (a.is_infinite()) {
    return ExtReal::infinity();
  }
  const double prod = c * a.finite_value();
  if (std::isinf(prod)) {
    throw DomainError("ext_scale: finite product overflowed the double range");
  }
  return ExtReal(prod);
}

}  // namespace qfdiv
