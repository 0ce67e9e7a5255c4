#include "sixv/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace sixv {

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite value");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  // 53 shifts make the mantissa integral
  auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(scaled);
  if (exp >= 0) {
    r *= Rational(BigInt(1) << exp);
  } else {
    r /= Rational(BigInt(1) << -exp);
  }
  return r;
}

BigInt pow_int(BigInt base, std::int64_t exp) {
  if (exp < 0) throw std::invalid_argument("pow_int: negative exponent");
  BigInt result = 1;
  while (exp > 0) {
    if (exp & 1) result *= base;
    base *= base;
    exp >>= 1;
  }
  return result;
}

}  // namespace sixv
