#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace sixv {

// Exact arithmetic used everywhere a probability or continued-fraction tail
// must be bit-exact. cpp_rational keeps gcd(num,den)=1 and den>0 canonical.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Exact dyadic rational equal to the given double (no rounding).
Rational rational_from_double(double x);

BigInt pow_int(BigInt base, std::int64_t exp);

inline BigInt pow3(std::int64_t exp) { return pow_int(3, exp); }

}  // namespace sixv
