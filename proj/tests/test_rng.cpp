#include "doctest.h"

#include <cmath>
#include <cstdint>

#include "sixv/rational.hpp"
#include "sixv/rng.hpp"

using namespace sixv;

TEST_SUITE("rng") {
  TEST_CASE("splitmix64 matches the reference sequence") {
    // reference outputs for the state sequence starting at 0
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
    CHECK(splitmix64(0x3c6ef372fe94f82aULL) == 0x06c45d188009454fULL);
  }

  TEST_CASE("streams are reproducible and chains are independent") {
    RandomStream a(42), b(42), c(43);
    bool equal = true, distinct = false;
    for (int i = 0; i < 64; ++i) {
      auto x = a.next_u64();
      equal = equal && x == b.next_u64();
      distinct = distinct || x != c.next_u64();
    }
    CHECK(equal);
    CHECK(distinct);

    RandomStream c0 = RandomStream::for_chain(42, 0);
    RandomStream c1 = RandomStream::for_chain(42, 1);
    CHECK(c0.next_u64() != c1.next_u64());
  }

  TEST_CASE("unit_double lies in [0,1)") {
    RandomStream rng(7);
    for (int i = 0; i < 10000; ++i) {
      double u = rng.unit_double();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
  }

  TEST_CASE("fair_sign is balanced") {
    RandomStream rng(1);
    int n = 100000, pos = 0;
    for (int i = 0; i < n; ++i)
      if (rng.fair_sign() == 1) ++pos;
    double p = static_cast<double>(pos) / n;
    CHECK(std::abs(p - 0.5) < 4.0 * std::sqrt(0.25 / n));
  }

  TEST_CASE("bernoulli_third has mean 1/3") {
    RandomStream rng(2);
    int n = 300000, ones = 0;
    for (int i = 0; i < n; ++i)
      if (rng.bernoulli_third()) ++ones;
    double p = static_cast<double>(ones) / n;
    CHECK(std::abs(p - 1.0 / 3.0) < 4.0 * std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / n));
  }

  TEST_CASE("uniform_index is in range and unbiased for small n") {
    RandomStream rng(3);
    CHECK_THROWS_AS(rng.uniform_index(0), std::invalid_argument);
    CHECK(rng.uniform_index(1) == 0);
    int n = 300000;
    int counts[3] = {0, 0, 0};
    for (int i = 0; i < n; ++i) counts[rng.uniform_index(3)]++;
    for (int c : counts) {
      double p = static_cast<double>(c) / n;
      CHECK(std::abs(p - 1.0 / 3.0) < 4.0 * std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / n));
    }
  }
}

TEST_SUITE("rational") {
  TEST_CASE("rational_from_double is exact") {
    CHECK(rational_from_double(0.5) == Rational(1, 2));
    CHECK(rational_from_double(-0.75) == Rational(-3, 4));
    CHECK(rational_from_double(0.0) == 0);
    // 0.1 is not 1/10 in binary; the dyadic expansion must round-trip
    Rational tenth = rational_from_double(0.1);
    CHECK(tenth != Rational(1, 10));
    CHECK(to_double(tenth) == 0.1);
    for (double x : {1e-300, 3.141592653589793, 1e300, 123456789.0}) {
      CHECK(to_double(rational_from_double(x)) == x);
    }
    CHECK_THROWS_AS(rational_from_double(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(rational_from_double(INFINITY), std::invalid_argument);
  }

  TEST_CASE("pow_int") {
    CHECK(pow_int(3, 0) == 1);
    CHECK(pow_int(3, 7) == 2187);
    CHECK(pow_int(2, 100) == BigInt(1) << 100);
    CHECK(pow3(3) == 27);
    CHECK_THROWS_AS(pow_int(2, -1), std::invalid_argument);
  }
}
