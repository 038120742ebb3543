#include <random>

#include "cctk/arith.hpp"
#include "cctk/error.hpp"
#include "cctk/qpoly.hpp"
#include "cctk/sieve.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cctk;

TEST_CASE("primality agrees with trial division") {
  for (u64 n = 0; n < 20000; ++n) CHECK(is_prime(n) == oracle::trial_prime(n));
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    u64 n = 1'000'000 + rng() % 50'000'000;
    CHECK(is_prime(n) == oracle::trial_prime(n));
  }
  CHECK(is_prime(2305843009213693951ULL));  // 2^61 - 1
  CHECK_FALSE(is_prime(3215031751ULL));     // strong pseudoprime to 2, 3, 5, 7
}

TEST_CASE("Prime rejects 2 and composites") {
  CHECK_THROWS_AS(Prime(2), Error);
  CHECK_THROWS_AS(Prime(9), Error);
  CHECK_THROWS_AS(Prime(-5), Error);
  try {
    Prime(15);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotAPrime);
  }
  CHECK(Prime(7).value() == 7);
}

TEST_CASE("sieve matches trial division on ranges") {
  auto all = primes_up_to(10000);
  CHECK(all.size() == 1229);
  std::vector<u64> expect;
  for (u64 n = 999'000; n <= 1'300'000; ++n)
    if (oracle::trial_prime(n)) expect.push_back(n);
  CHECK(primes_in_range(999'000, 1'300'000) == expect);
  CHECK(primes_in_range(10, 9).empty());
  CHECK(primes_in_range(0, 10) == std::vector<u64>{2, 3, 5, 7});
}

TEST_CASE("modular helpers") {
  CHECK(pow_mod(2, 10, 1000) == 24);
  CHECK(inv_mod(3, 125) == 42);
  CHECK_THROWS_AS(inv_mod(5, 125), Error);
  CHECK(legendre(2, 7) == 1);
  CHECK(legendre(3, 7) == -1);
  CHECK(legendre(14, 7) == 0);
  for (u64 p : {13ULL, 17ULL, 97ULL, 1009ULL})
    for (u64 a = 1; a < 60; ++a)
      if (legendre(static_cast<i64>(a), static_cast<i64>(p)) == 1) {
        u64 r = sqrt_mod_prime(a, p);
        CHECK(mul_mod(r, r, p) == a % p);
      }
  CHECK(valuation(mpz_class(250), 5) == 3);
  CHECK(floor_log(124, 5) == 2);
  CHECK(floor_log(125, 5) == 3);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("-6/4") == mpq_class(-3, 2));
  CHECK(parse_rational(" 12 ") == 12);
  CHECK(parse_rational("+7") == 7);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK_THROWS_AS(parse_rational(""), Error);
  CHECK(rational_mod(mpq_class(1, 3), 125) == 42);
  CHECK_THROWS_AS(rational_mod(mpq_class(1, 5), 125), Error);
}

TEST_CASE("polynomials over Q") {
  QPoly f = QPoly::from_roots({1, 2, 2, 3});
  CHECK(f.degree() == 4);
  CHECK(f(2) == 0);
  CHECK(root_multiplicity(f, 2) == 2);
  CHECK(root_multiplicity(f, 5) == 0);
  CHECK_FALSE(is_squarefree(f));
  auto parts = squarefree_decomposition(f);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == QPoly::from_roots({1, 3}));
  CHECK(parts[1] == QPoly::from_roots({2}));

  auto [q, r] = divmod(f, QPoly::from_roots({1}));
  CHECK(r.is_zero());
  CHECK(q == QPoly::from_roots({2, 2, 3}));
  CHECK(gcd(f, f.derivative()) == QPoly::from_roots({2}));
  CHECK(QPoly::from_roots({1}).compose_square() == QPoly::from_roots({1, -1}));
  CHECK(f.shift(1)(0) == f(1));
  CHECK(is_rational_square(mpq_class(9, 4)));
  CHECK_FALSE(is_rational_square(mpq_class(2)));
  CHECK_FALSE(is_rational_square(mpq_class(-4)));

  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    std::vector<mpq_class> a, b;
    for (int j = 0; j < 4; ++j) a.emplace_back(static_cast<long>(rng() % 11) - 5);
    for (int j = 0; j < 3; ++j) b.emplace_back(static_cast<long>(rng() % 11) - 5);
    QPoly A(a), B(b);
    mpq_class x(static_cast<long>(rng() % 7) - 3, 2);
    x.canonicalize();
    CHECK((A * B)(x) == A(x) * B(x));
    CHECK((A - B)(x) == A(x) - B(x));
    if (!B.is_zero()) {
      auto [qq, rr] = divmod(A, B);
      CHECK(qq * B + rr == A);
      CHECK(rr.degree() < B.degree());
    }
  }
}
