#include <algorithm>
#include <random>

#include "cctk/error.hpp"
#include "cctk/report.hpp"
#include "cctk/sieve.hpp"
#include "cctk/wieferich.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cctk;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::InvalidArgument;
}

bool modexp_is_one(u64 a, u64 p) {
  mpz_class r, m = mpz_class(static_cast<unsigned long>(p)) * static_cast<unsigned long>(p);
  mpz_powm_ui(r.get_mpz_t(), mpz_class(static_cast<unsigned long>(a)).get_mpz_t(), p - 1, m.get_mpz_t());
  return r == 1;
}

// Statistics read value / p, so a record at u = v / p.
WieferichRecord rec(u64 v, u64 p) {
  WieferichRecord r;
  r.p = p;
  r.value = {v};
  r.normalized = {static_cast<double>(v) / static_cast<double>(p)};
  return r;
}

}  // namespace

TEST_CASE("Fermat quotients") {
  CHECK(fermat_quotient(2, Prime(1093)) == 0);
  CHECK(fermat_quotient(2, Prime(3511)) == 0);
  CHECK(fermat_quotient(2, Prime(3)) == 1);
  CHECK(code_of([] { fermat_quotient(10, Prime(5)); }) == Errc::BaseDivisible);
  std::mt19937_64 rng(2);
  for (u64 p : primes_in_range(3, 3000)) {
    u64 a = 2 + rng() % 500;
    if (a % p == 0) continue;
    CHECK(fermat_quotient(a, Prime(static_cast<i64>(p))) == oracle::fermat_quotient_loop(a, p));
    u64 b = 2 + rng() % 500;
    if (b % p == 0) continue;
    // q(ab) = q(a) + q(b)
    CHECK(fermat_quotient(a * b, Prime(static_cast<i64>(p))) ==
          (fermat_quotient(a, Prime(static_cast<i64>(p))) + fermat_quotient(b, Prime(static_cast<i64>(p)))) % p);
  }
}

TEST_CASE("base 2 scan") {
  auto r = scan_gm(2, 3, 10000);
  CHECK(r.zero_events == std::vector<u64>{1093, 3511});
  for (u64 p : r.zero_events) CHECK(modexp_is_one(2, p));
  CHECK(r.records.size() + r.skipped.size() == primes_in_range(3, 10000).size());
  REQUIRE(r.stats);
  CHECK(r.stats->total == r.record_count);

  auto four = scan_gm(4, 3, 2000);
  auto two = scan_gm(2, 3, 2000);
  REQUIRE(four.records.size() == two.records.size());
  for (std::size_t i = 0; i < four.records.size(); ++i)
    CHECK(four.records[i].value[0] == 2 * two.records[i].value[0] % four.records[i].p);

  auto one = scan_gm(2, 3, 3);
  REQUIRE(one.records.size() == 1);
  CHECK(one.records[0].value[0] == 1);

  auto six = scan_gm(6, 3, 100);
  REQUIRE(six.skipped.size() == 1);
  CHECK(six.skipped[0] == SkippedPrime{3, "base_divisible"});

  CHECK_THROWS_AS(scan_gm(2, 2, 100), Error);
  CHECK_THROWS_AS(scan_gm(2, 100, 10), Error);
}

TEST_CASE("worker count does not change the report") {
  ScanOptions a, b;
  a.workers = 1;
  b.workers = 8;
  a.block_width = b.block_width = 4096;
  CHECK(dump(to_json(scan_gm(3, 3, 200000, a))) == dump(to_json(scan_gm(3, 3, 200000, b))));
  EllipticCurveQ E(0, 0, 0, 1, 1);
  CHECK(dump(to_json(scan_elliptic(E, 0, 1, 5, 20000, a))) ==
        dump(to_json(scan_elliptic(E, 0, 1, 5, 20000, b))));
}

TEST_CASE("retention keeps statistics complete") {
  ScanOptions o;
  o.retain_records = 10;
  auto r = scan_gm(2, 3, 5000, o);
  CHECK(r.records.size() == 10);
  CHECK(r.records_truncated);
  CHECK(r.record_count == primes_in_range(3, 5000).size());
  REQUIRE(r.stats);
  CHECK(r.stats->total == r.record_count);
  CHECK_FALSE(r.stats->star_discrepancy);
}

TEST_CASE("discrepancy and chi square") {
  const int n = 100;
  std::vector<double> grid, mid;
  for (int i = 0; i < n; ++i) {
    grid.push_back(static_cast<double>(i) / n);
    mid.push_back((i + 0.5) / n);
  }
  CHECK(star_discrepancy(grid) == doctest::Approx(1.0 / n));
  CHECK(star_discrepancy(mid) == doctest::Approx(0.5 / n));
  CHECK(star_discrepancy(std::vector<double>(n, 0.0)) == doctest::Approx(1.0));
  auto shuffled = mid;
  std::mt19937_64 rng(1);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  CHECK(star_discrepancy(shuffled) == star_discrepancy(mid));

  std::vector<WieferichRecord> zeros(64, rec(0, 101));
  auto s = equidistribution_stats(zeros, 8);
  CHECK(s.counts[0] == 64);
  CHECK(s.chi_square == doctest::Approx(64.0 * 7));
  CHECK(s.p_value < 1e-9);
  REQUIRE(s.star_discrepancy);
  CHECK(*s.star_discrepancy == doctest::Approx(1.0));

  std::vector<WieferichRecord> flat;
  for (u64 i = 0; i < 64; ++i) flat.push_back(rec(2 * i + 1, 128));
  auto f = equidistribution_stats(flat, 8);
  CHECK(f.chi_square == doctest::Approx(0.0));
  CHECK(f.p_value == doctest::Approx(1.0));
  CHECK(code_of([] { equidistribution_stats({}, 8); }) == Errc::EmptyRecords);
}

TEST_CASE("elliptic scan") {
  EllipticCurveQ E(0, 0, 0, 1, 1);
  auto r = scan_elliptic(E, 0, 1, 5, 1000);
  REQUIRE(r.skipped.size() == 1);
  CHECK(r.skipped[0].p == 31);
  CHECK(r.skipped[0].reason == "bad_reduction");
  CHECK(r.records.size() + 1 == primes_in_range(5, 1000).size());
  auto low = scan_elliptic(E, 0, 1, 2, 10);
  CHECK(low.skipped.size() == 2);

  EllipticCurveQ T(0, 0, 0, 0, 1);
  auto t = scan_elliptic(T, 2, 3, 5, 500);
  CHECK(t.zero_events.size() == t.records.size());

  // Spot checks against counts by enumeration.
  for (const auto& R : r.records) {
    if (R.p > 200) break;
    const u64 np = oracle::naive_count({0, 0, 0, 1, 1}, static_cast<long>(R.p));
    CurveModPk E2(E, Prime(static_cast<i64>(R.p)), 2);
    auto [X, Y] = E.to_short(0, 1);
    CHECK(R.value[0] == wieferich_element(E2, E2.reduce(X, Y), np));
  }
}

TEST_CASE("product scans") {
  std::vector<ProductComponent> two{GmComponent{2}, GmComponent{3}};
  auto r = scan_product(two, 3, 3000, {});
  REQUIRE(r.subspace_hits);
  for (const auto& R : r.records) {
    REQUIRE(R.value.size() == 2);
    CHECK(R.value[0] == fermat_quotient(2, Prime(static_cast<i64>(R.p))));
    CHECK(R.value[1] == fermat_quotient(3, Prime(static_cast<i64>(R.p))));
  }
  u64 hits = 0;
  for (const auto& R : r.records)
    if (R.value[0] == 0 && R.value[1] == 0) ++hits;
  CHECK(*r.subspace_hits == hits);
  CHECK(r.expected_hits > 0);

  std::vector<ProductComponent> swapped{GmComponent{3}, GmComponent{2}};
  auto s = scan_product(swapped, 3, 3000, {});
  CHECK(*s.subspace_hits == *r.subspace_hits);
  for (std::size_t i = 0; i < s.records.size(); ++i)
    CHECK(s.records[i].value == std::vector<u64>{r.records[i].value[1], r.records[i].value[0]});

  // d = 3, S = span(e1): a hit means the last two coordinates vanish.
  std::vector<ProductComponent> three{GmComponent{2}, GmComponent{5},
                                      EllipticComponent{EllipticCurveQ(0, 0, 1, -1, 0), 0, 0}};
  auto t = scan_product(three, 5, 2000, {{1, 0, 0}});
  u64 h = 0;
  for (const auto& R : t.records)
    if (R.value[1] == 0 && R.value[2] == 0) ++h;
  CHECK(*t.subspace_hits == h);
  CHECK(t.subspace_hit_primes.size() == h);

  CHECK(code_of([&] { scan_product(three, 5, 100, {}); }) == Errc::DimensionMismatch);
  CHECK(code_of([&] { scan_product(three, 5, 100, {{1, 0}}); }) == Errc::DimensionMismatch);
  CHECK(code_of([&] { scan_product({GmComponent{2}}, 5, 100, {}); }) == Errc::DimensionMismatch);
}

TEST_CASE("span helpers") {
  CHECK(rank_over_q({{1, 2}, {2, 4}}) == 1);
  CHECK(rank_mod_p({{1, 2}, {3, 1}}, 5) == 1);
  CHECK(rank_mod_p({{1, 2}, {3, 1}}, 7) == 2);
  CHECK(in_span_mod_p({{1, 0, 0}}, {3, 0, 0}, 7));
  CHECK_FALSE(in_span_mod_p({{1, 0, 0}}, {3, 1, 0}, 7));
  CHECK(in_span_mod_p({}, {0, 0}, 7));
}

TEST_CASE("first-case criterion") {
  auto r = flt_first_case(127);
  CHECK(r.eliminated);
  CHECK(r.witness == 2u);
  auto w = flt_first_case(1093);
  CHECK(w.eliminated);
  CHECK(w.witness == 3u);
  CHECK(code_of([] { flt_first_case(113); }) == Errc::PrimeTooSmall);
  CHECK(code_of([] { flt_first_case(129); }) == Errc::NotAPrime);
}
