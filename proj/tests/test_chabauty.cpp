#include <cmath>
#include <random>

#include "cctk/chabauty.hpp"
#include "cctk/error.hpp"
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

bool annihilates(const LogMatrix& m, const VanishingSpace& s) {
  const mpz_class mod = oracle::pow_mpz(m.p.value(), static_cast<unsigned>(s.certified_precision));
  for (const auto& row : m.rows)
    for (const auto& v : s.basis) {
      mpz_class acc = 0;
      for (std::size_t i = 0; i < m.g; ++i) acc += row[i].residue() * v[i].residue();
      if (acc % mod != 0) return false;
    }
  return true;
}

// Rank modulo p of integer vectors.
std::size_t rank_mod(std::vector<std::vector<mpz_class>> m, long p) {
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] % p == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    mpz_class inv;
    mpz_class lead = m[rank][c] % p;
    if (lead < 0) lead += p;
    mpz_invert(inv.get_mpz_t(), lead.get_mpz_t(), mpz_class(p).get_mpz_t());
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank) continue;
      mpz_class f = m[r][c] * inv;
      for (std::size_t k = 0; k < cols; ++k) m[r][k] = (m[r][k] - f * m[rank][k]) % p;
    }
    ++rank;
  }
  return rank;
}

QPoly poly(std::initializer_list<long> c) {
  std::vector<mpq_class> v;
  for (long x : c) v.emplace_back(x);
  return QPoly(v);
}

}  // namespace

TEST_CASE("vanishing differentials: small cases") {
  Prime p(7);
  auto none = vanishing_differentials(LogMatrix::from_integers(p, 10, 3, {}));
  CHECK(none.basis.size() == 3);
  CHECK(none.certified_precision == 10);
  CHECK(none.rank == 0);

  auto m = LogMatrix::from_integers(p, 10, 3, {{1, 0, 0}});
  auto one = vanishing_differentials(m);
  CHECK(one.basis.size() == 2);
  CHECK(one.certified_precision == 10);
  CHECK(annihilates(m, one));

  // A row divisible by p costs one digit.
  auto m7 = LogMatrix::from_integers(p, 10, 3, {{7, 14, 0}});
  auto s7 = vanishing_differentials(m7);
  CHECK(s7.certified_precision == 9);
  CHECK(annihilates(m7, s7));

  CHECK(code_of([&] { vanishing_differentials(LogMatrix::from_integers(p, 10, 3, {{0, 0, 0}})); }) ==
        Errc::PrecisionExhausted);
  CHECK(code_of([&] {
          vanishing_differentials(LogMatrix::from_integers(p, 10, 3, {{1, 2, 3}, {2, 4, 6}}));
        }) == Errc::PrecisionExhausted);
  CHECK(code_of([&] {
          vanishing_differentials(LogMatrix::from_integers(p, 10, 3, {{1, 2, 3}, {1, 0}}));
        }) == Errc::DimensionMismatch);
}

TEST_CASE("vanishing differentials agree with the rational kernel") {
  std::mt19937_64 rng(8);
  const long pv = 7;
  int done = 0;
  for (int t = 0; t < 200 && done < 60; ++t) {
    const std::size_t g = 2 + rng() % 4;
    const std::size_t r = rng() % g;
    std::vector<std::vector<mpz_class>> rows(r, std::vector<mpz_class>(g));
    std::vector<std::vector<mpq_class>> qrows(r, std::vector<mpq_class>(g));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < g; ++j) {
        long v = static_cast<long>(rng() % 2001) - 1000;
        rows[i][j] = v;
        qrows[i][j] = v;
      }
    if (rank_mod(rows, pv) < r) continue;  // keep the mod-p rank full
    ++done;
    auto m = LogMatrix::from_integers(Prime(pv), 10, g, rows);
    auto s = vanishing_differentials(m);
    CHECK(s.basis.size() == g - r);
    CHECK(annihilates(m, s));

    // Each returned vector lies in the rational kernel modulo p.
    auto ker = oracle::kernel_q(qrows, g);
    REQUIRE(ker.size() == g - r);
    std::vector<std::vector<mpz_class>> stacked;
    for (auto& v : ker) {
      mpz_class den = 1;
      for (auto& x : v) den = lcm(den, x.get_den());
      std::vector<mpz_class> iv;
      for (auto& x : v) iv.push_back(mpz_class(x * den));
      stacked.push_back(iv);
    }
    // Both sets sit in the (g - r)-dimensional kernel modulo p, and ours
    // spans it.
    std::vector<std::vector<mpz_class>> ours;
    for (auto& v : s.basis) {
      std::vector<mpz_class> iv;
      for (auto& x : v) iv.push_back(x.residue());
      ours.push_back(iv);
      stacked.push_back(iv);
    }
    CHECK(rank_mod(ours, pv) == g - r);
    CHECK(rank_mod(stacked, pv) == g - r);
  }
  CHECK(done == 60);
}

TEST_CASE("disc zeros") {
  Prime p(5);
  auto two = disc_zeros(PadicSeries::from_integers(p, {-25, 0, 1}, 10));
  CHECK(two.total == 2);
  REQUIRE(two.roots.size() == 2);
  std::vector<mpz_class> found;
  for (const auto& r : two.roots) {
    CHECK(r.simple);
    CHECK(r.multiplicity == 1);
    found.push_back(r.root.residue());
  }
  std::sort(found.begin(), found.end());
  mpz_class m = oracle::pow_mpz(5, two.roots[0].root.precision());
  CHECK(found == std::vector<mpz_class>{5, m - 5});

  auto dbl = disc_zeros(PadicSeries::from_integers(p, {0, 0, 1}, 10));
  CHECK(dbl.total == 2);
  REQUIRE(dbl.roots.size() == 1);
  CHECK(dbl.roots[0].multiplicity == 2);
  CHECK(dbl.roots[0].root.is_zero());
  CHECK_FALSE(dbl.roots[0].simple);

  // t (t - p)(t - 2p)
  auto tri = disc_zeros(PadicSeries::from_integers(p, oracle::expand_roots({0, 5, 10}), 10));
  CHECK(tri.total == 3);
  REQUIRE(tri.roots.size() == 3);
  for (const auto& r : tri.roots) {
    CHECK(r.simple);
    CHECK(r.hensel_certified);
  }

  std::mt19937_64 rng(14);
  for (int t = 0; t < 40; ++t) {
    std::vector<mpz_class> roots;
    const int d = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < d; ++i) roots.push_back(mpz_class(static_cast<long>(rng() % 40)) * 7);
    auto coeffs = oracle::expand_roots(roots);
    auto s = PadicSeries::from_integers(Prime(7), coeffs, 12);
    auto z = disc_zeros(s);
    i64 sum = 0;
    for (const auto& r : z.roots) sum += r.multiplicity;
    CHECK(sum == z.total);
    CHECK(z.total == d);
  }
}

TEST_CASE("vanishing orders of g dx/y") {
  QPoly f = poly({1, 0, 0, 0, 0, 1});  // y^2 = x^5 + 1, genus 2
  CHECK(hyperelliptic_genus(f) == 2);
  CHECK(differential_vanishing_order(f, poly({1}), AffinePlace{0, 1}) == 0);
  CHECK(differential_vanishing_order(f, poly({0, 1}), AffinePlace{0, 1}) == 1);
  CHECK(differential_vanishing_order(f, poly({1}), AffinePlace{-1, 0}) == 0);
  CHECK(differential_vanishing_order(f, poly({1, 1}), AffinePlace{-1, 0}) == 2);
  CHECK(infinity_vanishing_order(f, poly({1})).order == 2);
  CHECK(infinity_vanishing_order(f, poly({0, 1})).order == 0);

  // y^2 = x f(x): x dx/y vanishes to order 2 at (0, 0).
  QPoly xf = poly({0, 1}) * poly({1, 0, 0, 0, 1});
  CHECK(differential_vanishing_order(xf, poly({0, 1}), AffinePlace{0, 0}) == 2);

  CHECK(code_of([&] { differential_vanishing_order(f, poly({1}), AffinePlace{0, 2}); }) ==
        Errc::PointNotOnCurve);
  CHECK(code_of([&] { differential_vanishing_order(poly({0, 0, 1, 1}), poly({1}), AffinePlace{0, 0}); }) ==
        Errc::NonSquarefree);

  std::mt19937_64 rng(19);
  for (int t = 0; t < 40; ++t) {
    const int deg = 5 + static_cast<int>(rng() % 4);
    std::vector<mpq_class> roots;
    while (static_cast<int>(roots.size()) < deg) {
      mpq_class r(static_cast<long>(rng() % 41) - 20);
      if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
    }
    QPoly F = QPoly::from_roots(roots);
    const int genus = hyperelliptic_genus(F);
    std::vector<mpq_class> groots;
    const int gdeg = static_cast<int>(rng() % genus);
    for (int i = 0; i < gdeg; ++i) groots.emplace_back(static_cast<long>(rng() % 11) - 5);
    QPoly G = QPoly::from_roots(groots);
    CHECK(total_vanishing_order(F, G) == 2 * genus - 2);

    // The same total from fibres over the roots of G and infinity.
    std::vector<mpq_class> distinct = groots;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    int sum = 0;
    for (const auto& x0 : distinct) {
      auto fo = fiber_vanishing_order(F, G, x0);
      sum += fo.order * fo.points;
    }
    // Weierstrass points with no root of G still carry order 0.
    auto inf = infinity_vanishing_order(F, G);
    sum += inf.order * inf.points;
    CHECK(sum == 2 * genus - 2);
  }
}

TEST_CASE("heights") {
  CHECK(naive_height({1, 0, 0}) == doctest::Approx(0.0));
  CHECK(naive_height({3, 4, 5}) == doctest::Approx(std::log(5.0)));
  CHECK(naive_height({mpq_class(2, 3), 1}) == doctest::Approx(std::log(3.0)));
  CHECK(naive_height({-6, 4}) == doctest::Approx(std::log(3.0)));
  CHECK(naive_height({mpz_class("1000000000000000000000000000000"), 1}) ==
        doctest::Approx(30 * std::log(10.0)));
  CHECK(code_of([] { naive_height({0, 0}); }) == Errc::ZeroVector);

  BoundConstants zero;
  zero.c10 = zero.c11 = 0;
  CHECK(height_of_multiple(1, 2.5, std::nullopt, 0, zero) == doctest::Approx(2.5));
  CHECK(height_of_multiple(9, 2.0, std::nullopt, 7, zero) == doctest::Approx(162.0));
  CHECK(height_of_multiple(3, 1.0, 4.0, 0) == doctest::Approx(9 + 4 + 1));
  CHECK(height_of_multiple(3, 1.0, std::nullopt, 2.0) == doctest::Approx(9 + (2 + 1) + 1));
}

TEST_CASE("proximity bound") {
  BoundParams b;
  b.n = 1;
  b.h_x = 3;
  b.h0 = std::log(3.0);
  b.m_p = 8;
  b.kappa = 1;
  const double A = 3 + 1, Bv = 8 * std::log(3.0) + 1;
  const double expect = A * Bv * std::pow(std::log(A) + std::log(Bv) + 1, 4);
  CHECK(proximity_bound(b) == doctest::Approx(expect));

  BoundConstants c;
  c.c0 = 3;
  CHECK(proximity_bound(b, c) == doctest::Approx(3 * expect));

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(0.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    BoundParams q;
    q.n = 1 + static_cast<int>(rng() % 3);
    q.h_x = U(rng);
    q.h0 = U(rng);
    q.m_p = U(rng);
    q.kappa = U(rng);
    const double base = proximity_bound(q);
    for (int field = 0; field < 4; ++field) {
      BoundParams r = q;
      double* f = field == 0 ? &r.h_x : field == 1 ? &r.h0 : field == 2 ? &r.m_p : &r.kappa;
      *f += 1 + U(rng);
      CHECK(proximity_bound(r) >= base);
    }
  }
  BoundParams neg = b;
  neg.h_x = -1;
  CHECK(code_of([&] { proximity_bound(neg); }) == Errc::DomainError);
  BoundConstants badL;
  badL.cL = 0;
  CHECK(code_of([&] { proximity_bound(b, badL); }) == Errc::DomainError);

  CHECK(fp_lower_bound(2, 2, 1, 5) < 0);
  const double l3 = std::log(3.0);
  CHECK(fp_lower_bound(1, 1, 1, 7) ==
        doctest::Approx(-l3 * l3 * std::pow(2 * std::log(l3), 4) * std::log(7.0)));
}
