#include <random>

#include "cctk/chabauty.hpp"
#include "cctk/error.hpp"
#include "cctk/hyperelliptic.hpp"
#include "doctest.h"

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

const RamificationCheck& find_cover(const std::vector<RamificationCheck>& v, Cover c) {
  for (const auto& r : v)
    if (r.cover == c) return r;
  FAIL("missing cover");
  return v.front();
}

std::vector<RamificationCheck> all_covers(const ProductFamily& fam, const FiberPoint& pt) {
  return {verify_ramification(fam, Cover::G1, pt), verify_ramification(fam, Cover::G2, pt),
          verify_ramification(fam, Cover::G3, pt)};
}

}  // namespace

TEST_CASE("the (12, 4, -2) family") {
  auto fam = build_product_family(12, 4, -2);
  CHECK(fam.f1 == QPoly::from_roots({1, -1, 12, 4, -2}));
  CHECK(fam.f2 == QPoly::from_roots({-12, -4, 2}));
  CHECK(fam.f3 == fam.f1 * fam.f2);
  CHECK(fam.genus1 == 2);
  CHECK(fam.genus2 == 1);
  CHECK(fam.genus3 == 3);
  CHECK(fam.x5 == QPoly::from_roots({0, 1, 144, 16, 4}));

  for (int s : {1, -1}) {
    auto chk = verify_point(fam, {4, 0, 16 * s});
    CHECK(chk.on_curve);
    CHECK(chk.on_x1);
    CHECK(chk.on_x2);
    CHECK(chk.f2_at_x0 == 256);
    CHECK(chk.f1_at_x0 == 0);
    CHECK(chk.x0_root_of == RootOf::F1);
    CHECK(chk.f2_at_x0_square);

    auto covers = all_covers(fam, {4, 0, 16 * s});
    CHECK_FALSE(find_cover(covers, Cover::G1).ramified);
    CHECK(find_cover(covers, Cover::G1).index == 1);
    CHECK(find_cover(covers, Cover::G2).ramified);
    CHECK(find_cover(covers, Cover::G2).index == 2);
    for (const auto& pb : find_cover(covers, Cover::G2).pullbacks)
      CHECK(pb.order_pulled_back == 2 * pb.order_on_target + 1);
  }
  CHECK_FALSE(verify_point(fam, {4, 0, 15}).on_curve);
  auto off = verify_point(fam, {1, 0, 3});
  CHECK(off.f2_at_x0 == 13 * 5 * -1);
  CHECK_FALSE(off.on_curve);
  CHECK(code_of([&] { verify_ramification(fam, Cover::G1, {4, 0, 15}); }) == Errc::PointNotOnCurve);
}

TEST_CASE("separability") {
  try {
    build_product_family(1, 2, 3);
    FAIL("expected NotSeparable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotSeparable);
    CHECK(std::string(e.what()).find('1') != std::string::npos);
  }
  CHECK(code_of([] { build_product_family(2, -2, 5); }) == Errc::NotSeparable);
  CHECK(code_of([] { build_product_family(0, 2, 5); }) == Errc::NotSeparable);
  auto fam = build_product_family(2, 3, 4);
  CHECK(fam.x5 == QPoly::from_roots({0, 1, 4, 9, 16}));
  CHECK(fam.x6 == QPoly::from_roots({1, 4, 9, 16}));
  CHECK(fam.genus5 == 2);
  CHECK(fam.genus6 == 1);
}

TEST_CASE("ramification elsewhere on the fibre product") {
  // (a,b,c) = (-9,-6,-3): x0 = 3 is a root of f2 and f1(3) = 72^2.
  auto fam = build_product_family(-9, -6, -3);
  auto covers = all_covers(fam, {3, 72, 0});
  CHECK(find_cover(covers, Cover::G1).ramified);
  CHECK_FALSE(find_cover(covers, Cover::G2).ramified);
  CHECK_FALSE(find_cover(covers, Cover::G3).ramified);

  // (a,b,c) = (-9,-8,2): x0 = 0 with both y's nonzero, nothing ramifies.
  auto gen = build_product_family(-9, -8, 2);
  REQUIRE(verify_point(gen, {0, 12, 12}).on_curve);
  for (const auto& r : all_covers(gen, {0, 12, -12})) {
    CHECK_FALSE(r.ramified);
    for (const auto& pb : r.pullbacks) CHECK(pb.order_pulled_back == pb.order_on_target);
  }
  for (int s1 : {1, -1})
    for (int s2 : {1, -1}) CHECK(verify_point(gen, {0, 12 * s1, 12 * s2}).on_curve);
}

TEST_CASE("canonical degree on the family curves") {
  std::mt19937_64 rng(10);
  auto fam = build_product_family(12, 4, -2);
  for (const QPoly* f : {&fam.f1, &fam.f3, &fam.x5}) {
    const int genus = hyperelliptic_genus(*f);
    for (int t = 0; t < 10; ++t) {
      std::vector<mpq_class> c;
      const int gdeg = static_cast<int>(rng() % genus);
      for (int i = 0; i <= gdeg; ++i) c.emplace_back(static_cast<long>(rng() % 9) - 4);
      if (c.back() == 0) c.back() = 1;
      CHECK(total_vanishing_order(*f, QPoly(c)) == 2 * genus - 2);
    }
  }
}

TEST_CASE("square family") {
  auto r = verify_square_family(QPoly({1, 0, 0, 0, 1}));
  CHECK(r.genus1 == 2);
  CHECK(r.genus2 == 1);
  CHECK(r.genus3 == 3);
  CHECK(r.x3 == QPoly({1, 0, 0, 0, 0, 0, 0, 0, 1}));
  CHECK(r.pullback_numerator == QPoly({0, 2}));
  CHECK(r.total_order == 4);
  int sum = 0;
  for (const auto& z : r.zeros) sum += z.points * z.order;
  CHECK(sum == 4);

  CHECK(code_of([] { verify_square_family(QPoly({0, 1, 0, 0, 1})); }) == Errc::ZeroConstantTerm);
  CHECK(code_of([] { verify_square_family(QPoly({1, 2, 1, 0, 0})); }) == Errc::InvalidArgument);
  CHECK(code_of([] { verify_square_family(QPoly::from_roots({1, 1, 2, 3})); }) == Errc::NonSquarefree);
}
