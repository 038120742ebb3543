#include "cctk/hyperelliptic.hpp"

#include "cctk/chabauty.hpp"
#include "cctk/error.hpp"

namespace cctk {

namespace {

// Square root of a rational square.
mpq_class rational_sqrt(const mpq_class& q) {
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
  mpq_class r(n, d);
  r.canonicalize();
  return r;
}

struct LocalOrders {
  int x_minus_x0 = 1;
  int y1 = 0;
  int y2 = 0;
};

// Orders at a point of the fibre product in a local parameter. At most one of
// y1, y2 vanishes since f1 f2 is separable; that one is the parameter.
LocalOrders local_orders(const ProductFamily& fam, const FiberPoint& pt) {
  LocalOrders o;
  const int m1 = root_multiplicity(fam.f1, pt.x0);
  const int m2 = root_multiplicity(fam.f2, pt.x0);
  o.x_minus_x0 = (m1 > 0 || m2 > 0) ? 2 : 1;
  o.y1 = m1 * o.x_minus_x0 / 2;
  o.y2 = m2 * o.x_minus_x0 / 2;
  return o;
}

}  // namespace

ProductFamily build_product_family(const mpq_class& a, const mpq_class& b, const mpq_class& c) {
  const std::vector<mpq_class> roots{1, -1, a, b, c, -a, -b, -c};
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (roots[i] == roots[j])
        throw Error(Errc::NotSeparable, "f1 f2 has the repeated root " + roots[i].get_str());

  ProductFamily fam;
  fam.a = a;
  fam.b = b;
  fam.c = c;
  fam.f1 = QPoly::from_roots({1, -1, a, b, c});
  fam.f2 = QPoly::from_roots({-a, -b, -c});
  fam.f3 = fam.f1 * fam.f2;
  fam.x6 = QPoly::from_roots({1, a * a, b * b, c * c});
  fam.x5 = QPoly::x() * fam.x6;
  fam.genus1 = hyperelliptic_genus(fam.f1);
  fam.genus2 = hyperelliptic_genus(fam.f2);
  fam.genus3 = hyperelliptic_genus(fam.f3);
  fam.genus5 = hyperelliptic_genus(fam.x5);
  fam.genus6 = hyperelliptic_genus(fam.x6);
  fam.unchecked_assumptions = {
      "Jac(X1) has Mordell-Weil rank 1",
      "Jac(X2) has Mordell-Weil rank at least 1",
      "Jac(X5) has Mordell-Weil rank at least 2",
      "Jac(X6) has Mordell-Weil rank at least 1",
      "the closure of Jac(X5)(Q) has finite index in Jac(X5)(Q_p)",
      "Jac(X3) is isogenous to Jac(X5) x Jac(X6)",
  };
  return fam;
}

std::string_view root_of_name(RootOf r) noexcept {
  switch (r) {
    case RootOf::F1: return "f1";
    case RootOf::F2: return "f2";
    case RootOf::Neither: return "neither";
  }
  return "neither";
}

std::string_view cover_name(Cover c) noexcept {
  switch (c) {
    case Cover::G1: return "g1";
    case Cover::G2: return "g2";
    case Cover::G3: return "g3";
  }
  return "g1";
}

PointCheck verify_point(const ProductFamily& family, const FiberPoint& point) {
  PointCheck r;
  r.f1_at_x0 = family.f1(point.x0);
  r.f2_at_x0 = family.f2(point.x0);
  r.on_x1 = point.y1 * point.y1 == r.f1_at_x0;
  r.on_x2 = point.y2 * point.y2 == r.f2_at_x0;
  r.on_curve = r.on_x1 && r.on_x2;
  if (r.f1_at_x0 == 0) r.x0_root_of = RootOf::F1;
  else if (r.f2_at_x0 == 0) r.x0_root_of = RootOf::F2;
  r.f2_at_x0_square = is_rational_square(r.f2_at_x0);
  return r;
}

RamificationCheck verify_ramification(const ProductFamily& family, Cover cover,
                                      const FiberPoint& point) {
  if (!verify_point(family, point).on_curve)
    throw Error(Errc::PointNotOnCurve, "point is not on the fibre product");
  const LocalOrders o = local_orders(family, point);

  // A local parameter on the target at the image point, and its order upstairs.
  QPoly target;
  mpq_class y_image;
  int e = 1;
  switch (cover) {
    case Cover::G1:
      target = family.f1;
      y_image = point.y1;
      e = point.y1 == 0 ? o.y1 : o.x_minus_x0;
      break;
    case Cover::G2:
      target = family.f2;
      y_image = point.y2;
      e = point.y2 == 0 ? o.y2 : o.x_minus_x0;
      break;
    case Cover::G3:
      target = family.f3;
      y_image = point.y1 * point.y2;
      e = y_image == 0 ? o.y1 + o.y2 : o.x_minus_x0;
      break;
  }
  RamificationCheck r;
  r.cover = cover;
  r.index = e;
  r.ramified = e > 1;
  const std::vector<std::pair<std::string, QPoly>> diffs{
      {"dx/y", QPoly::constant(1)},
      {"x dx/y", QPoly::x()},
      {"(x - x0) dx/y", QPoly({-point.x0, 1})},
  };
  for (const auto& [name, g] : diffs) {
    const int ord = differential_vanishing_order(target, g, AffinePlace{point.x0, y_image});
    r.pullbacks.push_back({name, ord, e * ord + (e - 1)});
  }
  return r;
}

SquareFamilyReport verify_square_family(const QPoly& f) {
  if (f.degree() != 4) throw Error(Errc::InvalidArgument, "f must have degree 4");
  if (f.coefficient(0) == 0)
    throw Error(Errc::ZeroConstantTerm, "f(0) = 0 makes f(x^2) non-squarefree");
  if (!is_squarefree(f)) throw Error(Errc::NonSquarefree, "f is not squarefree");

  SquareFamilyReport r;
  r.f = f;
  r.x1 = QPoly::x() * f;
  r.x2 = f;
  r.x3 = f.compose_square();
  r.genus1 = hyperelliptic_genus(r.x1);
  r.genus2 = hyperelliptic_genus(r.x2);
  r.genus3 = hyperelliptic_genus(r.x3);
  r.pullback_numerator = QPoly({0, 0, 1}).derivative();

  const QPoly g = QPoly::x();
  const mpq_class f0 = f.coefficient(0);
  const FiberOrder over0 = fiber_vanishing_order(r.x3, g, 0);
  DivisorEntry zero{"x = 0", mpq_class(0), std::nullopt, over0.points, over0.order};
  if (is_rational_square(f0)) zero.y = rational_sqrt(f0);
  r.zeros.push_back(zero);
  const FiberOrder inf = infinity_vanishing_order(r.x3, g);
  if (inf.order != 0) r.zeros.push_back({"infinity", std::nullopt, std::nullopt, inf.points, inf.order});
  for (const auto& z : r.zeros) r.total_order += z.points * z.order;
  r.unchecked_assumptions = {
      "Jac(X2) has Mordell-Weil rank 0",
      "the closure of Jac(X1)(Q) has finite index in Jac(X1)(Q_p)",
      "Jac(X3) is isogenous to Jac(X1) x Jac(X2)",
  };
  return r;
}

}  // namespace cctk
