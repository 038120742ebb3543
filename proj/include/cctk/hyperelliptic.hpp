#pragma once
// Exact checks for two families of hyperelliptic curves: the fibre product
// y1^2 = f1(x), y2^2 = f2(x) with its three quotient curves, and the curves
// y^2 = x f(x), f(x), f(x^2).

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cctk/qpoly.hpp"

namespace cctk {

struct ProductFamily {
  mpq_class a, b, c;
  QPoly f1;  ///< (x^2 - 1)(x - a)(x - b)(x - c)
  QPoly f2;  ///< (x + a)(x + b)(x + c)
  QPoly f3;  ///< y^2 = f1 f2
  QPoly x5;  ///< x (x - 1)(x - a^2)(x - b^2)(x - c^2)
  QPoly x6;  ///< (x - 1)(x - a^2)(x - b^2)(x - c^2)
  int genus1 = 0, genus2 = 0, genus3 = 0, genus5 = 0, genus6 = 0;
  std::vector<std::string> unchecked_assumptions;
};

/// Throws NotSeparable naming the repeated root when {+-1, +-a, +-b, +-c}
/// has a collision.
ProductFamily build_product_family(const mpq_class& a, const mpq_class& b, const mpq_class& c);

struct FiberPoint {
  mpq_class x0, y1, y2;
};

enum class RootOf { F1, F2, Neither };
std::string_view root_of_name(RootOf r) noexcept;

struct PointCheck {
  bool on_curve = false;  ///< y1^2 = f1(x0) and y2^2 = f2(x0)
  bool on_x1 = false;
  bool on_x2 = false;
  RootOf x0_root_of = RootOf::Neither;
  mpq_class f1_at_x0, f2_at_x0;
  bool f2_at_x0_square = false;
};

PointCheck verify_point(const ProductFamily& family, const FiberPoint& point);

enum class Cover { G1, G2, G3 };  ///< forget y2, forget y1, (x, y1 y2)
std::string_view cover_name(Cover c) noexcept;

struct PullbackOrder {
  std::string differential;  ///< on the target curve
  int order_on_target = 0;
  int order_pulled_back = 0;  ///< e * order + (e - 1)
};

struct RamificationCheck {
  Cover cover = Cover::G1;
  int index = 1;  ///< ramification index e at the point
  bool ramified = false;
  std::vector<PullbackOrder> pullbacks;
};

/// Ramification of a quotient map at a point of the fibre product, from the
/// orders of x - x0, y1, y2 in a local parameter. Throws PointNotOnCurve.
RamificationCheck verify_ramification(const ProductFamily& family, Cover cover,
                                      const FiberPoint& point);

struct DivisorEntry {
  std::string place;
  std::optional<mpq_class> x;
  std::optional<mpq_class> y;  ///< when rational
  int points = 0;
  int order = 0;
};

struct SquareFamilyReport {
  QPoly f;
  QPoly x1;  ///< x f(x)
  QPoly x2;  ///< f(x)
  QPoly x3;  ///< f(x^2)
  int genus1 = 0, genus2 = 0, genus3 = 0;
  QPoly pullback_numerator;  ///< d(x^2)/dx, the pullback of dx/y being (this) dx/y
  std::vector<DivisorEntry> zeros;  ///< divisor of x dx/y on X3
  int total_order = 0;
  std::vector<std::string> unchecked_assumptions;
};

/// f of degree 4, squarefree, f(0) != 0. Throws ZeroConstantTerm,
/// NonSquarefree, InvalidArgument.
SquareFamilyReport verify_square_family(const QPoly& f);

}  // namespace cctk
