#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>
#include <gmpxx.h>

#include "cctk/arith.hpp"
#include "cctk/padic.hpp"

namespace cctk {

using Rational = boost::rational<i64>;

/// Valuation of one coefficient: exact, or only bounded below ("at least N")
/// when the coefficient is zero at its precision. Exact zeros are omitted.
struct CoeffValuation {
  i64 index = 0;
  int value = 0;
  bool determined = true;

  static CoeffValuation exact(i64 index, int v) { return {index, v, true}; }
  static CoeffValuation at_least(i64 index, int bound) { return {index, bound, false}; }
};

struct Segment {
  Rational slope;
  i64 length = 0;
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct NewtonPolygon {
  std::vector<std::pair<i64, int>> points;    ///< determined (index, valuation)
  std::vector<std::pair<i64, int>> vertices;  ///< extreme points of the lower hull
  std::vector<Segment> segments;              ///< strictly increasing slopes

  /// Horizontal length of the part with slope <= bound.
  i64 length_with_slope_at_most(Rational bound) const;
};

/// Lower convex hull of the determined points. A lower-bound marker that
/// could fall below the hull (or outside the determined index range) makes
/// the polygon indeterminate.
NewtonPolygon newton_polygon(std::span<const CoeffValuation> coefficients);

struct RootCount {
  Rational min_valuation;
  i64 count = 0;                   ///< nonzero roots in C_p with v >= min_valuation
  i64 zero_root_multiplicity = 0;  ///< power of t dividing the series within precision
};

/// Valuations of the series coefficients (true valuations, scale applied).
std::vector<CoeffValuation> coefficient_valuations(const PadicSeries& series);

RootCount count_roots_with_valuation_ge(const PadicSeries& series, Rational min_valuation);
RootCount count_roots_with_valuation_ge(const std::vector<mpz_class>& polynomial, Prime p,
                                        Rational min_valuation);

/// Root count of F(center + t) for v(t) >= min_valuation. The center must be
/// an exact p-integral integer with v(center) >= 1 (or zero).
RootCount count_roots_near(const PadicSeries& series, const mpz_class& center,
                           Rational min_valuation);

struct Lemma1Result {
  enum class Status { Holds, Violated, HypothesisFailed };
  Status status = Status::HypothesisFailed;
  bool holds = false;
  bool vacuous = false;             ///< a_1 is zero at its precision
  i64 k = 0;                        ///< endpoint of the slope <= -n part
  std::optional<int> a1_valuation;  ///< true valuation of a_1 when determined
  i64 predicted = 0;                ///< (k - 1) n - v_p(k)
  std::string detail;
};

/// Checks v_p(a_1) >= (k - 1) n - v_p(k) for a series F with F(0) = 0 and
/// integral derivative, where k ends the slope <= -n part of its polygon.
Lemma1Result lemma1_bound_check(const PadicSeries& series, int n);

/// Newton iteration from approx to its precision. Requires
/// v(F(approx)) > 2 v(F'(approx)).
PadicNumber hensel_simple_root(const std::vector<mpz_class>& polynomial, const PadicNumber& approx);

mpz_class evaluate(const std::vector<mpz_class>& polynomial, const mpz_class& x);
std::vector<mpz_class> derivative(const std::vector<mpz_class>& polynomial);

}  // namespace cctk
