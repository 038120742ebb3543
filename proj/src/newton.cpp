#include "cctk/newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cctk/error.hpp"

namespace cctk {

namespace {

using Point = std::pair<i64, int>;

// Lower bound on the true valuation of unstored coefficients a_j, j >= start.
struct Tail {
  enum class Kind { None, Constant, NegValuation, NegLog };
  Kind kind = Kind::None;
  int constant = 0;
  i64 start = 0;
  i64 p = 3;

  int bound(i64 j) const {
    switch (kind) {
      case Kind::Constant: return constant;
      case Kind::NegValuation: return -valuation(j, p);
      case Kind::NegLog: return -floor_log(static_cast<u64>(j), static_cast<u64>(p));
      case Kind::None: break;
    }
    return std::numeric_limits<int>::max();
  }
};

struct Profile {
  std::vector<CoeffValuation> coeffs;  // sorted by index
  Tail tail;
};

Tail tail_of(const PadicSeries& series) {
  Tail t;
  t.start = static_cast<i64>(series.truncation_order());
  t.p = series.prime().value();
  switch (series.tail()) {
    case TailModel::Exact: t.kind = Tail::Kind::None; break;
    case TailModel::Integral: t.kind = Tail::Kind::Constant; break;
    case TailModel::IntegralDerivative: t.kind = Tail::Kind::NegValuation; break;
  }
  return t;
}

Profile base_profile(const PadicSeries& series) {
  return Profile{coefficient_valuations(series), tail_of(series)};
}

// (a - o) x (b - o); positive for a counter-clockwise turn.
__int128 cross(const Point& o, const Point& a, const Point& b) {
  return static_cast<__int128>(a.first - o.first) * (b.second - o.second) -
         static_cast<__int128>(a.second - o.second) * (b.first - o.first);
}

std::vector<Point> lower_hull(const std::vector<Point>& sorted) {
  std::vector<Point> hull;
  for (const auto& pt : sorted) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), pt) <= 0) hull.pop_back();
    hull.push_back(pt);
  }
  return hull;
}

std::vector<Segment> segments_of(const std::vector<Point>& vertices) {
  std::vector<Segment> segs;
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    i64 dx = vertices[i].first - vertices[i - 1].first;
    i64 dy = vertices[i].second - vertices[i - 1].second;
    segs.push_back({Rational(dy, dx), dx});
  }
  return segs;
}

NewtonPolygon polygon_of(std::vector<Point> points) {
  std::sort(points.begin(), points.end());
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].first == points[i - 1].first)
      throw Error(Errc::InvalidArgument, "duplicate coefficient index");
  NewtonPolygon poly;
  poly.points = points;
  poly.vertices = lower_hull(points);
  poly.segments = segments_of(poly.vertices);
  return poly;
}

Rational key(const Rational& v, const Rational& n, i64 i) { return v + n * Rational(i); }

// Rightmost minimiser of v_i + n i over the determined points, after checking
// that no lower-bound marker or tail coefficient could move it.
RootCount count_profile(const Profile& prof, Rational n) {
  if (n <= 0) throw Error(Errc::InvalidArgument, "minimum valuation must be positive");
  std::vector<Point> pts;
  for (const auto& c : prof.coeffs)
    if (c.determined) pts.emplace_back(c.index, c.value);
  if (pts.empty())
    throw Error(Errc::IndeterminatePolygon, "series is zero at its precision");
  const i64 i0 = pts.front().first;

  Rational best = key(pts.front().second, n, i0);
  i64 k = i0;
  for (const auto& [i, v] : pts) {
    Rational kv = key(v, n, i);
    if (kv <= best) {
      best = kv;
      k = i;
    }
  }

  for (const auto& c : prof.coeffs) {
    if (c.determined || c.index <= i0) continue;
    Rational kv = key(c.value, n, c.index);
    bool ok = c.index < k ? kv >= best : kv > best;
    if (!ok)
      throw Error(Errc::InsufficientTruncation,
                  "coefficient " + std::to_string(c.index) + " is too imprecise to fix the polygon");
  }

  const Tail& tail = prof.tail;
  if (tail.kind != Tail::Kind::None) {
    auto tail_ok = [&](i64 j) { return key(tail.bound(j), n, j) > best; };
    if (tail.kind == Tail::Kind::Constant) {
      if (!tail_ok(tail.start))
        throw Error(Errc::InsufficientTruncation,
                    "truncation order " + std::to_string(tail.start) + " too small");
    } else {
      // n j - log_p j increases once j > 1/(n ln p); stop when it clears best.
      const double nd = boost::rational_cast<double>(n);
      const double lp = std::log(static_cast<double>(tail.p));
      const double turn = 1.0 / (nd * lp) + 1.0;
      const double target = boost::rational_cast<double>(best) + 1.0;
      for (i64 j = tail.start;; ++j) {
        if (!tail_ok(j))
          throw Error(Errc::InsufficientTruncation,
                      "truncation order " + std::to_string(tail.start) +
                          " too small (tail index " + std::to_string(j) + ")");
        double jd = static_cast<double>(j);
        if (jd > turn && nd * jd - std::log(jd) / lp > target) break;
      }
    }
  }

  NewtonPolygon poly = polygon_of(pts);
  i64 count = poly.length_with_slope_at_most(-n);
  if (count != k - i0) throw std::logic_error("polygon and minimiser disagree");
  return RootCount{n, count, i0};
}

mpz_class binomial(i64 n, i64 k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

// Profile of F(center + t) with per-coefficient precision bookkeeping.
Profile shifted_profile(const PadicSeries& series, const mpz_class& center) {
  if (center == 0) return base_profile(series);
  const i64 p = series.prime().value();
  const int vc = valuation(center, p);
  if (vc < 1) throw Error(Errc::InvalidArgument, "disc center must lie in pZ_p");
  const i64 T = static_cast<i64>(series.truncation_order());
  const int s = series.scale();
  const Tail base_tail = tail_of(series);

  Profile prof;
  prof.tail = base_tail;
  if (base_tail.kind == Tail::Kind::NegValuation) prof.tail.kind = Tail::Kind::NegLog;

  std::vector<mpz_class> powers(static_cast<std::size_t>(T) + 1);
  powers[0] = 1;
  for (i64 e = 1; e <= T; ++e) powers[static_cast<std::size_t>(e)] = powers[static_cast<std::size_t>(e - 1)] * center;

  for (i64 i = 0; i < T; ++i) {
    long prec = std::numeric_limits<int>::max();
    mpz_class value = 0;
    for (i64 j = i; j < T; ++j) {
      const PadicNumber& c = series.coefficient(static_cast<std::size_t>(j));
      prec = std::min<long>(prec, c.precision() + (j - i) * vc);
      if (!c.is_zero()) value += c.residue() * binomial(j, i) * powers[static_cast<std::size_t>(j - i)];
    }
    switch (base_tail.kind) {
      case Tail::Kind::None: break;
      case Tail::Kind::Constant:
        prec = std::min<long>(prec, base_tail.constant + s + (T - i) * vc);
        break;
      case Tail::Kind::NegValuation:
      case Tail::Kind::NegLog:
        prec = std::min<long>(prec, -floor_log(static_cast<u64>(T), static_cast<u64>(p)) + s +
                                        (T - i) * vc);
        break;
    }
    if (prec <= 0) {
      prof.coeffs.push_back(CoeffValuation::at_least(i, static_cast<int>(prec) - s));
      continue;
    }
    mpz_class m = mpz_pow(p, static_cast<unsigned>(prec));
    mpz_class r = value % m;
    if (r < 0) r += m;
    if (r == 0)
      prof.coeffs.push_back(CoeffValuation::at_least(i, static_cast<int>(prec) - s));
    else
      prof.coeffs.push_back(CoeffValuation::exact(i, valuation(r, p) - s));
  }
  return prof;
}

}  // namespace

i64 NewtonPolygon::length_with_slope_at_most(Rational bound) const {
  i64 total = 0;
  for (const auto& seg : segments)
    if (seg.slope <= bound) total += seg.length;
  return total;
}

NewtonPolygon newton_polygon(std::span<const CoeffValuation> coefficients) {
  std::vector<Point> pts;
  for (const auto& c : coefficients)
    if (c.determined) pts.emplace_back(c.index, c.value);
  if (pts.empty())
    throw Error(Errc::IndeterminatePolygon, "no coefficient with determined valuation");
  NewtonPolygon poly = polygon_of(std::move(pts));
  const i64 first = poly.vertices.front().first;
  const i64 last = poly.vertices.back().first;
  for (const auto& c : coefficients) {
    if (c.determined) continue;
    if (c.index < first || c.index > last)
      throw Error(Errc::IndeterminatePolygon,
                  "marker at index " + std::to_string(c.index) + " lies outside the hull");
    for (std::size_t s = 1; s < poly.vertices.size(); ++s) {
      const auto& a = poly.vertices[s - 1];
      const auto& b = poly.vertices[s];
      if (c.index < a.first || c.index > b.first) continue;
      Rational hull_value = Rational(a.second) + poly.segments[s - 1].slope * Rational(c.index - a.first);
      if (Rational(c.value) < hull_value)
        throw Error(Errc::IndeterminatePolygon,
                    "marker at index " + std::to_string(c.index) + " could lie below the hull");
      break;
    }
  }
  return poly;
}

std::vector<CoeffValuation> coefficient_valuations(const PadicSeries& series) {
  std::vector<CoeffValuation> out;
  out.reserve(series.truncation_order());
  const int s = series.scale();
  for (std::size_t i = 0; i < series.truncation_order(); ++i) {
    const PadicNumber& c = series.coefficient(i);
    const i64 idx = static_cast<i64>(i);
    if (c.is_zero())
      out.push_back(CoeffValuation::at_least(idx, c.precision() - s));
    else
      out.push_back(CoeffValuation::exact(idx, c.valuation() - s));
  }
  return out;
}

RootCount count_roots_with_valuation_ge(const PadicSeries& series, Rational min_valuation) {
  return count_profile(base_profile(series), min_valuation);
}

RootCount count_roots_with_valuation_ge(const std::vector<mpz_class>& polynomial, Prime p,
                                        Rational min_valuation) {
  Profile prof;
  for (std::size_t i = 0; i < polynomial.size(); ++i)
    if (polynomial[i] != 0)
      prof.coeffs.push_back(CoeffValuation::exact(static_cast<i64>(i), valuation(polynomial[i], p.value())));
  prof.tail.kind = Tail::Kind::None;
  return count_profile(prof, min_valuation);
}

RootCount count_roots_near(const PadicSeries& series, const mpz_class& center,
                           Rational min_valuation) {
  return count_profile(shifted_profile(series, center), min_valuation);
}

Lemma1Result lemma1_bound_check(const PadicSeries& series, int n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "congruence level n must be a positive integer");
  const i64 p = series.prime().value();
  Lemma1Result result;
  const auto coeffs = coefficient_valuations(series);

  for (const auto& c : coeffs) {
    if (c.index == 0 || !c.determined) continue;
    if (c.value + valuation(c.index, p) < 0) {
      result.detail = "dF/dt has a non-integral coefficient at t^" + std::to_string(c.index - 1);
      return result;
    }
  }

  Profile prof{coeffs, tail_of(series)};
  const bool a1_known = coeffs.size() >= 2 && coeffs[1].determined;
  if (!a1_known) {
    result.status = Lemma1Result::Status::Holds;
    result.holds = true;
    result.vacuous = true;
    try {
      RootCount rc = count_profile(prof, Rational(n));
      result.k = rc.zero_root_multiplicity + rc.count;
    } catch (const Error&) {
      result.k = 0;
    }
    result.detail = "a_1 is zero at its precision";
    return result;
  }
  if (!coeffs.empty() && coeffs.front().index == 0 && coeffs.front().determined) {
    result.detail = "F(0) is not zero";
    return result;
  }

  RootCount rc = count_profile(prof, Rational(n));
  result.a1_valuation = coeffs[1].value;
  result.k = rc.zero_root_multiplicity + rc.count;
  if (result.k < 2) {
    result.detail = "no nonzero root of valuation >= n";
    return result;
  }
  result.predicted = (result.k - 1) * n - valuation(result.k, p);
  result.holds = *result.a1_valuation >= result.predicted;
  result.status = result.holds ? Lemma1Result::Status::Holds : Lemma1Result::Status::Violated;
  return result;
}

mpz_class evaluate(const std::vector<mpz_class>& polynomial, const mpz_class& x) {
  mpz_class acc = 0;
  for (auto it = polynomial.rbegin(); it != polynomial.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<mpz_class> derivative(const std::vector<mpz_class>& polynomial) {
  std::vector<mpz_class> d;
  for (std::size_t i = 1; i < polynomial.size(); ++i)
    d.push_back(polynomial[i] * static_cast<unsigned long>(i));
  return d;
}

PadicNumber hensel_simple_root(const std::vector<mpz_class>& polynomial, const PadicNumber& approx) {
  const Prime p = approx.prime();
  const i64 pv = p.value();
  const int prec = approx.precision();
  const auto deriv = derivative(polynomial);

  mpz_class a = approx.residue();
  mpz_class fa = evaluate(polynomial, a);
  mpz_class da = evaluate(deriv, a);
  if (da == 0) throw Error(Errc::HenselFails, "derivative vanishes at the approximation");
  if (fa == 0) return PadicNumber(p, a, prec);
  const int delta = valuation(da, pv);
  if (valuation(fa, pv) <= 2 * delta)
    throw Error(Errc::HenselFails, "v(F(a)) <= 2 v(F'(a))");

  const mpz_class pdelta = mpz_pow(pv, static_cast<unsigned>(delta));
  const mpz_class work = mpz_pow(pv, static_cast<unsigned>(prec + delta));
  for (int iter = 0; iter < 256; ++iter) {
    mpz_class r = fa % work;
    if (r == 0) return PadicNumber(p, a, prec);
    mpz_class unit = (da / pdelta) % work;
    if (unit < 0) unit += work;
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), unit.get_mpz_t(), work.get_mpz_t());
    a = (a - (fa / pdelta) * inv) % work;
    if (a < 0) a += work;
    fa = evaluate(polynomial, a);
    da = evaluate(deriv, a);
  }
  throw Error(Errc::HenselFails, "Newton iteration did not converge");
}

}  // namespace cctk
