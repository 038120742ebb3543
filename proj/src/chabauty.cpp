#include "cctk/chabauty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cctk/error.hpp"

namespace cctk {

LogMatrix LogMatrix::from_integers(Prime p, int precision, std::size_t g,
                                   const std::vector<std::vector<mpz_class>>& rows) {
  LogMatrix m{p, precision, g, {}};
  for (const auto& row : rows) {
    std::vector<PadicNumber> r;
    for (const auto& v : row) r.emplace_back(p, v, precision);
    m.rows.push_back(std::move(r));
  }
  return m;
}

VanishingSpace vanishing_differentials(const LogMatrix& m) {
  const i64 p = m.p.value();
  const std::size_t g = m.g;
  if (g < 1) throw Error(Errc::DimensionMismatch, "g must be positive");
  int N = m.precision;
  for (const auto& row : m.rows) {
    if (row.size() != g)
      throw Error(Errc::DimensionMismatch, "row of length " + std::to_string(row.size()) +
                                               ", expected " + std::to_string(g));
    for (const auto& x : row) {
      if (!(x.prime() == m.p)) throw Error(Errc::PrimeMismatch, "entry over a different prime");
      N = std::min(N, x.precision());
    }
  }
  if (N < 1) throw Error(Errc::PrecisionExhausted, "no precision to work with");
  const std::size_t r = m.rows.size();
  const mpz_class mod = mpz_pow(p, static_cast<unsigned>(N));

  VanishingSpace out;
  if (r == 0) {
    for (std::size_t i = 0; i < g; ++i) {
      std::vector<PadicNumber> e;
      for (std::size_t j = 0; j < g; ++j) e.emplace_back(m.p, i == j ? 1 : 0, N);
      out.basis.push_back(std::move(e));
    }
    out.certified_precision = N;
    return out;
  }

  std::vector<std::vector<mpz_class>> a(r, std::vector<mpz_class>(g));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < g; ++j) {
      a[i][j] = m.rows[i][j].residue() % mod;
    }
  std::vector<std::size_t> perm(g);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> pivot_val(r);
  int spent = 0;

  auto swap_cols = [&](std::size_t c1, std::size_t c2) {
    if (c1 == c2) return;
    for (auto& row : a) std::swap(row[c1], row[c2]);
    std::swap(perm[c1], perm[c2]);
  };

  for (std::size_t s = 0; s < r; ++s) {
    if (s >= g) throw Error(Errc::PrecisionExhausted, "more rows than columns: rows are dependent");
    int best = N;
    std::size_t bi = s, bj = s;
    for (std::size_t i = s; i < r; ++i)
      for (std::size_t j = s; j < g; ++j) {
        if (a[i][j] == 0) continue;
        int v = valuation(a[i][j], p);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (best == N)
      throw Error(Errc::PrecisionExhausted,
                  "remaining block vanishes modulo p^" + std::to_string(N) + " after " +
                      std::to_string(s) + " pivots");
    spent += best;
    if (spent >= N)
      throw Error(Errc::PrecisionExhausted, "pivot valuations use up all " + std::to_string(N) +
                                                " digits");
    std::swap(a[s], a[bi]);
    swap_cols(s, bj);
    pivot_val[s] = best;
    const mpz_class pv = mpz_pow(p, static_cast<unsigned>(best));
    mpz_class unit = a[s][s] / pv, inv;
    mpz_invert(inv.get_mpz_t(), unit.get_mpz_t(), mod.get_mpz_t());
    for (std::size_t i = s + 1; i < r; ++i) {
      if (a[i][s] == 0) continue;
      mpz_class f = (a[i][s] / pv) * inv % mod;
      for (std::size_t j = s; j < g; ++j) {
        a[i][j] = (a[i][j] - f * a[s][j]) % mod;
        if (a[i][j] < 0) a[i][j] += mod;
      }
    }
  }

  out.rank = r;
  out.certified_precision = N - spent;
  for (std::size_t free = r; free < g; ++free) {
    std::vector<mpz_class> x(g, 0);
    x[free] = 1;
    for (std::size_t i = r; i-- > 0;) {
      mpz_class sum = 0;
      for (std::size_t k = i + 1; k < g; ++k) sum += a[i][k] * x[k];
      sum %= mod;
      const mpz_class pv = mpz_pow(p, static_cast<unsigned>(pivot_val[i]));
      if (sum % pv != 0) throw std::logic_error("back substitution lost integrality");
      mpz_class unit = a[i][i] / pv, inv;
      mpz_invert(inv.get_mpz_t(), unit.get_mpz_t(), mod.get_mpz_t());
      x[i] = (-(sum / pv) * inv) % mod;
      if (x[i] < 0) x[i] += mod;
    }
    std::vector<mpz_class> y(g);
    for (std::size_t k = 0; k < g; ++k) y[perm[k]] = x[k];
    std::vector<PadicNumber> vec;
    for (const auto& v : y) vec.emplace_back(m.p, v, out.certified_precision);
    out.basis.push_back(std::move(vec));
  }
  return out;
}

namespace {

struct DiscSearch {
  const PadicSeries& series;
  i64 p;
  int cap;
  std::vector<DiscRoot>& out;

  i64 roots_in(const mpz_class& c, int r) const {
    RootCount rc = count_roots_near(series, c, Rational(r));
    return rc.count + rc.zero_root_multiplicity;
  }

  void report(const mpz_class& c, int r, i64 total) const {
    DiscRoot root{PadicNumber(Prime(p), c, r), total, total == 1, total > 1, false};
    if (root.simple) certify(root);
    out.push_back(std::move(root));
  }

  // Hensel criterion on the stored polynomial, allowing for coefficient error.
  void certify(DiscRoot& root) const {
    if (series.tail() != TailModel::Exact || series.scale() != 0) return;
    std::vector<mpz_class> poly;
    int N = std::numeric_limits<int>::max();
    for (const auto& c : series.coefficients()) {
      poly.push_back(c.residue());
      N = std::min(N, c.precision());
    }
    const mpz_class& a = root.root.residue();
    const mpz_class fa = evaluate(poly, a);
    const mpz_class da = evaluate(derivative(poly), a);
    if (da == 0) return;
    const int delta = valuation(da, p);
    const int vf = fa == 0 ? N : std::min(N, valuation(fa, p));
    if (delta >= N || vf <= 2 * delta) return;
    root.root = hensel_simple_root(poly, root.root);
    root.hensel_certified = true;
  }

  void explore(mpz_class c, int r, i64 total) const {
    while (true) {
      if (r >= cap) return report(c, r, total);
      const mpz_class step = mpz_pow(p, static_cast<unsigned>(r));
      std::vector<std::pair<mpz_class, i64>> kids;
      i64 sum = 0;
      try {
        for (i64 j = 0; j < p; ++j) {
          mpz_class cj = c + step * static_cast<long>(j);
          i64 t = roots_in(cj, r + 1);
          if (t > 0) kids.emplace_back(cj, t);
          sum += t;
        }
      } catch (const Error&) {
        return report(c, r, total);
      }
      if (sum != total) return report(c, r, total);
      if (kids.size() == 1) {
        c = kids[0].first;
        ++r;
        continue;
      }
      for (const auto& [cj, t] : kids) explore(cj, r + 1, t);
      return;
    }
  }
};

// Order in t of h(x0 + t).
int order_at(const QPoly& h, const mpq_class& x0) { return root_multiplicity(h, x0); }

void require_curve(const QPoly& f) {
  if (f.degree() < 1) throw Error(Errc::InvalidArgument, "f must have positive degree");
  if (!is_squarefree(f)) throw Error(Errc::NonSquarefree, "f = " + f.to_string() + " is not squarefree");
}

}  // namespace

DiscZeros disc_zeros(const PadicSeries& series, int n_min) {
  if (n_min < 1) throw Error(Errc::InvalidArgument, "n_min must be at least 1");
  DiscZeros result;
  RootCount rc = count_roots_with_valuation_ge(series, Rational(n_min));
  result.total = rc.count + rc.zero_root_multiplicity;
  if (result.total == 0) return result;
  int cap = 0;
  for (const auto& c : series.coefficients()) cap = std::max(cap, c.precision());
  cap = std::max(cap, n_min);
  DiscSearch search{series, series.prime().value(), cap, result.roots};
  search.explore(0, n_min, result.total);
  return result;
}

int hyperelliptic_genus(const QPoly& f) { return (f.degree() - 1) / 2; }

FiberOrder fiber_vanishing_order(const QPoly& f, const QPoly& g, const mpq_class& x0) {
  require_curve(f);
  if (g.is_zero()) throw Error(Errc::InvalidArgument, "the zero differential has no order");
  const int k = order_at(g, x0);
  // At a Weierstrass point y is the parameter, x - x0 has order 2 and dx/y = 2 dy / f'(x).
  if (f(x0) == 0) return FiberOrder{2 * k, 1};
  return FiberOrder{k, 2};
}

FiberOrder infinity_vanishing_order(const QPoly& f, const QPoly& g) {
  require_curve(f);
  if (g.is_zero()) throw Error(Errc::InvalidArgument, "the zero differential has no order");
  const int d = f.degree();
  // Parameter s with x = s^-e: e = 2 for odd degree (one point), e = 1 for
  // even degree (two points). y = s^-(d e / 2) * unit, dx = -e s^-(e+1) ds.
  const int e = d % 2 ? 2 : 1;
  int ord_g = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < g.coefficients().size(); ++i)
    if (g.coefficient(i) != 0) ord_g = std::min(ord_g, -e * static_cast<int>(i));
  const int ord_dx = -(e + 1);
  const int ord_y = -(d * e) / 2;
  return FiberOrder{ord_g + ord_dx - ord_y, d % 2 ? 1 : 2};
}

int differential_vanishing_order(const QPoly& f, const QPoly& g, const Place& place) {
  require_curve(f);
  if (const auto* pt = std::get_if<AffinePlace>(&place)) {
    if (pt->y * pt->y != f(pt->x))
      throw Error(Errc::PointNotOnCurve, "(" + pt->x.get_str() + ", " + pt->y.get_str() +
                                             ") is not on y^2 = " + f.to_string());
    return fiber_vanishing_order(f, g, pt->x).order;
  }
  const auto& inf = std::get<InfinitePlace>(place);
  const int count = f.degree() % 2 ? 1 : 2;
  if (inf.branch < 0 || inf.branch >= count)
    throw Error(Errc::InvalidArgument, "no point at infinity with index " + std::to_string(inf.branch));
  return infinity_vanishing_order(f, g).order;
}

int total_vanishing_order(const QPoly& f, const QPoly& g) {
  require_curve(f);
  if (g.is_zero()) throw Error(Errc::InvalidArgument, "the zero differential has no divisor");
  int total = 0;
  const auto parts = squarefree_decomposition(g);
  for (std::size_t idx = 0; idx < parts.size(); ++idx) {
    const int k = static_cast<int>(idx) + 1;
    const QPoly& a = parts[idx];
    if (a.degree() <= 0) continue;
    const int weier = gcd(a, f).degree();
    total += weier * 2 * k;                  // one point, order 2k
    total += (a.degree() - weier) * 2 * k;   // two points, order k
  }
  const FiberOrder inf = infinity_vanishing_order(f, g);
  return total + inf.points * inf.order;
}

double naive_height(const std::vector<mpq_class>& coordinates) {
  mpz_class lcm = 1;
  for (const auto& q : coordinates) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
  std::vector<mpz_class> ints;
  mpz_class g = 0;
  for (const auto& q : coordinates) {
    mpz_class v = q.get_num() * (lcm / q.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    ints.push_back(v);
  }
  if (g == 0) throw Error(Errc::ZeroVector, "all coordinates are zero");
  mpz_class best = 0;
  for (auto& v : ints) {
    mpz_class a = abs(v) / g;
    if (a > best) best = a;
  }
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, best.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

double height_of_multiple(u64 m, double hP0, std::optional<double> hTheta, double hF,
                          const BoundConstants& c) {
  const double md = static_cast<double>(m);
  const double theta = hTheta ? *hTheta : c.c12 * hF + c.c13;
  return md * md * hP0 + c.c10 * theta + c.c11;
}

double proximity_bound(const BoundParams& params, const BoundConstants& c) {
  for (double v : {params.h_x, params.h0, params.m_p, params.kappa, c.c0, c.c1, c.c2, c.c3})
    if (!(v >= 0)) throw Error(Errc::DomainError, "bound inputs must be nonnegative");
  if (!(c.cL > 0)) throw Error(Errc::DomainError, "c_L must be positive");
  const int e = params.exponent.value_or(params.n);
  if (e < 0) throw Error(Errc::DomainError, "exponent must be nonnegative");
  const double h0 = std::max(params.h0, std::log(3.0));
  const double kappa = std::max(params.kappa, 1.0);
  const double first = params.h_x + c.c1 * kappa;
  const double second = params.m_p * h0 + c.c2;
  if (!(first > 0) || !(second > 0))
    throw Error(Errc::DomainError, "log argument is not positive");
  const double logs = std::log(first) + std::log(second) + c.c3;
  return c.c0 * c.cL * first * std::pow(second, e) * std::pow(logs, e + 3);
}

double fp_lower_bound(double b, double h, int n, u64 p, const BoundConstants& c) {
  if (n < 0) throw Error(Errc::DomainError, "n must be nonnegative");
  if (p < 2) throw Error(Errc::DomainError, "p must be a prime");
  const double bb = std::max(b, std::log(3.0));
  const double hh = std::max(h, std::log(3.0));
  return -c.c4 * std::pow(c.omegaL, n + 3) * bb * std::pow(hh, n) *
         std::pow(std::log(bb) + std::log(hh), n + 3) * std::log(static_cast<double>(p));
}

}  // namespace cctk
