#pragma once
// Vanishing differentials from logarithm data, zeros of a power series on a
// residue disc, vanishing orders of hyperelliptic differentials, heights and
// the proximity bound template.

#include <optional>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "cctk/newton.hpp"
#include "cctk/padic.hpp"
#include "cctk/qpoly.hpp"

namespace cctk {

/// r logarithm vectors of length g, all entries in Z_p.
struct LogMatrix {
  Prime p;
  int precision;
  std::size_t g;
  std::vector<std::vector<PadicNumber>> rows;

  static LogMatrix from_integers(Prime p, int precision, std::size_t g,
                                 const std::vector<std::vector<mpz_class>>& rows);
};

struct VanishingSpace {
  std::vector<std::vector<PadicNumber>> basis;  ///< integral, one free coordinate equal to 1
  int certified_precision = 0;
  std::size_t rank = 0;
};

/// Kernel of the log matrix by elimination with minimal-valuation pivots.
/// Throws PrecisionExhausted when the remaining block is zero at the working
/// precision, DimensionMismatch on ragged rows.
VanishingSpace vanishing_differentials(const LogMatrix& m);

struct DiscRoot {
  PadicNumber root;          ///< center of the isolating disc, known to its precision
  i64 multiplicity = 0;      ///< number of roots (with multiplicity) in the disc
  bool simple = false;
  bool repeated = false;     ///< a cluster that precision cannot separate
  bool hensel_certified = false;
};

struct DiscZeros {
  i64 total = 0;  ///< roots with valuation >= n_min, with multiplicity
  std::vector<DiscRoot> roots;
};

/// Zeros of F with v(t) >= n_min, isolated by disc subdivision.
DiscZeros disc_zeros(const PadicSeries& series, int n_min = 1);

struct AffinePlace {
  mpq_class x, y;
};
struct InfinitePlace {
  int branch = 0;  ///< 0 or 1 when deg f is even
};
using Place = std::variant<AffinePlace, InfinitePlace>;

/// Order of g(x) dx/y at a place of y^2 = f(x). Throws NonSquarefree,
/// PointNotOnCurve.
int differential_vanishing_order(const QPoly& f, const QPoly& g, const Place& place);

/// Order of g(x) dx/y at each point above x = x0 (the same at both points when
/// f(x0) != 0, even if y is irrational), and how many points lie there.
struct FiberOrder {
  int order = 0;
  int points = 0;
};
FiberOrder fiber_vanishing_order(const QPoly& f, const QPoly& g, const mpq_class& x0);

/// Order at each point at infinity and the number of such points.
FiberOrder infinity_vanishing_order(const QPoly& f, const QPoly& g);

/// Degree of the divisor of g(x) dx/y over Q-bar, summed from the squarefree
/// decomposition of g.
int total_vanishing_order(const QPoly& f, const QPoly& g);

int hyperelliptic_genus(const QPoly& f);

/// Logarithmic height of a point of projective space given by rational
/// coordinates. Throws ZeroVector.
double naive_height(const std::vector<mpq_class>& coordinates);

struct BoundConstants {
  double c0 = 1, c1 = 1, c2 = 1, c3 = 1, cL = 1;
  double c4 = 1, omegaL = 1;
  double c10 = 1, c11 = 1, c12 = 1, c13 = 1;
};

/// m^2 hP0 + c10 * hTheta + c11, with hTheta = c12 hF + c13 when unknown.
double height_of_multiple(u64 m, double hP0, std::optional<double> hTheta, double hF,
                          const BoundConstants& c = {});

struct BoundParams {
  int g = 2;
  int n = 1;
  double h_x = 0;
  double h0 = 0;   ///< floored at log 3
  double m_p = 0;
  double kappa = 1;  ///< floored at 1
  std::optional<int> exponent;  ///< defaults to n
};

/// c0 cL (h_x + c1 kappa)(m_p h0 + c2)^e (log(h_x + c1 kappa) + log(m_p h0 + c2) + c3)^(e+3).
/// Throws DomainError on negative inputs or a nonpositive log argument.
double proximity_bound(const BoundParams& params, const BoundConstants& c = {});

/// -c4 omegaL^(n+3) b h^n (log b + log h)^(n+3) log p, with b and h floored at log 3.
double fp_lower_bound(double b, double h, int n, u64 p, const BoundConstants& c = {});

}  // namespace cctk
