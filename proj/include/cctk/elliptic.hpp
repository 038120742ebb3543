#pragma once
// Elliptic curves over Q, their reductions modulo p^k for p >= 5, and the
// mod-p logarithm n_p * P / p of a rational point.

#include <array>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "cctk/arith.hpp"
#include "cctk/padic.hpp"

namespace cctk {

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with rational coefficients.
class EllipticCurveQ {
public:
  EllipticCurveQ(mpq_class a1, mpq_class a2, mpq_class a3, mpq_class a4, mpq_class a6);
  /// "a1,a2,a3,a4,a6", each an integer or n/d.
  static EllipticCurveQ parse(std::string_view text);

  const std::array<mpq_class, 5>& coefficients() const noexcept { return a_; }
  const mpq_class& discriminant() const noexcept { return disc_; }
  const mpq_class& b2() const noexcept { return b2_; }
  const mpq_class& c4() const noexcept { return c4_; }
  const mpq_class& c6() const noexcept { return c6_; }

  /// (A, B) of the short model Y^2 = X^3 + A X + B, A = -27 c4, B = -54 c6.
  std::pair<mpq_class, mpq_class> short_coefficients() const;
  /// (x, y) -> (36x + 3 b2, 108 (2y + a1 x + a3)).
  std::pair<mpq_class, mpq_class> to_short(const mpq_class& x, const mpq_class& y) const;
  bool contains(const mpq_class& x, const mpq_class& y) const;

private:
  std::array<mpq_class, 5> a_;
  mpq_class b2_, b4_, b6_, b8_, c4_, c6_, disc_;
};

enum class Reduction { Good, Bad };

/// Good iff every a_i is p-integral and v_p(discriminant) = 0. Throws
/// SmallPrime for p < 5.
Reduction reduction_type(const EllipticCurveQ& curve, i64 p);

/// n_p = p + 1 + sum_x (x^3 + Ax + B / p). Throws BadReduction.
u64 count_points(const EllipticCurveQ& curve, Prime p);

/// Projective point over Z/p^k. Either (x : y : 1) or (X : 1 : W) with X, W
/// divisible by p once normalised; the identity is (0 : 1 : 0).
struct CurvePoint {
  u64 X = 0;
  u64 Y = 1;
  u64 Z = 0;
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// Short model y^2 = x^3 + A x + B over Z/p^k with p^k < 2^62.
class CurveModPk {
public:
  CurveModPk(u64 A, u64 B, Prime p, unsigned k);
  /// Reduces the short model of curve; throws BadReduction.
  CurveModPk(const EllipticCurveQ& curve, Prime p, unsigned k);

  Prime prime() const noexcept { return p_; }
  unsigned exponent() const noexcept { return k_; }
  u64 modulus() const noexcept { return m_; }
  u64 A() const noexcept { return A_; }
  u64 B() const noexcept { return B_; }

  CurvePoint identity() const noexcept { return CurvePoint{0, 1, 0}; }
  /// Throws PointNotOnCurve.
  CurvePoint affine(u64 x, u64 y) const;
  /// Point of the short model given by rational coordinates; throws
  /// NonIntegralPoint or PointNotOnCurve.
  CurvePoint reduce(const mpq_class& x, const mpq_class& y) const;

  bool on_curve(const CurvePoint& P) const noexcept;
  /// Canonical representative: Z = 1 when Z is a unit, otherwise Y = 1.
  CurvePoint normalize(const CurvePoint& P) const;
  bool is_identity(const CurvePoint& P) const;
  /// True when P reduces to the identity modulo p.
  bool in_kernel(const CurvePoint& P) const;
  /// t = -X/Y of a point in the kernel of reduction.
  u64 kernel_parameter(const CurvePoint& P) const;

  CurvePoint negate(const CurvePoint& P) const;
  CurvePoint add(const CurvePoint& P, const CurvePoint& Q) const;
  CurvePoint multiply(const CurvePoint& P, u64 n) const;

  /// Every point of E(Z/p^k) by brute force. Small p^k only.
  std::vector<CurvePoint> enumerate_points() const;

private:
  bool add_direct(const CurvePoint& P, const CurvePoint& Q, CurvePoint& out) const;
  bool has_unit(const CurvePoint& P) const noexcept;
  void find_helpers();

  Prime p_;
  unsigned k_;
  u64 m_;
  u64 A_, B_;
  std::vector<CurvePoint> helpers_;
};

/// p W_P(p): the kernel parameter of n_p * P in E(Z/p^2), divided by p.
/// Throws BadReduction, NonIntegralPoint, SmallPrime.
u64 wieferich_element(const EllipticCurveQ& curve, const mpq_class& x, const mpq_class& y,
                      Prime p);
/// Same, for a point already on the curve modulo p^2 and a known n_p.
u64 wieferich_element(const CurveModPk& curve_mod_p2, const CurvePoint& P, u64 np);

/// Formal-group logarithm of the short model y^2 = x^3 + A x + B at t in pZ_p,
/// to precision k. Throws PrecisionUnreachable when k > t.precision().
PadicNumber formal_log(const mpq_class& A, const mpq_class& B, const PadicNumber& t, int k);
PadicNumber formal_log(const EllipticCurveQ& curve, const PadicNumber& t, int k);

/// Coefficients w_0, w_1, ... of the invariant differential (sum w_i z^i) dz
/// of the short model, in the parameter z = -x/y.
std::vector<mpq_class> invariant_differential(const mpq_class& A, const mpq_class& B,
                                              std::size_t terms);

}  // namespace cctk
