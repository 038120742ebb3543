#include "cctk/elliptic.hpp"

#include <stdexcept>
#include <string>

#include "cctk/error.hpp"

namespace cctk {

namespace {

bool p_integral(const mpq_class& q, i64 p) {
  return mpz_divisible_ui_p(q.get_den_mpz_t(), static_cast<unsigned long>(p)) == 0;
}

mpz_class mpq_mod(const mpq_class& q, const mpz_class& m) {
  mpz_class den = q.get_den() % m;
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0)
    throw Error(Errc::NonUnitDenominator, "denominator not invertible");
  mpz_class r = (q.get_num() * inv) % m;
  if (r < 0) r += m;
  return r;
}

struct Ring {
  u64 m;
  u64 add(u64 a, u64 b) const noexcept {
    u64 s = a + b;
    return s >= m ? s - m : s;
  }
  u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + (m - b); }
  u64 mul(u64 a, u64 b) const noexcept { return mul_mod(a, b, m); }
};

using Poly = std::vector<mpq_class>;

Poly mul_trunc(const Poly& a, const Poly& b, std::size_t n) {
  Poly c(n, 0);
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size() && i + j < n; ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

}  // namespace

EllipticCurveQ::EllipticCurveQ(mpq_class a1, mpq_class a2, mpq_class a3, mpq_class a4,
                               mpq_class a6)
    : a_{a1, a2, a3, a4, a6} {
  b2_ = a1 * a1 + 4 * a2;
  b4_ = 2 * a4 + a1 * a3;
  b6_ = a3 * a3 + 4 * a6;
  b8_ = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  c4_ = b2_ * b2_ - 24 * b4_;
  c6_ = -b2_ * b2_ * b2_ + 36 * b2_ * b4_ - 216 * b6_;
  disc_ = -b2_ * b2_ * b8_ - 8 * b4_ * b4_ * b4_ - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;
  if (disc_ == 0) throw Error(Errc::InvalidArgument, "singular curve (discriminant 0)");
}

EllipticCurveQ EllipticCurveQ::parse(std::string_view text) {
  std::vector<mpq_class> vals;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    vals.push_back(parse_rational(text.substr(start, comma == std::string_view::npos
                                                         ? std::string_view::npos
                                                         : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (vals.size() != 5)
    throw Error(Errc::InvalidArgument, "curve needs five coefficients a1,a2,a3,a4,a6");
  return EllipticCurveQ(vals[0], vals[1], vals[2], vals[3], vals[4]);
}

std::pair<mpq_class, mpq_class> EllipticCurveQ::short_coefficients() const {
  return {mpq_class(-27 * c4_), mpq_class(-54 * c6_)};
}

std::pair<mpq_class, mpq_class> EllipticCurveQ::to_short(const mpq_class& x,
                                                         const mpq_class& y) const {
  return {mpq_class(36 * x + 3 * b2_), mpq_class(108 * (2 * y + a_[0] * x + a_[2]))};
}

bool EllipticCurveQ::contains(const mpq_class& x, const mpq_class& y) const {
  mpq_class lhs = y * y + a_[0] * x * y + a_[2] * y;
  mpq_class rhs = x * x * x + a_[1] * x * x + a_[3] * x + a_[4];
  return lhs == rhs;
}

Reduction reduction_type(const EllipticCurveQ& curve, i64 p) {
  if (p < 5) throw Error(Errc::SmallPrime, "p = " + std::to_string(p) + " is below 5");
  Prime prime(p);
  for (const auto& a : curve.coefficients())
    if (!p_integral(a, prime.value())) return Reduction::Bad;
  return valuation(curve.discriminant().get_num(), p) == 0 ? Reduction::Good : Reduction::Bad;
}

u64 count_points(const EllipticCurveQ& curve, Prime p) {
  if (reduction_type(curve, p.value()) != Reduction::Good)
    throw Error(Errc::BadReduction, "bad reduction at " + std::to_string(p.value()));
  const u64 q = static_cast<u64>(p.value());
  auto [Aq, Bq] = curve.short_coefficients();
  const u64 A = rational_mod(Aq, q);
  const u64 B = rational_mod(Bq, q);

  std::vector<signed char> chi(q, -1);
  chi[0] = 0;
  for (u64 i = 1; i <= q / 2; ++i) chi[mul_mod(i, i, q)] = 1;

  i64 sum = 0;
  for (u64 x = 0; x < q; ++x) {
    u64 rhs = (mul_mod(mul_mod(x, x, q), x, q) + mul_mod(A, x, q) + B) % q;
    sum += chi[rhs];
  }
  return static_cast<u64>(static_cast<i64>(q) + 1 + sum);
}

CurveModPk::CurveModPk(u64 A, u64 B, Prime p, unsigned k) : p_(p), k_(k), m_(1), A_(0), B_(0) {
  if (p.value() < 5) throw Error(Errc::SmallPrime, "p must be at least 5");
  if (k < 1) throw Error(Errc::InvalidArgument, "exponent must be positive");
  const u64 q = static_cast<u64>(p.value());
  for (unsigned i = 0; i < k; ++i) {
    u128 next = static_cast<u128>(m_) * q;
    if (next >= (static_cast<u128>(1) << 62))
      throw Error(Errc::InvalidArgument, "p^k exceeds 2^62");
    m_ = static_cast<u64>(next);
  }
  A_ = A % m_;
  B_ = B % m_;
  u64 a = A_ % q, b = B_ % q;
  u64 d = (4 * mul_mod(mul_mod(a, a, q), a, q) + 27 * mul_mod(b, b, q)) % q;
  if (d == 0) throw Error(Errc::BadReduction, "singular reduction");
  find_helpers();
}

CurveModPk::CurveModPk(const EllipticCurveQ& curve, Prime p, unsigned k) : CurveModPk(0, 1, p, 1) {
  if (reduction_type(curve, p.value()) != Reduction::Good)
    throw Error(Errc::BadReduction, "bad reduction at " + std::to_string(p.value()));
  auto [Aq, Bq] = curve.short_coefficients();
  CurveModPk tmp(0, 1, p, k);
  *this = CurveModPk(rational_mod(Aq, tmp.modulus()), rational_mod(Bq, tmp.modulus()), p, k);
}

void CurveModPk::find_helpers() {
  const u64 q = static_cast<u64>(p_.value());
  Ring R{m_};
  helpers_.clear();
  for (u64 x = 0; x < q && helpers_.size() < 12; ++x) {
    u64 rhs = R.add(R.add(R.mul(R.mul(x, x), x), R.mul(A_, x)), B_);
    if (rhs % q == 0 || legendre(static_cast<i64>(rhs % q), p_.value()) != 1) continue;
    u64 y = sqrt_mod_prime(rhs % q, q);
    for (unsigned i = 0; i < k_; ++i) {
      u64 f = R.sub(R.mul(y, y), rhs);
      y = R.sub(y, R.mul(f, inv_mod(R.add(y, y), m_)));
    }
    helpers_.push_back(CurvePoint{x, y, 1});
  }
}

CurvePoint CurveModPk::affine(u64 x, u64 y) const {
  CurvePoint P{x % m_, y % m_, 1};
  if (!on_curve(P)) throw Error(Errc::PointNotOnCurve, "point is not on the curve modulo p^k");
  return P;
}

CurvePoint CurveModPk::reduce(const mpq_class& x, const mpq_class& y) const {
  u64 xr, yr;
  try {
    xr = rational_mod(x, m_);
    yr = rational_mod(y, m_);
  } catch (const Error&) {
    throw Error(Errc::NonIntegralPoint, "point is not p-integral at " + std::to_string(p_.value()));
  }
  return affine(xr, yr);
}

bool CurveModPk::on_curve(const CurvePoint& P) const noexcept {
  Ring R{m_};
  u64 lhs = R.mul(R.mul(P.Y, P.Y), P.Z);
  u64 z2 = R.mul(P.Z, P.Z);
  u64 rhs = R.add(R.add(R.mul(R.mul(P.X, P.X), P.X), R.mul(R.mul(A_, P.X), z2)),
                  R.mul(B_, R.mul(z2, P.Z)));
  return lhs == rhs && has_unit(P);
}

bool CurveModPk::has_unit(const CurvePoint& P) const noexcept {
  const u64 q = static_cast<u64>(p_.value());
  return P.X % q != 0 || P.Y % q != 0 || P.Z % q != 0;
}

CurvePoint CurveModPk::normalize(const CurvePoint& P) const {
  const u64 q = static_cast<u64>(p_.value());
  Ring R{m_};
  if (P.Z % q != 0) {
    u64 inv = inv_mod(P.Z, m_);
    return CurvePoint{R.mul(P.X, inv), R.mul(P.Y, inv), 1};
  }
  if (P.Y % q == 0) throw std::logic_error("projective point with no unit coordinate");
  u64 inv = inv_mod(P.Y, m_);
  return CurvePoint{R.mul(P.X, inv), 1, R.mul(P.Z, inv)};
}

bool CurveModPk::is_identity(const CurvePoint& P) const {
  CurvePoint N = normalize(P);
  return N.Z == 0 && N.X == 0;
}

bool CurveModPk::in_kernel(const CurvePoint& P) const {
  return P.Z % static_cast<u64>(p_.value()) == 0;
}

u64 CurveModPk::kernel_parameter(const CurvePoint& P) const {
  if (!in_kernel(P)) throw Error(Errc::InvalidArgument, "point is not in the kernel of reduction");
  CurvePoint N = normalize(P);
  return N.X == 0 ? 0 : m_ - N.X;
}

CurvePoint CurveModPk::negate(const CurvePoint& P) const {
  return CurvePoint{P.X, P.Y == 0 ? 0 : m_ - P.Y, P.Z};
}

bool CurveModPk::add_direct(const CurvePoint& P0, const CurvePoint& Q0, CurvePoint& out) const {
  const CurvePoint P = normalize(P0);
  const CurvePoint Q = normalize(Q0);
  if (P.X == 0 && P.Z == 0) {
    out = Q;
    return true;
  }
  if (Q.X == 0 && Q.Z == 0) {
    out = P;
    return true;
  }
  Ring R{m_};
  const u64 a = A_;
  const u64 b3 = R.mul(3, B_);

  if (P == Q) {
    // Tangent doubling.
    u64 w = R.add(R.mul(a, R.mul(P.Z, P.Z)), R.mul(3, R.mul(P.X, P.X)));
    u64 s = R.mul(P.Y, P.Z);
    u64 Bv = R.mul(R.mul(P.X, P.Y), s);
    u64 h = R.sub(R.mul(w, w), R.mul(8, Bv));
    u64 s2 = R.mul(s, s);
    CurvePoint D{R.mul(R.mul(2, h), s),
                 R.sub(R.mul(w, R.sub(R.mul(4, Bv), h)), R.mul(8, R.mul(R.mul(P.Y, P.Y), s2))),
                 R.mul(8, R.mul(s2, s))};
    if (has_unit(D)) {
      out = D;
      return true;
    }
  } else {
    // Chord through two distinct points.
    u64 u = R.sub(R.mul(Q.Y, P.Z), R.mul(P.Y, Q.Z));
    u64 v = R.sub(R.mul(Q.X, P.Z), R.mul(P.X, Q.Z));
    u64 v2 = R.mul(v, v), v3 = R.mul(v2, v);
    u64 zz = R.mul(P.Z, Q.Z);
    u64 x1z2 = R.mul(P.X, Q.Z);
    u64 w = R.sub(R.sub(R.mul(R.mul(u, u), zz), v3), R.mul(2, R.mul(v2, x1z2)));
    CurvePoint C{R.mul(v, w), R.sub(R.mul(u, R.sub(R.mul(v2, x1z2), w)), R.mul(v3, R.mul(P.Y, Q.Z))),
                 R.mul(v3, zz)};
    if (has_unit(C)) {
      out = C;
      return true;
    }
  }

  // Complete projective addition law; exceptional only when P - Q is 2-torsion mod p.
  const u64 xx = R.mul(P.X, Q.X), yy = R.mul(P.Y, Q.Y), zz = R.mul(P.Z, Q.Z);
  const u64 xz = R.add(R.mul(P.X, Q.Z), R.mul(Q.X, P.Z));
  const u64 xy = R.add(R.mul(P.X, Q.Y), R.mul(Q.X, P.Y));
  const u64 yz = R.add(R.mul(P.Y, Q.Z), R.mul(Q.Y, P.Z));
  const u64 minus = R.sub(R.sub(yy, R.mul(a, xz)), R.mul(b3, zz));
  const u64 plus = R.add(R.add(yy, R.mul(a, xz)), R.mul(b3, zz));
  const u64 mid = R.sub(R.add(R.mul(a, xx), R.mul(b3, xz)), R.mul(R.mul(a, a), zz));
  const u64 tx = R.add(R.mul(3, xx), R.mul(a, zz));
  CurvePoint S{R.sub(R.mul(xy, minus), R.mul(yz, mid)), R.add(R.mul(tx, mid), R.mul(plus, minus)),
               R.add(R.mul(yz, plus), R.mul(xy, tx))};
  if (has_unit(S)) {
    out = S;
    return true;
  }
  return false;
}

CurvePoint CurveModPk::add(const CurvePoint& P, const CurvePoint& Q) const {
  CurvePoint out;
  if (add_direct(P, Q, out)) return normalize(out);
  // Route through a helper point: P + Q = ((P + T) + Q) - T.
  for (const auto& T : helpers_) {
    CurvePoint s1, s2, s3;
    if (add_direct(P, T, s1) && add_direct(s1, Q, s2) && add_direct(s2, negate(T), s3))
      return normalize(s3);
  }
  throw std::logic_error("no addition formula applies");
}

CurvePoint CurveModPk::multiply(const CurvePoint& P, u64 n) const {
  CurvePoint result = identity();
  CurvePoint base = normalize(P);
  while (n > 0) {
    if (n & 1) result = add(result, base);
    n >>= 1;
    if (n) base = add(base, base);
  }
  return result;
}

std::vector<CurvePoint> CurveModPk::enumerate_points() const {
  if (m_ > 20000) throw Error(Errc::InvalidArgument, "modulus too large to enumerate");
  Ring R{m_};
  const u64 q = static_cast<u64>(p_.value());
  std::vector<CurvePoint> pts;
  for (u64 x = 0; x < m_; ++x) {
    u64 rhs = R.add(R.add(R.mul(R.mul(x, x), x), R.mul(A_, x)), B_);
    for (u64 y = 0; y < m_; ++y)
      if (R.mul(y, y) == rhs) pts.push_back(CurvePoint{x, y, 1});
  }
  // Kernel of reduction: (X : 1 : W) with X in pZ/p^k and W = X^3 + A X W^2 + B W^3.
  for (u64 X = 0; X < m_; X += q) {
    u64 W = 0;
    for (unsigned i = 0; i <= k_; ++i) {
      u64 w2 = R.mul(W, W);
      W = R.add(R.add(R.mul(R.mul(X, X), X), R.mul(R.mul(A_, X), w2)), R.mul(B_, R.mul(w2, W)));
    }
    pts.push_back(CurvePoint{X, 1, W});
  }
  return pts;
}

u64 wieferich_element(const EllipticCurveQ& curve, const mpq_class& x, const mpq_class& y,
                      Prime p) {
  if (reduction_type(curve, p.value()) != Reduction::Good)
    throw Error(Errc::BadReduction, "bad reduction at " + std::to_string(p.value()));
  for (const auto& c : {x, y})
    if (!p_integral(c, p.value()))
      throw Error(Errc::NonIntegralPoint, "point is not p-integral at " + std::to_string(p.value()));
  const u64 np = count_points(curve, p);
  CurveModPk E2(curve, p, 2);
  auto [xs, ys] = curve.to_short(x, y);
  return wieferich_element(E2, E2.reduce(xs, ys), np);
}

u64 wieferich_element(const CurveModPk& curve_mod_p2, const CurvePoint& P, u64 np) {
  if (curve_mod_p2.exponent() != 2) throw Error(Errc::InvalidArgument, "curve must be taken mod p^2");
  const u64 q = static_cast<u64>(curve_mod_p2.prime().value());
  CurvePoint R = curve_mod_p2.multiply(P, np);
  if (!curve_mod_p2.in_kernel(R))
    throw Error(Errc::InvalidArgument, "n_p * P does not reduce to the identity");
  return (curve_mod_p2.kernel_parameter(R) / q) % q;
}

std::vector<mpq_class> invariant_differential(const mpq_class& A, const mpq_class& B,
                                              std::size_t terms) {
  const std::size_t n = terms + 3;
  // w(z) = z^3 + A z w^2 + B w^3; each pass fixes at least one more coefficient.
  Poly w(n, 0);
  for (std::size_t iter = 0; iter < n; ++iter) {
    Poly w2 = mul_trunc(w, w, n);
    Poly w3 = mul_trunc(w2, w, n);
    Poly next(n, 0);
    if (n > 3) next[3] = 1;
    for (std::size_t i = 0; i + 1 < n; ++i) next[i + 1] += A * w2[i];
    for (std::size_t i = 0; i < n; ++i) next[i] += B * w3[i];
    w = std::move(next);
  }
  // u = w / z^3, x = z^-2 / u, omega = -(dx/dz) w / 2.
  Poly u(terms, 0);
  for (std::size_t i = 0; i < terms; ++i) u[i] = w[i + 3];
  Poly inv(terms, 0);
  inv[0] = 1;
  for (std::size_t i = 1; i < terms; ++i) {
    mpq_class s = 0;
    for (std::size_t j = 1; j <= i; ++j) s += u[j] * inv[i - j];
    inv[i] = -s;
  }
  Poly dx(terms, 0);  // sum (j - 2) v_j z^j
  for (std::size_t j = 0; j < terms; ++j) dx[j] = mpq_class(static_cast<long>(j) - 2) * inv[j];
  Poly omega = mul_trunc(dx, u, terms);
  for (auto& c : omega) c = -c / 2;
  return omega;
}

PadicNumber formal_log(const mpq_class& A, const mpq_class& B, const PadicNumber& t, int k) {
  const Prime p = t.prime();
  const i64 pv = p.value();
  if (pv < 5) throw Error(Errc::SmallPrime, "p must be at least 5");
  if (k < 1) throw Error(Errc::InvalidArgument, "target precision must be positive");
  if (k > t.precision())
    throw Error(Errc::PrecisionUnreachable, "t is known only modulo p^" +
                                                std::to_string(t.precision()));
  if (!p_integral(A, pv) || !p_integral(B, pv))
    throw Error(Errc::BadReduction, "short model is not p-integral");
  if (t.is_zero()) return PadicNumber(p, 0, k);
  const int v = t.valuation();
  if (v < 1) throw Error(Errc::InvalidArgument, "t must lie in pZ_p");

  // m v - floor(log_p m) is nondecreasing, so terms past the first m where it
  // reaches k vanish modulo p^k.
  std::size_t M = 1;
  while (static_cast<i64>(M + 1) * v - floor_log(M + 1, static_cast<u64>(pv)) < k) ++M;
  const auto omega = invariant_differential(A, B, M);

  mpq_class sum = 0;
  mpz_class power = 1;
  for (std::size_t m = 1; m <= M; ++m) {
    power *= t.residue();
    if (omega[m - 1] == 0) continue;
    if (static_cast<i64>(m) * v - valuation(static_cast<i64>(m), pv) >= k) continue;
    mpq_class term(power, mpz_class(static_cast<unsigned long>(m)));
    term.canonicalize();
    sum += omega[m - 1] * term;
  }
  return PadicNumber(p, mpq_mod(sum, mpz_pow(pv, static_cast<unsigned>(k))), k);
}

PadicNumber formal_log(const EllipticCurveQ& curve, const PadicNumber& t, int k) {
  auto [A, B] = curve.short_coefficients();
  return formal_log(A, B, t, k);
}

}  // namespace cctk
