#include "cctk/padic.hpp"

#include <algorithm>
#include <ostream>

#include "cctk/error.hpp"

namespace cctk {

namespace {

mpz_class mod_nonneg(const mpz_class& a, const mpz_class& m) {
  mpz_class r = a % m;
  if (r < 0) r += m;
  return r;
}

mpz_class unit_inverse(const mpz_class& u, const mpz_class& m) {
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t()) == 0)
    throw Error(Errc::InvalidArgument, "inverse of a non-unit");
  return inv;
}

void require_same_prime(const PadicNumber& a, const PadicNumber& b) {
  if (!(a.prime() == b.prime()))
    throw Error(Errc::PrimeMismatch, std::to_string(a.prime().value()) + " vs " +
                                         std::to_string(b.prime().value()));
}

}  // namespace

PadicNumber::PadicNumber(Prime p, const mpz_class& residue, int prec) : p_(p), prec_(prec) {
  if (prec < 1) throw Error(Errc::InvalidArgument, "precision must be at least 1");
  residue_ = mod_nonneg(residue, modulus());
  val_ = residue_ == 0 ? prec_ : cctk::valuation(residue_, p_.value());
}

PadicNumber PadicNumber::with_precision(int prec) const {
  if (prec > prec_) throw Error(Errc::PrecisionUnreachable, "cannot raise precision");
  return PadicNumber(p_, residue_, prec);
}

std::string PadicNumber::to_string() const {
  return residue_.get_str() + " mod " + std::to_string(p_.value()) + "^" + std::to_string(prec_);
}

bool operator==(const PadicNumber& a, const PadicNumber& b) {
  if (!(a.p_ == b.p_)) return false;
  mpz_class m = mpz_pow(a.p_.value(), static_cast<unsigned>(std::min(a.prec_, b.prec_)));
  return mod_nonneg(a.residue_ - b.residue_, m) == 0;
}

std::ostream& operator<<(std::ostream& os, const PadicNumber& x) { return os << x.to_string(); }

PadicNumber padic_from_rational(const mpz_class& numerator, const mpz_class& denominator, Prime p,
                                int prec) {
  if (denominator == 0) throw Error(Errc::InvalidArgument, "zero denominator");
  if (numerator == 0) return PadicNumber(p, 0, prec);
  const i64 pv = p.value();
  int vn = valuation(numerator, pv);
  int vd = valuation(denominator, pv);
  if (vn < vd)
    throw Error(Errc::NonUnitDenominator,
                numerator.get_str() + "/" + denominator.get_str() + " has negative valuation");
  mpz_class pz = p.mpz();
  mpz_class num = numerator, den = denominator;
  for (int i = 0; i < vd; ++i) {
    num /= pz;
    den /= pz;
  }
  mpz_class m = mpz_pow(pv, static_cast<unsigned>(prec));
  return PadicNumber(p, mod_nonneg(num, m) * unit_inverse(mod_nonneg(den, m), m), prec);
}

PadicNumber padic_from_rational(const mpz_class& numerator, const mpz_class& denominator, i64 p,
                                int prec) {
  return padic_from_rational(numerator, denominator, Prime(p), prec);
}

PadicNumber padic_from_rational(const mpq_class& q, Prime p, int prec) {
  return padic_from_rational(q.get_num(), q.get_den(), p, prec);
}

PadicNumber operator-(const PadicNumber& a) {
  return PadicNumber(a.prime(), -a.residue(), a.precision());
}

PadicNumber padic_arith(const PadicNumber& a, const PadicNumber& b, ArithOp op) {
  require_same_prime(a, b);
  const Prime p = a.prime();
  const int na = a.precision(), nb = b.precision();
  const int va = a.valuation(), vb = b.valuation();
  const int cap = std::max(na, nb);
  switch (op) {
    case ArithOp::Add:
      return PadicNumber(p, a.residue() + b.residue(), std::min(na, nb));
    case ArithOp::Sub:
      return PadicNumber(p, a.residue() - b.residue(), std::min(na, nb));
    case ArithOp::Mul: {
      int n = std::min({na + vb, nb + va, cap});
      return PadicNumber(p, a.residue() * b.residue(), n);
    }
    case ArithOp::Div: {
      if (b.is_zero())
        throw Error(Errc::DivisionByZeroAtPrecision, "divisor " + b.to_string());
      if (!a.is_zero() && va < vb)
        throw Error(Errc::NonUnitDenominator, "quotient would have negative valuation");
      int n = std::min({na - vb, nb + va - 2 * vb, cap});
      if (n < 1)
        throw Error(Errc::PrecisionExhausted, "quotient has no remaining precision");
      if (a.is_zero()) return PadicNumber(p, 0, n);
      mpz_class pv = mpz_pow(p.value(), static_cast<unsigned>(vb));
      mpz_class m = mpz_pow(p.value(), static_cast<unsigned>(n));
      mpz_class num = a.residue() / pv;
      mpz_class den = mod_nonneg(b.residue() / pv, m);
      return PadicNumber(p, num * unit_inverse(den, m), n);
    }
  }
  throw Error(Errc::InvalidArgument, "unknown arithmetic op");
}

PadicNumber padic_log_unit(const PadicNumber& u, int target_precision) {
  if (!u.is_unit()) throw Error(Errc::NonUnitInput, "log needs a unit, got " + u.to_string());
  if (target_precision < 1) throw Error(Errc::InvalidArgument, "precision must be at least 1");
  const i64 pv = u.prime().value();
  const int n = std::min(target_precision, u.precision());

  // Terms x^k/k with k >= m have valuation >= k - floor(log_p k) >= n.
  u64 m = 1;
  while (static_cast<i64>(m) - floor_log(m, static_cast<u64>(pv)) < n) ++m;
  const int extra = m > 1 ? floor_log(m - 1, static_cast<u64>(pv)) : 0;

  const mpz_class work = mpz_pow(pv, static_cast<unsigned>(n + extra));
  const mpz_class target = mpz_pow(pv, static_cast<unsigned>(n));
  mpz_class x;
  mpz_powm_ui(x.get_mpz_t(), u.residue().get_mpz_t(), static_cast<unsigned long>(pv - 1),
              work.get_mpz_t());
  x = mod_nonneg(x - 1, work);

  mpz_class sum = 0;
  mpz_class power = 1;
  for (u64 k = 1; k < m; ++k) {
    power = (power * x) % work;
    int vk = valuation(static_cast<i64>(k), pv);
    mpz_class term = power / mpz_pow(pv, static_cast<unsigned>(vk));
    i64 unit = static_cast<i64>(k);
    for (int i = 0; i < vk; ++i) unit /= pv;
    term = term * unit_inverse(mpz_class(static_cast<long>(unit)), target);
    if (k % 2 == 0)
      sum -= term;
    else
      sum += term;
  }
  sum = mod_nonneg(sum, target);
  sum = sum * unit_inverse(mpz_class(static_cast<long>(pv - 1)), target);
  return PadicNumber(u.prime(), sum, n);
}

PadicSeries::PadicSeries(Prime p, std::vector<PadicNumber> coefficients, int scale,
                         TailModel tail)
    : p_(p), coeffs_(std::move(coefficients)), scale_(scale), tail_(tail) {
  if (scale < 0) throw Error(Errc::InvalidArgument, "series scale must be nonnegative");
  for (const auto& c : coeffs_)
    if (!(c.prime() == p_)) throw Error(Errc::PrimeMismatch, "series coefficient prime");
}

PadicSeries PadicSeries::from_integers(Prime p, const std::vector<mpz_class>& coefficients,
                                       int prec, TailModel tail) {
  std::vector<PadicNumber> cs;
  cs.reserve(coefficients.size());
  for (const auto& c : coefficients) cs.emplace_back(p, c, prec);
  return PadicSeries(p, std::move(cs), 0, tail);
}

}  // namespace cctk
