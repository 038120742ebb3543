#pragma once

// Fixed absolute-precision arithmetic in Z_p (p odd).
//
// A PadicNumber is a residue class modulo p^N. Results of arithmetic carry
// the precision that the inputs actually justify, and a value congruent to 0
// modulo p^N is kept distinct from an exact zero: its valuation is only
// known to be at least N.

#include <iosfwd>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cctk/arith.hpp"

namespace cctk {

class PadicNumber {
public:
  /// Reduces residue modulo p^prec; prec must be >= 1.
  PadicNumber(Prime p, const mpz_class& residue, int prec);

  Prime prime() const noexcept { return p_; }
  const mpz_class& residue() const noexcept { return residue_; }
  int precision() const noexcept { return prec_; }

  /// True when the value is indistinguishable from zero at its precision.
  bool is_zero() const noexcept { return residue_ == 0; }
  /// Exact valuation, or the precision when is_zero() (meaning "at least").
  int valuation() const noexcept { return val_; }
  bool is_unit() const noexcept { return val_ == 0; }

  mpz_class modulus() const { return mpz_pow(p_.value(), static_cast<unsigned>(prec_)); }

  /// Same element known to a lower precision.
  PadicNumber with_precision(int prec) const;

  /// "r mod p^N" style rendering used in diagnostics.
  std::string to_string() const;

  /// Residues agree modulo p^min(N1, N2).
  friend bool operator==(const PadicNumber& a, const PadicNumber& b);

private:
  Prime p_;
  mpz_class residue_;
  int prec_;
  int val_;
};

std::ostream& operator<<(std::ostream& os, const PadicNumber& x);

PadicNumber padic_from_rational(const mpz_class& numerator, const mpz_class& denominator, Prime p,
                                int prec);
PadicNumber padic_from_rational(const mpz_class& numerator, const mpz_class& denominator, i64 p,
                                int prec);
PadicNumber padic_from_rational(const mpq_class& q, Prime p, int prec);

enum class ArithOp { Add, Sub, Mul, Div };

/// Precision rules (capped at the larger input precision):
///   add/sub: min(Na, Nb)
///   mul:     min(Na + v(b), Nb + v(a))
///   div:     min(Na - v(b), Nb + v(a) - 2 v(b))
PadicNumber padic_arith(const PadicNumber& a, const PadicNumber& b, ArithOp op);

inline PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
  return padic_arith(a, b, ArithOp::Add);
}
inline PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) {
  return padic_arith(a, b, ArithOp::Sub);
}
inline PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
  return padic_arith(a, b, ArithOp::Mul);
}
inline PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) {
  return padic_arith(a, b, ArithOp::Div);
}

PadicNumber operator-(const PadicNumber& a);

/// log(u) = log(u^(p-1)) / (p-1) for a unit u. The result precision is
/// min(target_precision, u.precision()).
PadicNumber padic_log_unit(const PadicNumber& u, int target_precision);

/// How coefficients beyond the stored ones are bounded.
enum class TailModel {
  Exact,               ///< a polynomial: absent coefficients are exactly zero
  Integral,            ///< v(a_j) >= 0 for every unstored j
  IntegralDerivative,  ///< v(a_j) >= -v_p(j), i.e. dF/dt has integral coefficients
};

/// F = p^(-scale) * sum_i c_i t^i with every c_i in Z_p. The scale lets an
/// antiderivative of an integral series keep its denominators.
class PadicSeries {
public:
  PadicSeries(Prime p, std::vector<PadicNumber> coefficients, int scale = 0,
              TailModel tail = TailModel::Exact);

  /// Integer coefficients, each known modulo p^prec.
  static PadicSeries from_integers(Prime p, const std::vector<mpz_class>& coefficients, int prec,
                                   TailModel tail = TailModel::Exact);

  Prime prime() const noexcept { return p_; }
  const std::vector<PadicNumber>& coefficients() const noexcept { return coeffs_; }
  const PadicNumber& coefficient(std::size_t i) const { return coeffs_.at(i); }
  std::size_t truncation_order() const noexcept { return coeffs_.size(); }
  int scale() const noexcept { return scale_; }
  TailModel tail() const noexcept { return tail_; }

private:
  Prime p_;
  std::vector<PadicNumber> coeffs_;
  int scale_;
  TailModel tail_;
};

}  // namespace cctk
