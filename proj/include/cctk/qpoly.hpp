#pragma once
// Dense univariate polynomials over Q.

#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace cctk {

class QPoly {
public:
  QPoly() = default;
  /// Coefficients from the constant term up; trailing zeros are dropped.
  explicit QPoly(std::vector<mpq_class> coefficients);
  static QPoly constant(const mpq_class& c);
  static QPoly x();
  /// prod (x - r).
  static QPoly from_roots(const std::vector<mpq_class>& roots);

  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<mpq_class>& coefficients() const noexcept { return c_; }
  mpq_class coefficient(std::size_t i) const { return i < c_.size() ? c_[i] : mpq_class(0); }
  mpq_class leading() const { return c_.empty() ? mpq_class(0) : c_.back(); }

  mpq_class operator()(const mpq_class& x) const;
  QPoly derivative() const;
  QPoly monic() const;
  /// f(x^2).
  QPoly compose_square() const;
  /// f(x + a).
  QPoly shift(const mpq_class& a) const;
  /// x^deg f(1/x).
  QPoly reversed() const;

  std::string to_string() const;

  friend QPoly operator+(const QPoly& a, const QPoly& b);
  friend QPoly operator-(const QPoly& a, const QPoly& b);
  friend QPoly operator*(const QPoly& a, const QPoly& b);
  friend QPoly operator*(const mpq_class& s, const QPoly& a);
  friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }

private:
  void trim();
  std::vector<mpq_class> c_;
};

/// Quotient and remainder; b must be nonzero.
std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b);
/// Monic gcd (zero when both inputs are zero).
QPoly gcd(QPoly a, QPoly b);
bool is_squarefree(const QPoly& f);
/// Multiplicity of x0 as a root of f; f must be nonzero.
int root_multiplicity(const QPoly& f, const mpq_class& x0);
/// Yun's algorithm: f = lc * prod_k a_k^k with each a_k squarefree and monic.
/// Entry k-1 holds a_k.
std::vector<QPoly> squarefree_decomposition(const QPoly& f);
/// Whether a rational number is the square of a rational.
bool is_rational_square(const mpq_class& q);

}  // namespace cctk
