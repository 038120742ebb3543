#include "cctk/qpoly.hpp"

#include <sstream>

#include "cctk/error.hpp"

namespace cctk {

QPoly::QPoly(std::vector<mpq_class> coefficients) : c_(std::move(coefficients)) {
  for (auto& c : c_) c.canonicalize();
  trim();
}

void QPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

QPoly QPoly::constant(const mpq_class& c) { return QPoly({c}); }

QPoly QPoly::x() { return QPoly({0, 1}); }

QPoly QPoly::from_roots(const std::vector<mpq_class>& roots) {
  QPoly f = constant(1);
  for (const auto& r : roots) f = f * QPoly({-r, 1});
  return f;
}

mpq_class QPoly::operator()(const mpq_class& x) const {
  mpq_class acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

QPoly QPoly::derivative() const {
  std::vector<mpq_class> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<unsigned long>(i));
  return QPoly(std::move(d));
}

QPoly QPoly::monic() const {
  if (is_zero()) return *this;
  return mpq_class(1 / leading()) * *this;
}

QPoly QPoly::compose_square() const {
  std::vector<mpq_class> out(c_.empty() ? 0 : 2 * c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) out[2 * i] = c_[i];
  return QPoly(std::move(out));
}

QPoly QPoly::shift(const mpq_class& a) const {
  // Horner in the variable (x + a).
  QPoly acc;
  const QPoly lin({a, 1});
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * lin + constant(*it);
  return acc;
}

QPoly QPoly::reversed() const { return QPoly(std::vector<mpq_class>(c_.rbegin(), c_.rend())); }

std::string QPoly::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    mpq_class c = c_[i];
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    if (c < 0) c = -c;
    if (i == 0 || c != 1) os << c.get_str() << (i > 0 ? "*" : "");
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  return os.str();
}

QPoly operator+(const QPoly& a, const QPoly& b) {
  std::vector<mpq_class> out(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] += b.c_[i];
  return QPoly(std::move(out));
}

QPoly operator-(const QPoly& a, const QPoly& b) { return a + mpq_class(-1) * b; }

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return QPoly();
  std::vector<mpq_class> out(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  return QPoly(std::move(out));
}

QPoly operator*(const mpq_class& s, const QPoly& a) {
  std::vector<mpq_class> out = a.c_;
  for (auto& c : out) c *= s;
  return QPoly(std::move(out));
}

std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
  if (b.is_zero()) throw Error(Errc::InvalidArgument, "polynomial division by zero");
  std::vector<mpq_class> rem = a.coefficients();
  const int db = b.degree();
  if (a.degree() < db) return {QPoly(), a};
  std::vector<mpq_class> quo(static_cast<std::size_t>(a.degree() - db + 1), 0);
  const mpq_class lead = b.leading();
  for (int i = a.degree(); i >= db; --i) {
    mpq_class q = rem[static_cast<std::size_t>(i)] / lead;
    quo[static_cast<std::size_t>(i - db)] = q;
    if (q == 0) continue;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(i - db + j)] -= q * b.coefficient(static_cast<std::size_t>(j));
  }
  return {QPoly(std::move(quo)), QPoly(std::move(rem))};
}

QPoly gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    QPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

bool is_squarefree(const QPoly& f) {
  if (f.is_zero()) return false;
  return gcd(f, f.derivative()).degree() == 0;
}

int root_multiplicity(const QPoly& f, const mpq_class& x0) {
  if (f.is_zero()) throw Error(Errc::InvalidArgument, "zero polynomial has no root multiplicity");
  const QPoly g = f.shift(x0);
  int k = 0;
  while (g.coefficient(static_cast<std::size_t>(k)) == 0) ++k;
  return k;
}

std::vector<QPoly> squarefree_decomposition(const QPoly& f) {
  if (f.is_zero()) throw Error(Errc::InvalidArgument, "zero polynomial");
  std::vector<QPoly> out;
  if (f.degree() == 0) return out;
  const QPoly fp = f.derivative();
  QPoly a = gcd(f, fp);
  QPoly b = divmod(f, a).first;
  QPoly c = divmod(fp, a).first;
  QPoly d = c - b.derivative();
  while (b.degree() > 0) {
    QPoly ai = gcd(b, d);
    out.push_back(ai);
    b = divmod(b, ai).first;
    c = divmod(d, ai).first;
    d = c - b.derivative();
  }
  return out;
}

bool is_rational_square(const mpq_class& q) {
  if (q < 0) return false;
  return mpz_perfect_square_p(q.get_num_mpz_t()) != 0 && mpz_perfect_square_p(q.get_den_mpz_t()) != 0;
}

}  // namespace cctk
