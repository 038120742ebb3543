#include "cctk/arith.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include "cctk/error.hpp"

namespace cctk {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NotAPrime: return "NotAPrime";
    case Errc::NonUnitDenominator: return "NonUnitDenominator";
    case Errc::PrimeMismatch: return "PrimeMismatch";
    case Errc::DivisionByZeroAtPrecision: return "DivisionByZeroAtPrecision";
    case Errc::NonUnitInput: return "NonUnitInput";
    case Errc::PrecisionUnreachable: return "PrecisionUnreachable";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::IndeterminatePolygon: return "IndeterminatePolygon";
    case Errc::InsufficientTruncation: return "InsufficientTruncation";
    case Errc::HenselFails: return "HenselFails";
    case Errc::SmallPrime: return "SmallPrime";
    case Errc::BadReduction: return "BadReduction";
    case Errc::NonIntegralPoint: return "NonIntegralPoint";
    case Errc::PointNotOnCurve: return "PointNotOnCurve";
    case Errc::BaseDivisible: return "BaseDivisible";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::PrimeTooSmall: return "PrimeTooSmall";
    case Errc::EmptyRecords: return "EmptyRecords";
    case Errc::NonSquarefree: return "NonSquarefree";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::DomainError: return "DomainError";
    case Errc::NotSeparable: return "NotSeparable";
    case Errc::ZeroConstantTerm: return "ZeroConstantTerm";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

bool miller_rabin_witness(u64 n, u64 a, u64 d, int s) noexcept {
  u64 x = pow_mod(a % n, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

}  // namespace

bool is_prime(u64 n) noexcept {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  if (n <= 1'000'000) {
    for (u64 d = 3; d * d <= n; d += 2)
      if (n % d == 0) return false;
    return true;
  }
  for (u64 d = 3; d < 1000; d += 2)
    if (n % d == 0) return false;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This base set is deterministic for all n < 2^64.
  constexpr std::array<u64, 12> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 a : bases)
    if (miller_rabin_witness(n, a, d, s)) return false;
  return true;
}

Prime::Prime(i64 value) : value_(value) {
  if (value == 2) throw Error(Errc::NotAPrime, "p = 2 is not supported");
  if (value < 3 || !is_prime(static_cast<u64>(value)))
    throw Error(Errc::NotAPrime, std::to_string(value) + " is not an odd prime");
}

u64 pow_mod(u64 base, u64 exp, u64 m) noexcept {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 inv_mod(u64 a, u64 m) {
  i64 t = 0, new_t = 1;
  i64 r = static_cast<i64>(m), new_r = static_cast<i64>(a % m);
  while (new_r != 0) {
    i64 q = r / new_r;
    i64 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw Error(Errc::InvalidArgument, "element is not invertible");
  return reduce_signed(t, m);
}

int valuation(const mpz_class& n, i64 p) {
  if (n == 0) throw Error(Errc::InvalidArgument, "valuation of zero");
  mpz_class q = abs(n);
  int v = 0;
  mpz_class pz(static_cast<long>(p));
  while (mpz_divisible_p(q.get_mpz_t(), pz.get_mpz_t())) {
    q /= pz;
    ++v;
  }
  return v;
}

int valuation(i64 n, i64 p) {
  if (n == 0) throw Error(Errc::InvalidArgument, "valuation of zero");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

mpz_class mpz_pow(i64 p, unsigned e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), e);
  return r;
}

int floor_log(u64 n, u64 p) noexcept {
  int k = 0;
  while (n >= p) {
    n /= p;
    ++k;
  }
  return k;
}

int legendre(i64 a, i64 p) {
  u64 r = reduce_signed(a, static_cast<u64>(p));
  if (r == 0) return 0;
  u64 e = pow_mod(r, static_cast<u64>(p - 1) / 2, static_cast<u64>(p));
  return e == 1 ? 1 : -1;
}

u64 sqrt_mod_prime(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  if (pow_mod(a, (p - 1) / 2, p) != 1) throw Error(Errc::InvalidArgument, "not a square");
  if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);
  u64 q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  u64 z = 2;
  while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
  u64 m = static_cast<u64>(s);
  u64 c = pow_mod(z, q, p);
  u64 t = pow_mod(a, q, p);
  u64 r = pow_mod(a, (q + 1) / 2, p);
  while (t != 1) {
    u64 i = 0, t2 = t;
    while (t2 != 1) {
      t2 = mul_mod(t2, t2, p);
      ++i;
    }
    u64 b = c;
    for (u64 j = 0; j + i + 1 < m; ++j) b = mul_mod(b, b, p);
    m = i;
    c = mul_mod(b, b, p);
    t = mul_mod(t, c, p);
    r = mul_mod(r, b, p);
  }
  return r;
}

mpq_class parse_rational(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw Error(Errc::InvalidArgument, "empty rational");
  if (s.front() == '+') s.erase(0, 1);
  auto slash = s.find('/');
  auto is_int = [](const std::string& t) {
    if (t.empty()) return false;
    size_t start = (t[0] == '-') ? 1 : 0;
    if (start == t.size()) return false;
    return std::all_of(t.begin() + static_cast<long>(start), t.end(),
                       [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!is_int(num) || !is_int(den)) throw Error(Errc::InvalidArgument, "not a rational: " + s);
  const mpz_class n(num), d(den);
  if (d == 0) throw Error(Errc::InvalidArgument, "zero denominator: " + s);
  mpq_class q(n, d);
  q.canonicalize();
  return q;
}

u64 rational_mod(const mpq_class& q, u64 m) {
  mpz_class mz(std::to_string(m));
  mpz_class num = q.get_num() % mz;
  if (num < 0) num += mz;
  mpz_class den = q.get_den() % mz;
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mz.get_mpz_t()) == 0)
    throw Error(Errc::NonUnitDenominator, "denominator not invertible modulo " + std::to_string(m));
  mpz_class r = (num * inv) % mz;
  return std::stoull(r.get_str());
}

}  // namespace cctk
