#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace cctk {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

/// Trial division below 10^6, deterministic Miller-Rabin above.
bool is_prime(u64 n) noexcept;

/// An odd prime, validated once at construction.
class Prime {
public:
  explicit Prime(i64 value);
  i64 value() const noexcept { return value_; }
  mpz_class mpz() const { return mpz_class(static_cast<long>(value_)); }
  friend bool operator==(Prime a, Prime b) noexcept { return a.value_ == b.value_; }

private:
  i64 value_;
};

inline u64 mul_mod(u64 a, u64 b, u64 m) noexcept {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m) noexcept;

/// Inverse of a modulo m; a must be a unit.
u64 inv_mod(u64 a, u64 m);

/// Reduces a signed integer into [0, m).
inline u64 reduce_signed(i64 a, u64 m) noexcept {
  i64 r = a % static_cast<i64>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

/// v_p(n) for n != 0.
int valuation(const mpz_class& n, i64 p);
int valuation(i64 n, i64 p);

mpz_class mpz_pow(i64 p, unsigned e);

/// floor(log_p(n)) for n >= 1.
int floor_log(u64 n, u64 p) noexcept;

/// Legendre symbol (a/p) for odd prime p.
int legendre(i64 a, i64 p);

/// Square root modulo an odd prime (Tonelli-Shanks); a must be a nonzero square.
u64 sqrt_mod_prime(u64 a, u64 p);

/// Parses "n" or "n/d" into an exact rational.
mpq_class parse_rational(std::string_view text);

/// Reduces a p-integral rational modulo m = p^k; throws if p divides the denominator.
u64 rational_mod(const mpq_class& q, u64 m);

}  // namespace cctk
