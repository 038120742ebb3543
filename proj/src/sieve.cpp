#include "cctk/sieve.hpp"

#include <algorithm>
#include <cmath>

namespace cctk {

namespace {

constexpr u64 kSegment = 1u << 18;

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

std::vector<u64> primes_in_range(u64 lo, u64 hi) {
  std::vector<u64> out;
  if (hi < lo || hi < 2) return out;
  lo = std::max<u64>(lo, 2);
  const auto base = primes_up_to(isqrt(hi));
  std::vector<char> mark(kSegment);
  for (u64 seg = lo; seg <= hi; seg += kSegment) {
    const u64 end = std::min(hi, seg + kSegment - 1);
    const u64 len = end - seg + 1;
    std::fill(mark.begin(), mark.begin() + static_cast<std::ptrdiff_t>(len), 1);
    for (u64 q : base) {
      if (q * q > end) break;
      u64 start = std::max(q * q, (seg + q - 1) / q * q);
      for (u64 j = start; j <= end; j += q) mark[j - seg] = 0;
    }
    for (u64 i = 0; i < len; ++i)
      if (mark[i]) out.push_back(seg + i);
    if (end == hi) break;
  }
  return out;
}

}  // namespace cctk
