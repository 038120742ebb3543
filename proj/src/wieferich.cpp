#include "cctk/wieferich.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <stdexcept>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "cctk/error.hpp"
#include "cctk/sieve.hpp"

namespace cctk {

namespace {

struct Outcome {
  bool skipped = false;
  std::string reason;
  std::vector<u64> value;
  bool hit = false;
};

using Evaluator = std::function<Outcome(u64)>;

struct Partial {
  std::vector<SkippedPrime> skipped;
  std::vector<WieferichRecord> records;
  std::vector<u64> counts;
  std::vector<u64> hits;
  double expected = 0.0;
};

u64 cell_of(const std::vector<u64>& value, u64 p, u64 bins) {
  u64 cell = 0;
  for (u64 v : value) cell = cell * bins + static_cast<u64>(static_cast<u128>(v) * bins / p);
  return cell;
}

u64 cell_count(u64 bins, std::size_t dim) {
  u64 cells = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    if (cells > (u64{1} << 24) / bins)
      throw Error(Errc::InvalidArgument, "histogram grid bins^d is too large");
    cells *= bins;
  }
  return cells;
}

Partial run_block(u64 lo, u64 hi, const Evaluator& eval, u64 bins, std::size_t dim) {
  Partial part;
  part.counts.assign(cell_count(bins, dim), 0);
  for (u64 p : primes_in_range(lo, hi)) {
    Outcome out = eval(p);
    if (out.skipped) {
      part.skipped.push_back({p, out.reason});
      continue;
    }
    WieferichRecord rec;
    rec.p = p;
    rec.value = std::move(out.value);
    rec.is_zero_event = std::all_of(rec.value.begin(), rec.value.end(), [](u64 v) { return v == 0; });
    for (u64 v : rec.value) rec.normalized.push_back(static_cast<double>(v) / static_cast<double>(p));
    ++part.counts[cell_of(rec.value, p, bins)];
    if (out.hit) part.hits.push_back(p);
    part.expected += 1.0 / (static_cast<double>(p) * static_cast<double>(p));
    part.records.push_back(std::move(rec));
  }
  return part;
}

ScanReport run_scan(Group group, u64 p_min, u64 p_max, std::size_t dim, const Evaluator& eval,
                    const ScanOptions& opt) {
  if (opt.bins < 2) throw Error(Errc::InvalidArgument, "need at least 2 bins");
  if (opt.workers < 1) throw Error(Errc::InvalidArgument, "need at least 1 worker");
  if (opt.block_width < 1) throw Error(Errc::InvalidArgument, "block width must be positive");
  if (p_max < p_min) throw Error(Errc::InvalidArgument, "empty range: max < min");
  ScanReport report;
  report.p_min = p_min;
  report.p_max = p_max;
  report.group = group;
  std::vector<u64> counts(cell_count(opt.bins, dim), 0);
  std::vector<double> sample;
  if (p_max >= p_min) {
    const u64 nblocks = (p_max - p_min) / opt.block_width + 1;
    const u64 wave = static_cast<u64>(opt.workers) * 4;
    for (u64 first = 0; first < nblocks; first += wave) {
      const u64 count = std::min(wave, nblocks - first);
      std::vector<Partial> parts(count);
      std::vector<std::exception_ptr> errors(count);
      std::atomic<u64> next{0};
      auto worker = [&] {
        for (u64 i; (i = next.fetch_add(1)) < count;) {
          const u64 lo = p_min + (first + i) * opt.block_width;
          const u64 hi = std::min(p_max, lo + opt.block_width - 1);
          try {
            parts[i] = run_block(lo, hi, eval, opt.bins, dim);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      };
      const unsigned nthreads = static_cast<unsigned>(std::min<u64>(opt.workers, count));
      if (nthreads <= 1) {
        worker();
      } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
      }
      for (u64 i = 0; i < count; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        Partial& part = parts[i];
        report.skipped.insert(report.skipped.end(), part.skipped.begin(), part.skipped.end());
        for (std::size_t c = 0; c < counts.size(); ++c) counts[c] += part.counts[c];
        report.expected_hits += part.expected;
        report.subspace_hit_primes.insert(report.subspace_hit_primes.end(), part.hits.begin(),
                                          part.hits.end());
        for (auto& rec : part.records) {
          ++report.record_count;
          if (rec.is_zero_event) report.zero_events.push_back(rec.p);
          if (dim == 1 && !report.records_truncated) sample.push_back(rec.normalized[0]);
          if (opt.retain_records && report.records.size() >= *opt.retain_records) {
            report.records_truncated = true;
            continue;
          }
          report.records.push_back(std::move(rec));
        }
      }
    }
  }
  if (report.record_count > 0) {
    report.stats = stats_from_counts(std::move(counts), opt.bins, dim);
    if (dim == 1 && !report.records_truncated) report.stats->star_discrepancy = star_discrepancy(sample);
  }
  return report;
}

u64 fermat_quotient_gmp(u64 a, u64 p) {
  mpz_class m = mpz_class(std::to_string(p)) * mpz_class(std::to_string(p));
  mpz_class r;
  mpz_class base(std::to_string(a));
  mpz_class e(std::to_string(p - 1));
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  r = (r - 1) / mpz_class(std::to_string(p));
  return std::stoull(r.get_str());
}

Outcome elliptic_outcome(const EllipticCurveQ& curve, const mpq_class& x, const mpq_class& y, u64 p) {
  Outcome out;
  if (p < 5) {
    out.skipped = true;
    out.reason = "small_prime";
    return out;
  }
  Prime prime(static_cast<i64>(p));
  if (reduction_type(curve, prime.value()) != Reduction::Good) {
    out.skipped = true;
    out.reason = "bad_reduction";
    return out;
  }
  try {
    out.value = {wieferich_element(curve, x, y, prime)};
  } catch (const Error& e) {
    if (e.code() != Errc::NonIntegralPoint) throw;
    out.skipped = true;
    out.reason = "non_integral_point";
  }
  return out;
}

// Row echelon form modulo p; returns the rank.
std::size_t echelon_mod_p(std::vector<std::vector<u64>>& m, u64 p) {
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    const u64 inv = inv_mod(m[rank][c], p);
    for (auto& x : m[rank]) x = mul_mod(x, inv, p);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c] == 0) continue;
      const u64 f = m[r][c];
      for (std::size_t k = 0; k < cols; ++k) m[r][k] = (m[r][k] + p - mul_mod(f, m[rank][k], p)) % p;
    }
    ++rank;
  }
  return rank;
}

std::vector<std::vector<u64>> reduce_rows(const std::vector<std::vector<i64>>& rows, u64 p) {
  std::vector<std::vector<u64>> m;
  for (const auto& row : rows) {
    std::vector<u64> r;
    for (i64 v : row) r.push_back(reduce_signed(v, p));
    m.push_back(std::move(r));
  }
  return m;
}

}  // namespace

u64 fermat_quotient(u64 a, Prime p) {
  const u64 q = static_cast<u64>(p.value());
  if (a < 1) throw Error(Errc::InvalidArgument, "base must be positive");
  if (q >= (u64{1} << 32)) throw Error(Errc::InvalidArgument, "p^2 must fit in 64 bits");
  if (a % q == 0) throw Error(Errc::BaseDivisible, std::to_string(q) + " divides the base");
  const u64 m = q * q;
  const u64 r = pow_mod(a % m, q - 1, m);
  return ((r + m - 1) % m) / q;
}

std::string_view group_name(Group g) noexcept {
  switch (g) {
    case Group::Gm: return "gm";
    case Group::Elliptic: return "elliptic";
    case Group::Product: return "product";
  }
  return "unknown";
}

double star_discrepancy(std::vector<double> sample) {
  if (sample.empty()) throw Error(Errc::EmptyRecords, "no samples");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double u = sample[i];
    d = std::max({d, static_cast<double>(i + 1) / n - u, u - static_cast<double>(i) / n});
  }
  return d;
}

EquidistributionStats stats_from_counts(std::vector<u64> counts, u64 bins, std::size_t dimension) {
  EquidistributionStats s;
  s.bins = bins;
  s.dimension = dimension;
  for (u64 c : counts) s.total += c;
  if (s.total == 0) throw Error(Errc::EmptyRecords, "no records");
  const double cells = static_cast<double>(counts.size());
  const double expect = static_cast<double>(s.total) / cells;
  double chi = 0.0;
  for (u64 c : counts) {
    const double diff = static_cast<double>(c) - expect;
    chi += diff * diff / expect;
  }
  s.chi_square = chi;
  s.p_value = boost::math::gamma_q((cells - 1.0) / 2.0, chi / 2.0);
  s.counts = std::move(counts);
  return s;
}

EquidistributionStats equidistribution_stats(const std::vector<WieferichRecord>& records, u64 bins) {
  if (records.empty()) throw Error(Errc::EmptyRecords, "no records");
  if (bins < 2) throw Error(Errc::InvalidArgument, "need at least 2 bins");
  const std::size_t dim = records.front().value.size();
  std::vector<u64> counts(cell_count(bins, dim), 0);
  std::vector<double> sample;
  for (const auto& rec : records) {
    if (rec.value.size() != dim) throw Error(Errc::DimensionMismatch, "records of mixed dimension");
    ++counts[cell_of(rec.value, rec.p, bins)];
    if (dim == 1) sample.push_back(static_cast<double>(rec.value[0]) / static_cast<double>(rec.p));
  }
  EquidistributionStats s = stats_from_counts(std::move(counts), bins, dim);
  if (dim == 1) s.star_discrepancy = star_discrepancy(std::move(sample));
  return s;
}

ScanReport scan_gm(u64 a, u64 p_min, u64 p_max, const ScanOptions& options) {
  if (a < 2) throw Error(Errc::InvalidArgument, "base must be at least 2");
  if (p_min < 3) throw Error(Errc::InvalidArgument, "p_min must be at least 3");
  Evaluator eval = [a](u64 p) {
    Outcome out;
    if (a % p == 0) {
      out.skipped = true;
      out.reason = "base_divisible";
      return out;
    }
    const u64 q = fermat_quotient(a, Prime(static_cast<i64>(p)));
    if (q == 0 && fermat_quotient_gmp(a, p) != 0)
      throw std::logic_error("Fermat quotient paths disagree at " + std::to_string(p));
    out.value = {q};
    return out;
  };
  return run_scan(Group::Gm, p_min, p_max, 1, eval, options);
}

ScanReport scan_elliptic(const EllipticCurveQ& curve, const mpq_class& x, const mpq_class& y,
                         u64 p_min, u64 p_max, const ScanOptions& options) {
  if (!curve.contains(x, y)) throw Error(Errc::PointNotOnCurve, "point is not on the curve");
  Evaluator eval = [&](u64 p) { return elliptic_outcome(curve, x, y, p); };
  return run_scan(Group::Elliptic, p_min, p_max, 1, eval, options);
}

std::size_t rank_mod_p(const std::vector<std::vector<i64>>& rows, u64 p) {
  auto m = reduce_rows(rows, p);
  return echelon_mod_p(m, p);
}

bool in_span_mod_p(const std::vector<std::vector<i64>>& rows, const std::vector<u64>& v, u64 p) {
  auto m = reduce_rows(rows, p);
  const std::size_t r = echelon_mod_p(m, p);
  std::vector<u64> w;
  for (u64 x : v) w.push_back(x % p);
  m.push_back(w);
  return echelon_mod_p(m, p) == r;
}

std::size_t rank_over_q(const std::vector<std::vector<i64>>& rows) {
  std::vector<std::vector<mpq_class>> m;
  for (const auto& row : rows) {
    std::vector<mpq_class> r;
    for (i64 v : row) r.emplace_back(static_cast<long>(v));
    m.push_back(std::move(r));
  }
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      if (m[r][c] == 0) continue;
      const mpq_class f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

ScanReport scan_product(const std::vector<ProductComponent>& components, u64 p_min, u64 p_max,
                        const std::vector<std::vector<i64>>& subspace, const ScanOptions& options) {
  const std::size_t d = components.size();
  if (d < 2) throw Error(Errc::DimensionMismatch, "a product needs at least two factors");
  for (const auto& row : subspace)
    if (row.size() != d)
      throw Error(Errc::DimensionMismatch, "subspace vectors must have length " + std::to_string(d));
  if (rank_over_q(subspace) != d - 2)
    throw Error(Errc::DimensionMismatch, "subspace must have rank " + std::to_string(d - 2));
  for (const auto& comp : components) {
    if (const auto* g = std::get_if<GmComponent>(&comp)) {
      if (g->base < 2) throw Error(Errc::InvalidArgument, "base must be at least 2");
    } else {
      const auto& e = std::get<EllipticComponent>(comp);
      if (!e.curve.contains(e.x, e.y)) throw Error(Errc::PointNotOnCurve, "point is not on the curve");
    }
  }

  Evaluator eval = [&](u64 p) {
    Outcome out;
    if (p < 3) {
      out.skipped = true;
      out.reason = "small_prime";
      return out;
    }
    for (std::size_t i = 0; i < d; ++i) {
      Outcome part;
      if (const auto* g = std::get_if<GmComponent>(&components[i])) {
        if (g->base % p == 0) {
          part.skipped = true;
          part.reason = "base_divisible";
        } else {
          part.value = {fermat_quotient(g->base, Prime(static_cast<i64>(p)))};
        }
      } else {
        const auto& e = std::get<EllipticComponent>(components[i]);
        part = elliptic_outcome(e.curve, e.x, e.y, p);
      }
      if (part.skipped) {
        out.skipped = true;
        out.reason = "component " + std::to_string(i) + ": " + part.reason;
        out.value.clear();
        return out;
      }
      out.value.push_back(part.value[0]);
    }
    if (rank_mod_p(subspace, p) != d - 2) {
      out.skipped = true;
      out.reason = "rank_drop";
      out.value.clear();
      return out;
    }
    out.hit = in_span_mod_p(subspace, out.value, p);
    return out;
  };
  ScanReport report = run_scan(Group::Product, p_min, p_max, d, eval, options);
  report.subspace_hits = report.subspace_hit_primes.size();
  return report;
}

FltResult flt_first_case(u64 p) {
  if (p <= 113) throw Error(Errc::PrimeTooSmall, "p must exceed 113");
  if (!is_prime(p)) throw Error(Errc::NotAPrime, std::to_string(p) + " is not prime");
  const Prime prime(static_cast<i64>(p));
  FltResult result;
  result.p = p;
  for (u64 q : primes_up_to(113)) {
    if (fermat_quotient(q, prime) != 0) {
      result.eliminated = true;
      result.witness = q;
      break;
    }
  }
  return result;
}

}  // namespace cctk
