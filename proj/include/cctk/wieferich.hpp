#pragma once
// Scans of the mod-p logarithm W_P(p) over ranges of primes for G_m,
// elliptic curves and products of these, with histogram statistics.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cctk/arith.hpp"
#include "cctk/elliptic.hpp"

namespace cctk {

/// (a^(p-1) - 1)/p mod p. Throws BaseDivisible when p | a.
u64 fermat_quotient(u64 a, Prime p);

enum class Group { Gm, Elliptic, Product };
std::string_view group_name(Group g) noexcept;

struct WieferichRecord {
  u64 p = 0;
  std::vector<u64> value;          ///< one coordinate per Lie-algebra dimension
  std::vector<double> normalized;  ///< value / p
  bool is_zero_event = false;
};

struct SkippedPrime {
  u64 p = 0;
  std::string reason;
  friend bool operator==(const SkippedPrime&, const SkippedPrime&) = default;
};

struct EquidistributionStats {
  u64 bins = 0;                ///< per axis; the histogram has bins^dimension cells
  std::size_t dimension = 1;
  u64 total = 0;
  std::vector<u64> counts;
  double chi_square = 0.0;
  double p_value = 1.0;        ///< upper tail of chi^2 with cells - 1 degrees of freedom
  std::optional<double> star_discrepancy;
};

struct ScanOptions {
  unsigned workers = 1;
  u64 bins = 32;
  /// Keep at most this many raw records (lowest p first); statistics still
  /// cover every record.
  std::optional<std::size_t> retain_records;
  u64 block_width = 1u << 15;  ///< integers per work block
};

struct ScanReport {
  u64 p_min = 0;
  u64 p_max = 0;
  Group group = Group::Gm;
  std::vector<SkippedPrime> skipped;
  std::vector<WieferichRecord> records;
  std::size_t record_count = 0;  ///< records produced, retained or not
  bool records_truncated = false;
  std::vector<u64> zero_events;
  std::optional<EquidistributionStats> stats;  ///< absent when there are no records

  // Product scans only.
  std::optional<u64> subspace_hits;
  std::vector<u64> subspace_hit_primes;
  double expected_hits = 0.0;  ///< sum of 1/p^2 over scanned primes
};

/// Histogram, chi^2 and (for 1-dimensional, complete inputs) star discrepancy.
/// Throws EmptyRecords.
EquidistributionStats equidistribution_stats(const std::vector<WieferichRecord>& records, u64 bins);

/// Statistics from an aggregated histogram alone; no discrepancy.
EquidistributionStats stats_from_counts(std::vector<u64> counts, u64 bins, std::size_t dimension);

/// Star discrepancy of a sample in [0,1): max_i max(i/n - u_(i), u_(i) - (i-1)/n).
double star_discrepancy(std::vector<double> sample);

/// Base-a Fermat quotients for odd primes in [p_min, p_max]; p_min >= 3.
ScanReport scan_gm(u64 a, u64 p_min, u64 p_max, const ScanOptions& options = {});

/// Elliptic W_P(p) for primes in range; p < 5, bad primes and primes where
/// P is not integral are skipped with a reason.
ScanReport scan_elliptic(const EllipticCurveQ& curve, const mpq_class& x, const mpq_class& y,
                         u64 p_min, u64 p_max, const ScanOptions& options = {});

struct GmComponent {
  u64 base = 2;
};
struct EllipticComponent {
  EllipticCurveQ curve;
  mpq_class x, y;
};
using ProductComponent = std::variant<GmComponent, EllipticComponent>;

/// Product of d >= 2 one-dimensional factors. subspace lists integer vectors
/// of length d spanning a rank d - 2 sublattice (an empty list is the zero
/// lattice when d = 2). Throws DimensionMismatch.
ScanReport scan_product(const std::vector<ProductComponent>& components, u64 p_min, u64 p_max,
                        const std::vector<std::vector<i64>>& subspace,
                        const ScanOptions& options = {});

/// True when v lies in the F_p-span of the reduced rows.
bool in_span_mod_p(const std::vector<std::vector<i64>>& rows, const std::vector<u64>& v, u64 p);
/// Rank of the rows reduced modulo p.
std::size_t rank_mod_p(const std::vector<std::vector<i64>>& rows, u64 p);
/// Rank over Q.
std::size_t rank_over_q(const std::vector<std::vector<i64>>& rows);

struct FltResult {
  u64 p = 0;
  bool eliminated = false;
  std::optional<u64> witness;  ///< smallest q <= 113 with q_p(q) != 0
};

/// Checks the Fermat quotients q_p(q) for the 30 primes q <= 113. Throws
/// PrimeTooSmall for p <= 113.
FltResult flt_first_case(u64 p);

}  // namespace cctk
