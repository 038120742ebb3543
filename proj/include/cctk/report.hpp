#pragma once
// JSON and CSV rendering of results. Integers that can exceed 2^53 are
// written as decimal strings.

#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"

#include "cctk/chabauty.hpp"
#include "cctk/hyperelliptic.hpp"
#include "cctk/wieferich.hpp"

namespace cctk {

using Json = nlohmann::json;

/// {"p", "residue", "prec"}.
Json to_json(const PadicNumber& x);
Json to_json(const ScanReport& report, const std::optional<std::string>& records_path = {});
Json to_json(const FltResult& result);
Json to_json(const VanishingSpace& space, const LogMatrix& input);
Json to_json(const DiscZeros& zeros, const PadicSeries& series, int n_min);
Json to_json(const ProductFamily& family);
Json to_json(const PointCheck& check);
Json to_json(const RamificationCheck& check);
Json to_json(const SquareFamilyReport& report);

/// p,value,normalized with vector coordinates joined by ';'.
void write_records_csv(const ScanReport& report, std::ostream& os);

/// Stable rendering used for every report.
std::string dump(const Json& j);

}  // namespace cctk
