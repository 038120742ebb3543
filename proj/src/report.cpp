#include "cctk/report.hpp"

#include <iomanip>
#include <sstream>

namespace cctk {

namespace {

void stats_json(const ScanReport& r, Json& j) {
  if (!r.stats) {
    j["histogram"] = {{"bins", nullptr}, {"counts", Json::array()}};
    j["chi_square"] = nullptr;
    j["p_value"] = nullptr;
    j["star_discrepancy"] = nullptr;
    return;
  }
  const auto& s = *r.stats;
  j["histogram"] = {{"bins", s.bins}, {"dimension", s.dimension}, {"counts", s.counts}};
  j["chi_square"] = s.chi_square;
  j["p_value"] = s.p_value;
  j["star_discrepancy"] = s.star_discrepancy ? Json(*s.star_discrepancy) : Json(nullptr);
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ";" : "") + parts[i];
  return out;
}

}  // namespace

Json to_json(const PadicNumber& x) {
  return {{"p", x.prime().value()}, {"residue", x.residue().get_str()}, {"prec", x.precision()}};
}

Json to_json(const ScanReport& r, const std::optional<std::string>& records_path) {
  Json j;
  j["range"] = {r.p_min, r.p_max};
  j["group"] = std::string(group_name(r.group));
  j["zero_events"] = r.zero_events;
  Json skipped = Json::array();
  for (const auto& s : r.skipped) skipped.push_back({{"p", s.p}, {"reason", s.reason}});
  j["skipped"] = skipped;
  j["record_count"] = r.record_count;
  j["records_truncated"] = r.records_truncated;
  stats_json(r, j);
  if (records_path) j["records_path"] = *records_path;
  if (r.subspace_hits) {
    j["subspace_hit_count"] = *r.subspace_hits;
    j["subspace_hit_primes"] = r.subspace_hit_primes;
    j["expected_hits"] = r.expected_hits;
  }
  return j;
}

Json to_json(const FltResult& r) {
  return {{"p", r.p},
          {"eliminated", r.eliminated},
          {"witness", r.witness ? Json(*r.witness) : Json(nullptr)}};
}

Json to_json(const VanishingSpace& space, const LogMatrix& input) {
  Json basis = Json::array();
  for (const auto& v : space.basis) {
    Json row = Json::array();
    for (const auto& x : v) row.push_back(to_json(x));
    basis.push_back(row);
  }
  return {{"p", input.p.value()},
          {"g", input.g},
          {"input_precision", input.precision},
          {"rank", space.rank},
          {"dimension", space.basis.size()},
          {"certified_precision", space.certified_precision},
          {"basis", basis}};
}

Json to_json(const DiscZeros& z, const PadicSeries& series, int n_min) {
  Json roots = Json::array();
  for (const auto& r : z.roots)
    roots.push_back({{"root", to_json(r.root)},
                     {"multiplicity", r.multiplicity},
                     {"simple", r.simple},
                     {"repeated", r.repeated},
                     {"hensel_certified", r.hensel_certified}});
  return {{"p", series.prime().value()}, {"n_min", n_min}, {"total", z.total}, {"roots", roots}};
}

Json to_json(const ProductFamily& f) {
  return {{"separable", true},
          {"a", f.a.get_str()},
          {"b", f.b.get_str()},
          {"c", f.c.get_str()},
          {"curves",
           {{"X1", f.f1.to_string()},
            {"X2", f.f2.to_string()},
            {"X3", f.f3.to_string()},
            {"X5", f.x5.to_string()},
            {"X6", f.x6.to_string()}}},
          {"genus",
           {{"X1", f.genus1}, {"X2", f.genus2}, {"X3", f.genus3}, {"X5", f.genus5}, {"X6", f.genus6}}},
          {"unchecked_assumptions", f.unchecked_assumptions}};
}

Json to_json(const PointCheck& c) {
  return {{"on_curve", c.on_curve},
          {"on_X1", c.on_x1},
          {"on_X2", c.on_x2},
          {"x0_root_of", std::string(root_of_name(c.x0_root_of))},
          {"f1_at_x0", c.f1_at_x0.get_str()},
          {"f2_at_x0", c.f2_at_x0.get_str()},
          {"f2_at_x0_square", c.f2_at_x0_square}};
}

Json to_json(const RamificationCheck& c) {
  Json pulls = Json::array();
  for (const auto& p : c.pullbacks)
    pulls.push_back({{"differential", p.differential},
                     {"order_on_target", p.order_on_target},
                     {"order_pulled_back", p.order_pulled_back}});
  return {{"ramified", c.ramified}, {"index", c.index}, {"pullbacks", pulls}};
}

Json to_json(const SquareFamilyReport& r) {
  Json zeros = Json::array();
  for (const auto& z : r.zeros) {
    Json e{{"place", z.place}, {"points", z.points}, {"order", z.order}};
    e["x"] = z.x ? Json(z.x->get_str()) : Json(nullptr);
    e["y"] = z.y ? Json("+-" + z.y->get_str()) : Json(nullptr);
    zeros.push_back(e);
  }
  return {{"f", r.f.to_string()},
          {"curves", {{"X1", r.x1.to_string()}, {"X2", r.x2.to_string()}, {"X3", r.x3.to_string()}}},
          {"genus", {{"X1", r.genus1}, {"X2", r.genus2}, {"X3", r.genus3}}},
          {"pullback_of_dx_over_y", r.pullback_numerator.to_string() + " dx/y"},
          {"zeros_of_x_dx_over_y", zeros},
          {"total_order", r.total_order},
          {"unchecked_assumptions", r.unchecked_assumptions}};
}

void write_records_csv(const ScanReport& report, std::ostream& os) {
  os << "p,value,normalized\n";
  for (const auto& rec : report.records) {
    std::vector<std::string> vals, norms;
    for (std::size_t i = 0; i < rec.value.size(); ++i) {
      vals.push_back(std::to_string(rec.value[i]));
      std::ostringstream n;
      n << std::setprecision(17) << rec.normalized[i];
      norms.push_back(n.str());
    }
    os << rec.p << ',' << join(vals) << ',' << join(norms) << '\n';
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cctk
