#include "cctk/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "cctk/error.hpp"
#include "cctk/report.hpp"
#include "cctk/sieve.hpp"

namespace cctk::cli {

namespace {

struct Common {
  std::string out_path;
  unsigned workers = 1;
  u64 bins = 32;
  std::optional<std::size_t> retain;
  std::string records_path;
};

unsigned workers_from_env() {
  const char* env = std::getenv("WIEFERICH_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    std::size_t used = 0;
    const long v = std::stol(env, &used);
    if (used == std::string(env).size() && v >= 1) return static_cast<unsigned>(v);
  } catch (const std::exception&) {
  }
  throw Error(Errc::InvalidArgument, std::string("WIEFERICH_WORKERS must be a positive integer, got '") +
                                         env + "'");
}

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(Errc::InvalidArgument, "cannot write " + path);
  f << text;
}

Json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::InvalidArgument, "cannot read " + path);
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw Error(Errc::InvalidArgument, path + ": malformed JSON (" + e.what() + ")");
  }
}

mpz_class json_integer(const Json& v) {
  if (v.is_string()) {
    mpz_class z;
    if (z.set_str(v.get<std::string>(), 10) != 0)
      throw Error(Errc::InvalidArgument, "not a decimal integer: " + v.get<std::string>());
    return z;
  }
  if (v.is_number_integer()) return mpz_class(std::to_string(v.get<long long>()));
  throw Error(Errc::InvalidArgument, "expected an integer or decimal string");
}

std::vector<mpq_class> parse_list(const std::string& text, std::size_t expected, const char* what) {
  std::vector<mpq_class> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (expected != 0 && out.size() != expected)
    throw Error(Errc::InvalidArgument, std::string(what) + " needs " + std::to_string(expected) +
                                           " comma-separated rationals");
  return out;
}

void add_common(CLI::App* cmd, Common& c, bool scan) {
  cmd->add_option("--out", c.out_path, "Write the report here instead of standard output");
  if (!scan) return;
  cmd->add_option("--workers", c.workers, "Worker threads (default: WIEFERICH_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--bins", c.bins, "Histogram bins per axis")->check(CLI::Range(2, 1 << 20));
  cmd->add_option("--retain", c.retain, "Keep at most this many raw records");
  cmd->add_option("--records", c.records_path, "Write retained records as CSV");
}

ScanOptions scan_options(const Common& c) {
  ScanOptions o;
  o.workers = c.workers;
  o.bins = c.bins;
  o.retain_records = c.retain;
  return o;
}

void check_range(u64 lo, u64 hi) {
  if (hi < lo)
    throw Error(Errc::InvalidArgument, "--max " + std::to_string(hi) + " is below --min " +
                                           std::to_string(lo));
}

void finish_scan(const ScanReport& report, const Common& c, std::ostream& out) {
  std::optional<std::string> path;
  if (!c.records_path.empty()) {
    std::ofstream f(c.records_path);
    if (!f) throw Error(Errc::InvalidArgument, "cannot write " + c.records_path);
    write_records_csv(report, f);
    path = c.records_path;
  }
  emit(out, c.out_path, dump(to_json(report, path)));
}

std::vector<ProductComponent> parse_components(const Json& spec) {
  if (!spec.contains("components") || !spec["components"].is_array())
    throw Error(Errc::InvalidArgument, "product spec needs a \"components\" array");
  std::vector<ProductComponent> comps;
  for (const auto& c : spec["components"]) {
    const std::string type = c.at("type").get<std::string>();
    if (type == "gm") {
      comps.push_back(GmComponent{c.at("base").get<u64>()});
    } else if (type == "elliptic") {
      auto pt = parse_list(c.at("point").get<std::string>(), 2, "point");
      comps.push_back(EllipticComponent{EllipticCurveQ::parse(c.at("curve").get<std::string>()),
                                        pt[0], pt[1]});
    } else {
      throw Error(Errc::InvalidArgument, "unknown component type '" + type + "'");
    }
  }
  return comps;
}

std::vector<std::vector<i64>> parse_subspace(const Json& j) {
  const Json& vecs = j.is_object() ? j.at("vectors") : j;
  if (!vecs.is_array()) throw Error(Errc::InvalidArgument, "subspace must be an array of vectors");
  std::vector<std::vector<i64>> out;
  for (const auto& v : vecs) out.push_back(v.get<std::vector<i64>>());
  return out;
}

PadicSeries parse_series(const Json& j) {
  const Prime p(j.at("p").get<i64>());
  const int prec = j.at("prec").get<int>();
  std::vector<mpz_class> coeffs;
  for (const auto& c : j.at("coeffs")) coeffs.push_back(json_integer(c));
  TailModel tail = TailModel::Exact;
  if (j.contains("tail")) {
    const std::string t = j["tail"].get<std::string>();
    if (t == "integral") tail = TailModel::Integral;
    else if (t == "integral_derivative") tail = TailModel::IntegralDerivative;
    else if (t != "exact") throw Error(Errc::InvalidArgument, "unknown tail model '" + t + "'");
  }
  std::vector<PadicNumber> nums;
  for (const auto& c : coeffs) nums.emplace_back(p, c, prec);
  return PadicSeries(p, std::move(nums), j.value("scale", 0), tail);
}

LogMatrix parse_logs(const Json& j) {
  const Prime p(j.at("p").get<i64>());
  const int prec = j.at("prec").get<int>();
  const std::size_t g = j.at("g").get<std::size_t>();
  std::vector<std::vector<mpz_class>> rows;
  for (const auto& row : j.at("rows")) {
    std::vector<mpz_class> r;
    for (const auto& v : row) r.push_back(json_integer(v));
    rows.push_back(std::move(r));
  }
  return LogMatrix::from_integers(p, prec, g, rows);
}

BoundConstants parse_constants(const Json& j) {
  BoundConstants c;
  const std::vector<std::pair<const char*, double*>> fields{
      {"c0", &c.c0},   {"c1", &c.c1},         {"c2", &c.c2},   {"c3", &c.c3},
      {"cL", &c.cL},   {"c4", &c.c4},         {"omegaL", &c.omegaL},
      {"c10", &c.c10}, {"c11", &c.c11},       {"c12", &c.c12}, {"c13", &c.c13}};
  for (const auto& [name, ptr] : fields)
    if (j.contains(name)) *ptr = j[name].get<double>();
  return c;
}

Json constants_json(const BoundConstants& c) {
  return {{"c0", c.c0},   {"c1", c.c1},   {"c2", c.c2},   {"c3", c.c3},   {"cL", c.cL},
          {"c4", c.c4},   {"omegaL", c.omegaL},           {"c10", c.c10}, {"c11", c.c11},
          {"c12", c.c12}, {"c13", c.c13}};
}

Json family_report(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                   const std::optional<FiberPoint>& point) {
  ProductFamily fam;
  try {
    fam = build_product_family(a, b, c);
  } catch (const Error& e) {
    if (e.code() != Errc::NotSeparable) throw;
    return {{"separable", false},
            {"a", a.get_str()},
            {"b", b.get_str()},
            {"c", c.get_str()},
            {"reason", e.what()}};
  }
  Json j = to_json(fam);
  if (point) {
    const PointCheck check = verify_point(fam, *point);
    j["point"] = {point->x0.get_str(), point->y1.get_str(), point->y2.get_str()};
    j["point_checks"] = to_json(check);
    if (check.on_curve) {
      Json ram;
      for (Cover cov : {Cover::G1, Cover::G2, Cover::G3})
        ram[std::string(cover_name(cov))] = to_json(verify_ramification(fam, cov, *point));
      j["ramification"] = ram;
    } else {
      j["ramification"] = nullptr;
    }
  }
  return j;
}

bool precision_refusal(Errc code) {
  switch (code) {
    case Errc::PrecisionExhausted:
    case Errc::PrecisionUnreachable:
    case Errc::InsufficientTruncation:
    case Errc::IndeterminatePolygon:
    case Errc::HenselFails:
    case Errc::DomainError:
    case Errc::DivisionByZeroAtPrecision:
      return true;
    default:
      return false;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-adic, Wieferich and Chabauty computations"};
  app.name("cctk");
  app.require_subcommand(1);
  Common common;
  std::function<void()> action;

  // wieferich
  auto* wief = app.add_subcommand("wieferich", "Scans of W_P(p) over primes");
  wief->require_subcommand(1);

  u64 base = 2, pmin = 0, pmax = 0;
  auto* gm = wief->add_subcommand("gm", "Fermat quotients of a fixed base");
  gm->add_option("--base", base, "Base a >= 2")->required();
  gm->add_option("--min", pmin, "Smallest prime considered")->required();
  gm->add_option("--max", pmax, "Largest prime considered")->required();
  add_common(gm, common, true);
  gm->callback([&] {
    action = [&] {
      check_range(pmin, pmax);
      finish_scan(scan_gm(base, pmin, pmax, scan_options(common)), common, out);
    };
  });

  std::string curve_text, point_text;
  auto* ell = wief->add_subcommand("elliptic", "Elliptic W_P(p)");
  ell->add_option("--curve", curve_text, "a1,a2,a3,a4,a6")->required();
  ell->add_option("--point", point_text, "x,y")->required();
  ell->add_option("--min", pmin)->required();
  ell->add_option("--max", pmax)->required();
  add_common(ell, common, true);
  ell->callback([&] {
    action = [&] {
      check_range(pmin, pmax);
      const auto curve = EllipticCurveQ::parse(curve_text);
      const auto pt = parse_list(point_text, 2, "--point");
      finish_scan(scan_elliptic(curve, pt[0], pt[1], pmin, pmax, scan_options(common)), common, out);
    };
  });

  std::string spec_path, subspace_path;
  std::optional<u64> prod_min, prod_max;
  auto* prod = wief->add_subcommand("product", "Products of G_m and elliptic factors");
  prod->add_option("--spec", spec_path, "JSON with components and range")->required();
  prod->add_option("--subspace", subspace_path, "JSON list of integer vectors")->required();
  prod->add_option("--min", prod_min, "Overrides the spec range");
  prod->add_option("--max", prod_max, "Overrides the spec range");
  add_common(prod, common, true);
  prod->callback([&] {
    action = [&] {
      const Json spec = read_json(spec_path);
      const u64 lo = prod_min ? *prod_min : spec.value("min", u64{3});
      const u64 hi = prod_max ? *prod_max : spec.value("max", u64{1000});
      check_range(lo, hi);
      const auto comps = parse_components(spec);
      const auto sub = parse_subspace(read_json(subspace_path));
      finish_scan(scan_product(comps, lo, hi, sub, scan_options(common)), common, out);
    };
  });

  std::optional<u64> flt_prime, flt_min, flt_max;
  auto* flt = wief->add_subcommand("flt", "First-case criterion from Fermat quotients of q <= 113");
  flt->add_option("--prime", flt_prime, "A prime p > 113");
  flt->add_option("--min", flt_min, "Check every prime in [min, max] instead");
  flt->add_option("--max", flt_max);
  add_common(flt, common, false);
  flt->callback([&] {
    action = [&] {
      if (flt_prime) {
        emit(out, common.out_path, dump(to_json(flt_first_case(*flt_prime))));
        return;
      }
      if (!flt_min || !flt_max) throw Error(Errc::InvalidArgument, "give --prime or both --min and --max");
      check_range(*flt_min, *flt_max);
      Json results = Json::array();
      std::vector<u64> open;
      for (u64 p : primes_in_range(std::max<u64>(*flt_min, 114), *flt_max)) {
        const FltResult r = flt_first_case(p);
        if (!r.eliminated) open.push_back(p);
        results.push_back(to_json(r));
      }
      emit(out, common.out_path,
           dump({{"range", {*flt_min, *flt_max}}, {"results", results}, {"not_eliminated", open}}));
    };
  });

  // chabauty
  auto* chab = app.add_subcommand("chabauty", "Vanishing differentials, disc zeros, bounds");
  chab->require_subcommand(1);

  std::string logs_path;
  auto* van = chab->add_subcommand("vanishing", "Annihilator of a p-adic log matrix");
  van->add_option("--logs", logs_path, "JSON {p, prec, g, rows}")->required();
  add_common(van, common, false);
  van->callback([&] {
    action = [&] {
      const LogMatrix m = parse_logs(read_json(logs_path));
      emit(out, common.out_path, dump(to_json(vanishing_differentials(m), m)));
    };
  });

  std::string series_path;
  int nmin = 1;
  auto* disc = chab->add_subcommand("disc-roots", "Zeros of a power series on a residue disc");
  disc->add_option("--series", series_path, "JSON {p, prec, coeffs[, tail, scale]}")->required();
  disc->add_option("--nmin", nmin, "Minimum root valuation")->check(CLI::PositiveNumber);
  add_common(disc, common, false);
  disc->callback([&] {
    action = [&] {
      const PadicSeries s = parse_series(read_json(series_path));
      emit(out, common.out_path, dump(to_json(disc_zeros(s, nmin), s, nmin)));
    };
  });

  std::string config_path, params_path;
  auto* bound = chab->add_subcommand("bound", "Proximity bound template");
  bound->add_option("--config", config_path, "JSON constants (missing ones default to 1)");
  bound->add_option("--params", params_path, "JSON {g, n, h_x, h0, m_p, kappa[, exponent]}")->required();
  add_common(bound, common, false);
  bound->callback([&] {
    action = [&] {
      const BoundConstants c = config_path.empty() ? BoundConstants{} : parse_constants(read_json(config_path));
      const Json pj = read_json(params_path);
      BoundParams bp;
      bp.g = pj.value("g", 2);
      bp.n = pj.value("n", 1);
      bp.h_x = pj.at("h_x").get<double>();
      bp.h0 = pj.at("h0").get<double>();
      bp.m_p = pj.at("m_p").get<double>();
      bp.kappa = pj.value("kappa", 1.0);
      if (pj.contains("exponent")) bp.exponent = pj["exponent"].get<int>();
      Json j{{"bound", proximity_bound(bp, c)},
             {"exponent", bp.exponent.value_or(bp.n)},
             {"params", pj},
             {"constants", constants_json(c)}};
      if (pj.contains("fp")) {
        const Json& fp = pj["fp"];
        j["fp_lower_bound"] = fp_lower_bound(fp.at("b").get<double>(), fp.at("h").get<double>(),
                                             bp.n, fp.at("p").get<u64>(), c);
      }
      emit(out, common.out_path, dump(j));
    };
  });

  // example
  auto* ex = app.add_subcommand("example", "Exact checks on the hyperelliptic example families");
  ex->require_subcommand(1);

  std::string a_text = "12", b_text = "4", c_text = "-2", vp_text;
  auto* fam = ex->add_subcommand("family", "Build the product family");
  fam->add_option("--a", a_text)->required();
  fam->add_option("--b", b_text)->required();
  fam->add_option("--c", c_text)->required();
  fam->add_option("--verify-point", vp_text, "x0,y1,y2");
  add_common(fam, common, false);
  fam->callback([&] {
    action = [&] {
      std::optional<FiberPoint> pt;
      if (!vp_text.empty()) {
        auto v = parse_list(vp_text, 3, "--verify-point");
        pt = FiberPoint{v[0], v[1], v[2]};
      }
      emit(out, common.out_path,
           dump(family_report(parse_rational(a_text), parse_rational(b_text), parse_rational(c_text), pt)));
    };
  });

  std::string x_text, y1_text, y2_text;
  auto* vpt = ex->add_subcommand("verify-point", "Check a point on the product family");
  vpt->add_option("--a", a_text, "default 12");
  vpt->add_option("--b", b_text, "default 4");
  vpt->add_option("--c", c_text, "default -2");
  vpt->add_option("--x", x_text)->required();
  vpt->add_option("--y1", y1_text)->required();
  vpt->add_option("--y2", y2_text)->required();
  add_common(vpt, common, false);
  vpt->callback([&] {
    action = [&] {
      FiberPoint pt{parse_rational(x_text), parse_rational(y1_text), parse_rational(y2_text)};
      emit(out, common.out_path,
           dump(family_report(parse_rational(a_text), parse_rational(b_text), parse_rational(c_text), pt)));
    };
  });

  std::string coeff_text;
  auto* sq = ex->add_subcommand("square", "Curves from x f(x), f(x), f(x^2)");
  sq->add_option("--coeffs", coeff_text, "f0,f1,f2,f3,f4 (constant term first)")->required();
  add_common(sq, common, false);
  sq->callback([&] {
    action = [&] {
      const QPoly f(parse_list(coeff_text, 5, "--coeffs"));
      emit(out, common.out_path, dump(to_json(verify_square_family(f))));
    };
  });

  try {
    common.workers = workers_from_env();
  } catch (const Error& e) {
    err << "cctk: " << e.what() << '\n';
    return InputError;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Ok : InputError;
  }

  try {
    if (action) action();
    return Ok;
  } catch (const Error& e) {
    err << "cctk: " << e.what() << '\n';
    return precision_refusal(e.code()) ? PrecisionRefusal : InputError;
  } catch (const Json::exception& e) {
    err << "cctk: bad input: " << e.what() << '\n';
    return InputError;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace cctk::cli
