#pragma once

// Command implementations behind the chopt executable. Each run_* function
// computes everything in memory and returns the files it wants written;
// emit() performs the writes in order, so output bytes never depend on
// thread scheduling.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "chopt/analytic.hpp"
#include "chopt/io/curve_file.hpp"
#include "chopt/io/format.hpp"
#include "chopt/io/svg_plot.hpp"
#include "chopt/optimizer.hpp"
#include "chopt/reference_table.hpp"
#include "chopt/verify.hpp"

namespace chopt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<std::string> strategies{"hardy"};
  int n = 3;
  int m = 10;
  std::string k;  // "k1,k2,k3,k4"
  std::string metric = "q";
  std::string ratios = "0.005:0.995:199";
  std::string eta = "0.68:1:33";  // a single value or start:stop:count
  std::uint64_t seed = kDefaultSeed;
  std::size_t samples = 10000;
  int kmax_coarse = 32;
  int kmax = kDefaultExponentCeiling;
  std::string out;  // empty or "-" means stdout
  std::string format = "csv";
  std::string cache_dir;
  std::optional<double> tamper_tolerance;
};

/// One file (or stdout when path is empty / "-") and its full contents.
struct Emitted {
  std::string path;
  std::string content;
};

inline void emit(const std::vector<Emitted>& outputs, std::ostream& stdout_stream = std::cout) {
  for (const auto& e : outputs) {
    if (e.path.empty() || e.path == "-") {
      stdout_stream << e.content;
      continue;
    }
    std::ofstream file(e.path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + e.path + "' for writing");
    file << e.content;
    file.close();
    if (!file) throw IoError("failed writing '" + e.path + "'");
  }
}

// ---------------------------------------------------------------------------
// Argument parsing helpers.

inline std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  try {
    if (parts.size() == 1) return {io::parse_double(parts[0])};
    if (parts.size() == 3) {
      const int count = io::parse_int(parts[2]);
      if (count < 1) throw UsageError("grid count must be >= 1");
      return ratio_grid(io::parse_double(parts[0]), io::parse_double(parts[1]), static_cast<std::size_t>(count));
    }
  } catch (const Error& e) {
    throw UsageError(std::string("bad grid '") + spec + "': " + e.what());
  }
  throw UsageError("grid must be VALUE or START:STOP:COUNT, got '" + spec + "'");
}

inline std::vector<double> parse_ratios(const std::string& spec) {
  auto grid = parse_grid(spec);
  for (double r : grid) {
    if (!(r > 0.0 && r <= 1.0)) throw UsageError("ratios must lie in (0, 1], got " + io::format_double(r));
  }
  return grid;
}

inline ExponentQuad parse_quad(const std::string& spec, int kmax) {
  std::vector<int> v;
  std::stringstream ss(spec);
  std::string part;
  try {
    while (std::getline(ss, part, ',')) v.push_back(io::parse_int(part));
    if (v.size() != 4) throw UsageError("--k needs four comma-separated integers");
    return ExponentQuad(v[0], v[1], v[2], v[3], kmax);
  } catch (const Error& e) {
    throw UsageError(std::string("bad --k '") + spec + "': " + e.what());
  }
}

inline Strategy parse_strategy(const std::string& name, const RunConfig& cfg) {
  if (name == "hardy") return Strategy::hardy();
  if (name == "nm") {
    if (cfg.n < 1 || cfg.m < 1 || cfg.n > cfg.kmax || cfg.m > cfg.kmax || cfg.n == cfg.m) {
      throw UsageError("--n and --m must be distinct exponents in [1, kmax]");
    }
    return Strategy::nm(cfg.n, cfg.m);
  }
  if (name == "k") {
    if (cfg.k.empty()) throw UsageError("strategy k needs --k a,b,c,d");
    return Strategy::k(parse_quad(cfg.k, cfg.kmax));
  }
  if (name == "ksearch") return Strategy::ksearch();
  if (name == "maxq") return Strategy::maxq();
  if (name == "mineta") return Strategy::mineta();
  throw UsageError("unknown strategy '" + name + "'");
}

inline OptimizerSettings optimizer_settings(const RunConfig& cfg) {
  OptimizerSettings s;
  s.seed = cfg.seed;
  s.sample_count = cfg.samples;
  try {
    s.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return s;
}

inline SearchSettings search_settings(const RunConfig& cfg) {
  SearchSettings s;
  s.coarse_kmax = cfg.kmax_coarse;
  s.full_kmax = cfg.kmax;
  try {
    s.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return s;
}

inline void require_format(const RunConfig& cfg) {
  if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "svg") {
    throw UsageError("--format must be csv, json or svg");
  }
  if (cfg.format == "svg" && (cfg.out.empty() || cfg.out == "-")) throw UsageError("--format svg needs --out PATH");
}

/// Path with its extension replaced, e.g. plot.svg -> plot.maxq.csv.
inline std::string sidecar_path(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  p.replace_extension();
  return p.string() + suffix;
}

inline std::string file_safe(const std::string& name) {
  std::string out;
  for (char c : name) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

// ---------------------------------------------------------------------------
// Results cache: JSON files named by a 64-bit FNV-1a hash of the canonical
// run key. The stored key is compared on load to rule out collisions.

inline std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string curve_cache_key(const RunConfig& cfg, const Strategy& strategy) {
  nlohmann::ordered_json key;
  key["version"] = 1;
  key["command"] = "curve";
  key["strategy"] = strategy.name();
  key["ratios"] = cfg.ratios;
  key["seed"] = cfg.seed;
  key["samples"] = cfg.samples;
  key["kmax_coarse"] = cfg.kmax_coarse;
  key["kmax"] = cfg.kmax;
  return key.dump();
}

inline std::string cache_file(const std::string& dir, const std::string& key) {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(fnv1a(key)));
  return (std::filesystem::path(dir) / name).string();
}

inline std::optional<std::vector<io::CurveRow>> cache_load(const std::string& dir, const std::string& key) {
  if (dir.empty()) return std::nullopt;
  std::ifstream in(cache_file(dir, key));
  if (!in) return std::nullopt;
  try {
    const auto j = nlohmann::ordered_json::parse(in);
    if (j.at("key").get<std::string>() != key) return std::nullopt;
    std::vector<io::CurveRow> rows;
    for (const auto& r : j.at("rows")) rows.push_back(io::row_from_json(r));
    return rows;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline void cache_store(const std::string& dir, const std::string& key, const std::vector<io::CurveRow>& rows) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  nlohmann::ordered_json j;
  j["key"] = key;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) j["rows"].push_back(io::to_json(r));
  emit({{cache_file(dir, key), j.dump() + "\n"}});
}

// ---------------------------------------------------------------------------
// curve

inline std::vector<io::CurveRow> curve_rows(const RunConfig& cfg, const Strategy& strategy) {
  const std::string key = curve_cache_key(cfg, strategy);
  if (auto cached = cache_load(cfg.cache_dir, key)) return *cached;
  const auto records = sweep(parse_ratios(cfg.ratios), strategy, optimizer_settings(cfg), search_settings(cfg));
  auto rows = io::to_rows(records);
  cache_store(cfg.cache_dir, key, rows);
  return rows;
}

inline std::string render_csv(const std::vector<io::CurveRow>& rows) {
  std::ostringstream out;
  io::write_csv(out, rows);
  return out.str();
}

inline std::vector<Emitted> run_curve(const RunConfig& cfg) {
  require_format(cfg);
  if (cfg.metric != "q" && cfg.metric != "eta") throw UsageError("--metric must be q or eta");
  if (cfg.strategies.empty()) throw UsageError("at least one --strategy is required");
  std::vector<Strategy> strategies;
  for (const auto& name : cfg.strategies) strategies.push_back(parse_strategy(name, cfg));
  parse_ratios(cfg.ratios);
  optimizer_settings(cfg);
  search_settings(cfg);
  if (cfg.format != "svg" && strategies.size() > 1) {
    throw UsageError("several strategies need --format svg (one CSV per strategy is written next to the plot)");
  }

  std::vector<std::vector<io::CurveRow>> all;
  for (const auto& s : strategies) all.push_back(curve_rows(cfg, s));

  if (cfg.format == "csv") return {{cfg.out, render_csv(all[0])}};
  if (cfg.format == "json") {
    nlohmann::ordered_json j;
    j["command"] = "curve";
    j["strategy"] = strategies[0].name();
    j["seed"] = cfg.seed;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : all[0]) j["rows"].push_back(io::to_json(r));
    return {{cfg.out, j.dump(2) + "\n"}};
  }

  std::vector<io::Series> series;
  std::vector<Emitted> outputs;
  const bool eta = cfg.metric == "eta";
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    io::Series s{strategies[i].name(), {}};
    for (const auto& r : all[i]) {
      const double y = eta ? r.eta_crit.value_or(std::numeric_limits<double>::quiet_NaN()) : r.q;
      s.points.emplace_back(r.ratio, y);
    }
    series.push_back(std::move(s));
    outputs.push_back({sidecar_path(cfg.out, "." + file_safe(strategies[i].name()) + ".csv"), render_csv(all[i])});
  }
  std::ostringstream svg;
  io::write_svg(svg,
                {eta ? "Threshold detection efficiency" : "CH violation", "alpha/beta", eta ? "eta_crit" : "Q"},
                series);
  outputs.insert(outputs.begin(), {cfg.out, svg.str()});
  return outputs;
}

// ---------------------------------------------------------------------------
// table1

struct TableRow {
  double ratio = 0.0;
  OptimumRecord found;
  OptimumRecord reference;
};

inline std::vector<TableRow> table_rows(const SearchSettings& search) {
  const auto& ref = reference_exponent_table();
  std::vector<TableRow> rows(ref.size());
  parallel_for(ref.size(), [&](std::size_t i) {
    const SchmidtState st = make_state(ref[i].ratio);
    rows[i].ratio = ref[i].ratio;
    rows[i].found = k_search(st, search);
    rows[i].found.ratio = ref[i].ratio;
    rows[i].reference = detail::make_record(st, k_config(st, ref[i].k), Objective::Fixed, ref[i].k);
    rows[i].reference.ratio = ref[i].ratio;
  });
  return rows;
}

inline std::array<double, 4> sines(const MeasurementConfig& c) {
  std::array<double, 4> s{};
  for (std::size_t i = 0; i < 4; ++i) s[i] = std::sin(c[i].phi);
  return s;
}

inline std::vector<Emitted> run_table1(const RunConfig& cfg) {
  require_format(cfg);
  if (cfg.format == "svg") throw UsageError("table1 writes csv or json");
  const auto rows = table_rows(search_settings(cfg));

  std::ostringstream text;
  char line[256];
  std::snprintf(line, sizeof line, "%-6s %-22s %-23s %-10s %-9s | %-22s %-23s %-10s\n", "ratio", "found k",
                "found sin(phi)", "eta_crit", "Q", "reference k", "reference sin(phi)", "eta_crit");
  text << line;
  auto quad_text = [](const OptimumRecord& r) {
    const auto& k = r.k->values();
    char b[64];
    std::snprintf(b, sizeof b, "(%d,%d,%d,%d)", k[0], k[1], k[2], k[3]);
    return std::string(b);
  };
  auto sin_text = [](const OptimumRecord& r) {
    const auto s = sines(r.config);
    char b[64];
    std::snprintf(b, sizeof b, "%.2f %.2f %.2f %.2f", truncate_two_decimals(s[0]), truncate_two_decimals(s[1]),
                  truncate_two_decimals(s[2]), truncate_two_decimals(s[3]));
    return std::string(b);
  };
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-6.2f %-22s %-23s %-10.6f %-9.6f | %-22s %-23s %-10.6f\n", r.ratio,
                  quad_text(r.found).c_str(), sin_text(r.found).c_str(), r.found.report.eta_crit.value_or(NAN),
                  r.found.report.q, quad_text(r.reference).c_str(), sin_text(r.reference).c_str(),
                  r.reference.report.eta_crit.value_or(NAN));
    text << line;
  }
  std::vector<Emitted> outputs{{"-", text.str()}};
  if (cfg.out.empty() || cfg.out == "-") return outputs;

  if (cfg.format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json row;
      row["ratio"] = r.ratio;
      row["k"] = r.found.k->values();
      row["sin_phi"] = sines(r.found.config);
      row["eta_crit"] = r.found.report.eta_crit.value_or(NAN);
      row["q"] = r.found.report.q;
      row["ref_k"] = r.reference.k->values();
      row["ref_sin_phi"] = sines(r.reference.config);
      row["ref_eta_crit"] = r.reference.report.eta_crit.value_or(NAN);
      row["ref_q"] = r.reference.report.q;
      j.push_back(row);
    }
    outputs.push_back({cfg.out, j.dump(2) + "\n"});
    return outputs;
  }
  std::ostringstream csv;
  csv << "ratio,k1,k2,k3,k4,sin1,sin2,sin3,sin4,eta_crit,q,ref_k1,ref_k2,ref_k3,ref_k4,ref_sin1,ref_sin2,ref_sin3,"
         "ref_sin4,ref_eta_crit,ref_q\n";
  for (const auto& r : rows) {
    csv << io::format_double(r.ratio);
    for (const OptimumRecord* rec : {&r.found, &r.reference}) {
      for (int k : rec->k->values()) csv << ',' << k;
      for (double s : sines(rec->config)) csv << ',' << io::format_double(s);
      csv << ',' << io::format_optional(rec->report.eta_crit) << ',' << io::format_double(rec->report.q);
    }
    csv << '\n';
  }
  outputs.push_back({cfg.out, csv.str()});
  return outputs;
}

// ---------------------------------------------------------------------------
// analytic

inline std::vector<Emitted> run_analytic(const RunConfig& cfg) {
  require_format(cfg);
  const auto etas = parse_grid(cfg.eta);
  for (double e : etas) {
    if (!(e > 2.0 / 3.0 && e <= 1.0)) throw UsageError("--eta values must lie in (2/3, 1], got " + io::format_double(e));
  }
  std::vector<FrontierPoint> points(etas.size());
  parallel_for(etas.size(), [&](std::size_t i) { points[i] = max_violation_for_eta(etas[i]); });

  std::ostringstream csv;
  csv << "eta,t,lambda1,ratio\n";
  for (const auto& p : points) {
    csv << io::format_double(p.eta) << ',' << io::format_double(p.t) << ',' << io::format_double(p.lambda) << ','
        << io::format_double(p.state.ratio()) << '\n';
  }
  if (cfg.format == "csv") return {{cfg.out, csv.str()}};
  if (cfg.format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& p : points) {
      j.push_back({{"eta", p.eta}, {"t", p.t}, {"lambda1", p.lambda}, {"ratio", p.state.ratio()}});
    }
    return {{cfg.out, j.dump(2) + "\n"}};
  }
  io::Series lambda{"lambda1", {}}, ratio{"alpha/beta", {}};
  for (const auto& p : points) {
    lambda.points.emplace_back(p.eta, p.lambda);
    ratio.points.emplace_back(p.eta, p.state.ratio());
  }
  std::ostringstream svg;
  io::write_svg(svg, {"Maximal efficiency-corrected violation", "eta", "value"}, {lambda, ratio});
  return {{cfg.out, svg.str()}, {sidecar_path(cfg.out, ".csv"), csv.str()}};
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOutcome {
  std::vector<Emitted> outputs;
  bool passed = true;
};

inline VerifyOutcome run_verify(const RunConfig& cfg) {
  require_format(cfg);
  if (cfg.format == "svg") throw UsageError("verify writes csv (text) or json");
  VerifyOptions options;
  options.seed = cfg.seed;
  options.tolerance_override = cfg.tamper_tolerance;
  const auto checks = run_invariant_suite(options);

  VerifyOutcome outcome;
  std::ostringstream text;
  for (const auto& c : checks) {
    outcome.passed = outcome.passed && c.passed;
    text << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(48) << c.name
         << " residual=" << io::format_double(c.residual) << " tolerance=" << io::format_double(c.tolerance) << '\n';
  }
  text << (outcome.passed ? "all checks passed\n" : "invariant failures detected\n");
  if (cfg.format == "json") {
    nlohmann::ordered_json j;
    j["seed"] = cfg.seed;
    j["passed"] = outcome.passed;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
      j["checks"].push_back({{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"passed", c.passed}});
    }
    outcome.outputs.push_back({cfg.out, j.dump(2) + "\n"});
    if (!cfg.out.empty() && cfg.out != "-") outcome.outputs.insert(outcome.outputs.begin(), {"-", text.str()});
  } else {
    outcome.outputs.push_back({"-", text.str()});
    if (!cfg.out.empty() && cfg.out != "-") outcome.outputs.push_back({cfg.out, text.str()});
  }
  return outcome;
}

}  // namespace chopt::cli
