// chopt: sweeps, exponent searches, analytic frontier and invariant checks.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "chopt/cli/commands.hpp"

namespace {

using chopt::cli::RunConfig;

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool flag_present(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

/// Expands --config PATH into --key value pairs placed after the subcommand,
/// skipping keys already given on the command line.
void apply_config_file(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return;
  if (!std::filesystem::is_regular_file(path)) throw chopt::cli::IoError("cannot read config file '" + path + "'");
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_file(path);
  } catch (const CLI::Error& e) {
    throw chopt::cli::UsageError(std::string("bad config file: ") + e.what());
  }
  std::vector<std::string> injected;
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    if (!item.parents.empty()) throw chopt::cli::UsageError("config keys must be flat, got section for '" + item.name + "'");
    const std::string flag = "--" + item.name;
    if (item.name == "config" || flag_present(args, flag)) continue;
    std::string value;
    for (const auto& v : item.inputs) value += (value.empty() ? "" : ",") + v;
    injected.push_back(flag);
    injected.push_back(value);
  }
  const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return a.rfind("-", 0) != 0; });
  const auto at = sub == args.end() ? args.end() : sub + 1;
  args.insert(at, injected.begin(), injected.end());
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--config", "flat key = value file; keys are flag names, flags take precedence");
  sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  sub->add_option("--out", cfg.out, "output path (stdout when omitted)");
  sub->add_option("--format", cfg.format, "csv, json or svg")->capture_default_str();
}

void add_search(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--kmax-coarse", cfg.kmax_coarse, "exhaustive exponent bound")->capture_default_str();
  sub->add_option("--kmax", cfg.kmax, "exponent ceiling for refinement")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string strategy = "hardy";

  CLI::App app{"CH violation and threshold efficiency for two-qubit Schmidt states"};
  app.require_subcommand(1);

  auto* curve = app.add_subcommand("curve", "sweep a strategy over a ratio grid");
  add_common(curve, cfg);
  add_search(curve, cfg);
  curve->add_option("--strategy", strategy, "hardy|nm|k|ksearch|maxq|mineta, comma-separated with --format svg")
      ->capture_default_str();
  curve->add_option("--n", cfg.n, "n for strategy nm")->capture_default_str();
  curve->add_option("--m", cfg.m, "m for strategy nm")->capture_default_str();
  curve->add_option("--k", cfg.k, "k1,k2,k3,k4 for strategy k");
  curve->add_option("--metric", cfg.metric, "q or eta (svg y axis)")->capture_default_str();
  curve->add_option("--ratios", cfg.ratios, "start:stop:count in (0, 1]")->capture_default_str();
  curve->add_option("--samples", cfg.samples, "multistart count for maxq/mineta")->capture_default_str();
  curve->add_option("--cache-dir", cfg.cache_dir, "directory for cached sweep results");

  auto* table1 = app.add_subcommand("table1", "exponent search at the reference ratios");
  add_common(table1, cfg);
  add_search(table1, cfg);

  auto* analytic = app.add_subcommand("analytic", "closed-form maximal violation versus efficiency");
  add_common(analytic, cfg);
  analytic->add_option("--eta", cfg.eta, "value or start:stop:count in (2/3, 1]")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  add_common(verify, cfg);
  verify->add_option("--tamper-tolerance", cfg.tamper_tolerance, "replace every tolerance (test mode)");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    apply_config_file(args);
  } catch (const chopt::cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return chopt::cli::kExitUsage;
  } catch (const chopt::cli::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return chopt::cli::kExitIo;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? chopt::cli::kExitOk : chopt::cli::kExitUsage;
  }
  cfg.strategies = split_commas(strategy);

  try {
    if (curve->parsed()) {
      chopt::cli::emit(chopt::cli::run_curve(cfg));
    } else if (table1->parsed()) {
      chopt::cli::emit(chopt::cli::run_table1(cfg));
    } else if (analytic->parsed()) {
      chopt::cli::emit(chopt::cli::run_analytic(cfg));
    } else {
      const auto outcome = chopt::cli::run_verify(cfg);
      chopt::cli::emit(outcome.outputs);
      if (!outcome.passed) return chopt::cli::kExitFailure;
    }
  } catch (const chopt::cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return chopt::cli::kExitUsage;
  } catch (const chopt::cli::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return chopt::cli::kExitIo;
  } catch (const chopt::Error& e) {
    std::cerr << "error [" << chopt::to_string(e.code()) << "]: " << e.what() << '\n';
    return chopt::cli::kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return chopt::cli::kExitFailure;
  }
  return chopt::cli::kExitOk;
}
