// Command-line driver for the STCMC toolkit. Links the C API only.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "stcmc/stcmc.h"

namespace {

int g_verbosity = 1;  // STCMC_LOG: 0 quiet, 1 info, 2 debug

void info(const std::string& msg) {
  if (g_verbosity >= 1) std::cerr << "[stcmc] " << msg << "\n";
}

void fail(stcmc_status st, const std::string& what) {
  std::cerr << "error (" << what << ", status " << st << "): " << stcmc_last_error_message()
            << "\n";
  std::exit(1);
}

struct ConfigGuard {
  stcmc_config* ptr = nullptr;
  ~ConfigGuard() { stcmc_config_free(ptr); }
};

struct ReportGuard {
  stcmc_report* ptr = nullptr;
  ~ReportGuard() { stcmc_report_free(ptr); }
};

struct CommonOpts {
  int level = 0;
  std::string out;
  long long seed = 0;
  std::string analyses;  // comma list override
};

void apply_overrides(stcmc_config* cfg, const CommonOpts& opts) {
  auto set = [&](const char* key, const std::string& value) {
    if (stcmc_status st = stcmc_config_set(cfg, key, value.c_str()); st != STCMC_OK)
      fail(st, std::string("override ") + key);
  };
  if (opts.level > 0) set("surface.level", std::to_string(opts.level));
  if (!opts.out.empty()) set("output.directory", opts.out);
  if (opts.seed > 0) set("solver.seed", std::to_string(opts.seed));
  if (!opts.analyses.empty()) set("analyses.run", opts.analyses);
}

int run_config(const std::string& path, const CommonOpts& opts, const std::string& forced_analyses) {
  ConfigGuard cfg;
  if (stcmc_status st = stcmc_config_load(path.c_str(), &cfg.ptr); st != STCMC_OK)
    fail(st, "loading " + path);
  CommonOpts effective = opts;
  if (!forced_analyses.empty()) effective.analyses = forced_analyses;
  apply_overrides(cfg.ptr, effective);

  info("running " + path);
  ReportGuard report;
  if (stcmc_status st = stcmc_run(cfg.ptr, &report.ptr); st != STCMC_OK) fail(st, "run");

  if (stcmc_status st = stcmc_report_write(report.ptr, cfg.ptr,
                                           opts.out.empty() ? nullptr : opts.out.c_str());
      st != STCMC_OK)
    fail(st, "writing report");

  const char* json_text = nullptr;
  stcmc_report_json(report.ptr, &json_text);
  const auto report_json = nlohmann::json::parse(json_text);
  for (const auto& [name, body] : report_json.at("analyses").items()) {
    if (body.contains("error"))
      std::cout << name << ": FAILED - " << body["error"]["message"].get<std::string>() << "\n";
    else
      std::cout << name << ": ok\n";
  }
  if (g_verbosity >= 2) std::cerr << json_text << "\n";
  info("digest " + report_json.value("digest", std::string("?")));
  return stcmc_report_ok(report.ptr) ? 0 : 1;
}

int run_check(const std::string& suite, const CommonOpts& opts) {
  ReportGuard report;
  if (stcmc_status st = stcmc_run_suite(suite.c_str(), opts.level,
                                        static_cast<uint64_t>(opts.seed), &report.ptr);
      st != STCMC_OK)
    fail(st, "suite " + suite);
  const char* json_text = nullptr;
  stcmc_report_json(report.ptr, &json_text);
  const auto report_json = nlohmann::json::parse(json_text);
  for (const auto& [group, checks] : report_json.at("checks").items()) {
    for (const auto& c : checks) {
      std::cout << (c["pass"].get<bool>() ? "[PASS] " : "[FAIL] ") << group << "/"
                << c["name"].get<std::string>() << ": value " << c["value"].get<double>()
                << ", reference " << c["reference"].get<double>() << "\n";
    }
  }
  return stcmc_report_ok(report.ptr) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("STCMC_LOG")) g_verbosity = std::atoi(env);

  CLI::App app{"Null geometry, stability and quasi-local energies of discretized 2-surfaces"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string config_path, suite_name = "all";

  auto add_common = [&](CLI::App* cmd, bool with_config) {
    if (with_config)
      cmd->add_option("config", config_path, "TOML configuration file")->required();
    cmd->add_option("--level", opts.level, "override surface.level");
    cmd->add_option("--out", opts.out, "override output directory");
    cmd->add_option("--seed", opts.seed, "override solver.seed");
  };

  auto* analyze = app.add_subcommand("analyze", "run the analyses requested by the config");
  add_common(analyze, true);
  analyze->add_option("--analyses", opts.analyses, "comma-separated analysis list override");

  auto* spectrum = app.add_subcommand("spectrum", "Laplace spectrum of the configured surface");
  add_common(spectrum, true);

  auto* foliate = app.add_subcommand("foliate", "foliation leaf tables for the configured model");
  add_common(foliate, true);

  auto* check = app.add_subcommand("check", "built-in verification suites");
  check->add_option("--suite", suite_name, "round-sphere | schwarzschild | foliation | all");
  check->add_option("--level", opts.level, "mesh level for the suite");
  check->add_option("--seed", opts.seed, "solver seed");

  CLI11_PARSE(app, argc, argv);

  if (analyze->parsed()) return run_config(config_path, opts, "");
  if (spectrum->parsed()) return run_config(config_path, opts, "spectrum");
  if (foliate->parsed()) return run_config(config_path, opts, "foliation");
  if (check->parsed()) return run_check(suite_name, opts);
  return 1;
}
