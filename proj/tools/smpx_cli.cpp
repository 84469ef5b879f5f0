// Command-line front end. Talks to the library only through smpx.h.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "smpx/smpx.h"

namespace {

int fail(smpx_status st) {
  std::cerr << "smpx: " << smpx_last_error() << "\n";
  return static_cast<int>(st);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

// Options shared by `run` and `verify`; each maps onto one config field.
struct RunFlags {
  std::string config;
  std::string instance_file;
  std::string kind;
  std::string params;
  std::int64_t instance_seed = -1;
  std::string solver;
  std::string oracle;
  long long t = 0;
  long long k = 0;
  std::string stepsize;
  long long seeds = 0;
  long long base_seed = -1;
  std::string checkpoints;
  long long probes = -1;
  bool timing = false;
  std::string csv;
  std::string json;
  std::vector<std::string> sets;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "Experiment config file (JSON)");
  cmd->add_option("--instance", f.instance_file, "Instance file");
  cmd->add_option("--kind", f.kind, "Builtin instance kind");
  cmd->add_option("--params", f.params, "Generator parameters (JSON object)");
  cmd->add_option("--instance-seed", f.instance_seed, "Generator seed");
  cmd->add_option("--solver", f.solver, "smp | rmsa");
  cmd->add_option("--oracle", f.oracle, "stochastic | exact");
  cmd->add_option("-t,--steps", f.t, "Horizon t");
  cmd->add_option("-k,--average", f.k, "Oracle averaging k");
  cmd->add_option("--stepsize", f.stepsize, "auto | explicit gamma");
  cmd->add_option("--seeds", f.seeds, "Number of seeds");
  cmd->add_option("--base-seed", f.base_seed, "Base seed");
  cmd->add_option("--checkpoints", f.checkpoints, "geometric, a JSON list or comma-separated steps");
  cmd->add_option("--probes", f.probes, "Random probes for Err_vi (0 = off)");
  cmd->add_flag("--timing", f.timing, "Record wall time in the CSV");
  cmd->add_option("--csv", f.csv, "CSV output path");
  cmd->add_option("--json", f.json, "JSON sidecar path");
  cmd->add_option("--set", f.sets, "key=json overrides (repeatable)");
}

smpx_status build_config(const RunFlags& f, smpx_config** cfg) {
  smpx_status st;
  if (!f.config.empty()) {
    st = smpx_config_load(f.config.c_str(), cfg);
  } else {
    std::string inst;
    if (!f.instance_file.empty())
      inst = "{\"file\":" + quote(f.instance_file) + "}";
    else
      inst = "{\"kind\":" + quote(f.kind.empty() ? "eig_min" : f.kind) + "}";
    st = smpx_config_parse(("{\"instance\":" + inst + "}").c_str(), cfg);
  }
  if (st != SMPX_OK) return st;

  std::vector<std::pair<std::string, std::string>> sets;
  if (!f.config.empty() && !f.instance_file.empty())
    sets.emplace_back("instance", "{\"file\":" + quote(f.instance_file) + "}");
  if (!f.config.empty() && !f.kind.empty())
    sets.emplace_back("instance", "{\"kind\":" + quote(f.kind) + "}");
  if (!f.params.empty()) sets.emplace_back("instance.params", f.params);
  if (f.instance_seed >= 0) sets.emplace_back("instance.seed", std::to_string(f.instance_seed));
  if (!f.solver.empty()) sets.emplace_back("solver", quote(f.solver));
  if (!f.oracle.empty()) sets.emplace_back("oracle", quote(f.oracle));
  if (f.t > 0) sets.emplace_back("t", std::to_string(f.t));
  if (f.k > 0) sets.emplace_back("k", std::to_string(f.k));
  if (!f.stepsize.empty())
    sets.emplace_back("stepsize", f.stepsize == "auto" ? quote("auto") : f.stepsize);
  if (f.seeds > 0 || f.base_seed >= 0) {
    const long long base = f.base_seed >= 0 ? f.base_seed : 0;
    const long long n = f.seeds > 0 ? f.seeds : 1;
    sets.emplace_back("seeds", "{\"base\":" + std::to_string(base) +
                                   ",\"count\":" + std::to_string(n) + "}");
  }
  if (f.checkpoints == "geometric")
    sets.emplace_back("checkpoints", quote("geometric"));
  else if (!f.checkpoints.empty() && f.checkpoints.front() == '[')
    sets.emplace_back("checkpoints", f.checkpoints);
  else if (!f.checkpoints.empty())  // comma-separated list
    sets.emplace_back("checkpoints", "[" + f.checkpoints + "]");
  if (f.probes >= 0) sets.emplace_back("probes", std::to_string(f.probes));
  if (f.timing) sets.emplace_back("record_timing", "true");
  if (!f.csv.empty()) sets.emplace_back("output.csv", quote(f.csv));
  if (!f.json.empty()) sets.emplace_back("output.json", quote(f.json));
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "smpx: --set expects key=value\n";
      return SMPX_ERR_CONFIG;
    }
    sets.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  for (const auto& [key, value] : sets) {
    st = smpx_config_set(*cfg, key.c_str(), value.c_str());
    if (st != SMPX_OK) return st;
  }
  return SMPX_OK;
}

void print_summary(const smpx_result* res) {
  std::printf("%10s %14s %14s %14s %14s\n", "t", "mean_err_N", "median", "K0*", "K1*");
  for (size_t i = 0; i < smpx_result_num_checkpoints(res); ++i) {
    size_t t = 0;
    double mean = 0, median = 0, k0 = 0, k1 = 0;
    smpx_result_row(res, i, &t, &mean, &median, &k0, &k1);
    std::printf("%10zu %14.6e %14.6e %14.6e %14.6e\n", t, mean, median, k0, k1);
  }
  std::printf("gamma = %.6e\n", smpx_result_gamma(res));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic Mirror-Prox experiments"};
  app.set_version_flag("--version", std::string(smpx_version()));
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate an instance file");
  std::string g_kind, g_params, g_out;
  std::uint64_t g_seed = 0;
  gen->add_option("--kind", g_kind, "Instance kind")->required();
  gen->add_option("--params", g_params, "Generator parameters (JSON object)");
  gen->add_option("--seed", g_seed, "Generator seed");
  gen->add_option("-o,--out", g_out, "Output file (stdout if omitted)");

  // run / verify
  RunFlags run_flags, verify_flags;
  auto* run = app.add_subcommand("run", "Run an experiment");
  add_run_flags(run, run_flags);
  run->add_flag("--quiet", "Do not print the summary");

  auto* verify = app.add_subcommand("verify", "Run and check the bound (exit 4 on failure)");
  add_run_flags(verify, verify_flags);
  double v_slope_lo = 0.0, v_slope_hi = 0.0;
  std::size_t v_t_lo = 1, v_t_hi = static_cast<std::size_t>(-1);
  verify->add_option("--slope-min", v_slope_lo, "Lower end of the accepted slope range");
  verify->add_option("--slope-max", v_slope_hi, "Upper end of the accepted slope range");
  verify->add_option("--t-lo", v_t_lo, "Slope fit range start");
  verify->add_option("--t-hi", v_t_hi, "Slope fit range end");

  // slope
  auto* slope = app.add_subcommand("slope", "Log-log slope of a results CSV column");
  std::string s_csv, s_col = "err_nash";
  std::size_t s_lo = 1, s_hi = static_cast<std::size_t>(-1);
  slope->add_option("--csv", s_csv, "Results CSV")->required();
  slope->add_option("--column", s_col, "Column (err_nash, lmax_1, pos:lmax_1, ...)");
  slope->add_option("--t-lo", s_lo, "Fit range start");
  slope->add_option("--t-hi", s_hi, "Fit range end");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(SMPX_ERR_CONFIG);
  }

  if (gen->parsed()) {
    smpx_instance* inst = nullptr;
    auto st = smpx_instance_generate(g_kind.c_str(), g_params.c_str(), g_seed, &inst);
    if (st != SMPX_OK) return fail(st);
    if (g_out.empty()) {
      char* text = nullptr;
      st = smpx_instance_to_json(inst, &text);
      if (st == SMPX_OK) {
        std::cout << text << "\n";
        smpx_string_free(text);
      }
    } else {
      st = smpx_instance_save(inst, g_out.c_str());
    }
    smpx_instance_free(inst);
    return st == SMPX_OK ? 0 : fail(st);
  }

  if (run->parsed() || verify->parsed()) {
    const bool is_verify = verify->parsed();
    smpx_config* cfg = nullptr;
    auto st = build_config(is_verify ? verify_flags : run_flags, &cfg);
    if (st != SMPX_OK) {
      smpx_config_free(cfg);
      return fail(st);
    }
    smpx_result* res = nullptr;
    st = smpx_run(cfg, &res);
    smpx_config_free(cfg);
    if (st != SMPX_OK) return fail(st);
    if (!is_verify && run->count("--quiet") == 0) print_summary(res);
    if (is_verify) {
      print_summary(res);
      st = smpx_result_verify(res, v_slope_lo, v_slope_hi, v_t_lo, v_t_hi);
      if (st == SMPX_OK)
        std::cout << "verify: PASS\n";
      else
        std::cout << "verify: FAIL (" << smpx_last_error() << ")\n";
    }
    smpx_result_free(res);
    return static_cast<int>(st);
  }

  if (slope->parsed()) {
    double s = 0, lo = 0, hi = 0;
    int degenerate = 0;
    auto st = smpx_csv_slope(s_csv.c_str(), s_col.c_str(), s_lo, s_hi, &s, &lo, &hi, &degenerate);
    if (st != SMPX_OK) return fail(st);
    if (degenerate) {
      std::cout << "slope: undefined (non-positive mean error in range)\n";
      return static_cast<int>(SMPX_ERR_NUMERICAL);
    }
    std::printf("slope %.6f  95%% CI [%.6f, %.6f]\n", s, lo, hi);
    return 0;
  }
  return 0;
}
