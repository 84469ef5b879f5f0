#include "smpx/smpx.h"

#include <cstring>
#include <string>

#include "smpx/bench.hpp"
#include "smpx/error.hpp"

struct smpx_instance {
  smpx::Instance inst;
};
struct smpx_config {
  smpx::ExperimentConfig cfg;
};
struct smpx_result {
  smpx::ExperimentResult res;
};

namespace {

thread_local std::string g_last_error;

template <class F>
smpx_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return SMPX_OK;
  } catch (const smpx::Error& e) {
    g_last_error = e.what();
    return static_cast<smpx_status>(static_cast<int>(e.code()));
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return SMPX_ERR_INPUT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SMPX_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SMPX_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SMPX_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw smpx::InputError(std::string(what) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlohmann::json parse_json(const char* text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw smpx::ConfigError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

extern "C" {

const char* smpx_version(void) {
  static const std::string v = smpx::version_string();
  return v.c_str();
}

const char* smpx_last_error(void) { return g_last_error.c_str(); }

void smpx_string_free(char* s) { delete[] s; }

smpx_status smpx_instance_generate(const char* kind, const char* params_json, uint64_t seed,
                                   smpx_instance** out) {
  return guard([&] {
    require(kind, "kind");
    require(out, "out");
    nlohmann::json params = nlohmann::json::object();
    if (params_json && *params_json) params = parse_json(params_json, "params");
    *out = new smpx_instance{smpx::generate_instance(kind, params, seed)};
  });
}

smpx_status smpx_instance_load(const char* path, smpx_instance** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new smpx_instance{smpx::load_instance(path)};
  });
}

smpx_status smpx_instance_save(const smpx_instance* inst, const char* path) {
  return guard([&] {
    require(inst, "instance");
    require(path, "path");
    smpx::save_instance(inst->inst, path);
  });
}

smpx_status smpx_instance_to_json(const smpx_instance* inst, char** out) {
  return guard([&] {
    require(inst, "instance");
    require(out, "out");
    *out = dup_string(smpx::instance_to_json(inst->inst).dump(1));
  });
}

void smpx_instance_free(smpx_instance* inst) { delete inst; }

smpx_status smpx_config_parse(const char* json_text, smpx_config** out) {
  return guard([&] {
    require(json_text, "json_text");
    require(out, "out");
    *out = new smpx_config{smpx::config_from_json(parse_json(json_text, "config"))};
  });
}

smpx_status smpx_config_load(const char* path, smpx_config** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new smpx_config{smpx::load_config(path)};
  });
}

smpx_status smpx_config_set(smpx_config* cfg, const char* key, const char* json_value) {
  return guard([&] {
    require(cfg, "config");
    require(key, "key");
    require(json_value, "value");
    smpx::config_set(cfg->cfg, key, parse_json(json_value, key));
  });
}

smpx_status smpx_config_to_json(const smpx_config* cfg, char** out) {
  return guard([&] {
    require(cfg, "config");
    require(out, "out");
    *out = dup_string(smpx::config_to_json(cfg->cfg).dump(2));
  });
}

void smpx_config_free(smpx_config* cfg) { delete cfg; }

smpx_status smpx_run(const smpx_config* cfg, smpx_result** out) {
  return guard([&] {
    require(cfg, "config");
    require(out, "out");
    *out = new smpx_result{smpx::run_experiment(cfg->cfg)};
  });
}

smpx_status smpx_result_write(const smpx_result* res, const char* csv_path,
                              const char* json_path) {
  return guard([&] {
    require(res, "result");
    smpx::write_results(res->res, csv_path ? csv_path : "", json_path ? json_path : "");
  });
}

smpx_status smpx_result_csv(const smpx_result* res, char** out) {
  return guard([&] {
    require(res, "result");
    require(out, "out");
    *out = dup_string(smpx::results_csv(res->res));
  });
}

smpx_status smpx_result_json(const smpx_result* res, char** out) {
  return guard([&] {
    require(res, "result");
    require(out, "out");
    *out = dup_string(smpx::results_json(res->res).dump(2));
  });
}

size_t smpx_result_num_checkpoints(const smpx_result* res) {
  return res ? res->res.summary.rows.size() : 0;
}

smpx_status smpx_result_row(const smpx_result* res, size_t i, size_t* t, double* mean,
                            double* median, double* k0, double* k1) {
  return guard([&] {
    require(res, "result");
    const auto& rows = res->res.summary.rows;
    if (i >= rows.size()) throw smpx::InputError("row index out of range");
    const auto& r = rows[i];
    if (t) *t = r.t;
    if (mean) *mean = r.mean;
    if (median) *median = r.median;
    if (k0) *k0 = r.k0;
    if (k1) *k1 = r.k1;
  });
}

double smpx_result_gamma(const smpx_result* res) { return res ? res->res.gamma : 0.0; }

void smpx_result_free(smpx_result* res) { delete res; }

smpx_status smpx_result_slope(const smpx_result* res, size_t t_lo, size_t t_hi, double* slope,
                              double* ci_lo, double* ci_hi, int* degenerate) {
  return guard([&] {
    require(res, "result");
    const auto f = smpx::fit_slope(res->res.summary, t_lo, t_hi);
    if (slope) *slope = f.slope;
    if (ci_lo) *ci_lo = f.ci_lo;
    if (ci_hi) *ci_hi = f.ci_hi;
    if (degenerate) *degenerate = f.degenerate ? 1 : 0;
  });
}

smpx_status smpx_csv_slope(const char* path, const char* column, size_t t_lo, size_t t_hi,
                           double* slope, double* ci_lo, double* ci_hi, int* degenerate) {
  return guard([&] {
    require(path, "path");
    require(column, "column");
    const auto f = smpx::fit_slope(smpx::summarize_csv(path, column), t_lo, t_hi);
    if (slope) *slope = f.slope;
    if (ci_lo) *ci_lo = f.ci_lo;
    if (ci_hi) *ci_hi = f.ci_hi;
    if (degenerate) *degenerate = f.degenerate ? 1 : 0;
  });
}

smpx_status smpx_result_verify(const smpx_result* res, double slope_lo, double slope_hi,
                               size_t t_lo, size_t t_hi) {
  return guard([&] {
    require(res, "result");
    const auto& rows = res->res.summary.rows;
    if (rows.empty()) throw smpx::InputError("result has no checkpoints");
    const auto& last = rows.back();
    if (!(last.mean <= last.k0))
      throw smpx::Error(smpx::ErrorCode::check_failed,
                        "mean Err_N " + smpx::format_double(last.mean) + " at t=" +
                            std::to_string(last.t) + " exceeds K0* " +
                            smpx::format_double(last.k0));
    if (slope_lo < slope_hi) {
      const auto f = smpx::fit_slope(res->res.summary, t_lo, t_hi);
      if (f.degenerate || !(f.slope >= slope_lo && f.slope <= slope_hi))
        throw smpx::Error(smpx::ErrorCode::check_failed,
                          "slope " + smpx::format_double(f.slope) + " outside [" +
                              smpx::format_double(slope_lo) + ", " +
                              smpx::format_double(slope_hi) + "]");
    }
  });
}

smpx_status smpx_constant_stepsize(double alpha, double omega, double lip_L, double noise_M,
                                   size_t t, double* gamma) {
  return guard([&] {
    require(gamma, "gamma");
    *gamma = smpx::constant_stepsize(alpha, omega, lip_L, noise_M, t);
  });
}

smpx_status smpx_theoretical_bounds(double alpha, double omega, double lip_L, double noise_M,
                                    double bias_mu, size_t t, double* k0, double* k1) {
  return guard([&] {
    const auto b = smpx::theoretical_bounds(alpha, omega, lip_L, noise_M, bias_mu, t);
    if (k0) *k0 = b.k0;
    if (k1) *k1 = b.k1;
  });
}

}  // extern "C"
