#include "smpx/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "smpx/error.hpp"

#ifndef SMPX_VERSION_STRING
#define SMPX_VERSION_STRING "0.0.0"
#endif

namespace smpx {

using nlohmann::json;

namespace {

constexpr std::uint64_t kProbeSeedSalt = 0x70726f62ULL;
constexpr std::uint64_t kBootstrapStream = 0x626f6f74ULL;

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << text;
  if (!f) throw IoError("write failed: " + path);
}

std::size_t thread_cap() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SMPX_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) n = static_cast<std::size_t>(v);
  }
  return n;
}

// Linear-interpolation quantile of sorted data.
double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

SummaryRow make_row(std::size_t t, std::vector<double> samples) {
  SummaryRow r;
  r.t = t;
  r.count = samples.size();
  r.samples = samples;
  std::vector<double> s = std::move(samples);
  std::sort(s.begin(), s.end());
  r.mean = s.empty() ? std::numeric_limits<double>::quiet_NaN()
                     : std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  r.median = quantile(s, 0.5);
  r.q10 = quantile(s, 0.1);
  r.q90 = quantile(s, 0.9);
  return r;
}

double metric_value(const Checkpoint& cp, const std::vector<std::string>& extras,
                    const std::string& metric) {
  std::string name = metric;
  bool pos = false;
  if (name.rfind("pos:", 0) == 0) {
    pos = true;
    name = name.substr(4);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double v = nan;
  if (name == "err_nash") {
    v = cp.errors.err_nash.value_or(nan);
  } else if (name == "err_vi" || name == "err_vi_probe") {
    v = cp.errors.err_vi.value_or(nan);
  } else {
    auto it = std::find(extras.begin(), extras.end(), name);
    if (it == extras.end()) throw ConfigError("unknown metric '" + metric + "'");
    const auto idx = static_cast<std::size_t>(it - extras.begin());
    if (idx < cp.errors.extra.size()) v = cp.errors.extra[idx];
  }
  return pos ? std::max(v, 0.0) : v;
}

std::vector<std::uint64_t> parse_seeds(const json& j, std::uint64_t& base) {
  std::vector<std::uint64_t> out;
  base = 0;
  if (j.is_array()) {
    out = j.get<std::vector<std::uint64_t>>();
  } else if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      if (k != "base" && k != "count" && k != "list")
        throw ConfigError("seeds: unknown field '" + k + "'");
    base = j.value("base", std::uint64_t{0});
    if (j.contains("list") == j.contains("count"))
      throw ConfigError("seeds: give exactly one of 'count' or 'list'");
    if (j.contains("list")) {
      out = j.at("list").get<std::vector<std::uint64_t>>();
    } else {
      const auto n = j.at("count").get<std::size_t>();
      for (std::size_t i = 0; i < n; ++i) out.push_back(i);
    }
  } else if (j.is_number_unsigned()) {
    base = j.get<std::uint64_t>();
    out.push_back(0);
  } else {
    throw ConfigError("seeds must be a list, an object or an integer");
  }
  if (out.empty()) throw ConfigError("seed list is empty");
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

ExperimentConfig config_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> keys{"instance", "solver", "oracle", "t", "k",
                                            "stepsize", "seeds", "checkpoints", "probes",
                                            "record_timing", "output"};
    for (const auto& [k, v] : j.items())
      if (!keys.count(k)) throw ConfigError("config: unknown field '" + k + "'");

    ExperimentConfig c;
    if (!j.contains("instance")) throw ConfigError("config: missing 'instance'");
    const auto& in = j.at("instance");
    if (!in.is_object()) throw ConfigError("config: 'instance' must be an object");
    for (const auto& [k, v] : in.items())
      if (k != "file" && k != "kind" && k != "params" && k != "seed")
        throw ConfigError("instance: unknown field '" + k + "'");
    if (in.contains("file")) {
      if (in.contains("kind")) throw ConfigError("instance: give 'file' or 'kind', not both");
      c.instance_file = in.at("file").get<std::string>();
    } else {
      if (!in.contains("kind")) throw ConfigError("instance: missing 'kind' or 'file'");
      c.kind = in.at("kind").get<std::string>();
      c.params = in.value("params", json::object());
      c.instance_seed = in.value("seed", std::uint64_t{0});
    }

    c.solver = j.value("solver", std::string("smp"));
    if (c.solver != "smp" && c.solver != "rmsa")
      throw ConfigError("solver must be 'smp' or 'rmsa'");
    c.oracle = j.value("oracle", std::string("stochastic"));
    if (c.oracle != "stochastic" && c.oracle != "exact")
      throw ConfigError("oracle must be 'stochastic' or 'exact'");
    if (j.contains("t")) {
      if (!j.at("t").is_number_integer() || j.at("t").get<long long>() < 1)
        throw ConfigError("t must be an integer >= 1");
      c.t = j.at("t").get<std::size_t>();
    }
    if (j.contains("k")) {
      if (!j.at("k").is_number_integer() || j.at("k").get<long long>() < 1)
        throw ConfigError("k must be an integer >= 1");
      c.k = j.at("k").get<std::size_t>();
    }
    if (j.contains("stepsize")) {
      const auto& s = j.at("stepsize");
      if (s.is_string()) {
        if (s.get<std::string>() != "auto") throw ConfigError("stepsize must be 'auto' or a number");
      } else if (s.is_number()) {
        c.gamma = s.get<double>();
        if (!(*c.gamma > 0.0) || !std::isfinite(*c.gamma))
          throw ConfigError("stepsize must be positive");
      } else {
        throw ConfigError("stepsize must be 'auto' or a number");
      }
    }
    c.seeds = parse_seeds(j.value("seeds", json{{"base", 0}, {"count", 1}}), c.base_seed);
    if (j.contains("checkpoints")) {
      const auto& cp = j.at("checkpoints");
      if (cp.is_string()) {
        if (cp.get<std::string>() != "geometric")
          throw ConfigError("checkpoints must be 'geometric' or a list");
      } else if (cp.is_array()) {
        if (cp.empty()) throw ConfigError("checkpoint list is empty");
        for (const auto& v : cp) {
          if (!v.is_number_integer() || v.get<long long>() < 1 ||
              v.get<std::size_t>() > c.t)
            throw ConfigError("checkpoints must be integers in 1..t");
          c.checkpoints.push_back(v.get<std::size_t>());
        }
        std::sort(c.checkpoints.begin(), c.checkpoints.end());
        c.checkpoints.erase(std::unique(c.checkpoints.begin(), c.checkpoints.end()),
                            c.checkpoints.end());
      } else {
        throw ConfigError("checkpoints must be 'geometric' or a list");
      }
    }
    c.probes = j.value("probes", std::size_t{0});
    c.record_timing = j.value("record_timing", false);
    if (j.contains("output")) {
      const auto& o = j.at("output");
      for (const auto& [k, v] : o.items())
        if (k != "csv" && k != "json") throw ConfigError("output: unknown field '" + k + "'");
      c.csv_path = o.value("csv", std::string());
      c.json_path = o.value("json", std::string());
    }
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  if (!c.instance_file.empty())
    j["instance"] = {{"file", c.instance_file}};
  else
    j["instance"] = {{"kind", c.kind}, {"params", c.params}, {"seed", c.instance_seed}};
  j["solver"] = c.solver;
  j["oracle"] = c.oracle;
  j["t"] = c.t;
  j["k"] = c.k;
  if (c.gamma)
    j["stepsize"] = *c.gamma;
  else
    j["stepsize"] = "auto";
  j["seeds"] = {{"base", c.base_seed}, {"list", c.seeds}};
  if (c.checkpoints.empty())
    j["checkpoints"] = "geometric";
  else
    j["checkpoints"] = c.checkpoints;
  j["probes"] = c.probes;
  j["record_timing"] = c.record_timing;
  json out = json::object();
  if (!c.csv_path.empty()) out["csv"] = c.csv_path;
  if (!c.json_path.empty()) out["json"] = c.json_path;
  j["output"] = out;
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return config_from_json(j);
}

void config_set(ExperimentConfig& c, const std::string& key, const json& value) {
  json j = config_to_json(c);
  std::string ptr = "/" + key;
  std::replace(ptr.begin(), ptr.end(), '.', '/');
  try {
    j[json::json_pointer(ptr)] = value;
  } catch (const json::exception& e) {
    throw ConfigError("config_set '" + key + "': " + e.what());
  }
  // Keep an explicit checkpoint list consistent with a changed horizon.
  if (key == "t" && j["checkpoints"].is_array()) {
    json kept = json::array();
    for (const auto& v : j["checkpoints"])
      if (v.get<std::size_t>() <= value.get<std::size_t>()) kept.push_back(v);
    j["checkpoints"] = kept.empty() ? json("geometric") : kept;
  }
  c = config_from_json(j);
}

// ---------------------------------------------------------------------------
// Problem construction

BuiltProblem build_problem(const Instance& inst, const ExperimentConfig& cfg) {
  BuiltProblem b;
  auto& k = b.constants;
  const bool exact = cfg.oracle == "exact";
  const std::size_t t = cfg.t;

  if (inst.eig) {
    const auto& e = *inst.eig;
    b.problem = eig_saddle(e).problem;
    const auto cap = b.problem.setup->capacity();
    k.alpha = cap.alpha;
    k.theta = cap.theta;
    k.omega = cap.omega_radius;
    k.lip_L = b.problem.lip_L;
    k.a = 1.0;
    k.b = 0.0;
    if (e.n() >= 3 && e.structure().total() >= 3)
      k.lip_L_literal = lemma42_constants(e, cfg.k).lip_L;
    double sigma = 0.0;
    if (exact) {
      b.oracle = exact_oracle(b.problem);
    } else if (inst.noise.model == "additive") {
      if (cfg.k != 1) throw ConfigError("k must be 1 with the additive noise model");
      sigma = inst.noise.sigma;
      b.oracle = additive_noise_oracle(e, sigma);
    } else {
      b.oracle = averaged_oracle(e, cfg.k);
    }
    k.noise_M = b.oracle.noise_M;
    k.stepsize_M = b.oracle.effective_M();
    if (cfg.gamma) {
      b.gamma = *cfg.gamma;
    } else if (cfg.solver == "smp") {
      b.gamma = constant_stepsize(k.alpha, k.omega, k.lip_L, k.stepsize_M, t);
    } else {
      b.gamma = std::min(rmsa_stepsize(k.alpha, k.omega, eig_sup_bound(e, sigma), t),
                         k.alpha / (std::sqrt(3.0) * k.lip_L));
    }
    std::shared_ptr<const ProbeEvaluator> probes;
    if (cfg.probes > 0)
      probes = std::make_shared<const ProbeEvaluator>(
          b.problem, default_probes(*b.problem.setup, inst.seed ^ kProbeSeedSalt, cfg.probes));
    b.evaluate = [e, probes](const Point& z) {
      CheckpointErrors err;
      err.err_nash = objective_and_gap(e, z).err_nash;
      if (probes) {
        const auto v = (*probes)(z);
        err.err_vi = v.value;
        err.vi_probes = v.probes;
      }
      return err;
    };
    return b;
  }

  if (inst.sdf) {
    const auto& s = *inst.sdf;
    if (cfg.k != 1) throw ConfigError("k must be 1 for sdf_system instances");
    const auto sc = sdf_scale(sdf_system(s), t);
    b.problem = sc.vi.problem;
    b.oracle = exact ? exact_oracle(b.problem) : sc.vi.oracle;
    const auto cap = b.problem.setup->capacity();
    k.alpha = cap.alpha;
    k.theta = cap.theta;
    k.omega = cap.omega_radius;
    k.lip_L = sc.lip_L;
    k.noise_M = exact ? 0.0 : sc.noise_M;
    k.stepsize_M = k.noise_M;
    k.a = 1.0;
    k.b = 0.0;
    k.predicted_bound = sc.predicted_bound;
    k.beta = sc.beta;
    if (cfg.gamma)
      b.gamma = *cfg.gamma;
    else if (cfg.solver == "smp")
      b.gamma = sc.gamma;
    else
      throw ConfigError("rmsa on sdf_system instances needs an explicit stepsize");
    for (std::size_t l = 0; l < s.components.size(); ++l)
      b.extra_columns.push_back("lmax_" + std::to_string(l + 1));
    std::shared_ptr<const ProbeEvaluator> probes;
    if (cfg.probes > 0)
      probes = std::make_shared<const ProbeEvaluator>(
          b.problem, default_probes(*b.problem.setup, inst.seed ^ kProbeSeedSalt, cfg.probes));
    b.evaluate = [s, beta = sc.beta, probes](const Point& z) {
      CheckpointErrors err;
      err.err_nash = sdf_err_nash(s, beta, z);
      err.extra = sdf_violations(s, z.vec(0));
      if (probes) {
        const auto v = (*probes)(z);
        err.err_vi = v.value;
        err.vi_probes = v.probes;
      }
      return err;
    };
    return b;
  }
  throw InputError("instance has no problem data");
}

// ---------------------------------------------------------------------------
// Statistics

SummaryTable summarize(const std::vector<RunRecord>& runs,
                       const std::vector<std::string>& extra_columns,
                       const std::string& metric) {
  SummaryTable table;
  if (runs.empty()) return table;
  const auto& first = runs.front().checkpoints;
  for (std::size_t c = 0; c < first.size(); ++c) {
    std::vector<double> samples, vi;
    for (const auto& r : runs) {
      if (c >= r.checkpoints.size() || r.checkpoints[c].t != first[c].t)
        throw InputError("summarize: runs have different checkpoints");
      samples.push_back(metric_value(r.checkpoints[c], extra_columns, metric));
      if (r.checkpoints[c].errors.err_vi) vi.push_back(*r.checkpoints[c].errors.err_vi);
    }
    auto row = make_row(first[c].t, std::move(samples));
    if (!vi.empty())
      row.vi_mean = std::accumulate(vi.begin(), vi.end(), 0.0) / static_cast<double>(vi.size());
    table.rows.push_back(std::move(row));
  }
  return table;
}

SummaryTable summarize_samples(std::vector<std::pair<std::size_t, std::vector<double>>> data) {
  std::sort(data.begin(), data.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SummaryTable table;
  for (auto& [t, s] : data) table.rows.push_back(make_row(t, std::move(s)));
  return table;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("loglog_slope: need >= 2 points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (!(sxx > 0.0)) throw InputError("loglog_slope: x values coincide");
  return sxy / sxx;
}

SlopeFit fit_slope(const SummaryTable& table, std::size_t t_lo, std::size_t t_hi,
                   std::size_t resamples, std::uint64_t seed) {
  std::vector<const SummaryRow*> rows;
  for (const auto& r : table.rows)
    if (r.t >= t_lo && r.t <= t_hi) rows.push_back(&r);
  if (rows.size() < 4)
    throw ConfigError("fit_slope: need >= 4 checkpoints in [" + std::to_string(t_lo) + ", " +
                      std::to_string(t_hi) + "], have " + std::to_string(rows.size()));
  SlopeFit fit;
  fit.points = rows.size();
  std::vector<double> ts, means;
  for (const auto* r : rows) {
    if (!(r->mean > 0.0) || !std::isfinite(r->mean)) {
      fit.degenerate = true;
      fit.slope = fit.ci_lo = fit.ci_hi = std::numeric_limits<double>::quiet_NaN();
      return fit;
    }
    ts.push_back(static_cast<double>(r->t));
    means.push_back(r->mean);
  }
  fit.slope = loglog_slope(ts, means);

  bool joint = true;
  for (const auto* r : rows) joint = joint && r->samples.size() == rows.front()->samples.size();
  RandomStream rng(seed, kBootstrapStream);
  std::vector<double> slopes;
  std::vector<double> bm(rows.size());
  for (std::size_t b = 0; b < resamples; ++b) {
    std::vector<std::size_t> idx;
    if (joint)
      for (std::size_t i = 0; i < rows.front()->samples.size(); ++i)
        idx.push_back(rng.uniform_index(rows.front()->samples.size()));
    bool ok = true;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto& s = rows[k]->samples;
      if (s.empty()) {
        bm[k] = rows[k]->mean;
        continue;
      }
      double acc = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i)
        acc += s[joint ? idx[i] : rng.uniform_index(s.size())];
      bm[k] = acc / static_cast<double>(s.size());
      ok = ok && bm[k] > 0.0 && std::isfinite(bm[k]);
    }
    if (ok) slopes.push_back(loglog_slope(ts, bm));
  }
  if (slopes.empty()) {
    fit.ci_lo = fit.ci_hi = fit.slope;
  } else {
    std::sort(slopes.begin(), slopes.end());
    fit.ci_lo = quantile(slopes, 0.025);
    fit.ci_hi = quantile(slopes, 0.975);
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Experiments

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.seeds.empty()) throw ConfigError("seed list is empty");
  const Instance inst = cfg.instance_file.empty()
                            ? generate_instance(cfg.kind, cfg.params, cfg.instance_seed)
                            : load_instance(cfg.instance_file);
  const BuiltProblem built = build_problem(inst, cfg);

  ExperimentResult res;
  res.config = cfg;
  res.instance_kind = inst.kind;
  res.constants = built.constants;
  res.gamma = built.gamma;
  res.extra_columns = built.extra_columns;
  res.seeds = cfg.seeds;

  const StepsizePolicy policy{built.gamma, cfg.t};
  check_feasible(policy, built.constants.alpha, built.problem.lip_L);
  RunOptions opts;
  opts.checkpoints = cfg.checkpoints;
  opts.evaluate = built.evaluate;

  const std::size_t n = cfg.seeds.size();
  std::vector<RunRecord> runs(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        RandomStream stream(cfg.base_seed, cfg.seeds[i]);
        runs[i] = cfg.solver == "smp"
                      ? smp_run(built.problem, built.oracle, policy, stream, opts)
                      : rmsa_run(built.problem, built.oracle, policy, stream, opts);
        runs[i].seed = cfg.seeds[i];
        if (!cfg.record_timing) {
          runs[i].wall_ms = 0.0;
          for (auto& cp : runs[i].checkpoints) cp.wall_ms = 0.0;
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t nthreads = std::min(thread_cap(), n);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  res.runs = std::move(runs);
  res.summary = summarize(res.runs, res.extra_columns, "err_nash");
  for (auto& row : res.summary.rows) {
    const auto kb = theoretical_bounds(res.constants.alpha, res.constants.omega,
                                       res.constants.lip_L, res.constants.noise_M,
                                       res.constants.bias_mu, row.t);
    row.k0 = kb.k0;
    row.k1 = kb.k1;
  }
  if (!cfg.csv_path.empty() || !cfg.json_path.empty())
    write_results(res, cfg.csv_path, cfg.json_path);
  return res;
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string results_csv(const ExperimentResult& r) {
  std::string out = "seed,t_checkpoint,err_nash,err_vi_probe,gamma,oracle_calls,wall_ms";
  for (const auto& c : r.extra_columns) out += "," + c;
  out += "\n";
  for (const auto& run : r.runs)
    for (const auto& cp : run.checkpoints) {
      out += std::to_string(run.seed) + "," + std::to_string(cp.t) + ",";
      if (cp.errors.err_nash) out += format_double(*cp.errors.err_nash);
      out += ",";
      if (cp.errors.err_vi) out += format_double(*cp.errors.err_vi);
      out += "," + format_double(run.gamma) + "," + std::to_string(cp.oracle_calls) + "," +
             format_double(r.config.record_timing ? cp.wall_ms : 0.0);
      for (std::size_t i = 0; i < r.extra_columns.size(); ++i) {
        out += ",";
        if (i < cp.errors.extra.size()) out += format_double(cp.errors.extra[i]);
      }
      out += "\n";
    }
  return out;
}

json results_json(const ExperimentResult& r) {
  const auto& k = r.constants;
  json c = {{"alpha", k.alpha}, {"theta", k.theta}, {"omega", k.omega},
            {"L", k.lip_L},     {"M", k.noise_M},   {"M_stepsize", k.stepsize_M},
            {"mu", k.bias_mu},  {"A", k.a},         {"B", k.b}};
  if (k.lip_L_literal) c["L_literal"] = *k.lip_L_literal;
  if (k.predicted_bound) c["predicted_bound"] = *k.predicted_bound;
  if (!k.beta.empty()) c["beta"] = k.beta;
  json rows = json::array();
  for (const auto& row : r.summary.rows) {
    json jr = {{"t", row.t},          {"count", row.count}, {"mean", row.mean},
               {"median", row.median}, {"q10", row.q10},     {"q90", row.q90},
               {"K0", row.k0},         {"K1", row.k1}};
    if (row.vi_mean) jr["err_vi_mean"] = *row.vi_mean;
    rows.push_back(std::move(jr));
  }
  return {{"library", "smpx"},
          {"version", version_string()},
          {"config", config_to_json(r.config)},
          {"instance_kind", r.instance_kind},
          {"gamma", r.gamma},
          {"constants", std::move(c)},
          {"summary", std::move(rows)}};
}

void write_results(const ExperimentResult& r, const std::string& csv_path,
                   const std::string& json_path) {
  if (!csv_path.empty()) write_file(csv_path, results_csv(r));
  if (!json_path.empty()) write_file(json_path, results_json(r).dump(2) + "\n");
}

SummaryTable summarize_csv(const std::string& path, const std::string& column) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
      if (ch == ',') {
        out.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur += ch;
      }
    }
    out.push_back(cur);
    return out;
  };
  const auto header = split(line);
  std::string name = column;
  bool pos = false;
  if (name.rfind("pos:", 0) == 0) {
    pos = true;
    name = name.substr(4);
  }
  const auto tcol = std::find(header.begin(), header.end(), "t_checkpoint");
  const auto vcol = std::find(header.begin(), header.end(), name);
  if (tcol == header.end() || vcol == header.end())
    throw InputError(path + ": missing column '" + name + "' or 't_checkpoint'");
  const auto ti = static_cast<std::size_t>(tcol - header.begin());
  const auto vi = static_cast<std::size_t>(vcol - header.begin());
  std::map<std::size_t, std::vector<double>> groups;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != header.size()) throw InputError(path + ": ragged row");
    if (f[vi].empty()) continue;
    double v = 0.0;
    std::size_t t = 0;
    try {
      t = std::stoull(f[ti]);
      v = std::stod(f[vi]);
    } catch (const std::exception&) {
      throw InputError(path + ": malformed number");
    }
    groups[t].push_back(pos ? std::max(v, 0.0) : v);
  }
  std::vector<std::pair<std::size_t, std::vector<double>>> data(groups.begin(), groups.end());
  return summarize_samples(std::move(data));
}

std::string version_string() { return SMPX_VERSION_STRING; }

}  // namespace smpx
