#ifndef SMPX_BENCH_HPP
#define SMPX_BENCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "smpx/composite.hpp"
#include "smpx/eigopt.hpp"
#include "smpx/solver.hpp"

namespace smpx {

// ---------------------------------------------------------------------------
// Instances

// psi(x) = C0 + sum_i x_i C_i + |x|^2 D / 2 on R^dim (D PSD).
// Oracle: f = psi(x) + sigma_f e0 I, G_i = C_i + x_i D + sigma_g e_i I with
// independent Rademacher e's (no draws when both sigmas are zero).
struct QuadraticComponent {
  SymMatrix c0;
  std::vector<SymMatrix> c;
  SymMatrix d;
  double sigma_f = 0.0;
  double sigma_g = 0.0;
  double lip_L = 0.0;
  double noise_M = 0.0;

  std::size_t size() const { return c0.size(); }
  SymMatrix value(const Vector& x) const;
  std::vector<SymMatrix> jacobian(const Vector& x) const;
};

// Semidefinite feasibility system psi_l(x) <= 0 over the Euclidean ball of
// the given radius.
struct SDFInstance {
  std::size_t dim = 2;
  double radius = 1.0;
  double margin = 0.0;
  Vector x_star;
  std::vector<QuadraticComponent> components;

  BlockStructure structure() const;
};

SDFSystem sdf_system(const SDFInstance& inst);
// lambda_max(psi_l(x)) for each l (unscaled).
std::vector<double> sdf_violations(const SDFInstance& inst, const Vector& x);
// Exact duality gap of min_x max_y sum_l beta_l <psi_l(x), y_l> at (x, y):
// the inner minimum over the ball of a convex quadratic is closed-form.
double sdf_err_nash(const SDFInstance& inst, const std::vector<double>& beta, const Point& z);

struct NoiseSpec {
  std::string model = "xi";  // xi (randomized oracle) | additive
  double sigma = 0.0;
};

struct Instance {
  std::string kind;
  std::uint64_t seed = 0;
  nlohmann::json params = nlohmann::json::object();
  NoiseSpec noise;
  std::optional<EigInstance> eig;
  std::optional<SDFInstance> sdf;
};

// kind in {bilinear_simplex_spectahedron, sdf_system, eig_min, scalar_minimax}.
// ConfigError on unknown kinds, unknown parameter names or invalid sizes.
Instance generate_instance(const std::string& kind, const nlohmann::json& params,
                           std::uint64_t seed);

nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);
void save_instance(const Instance& inst, const std::string& path);
Instance load_instance(const std::string& path);

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentConfig {
  // Either instance_file or (kind, params, instance_seed).
  std::string instance_file;
  std::string kind;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t instance_seed = 0;

  std::string solver = "smp";         // smp | rmsa
  std::string oracle = "stochastic";  // stochastic | exact
  std::size_t t = 1000;
  std::size_t k = 1;
  std::optional<double> gamma;        // explicit stepsize; nullopt = auto
  std::uint64_t base_seed = 0;
  std::vector<std::uint64_t> seeds;   // run indices within base_seed
  std::vector<std::size_t> checkpoints;  // empty = geometric
  std::size_t probes = 0;             // random probes for Err_vi (0 = off)
  bool record_timing = false;
  std::string csv_path;
  std::string json_path;
};

// ConfigError on malformed or inconsistent configs (empty seed list, empty
// explicit checkpoint list, unknown keys, ...).
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::string& path);
// Sets one top-level field from a JSON value ("t", "solver", "seeds", ...).
void config_set(ExperimentConfig& c, const std::string& key, const nlohmann::json& value);

struct ProblemConstants {
  double alpha = 1.0;
  double theta = 1.0;
  double omega = 0.0;
  double lip_L = 0.0;        // used for stepsizes and K0*
  double noise_M = 0.0;      // used for K0* / K1*
  double stepsize_M = 0.0;   // used for the auto stepsize
  double bias_mu = 0.0;
  double a = 0.0;
  double b = 0.0;
  std::optional<double> lip_L_literal;  // eig: 2 ln n + 4 ln p
  std::optional<double> predicted_bound;  // sdf
  std::vector<double> beta;               // sdf
};

// Problem, oracle, evaluator and constants for one instance and horizon.
struct BuiltProblem {
  VIProblem problem;
  StochasticOracle oracle;
  Evaluator evaluate;
  ProblemConstants constants;
  double gamma = 0.0;  // resolved stepsize
  std::vector<std::string> extra_columns;
};

BuiltProblem build_problem(const Instance& inst, const ExperimentConfig& cfg);

struct SummaryRow {
  std::size_t t = 0;
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
  std::optional<double> vi_mean;
  double k0 = 0.0;
  double k1 = 0.0;
  std::vector<double> samples;  // one per seed, seed order
};

struct SummaryTable {
  std::vector<SummaryRow> rows;  // sorted by t
};

// metric: "err_nash", "err_vi", "<extra column>", or "pos:<name>" for the
// positive part of a column.
SummaryTable summarize(const std::vector<RunRecord>& runs,
                       const std::vector<std::string>& extra_columns,
                       const std::string& metric = "err_nash");
// Rows from (t, per-seed samples) pairs.
SummaryTable summarize_samples(std::vector<std::pair<std::size_t, std::vector<double>>> data);

struct SlopeFit {
  double slope = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::size_t points = 0;
  bool degenerate = false;
};

// Least-squares slope of log(mean) on log(t) over rows with t in [t_lo, t_hi];
// 95% bootstrap interval from `resamples` resamples over seeds. ConfigError
// with fewer than 4 rows in range; degenerate (slope NaN) when a mean is
// not positive.
SlopeFit fit_slope(const SummaryTable& table, std::size_t t_lo, std::size_t t_hi,
                   std::size_t resamples = 200, std::uint64_t seed = 0);

// Plain least-squares slope of log y on log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ExperimentResult {
  ExperimentConfig config;
  std::string instance_kind;
  ProblemConstants constants;
  double gamma = 0.0;
  std::vector<std::string> extra_columns;
  std::vector<std::uint64_t> seeds;
  std::vector<RunRecord> runs;  // seed order
  SummaryTable summary;
};

// Runs every seed (concurrently, capped by SMPX_THREADS) and summarizes.
// Writes CSV/JSON when the config names paths.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::string results_csv(const ExperimentResult& r);
nlohmann::json results_json(const ExperimentResult& r);
void write_results(const ExperimentResult& r, const std::string& csv_path,
                   const std::string& json_path);

// Summary of one CSV column (grouped by t_checkpoint) for the `slope` command.
SummaryTable summarize_csv(const std::string& path, const std::string& column);

// Shortest round-trip decimal form.
std::string format_double(double v);

std::string version_string();

}  // namespace smpx

#endif
