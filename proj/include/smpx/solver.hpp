#ifndef SMPX_SOLVER_HPP
#define SMPX_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "smpx/rng.hpp"
#include "smpx/vi.hpp"

namespace smpx {

// Constant stepsize gamma_tau = gamma for tau = 1..horizon.
struct StepsizePolicy {
  double gamma = 0.0;
  std::size_t horizon = 0;
};

struct CheckpointErrors {
  std::optional<double> err_nash;
  std::optional<double> err_vi;
  std::optional<std::size_t> vi_probes;
  // Instance-specific extras (e.g. per-constraint violations).
  std::vector<double> extra;
};

using Evaluator = std::function<CheckpointErrors(const Point& z_hat)>;

struct Checkpoint {
  std::size_t t = 0;
  Point z_hat;
  CheckpointErrors errors;
  std::size_t oracle_calls = 0;
  double wall_ms = 0.0;  // elapsed since the run started
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::size_t t = 0;
  double gamma = 0.0;
  std::vector<Checkpoint> checkpoints;
  std::size_t oracle_calls = 0;
  double wall_ms = 0.0;
};

struct RunOptions {
  // Subset of {1..t}; empty means geometric_checkpoints(t).
  std::vector<std::size_t> checkpoints;
  Evaluator evaluate;
  // Observer called after every step with (tau, w_tau, r_tau). For RMSA
  // w_tau is the averaged point's summand r_tau as well.
  std::function<void(std::size_t, const Point&, const Point&)> on_step;
};

// {1, 2, 4, ..., t} (t always included).
std::vector<std::size_t> geometric_checkpoints(std::size_t t);

// Stochastic Mirror-Prox with constant stepsize, started at the setup's
// prox center:
//   w_tau = P(r_{tau-1}, gamma Xi(r_{tau-1})),  r_tau = P(r_{tau-1}, gamma Xi(w_tau)),
//   z_hat_s = (1/s) sum_{tau<=s} w_tau.
// ConfigError if gamma > alpha / (sqrt 3 L); NumericalError (with the step
// index) if the oracle returns non-finite values.
RunRecord smp_run(const VIProblem& problem, const StochasticOracle& oracle,
                  const StepsizePolicy& policy, RandomStream stream,
                  const RunOptions& options = {});
RunRecord smp_run(const VIProblem& problem, const StochasticOracle& oracle,
                  const StepsizePolicy& policy, std::uint64_t seed,
                  const RunOptions& options = {});

// Robust Mirror SA baseline: r_tau = P(r_{tau-1}, gamma Xi(r_{tau-1})),
// z_hat_s = (1/s) sum_{tau<=s} r_tau. One oracle call per step.
RunRecord rmsa_run(const VIProblem& problem, const StochasticOracle& oracle,
                   const StepsizePolicy& policy, RandomStream stream,
                   const RunOptions& options = {});
RunRecord rmsa_run(const VIProblem& problem, const StochasticOracle& oracle,
                   const StepsizePolicy& policy, std::uint64_t seed,
                   const RunOptions& options = {});

// gamma = min[alpha / (sqrt 3 L), (alpha Omega / M) sqrt(2 / (21 t))].
double constant_stepsize(double alpha, double omega_radius, double lip_L,
                         double noise_M, std::size_t t);

// gamma = alpha Omega / (M_bar sqrt t), the RMSA constant stepsize.
double rmsa_stepsize(double alpha, double omega_radius, double m_bar, std::size_t t);

struct TheoreticalBounds {
  double k0;  // (7/4) Omega^2 L / t + 7 Omega M / sqrt t + 2 mu Omega
  double k1;  // (7/2) Omega M / sqrt t
};

TheoreticalBounds theoretical_bounds(double alpha, double omega_radius, double lip_L,
                                     double noise_M, double bias_mu, std::size_t t);

// Throws ConfigError unless 0 < gamma <= alpha / (sqrt 3 L) + 1e-12.
void check_feasible(const StepsizePolicy& policy, double alpha, double lip_L);

}  // namespace smpx

#endif
