#include "smpx/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "smpx/error.hpp"
#include "solver_detail.hpp"

namespace smpx {

namespace {

std::vector<std::size_t> resolve_checkpoints(const RunOptions& options, std::size_t t) {
  auto cps = options.checkpoints.empty() ? geometric_checkpoints(t) : options.checkpoints;
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  for (std::size_t c : cps)
    if (c == 0 || c > t)
      throw ConfigError("checkpoint " + std::to_string(c) + " outside 1.." +
                        std::to_string(t));
  return cps;
}

DualVector call_oracle(const StochasticOracle& oracle, const Point& z,
                       RandomStream& stream, std::size_t tau) {
  auto g = oracle.sample(z, stream);
  if (!g.all_finite())
    throw NumericalError("oracle returned non-finite values at step " +
                         std::to_string(tau));
  return g;
}

// Shared driver. `smp` selects the two-call extragradient step; otherwise
// the one-call RMSA step.
RunRecord drive(bool smp, const Point& r0, const VIProblem& problem,
                const StochasticOracle& oracle, const StepsizePolicy& policy,
                RandomStream stream, const RunOptions& options) {
  if (!problem.setup) throw ConfigError("problem has no setup");
  if (policy.horizon == 0) throw ConfigError("horizon t must be >= 1");
  check_feasible(policy, problem.setup->capacity().alpha, problem.lip_L);
  const auto cps = resolve_checkpoints(options, policy.horizon);
  const auto& setup = *problem.setup;
  const double gamma = policy.gamma;

  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.seed = stream.key();
  rec.t = policy.horizon;
  rec.gamma = gamma;

  Point r = r0;
  Point sum = r0.zeros_like();
  std::size_t calls = 0;
  std::size_t next = 0;
  for (std::size_t tau = 1; tau <= policy.horizon; ++tau) {
    auto g = call_oracle(oracle, r, stream, tau);
    ++calls;
    g *= gamma;
    if (smp) {
      Point w = setup.prox(r, g);
      auto gw = call_oracle(oracle, w, stream, tau);
      ++calls;
      gw *= gamma;
      r = setup.prox(r, gw);
      sum += w;
      if (options.on_step) options.on_step(tau, w, r);
    } else {
      r = setup.prox(r, g);
      sum += r;
      if (options.on_step) options.on_step(tau, r, r);
    }
    if (next < cps.size() && cps[next] == tau) {
      Checkpoint cp;
      cp.t = tau;
      cp.z_hat = (1.0 / static_cast<double>(tau)) * sum;
      cp.oracle_calls = calls;
      cp.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
      if (options.evaluate) cp.errors = options.evaluate(cp.z_hat);
      rec.checkpoints.push_back(std::move(cp));
      ++next;
    }
  }
  rec.oracle_calls = calls;
  rec.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return rec;
}

}  // namespace

std::vector<std::size_t> geometric_checkpoints(std::size_t t) {
  std::vector<std::size_t> out;
  for (std::size_t c = 1; c < t; c *= 2) out.push_back(c);
  if (t > 0) out.push_back(t);
  return out;
}

void check_feasible(const StepsizePolicy& policy, double alpha, double lip_L) {
  if (!(policy.gamma > 0.0) || !std::isfinite(policy.gamma))
    throw ConfigError("stepsize gamma must be positive and finite");
  if (lip_L > 0.0) {
    const double cap = alpha / (std::sqrt(3.0) * lip_L);
    if (policy.gamma > cap + 1e-12)
      throw ConfigError("stepsize gamma = " + std::to_string(policy.gamma) +
                        " exceeds alpha/(sqrt(3) L) = " + std::to_string(cap));
  }
}

RunRecord smp_run(const VIProblem& problem, const StochasticOracle& oracle,
                  const StepsizePolicy& policy, RandomStream stream,
                  const RunOptions& options) {
  if (!problem.setup) throw ConfigError("problem has no setup");
  return drive(true, problem.setup->center(), problem, oracle, policy, stream, options);
}

RunRecord smp_run(const VIProblem& problem, const StochasticOracle& oracle,
                  const StepsizePolicy& policy, std::uint64_t seed,
                  const RunOptions& options) {
  auto rec = smp_run(problem, oracle, policy, RandomStream(seed), options);
  rec.seed = seed;
  return rec;
}

RunRecord rmsa_run(const VIProblem& problem, const StochasticOracle& oracle,
                   const StepsizePolicy& policy, RandomStream stream,
                   const RunOptions& options) {
  if (!problem.setup) throw ConfigError("problem has no setup");
  return drive(false, problem.setup->center(), problem, oracle, policy, stream, options);
}

RunRecord rmsa_run(const VIProblem& problem, const StochasticOracle& oracle,
                   const StepsizePolicy& policy, std::uint64_t seed,
                   const RunOptions& options) {
  auto rec = rmsa_run(problem, oracle, policy, RandomStream(seed), options);
  rec.seed = seed;
  return rec;
}

double constant_stepsize(double alpha, double omega_radius, double lip_L,
                         double noise_M, std::size_t t) {
  if (t == 0) throw ConfigError("constant_stepsize: t must be >= 1");
  if (lip_L < 0.0 || noise_M < 0.0)
    throw ConfigError("constant_stepsize: L and M must be nonnegative");
  if (lip_L == 0.0 && noise_M == 0.0)
    throw ConfigError("constant_stepsize: L = M = 0 leaves gamma unconstrained");
  double gamma = std::numeric_limits<double>::infinity();
  if (lip_L > 0.0) gamma = alpha / (std::sqrt(3.0) * lip_L);
  if (noise_M > 0.0)
    gamma = std::min(gamma, alpha * omega_radius / noise_M *
                                std::sqrt(2.0 / (21.0 * static_cast<double>(t))));
  return gamma;
}

double rmsa_stepsize(double alpha, double omega_radius, double m_bar, std::size_t t) {
  if (t == 0) throw ConfigError("rmsa_stepsize: t must be >= 1");
  if (!(m_bar > 0.0)) throw ConfigError("rmsa_stepsize: M_bar must be positive");
  return alpha * omega_radius / (m_bar * std::sqrt(static_cast<double>(t)));
}

TheoreticalBounds theoretical_bounds(double /*alpha*/, double omega_radius, double lip_L,
                                     double noise_M, double bias_mu, std::size_t t) {
  if (t == 0) throw ConfigError("theoretical_bounds: t must be >= 1");
  const double tt = static_cast<double>(t);
  const double o = omega_radius;
  return {1.75 * o * o * lip_L / tt + 7.0 * o * noise_M / std::sqrt(tt) + 2.0 * bias_mu * o,
          3.5 * o * noise_M / std::sqrt(tt)};
}

namespace detail {

RunRecord smp_run_from(const Point& r0, const VIProblem& problem,
                       const StochasticOracle& oracle, const StepsizePolicy& policy,
                       RandomStream stream, const RunOptions& options) {
  return drive(true, r0, problem, oracle, policy, stream, options);
}

RunRecord rmsa_run_from(const Point& r0, const VIProblem& problem,
                        const StochasticOracle& oracle, const StepsizePolicy& policy,
                        RandomStream stream, const RunOptions& options) {
  return drive(false, r0, problem, oracle, policy, stream, options);
}

}  // namespace detail

}  // namespace smpx
