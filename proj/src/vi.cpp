#include "smpx/vi.hpp"

#include <algorithm>
#include <limits>

#include "smpx/error.hpp"
#include "smpx/rng.hpp"

namespace smpx {

StochasticOracle exact_oracle(const VIProblem& problem) {
  StochasticOracle o;
  o.sample = [op = problem.op](const Point& z, RandomStream&) { return op(z); };
  o.subgaussian = true;
  return o;
}

ErrViBound err_vi_lower(const VIProblem& problem, const Point& z,
                        std::span<const Point> probes) {
  if (probes.empty()) throw InputError("err_vi_lower: empty probe set");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& u : probes) best = std::max(best, inner(problem.op(u), z - u));
  return {best, probes.size()};
}

ProbeEvaluator::ProbeEvaluator(const VIProblem& problem, std::vector<Point> probes)
    : probes_(std::move(probes)) {
  if (probes_.empty()) throw InputError("ProbeEvaluator: empty probe set");
  values_.reserve(probes_.size());
  offsets_.reserve(probes_.size());
  for (const auto& u : probes_) {
    values_.push_back(problem.op(u));
    offsets_.push_back(inner(values_.back(), u));
  }
}

ErrViBound ProbeEvaluator::operator()(const Point& z) const {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < probes_.size(); ++i)
    best = std::max(best, inner(values_[i], z) - offsets_[i]);
  return {best, probes_.size()};
}

std::vector<Point> default_probes(const ProxSetup& setup, std::uint64_t seed,
                                  std::size_t n_random) {
  std::vector<Point> out;
  out.push_back(setup.center());
  for (auto& p : setup.extreme_points()) out.push_back(std::move(p));
  RandomStream rng(seed, 0x70726f6265ULL);
  for (std::size_t i = 0; i < n_random; ++i) out.push_back(setup.random_point(rng));
  return out;
}

double err_nash_saddle(const SaddleInstance& inst, const Point& z) {
  const std::size_t nx = inst.x_arity;
  if (z.arity() <= nx) throw InputError("err_nash_saddle: point is not a pair");
  const double p = inst.primal_value(z.slice(0, nx));
  const double d = inst.dual_value(z.slice(nx, z.arity() - nx));
  if (inst.optimum) return (p - *inst.optimum) + (*inst.optimum - d);
  return p - d;
}

OracleStats oracle_stats(const StochasticOracle& oracle, const VIProblem& problem,
                         const Point& z, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) throw InputError("oracle_stats: n_samples must be >= 1");
  const auto f = problem.op(z);
  RandomStream rng(seed);
  Point mean = f.zeros_like();
  double second = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    auto d = oracle.sample(z, rng);
    d -= f;
    const double nd = problem.setup->dual_norm(d);
    second += nd * nd;
    mean += d;
  }
  const double inv = 1.0 / static_cast<double>(n_samples);
  mean *= inv;
  return {problem.setup->dual_norm(mean), second * inv};
}

RegularityReport check_regularity(const VIProblem& problem, std::size_t pairs,
                                  std::uint64_t seed) {
  RandomStream rng(seed);
  RegularityReport r{std::numeric_limits<double>::infinity(),
                     -std::numeric_limits<double>::infinity(), pairs};
  for (std::size_t i = 0; i < pairs; ++i) {
    const auto z = problem.setup->random_point(rng);
    const auto w = problem.setup->random_point(rng);
    const auto df = problem.op(z) - problem.op(w);
    const auto dz = z - w;
    r.min_monotone_gap = std::min(r.min_monotone_gap, inner(df, dz));
    const double excess = problem.setup->dual_norm(df) -
                          problem.lip_L * problem.setup->norm(dz) - problem.var_M;
    r.max_lipschitz_excess = std::max(r.max_lipschitz_excess, excess);
  }
  return r;
}

}  // namespace smpx
