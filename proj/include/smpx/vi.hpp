#ifndef SMPX_VI_HPP
#define SMPX_VI_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "smpx/geometry.hpp"
#include "smpx/point.hpp"

namespace smpx {

class RandomStream;

enum class ProblemKind { generic, saddle, nash };

using Operator = std::function<DualVector(const Point&)>;

// Monotone v.i.: find z* in Z with <F(z), z* - z> <= 0 for all z in Z.
// lip_L and var_M are the constants of ||F(z) - F(z')||_* <= L ||z - z'|| + M.
struct VIProblem {
  SetupPtr setup;
  Operator op;
  double lip_L = 0.0;
  double var_M = 0.0;
  ProblemKind kind = ProblemKind::generic;
};

using Sampler = std::function<DualVector(const Point&, RandomStream&)>;

// Stochastic oracle Xi(z, zeta). bias_mu / noise_M are the declared
// constants of ||E{Xi - F}||_* <= mu and E{||Xi - F||_*^2} <= M^2;
// `subgaussian` records that E exp{||Xi - F||_*^2 / M^2} <= e also holds.
//
// stepsize_M, when set, is a smaller constant that provably satisfies the
// same two moment conditions (e.g. an almost-sure bound). Stepsize rules
// prefer it; reported bounds use noise_M.
struct StochasticOracle {
  Sampler sample;
  double bias_mu = 0.0;
  double noise_M = 0.0;
  bool subgaussian = false;
  std::optional<double> stepsize_M;

  double effective_M() const { return stepsize_M.value_or(noise_M); }
};

// Xi = F, mu = M = 0.
StochasticOracle exact_oracle(const VIProblem& problem);

// Saddle point v.i. over Z = X x Y. primal_value is phi_bar(x) = max_y phi,
// dual_value is phi_lower(y) = min_x phi.
struct SaddleInstance {
  VIProblem problem;
  std::size_t x_arity = 1;
  std::function<double(const Point& x)> primal_value;
  std::function<double(const Point& y)> dual_value;
  std::optional<double> optimum;
};

struct ErrViBound {
  double value;
  std::size_t probes;
};

// max over probes u of <F(u), z - u>: a certified lower bound on Err_vi(z).
ErrViBound err_vi_lower(const VIProblem& problem, const Point& z,
                        std::span<const Point> probes);

// Caches F(u) and <F(u), u> for a fixed probe set.
class ProbeEvaluator {
 public:
  ProbeEvaluator(const VIProblem& problem, std::vector<Point> probes);
  ErrViBound operator()(const Point& z) const;
  std::size_t size() const { return probes_.size(); }

 private:
  std::vector<Point> probes_;
  std::vector<DualVector> values_;
  std::vector<double> offsets_;
};

// Center, extreme points, then n_random seeded random points of Z.
std::vector<Point> default_probes(const ProxSetup& setup, std::uint64_t seed,
                                  std::size_t n_random = 100);

// Err_N(x, y) = [phi_bar(x) - Opt] + [Opt - phi_lower(y)].
double err_nash_saddle(const SaddleInstance& inst, const Point& z);

struct OracleStats {
  double bias;           // ||mean(Xi - F)||_*
  double second_moment;  // mean ||Xi - F||_*^2
};

OracleStats oracle_stats(const StochasticOracle& oracle, const VIProblem& problem,
                         const Point& z, std::size_t n_samples, std::uint64_t seed);

struct RegularityReport {
  double min_monotone_gap;   // min <F(z) - F(z'), z - z'>
  double max_lipschitz_excess;  // max ||F(z)-F(z')||_* - L||z-z'|| - M
  std::size_t pairs;
};

// Sampled checks of monotonicity and of the (L, M) regularity bound.
RegularityReport check_regularity(const VIProblem& problem, std::size_t pairs,
                                  std::uint64_t seed);

}  // namespace smpx

#endif
