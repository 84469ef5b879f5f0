#include "smpx/eigopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "smpx/error.hpp"

namespace smpx {

namespace {

constexpr double kNuTol = 1e-12;

void check_point(const EigInstance& inst, const Point& z) {
  if (z.arity() != 2) throw InputError("eigopt: expected a point (x, y)");
  if (z.vec(0).size() != inst.n()) throw InputError("eigopt: x has wrong dimension");
  if (!(z.mat(1).structure() == inst.structure()))
    throw InputError("eigopt: y has wrong block structure");
}

double log_n(const EigInstance& inst) { return std::log(static_cast<double>(inst.n())); }
double log_p(const EigInstance& inst) {
  return std::log(static_cast<double>(inst.structure().total()));
}

}  // namespace

EigInstance::EigInstance(std::vector<BlockSymMatrix> a) : a_(std::move(a)) {
  if (a_.size() < 3) throw InputError("eig instance needs A_0 and n >= 2 matrices");
  for (std::size_t j = 1; j < a_.size(); ++j) {
    if (!(a_[j].structure() == a_[0].structure()))
      throw InputError("eig instance: A_" + std::to_string(j) +
                       " has a different block structure");
    a_inf_ = std::max(a_inf_, spectral_norm(a_[j]));
  }
  a0_norm_ = spectral_norm(a_[0]);
}

BlockSymMatrix EigInstance::affine(const Vector& x) const {
  if (x.size() != n()) throw InputError("eig instance: x has wrong dimension");
  BlockSymMatrix m = a_[0];
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] != 0.0) m.axpy(x[j], a_[j + 1]);
  return m;
}

SetupPtr eig_setup(const EigInstance& inst) {
  return product_setup(simplex_setup(inst.n()), spectahedron_setup(inst.structure()),
                       NormWeights{2.0 * log_n(inst), 4.0 * log_p(inst)});
}

DualVector exact_operator(const EigInstance& inst, const Point& z) {
  check_point(inst, z);
  const auto& y = z.mat(1);
  Vector fx(inst.n());
  for (std::size_t j = 0; j < inst.n(); ++j) fx[j] = frob_inner(inst.a(j + 1), y);
  BlockSymMatrix fy = inst.affine(z.vec(0));
  fy *= -1.0;
  return Point(std::vector<Part>{std::move(fx), std::move(fy)});
}

DualVector sample_xi(const EigInstance& inst, const Point& z, RandomStream& stream) {
  check_point(inst, z);
  const auto& x = z.vec(0);
  const auto& y = z.mat(1);

  const std::size_t jj = stream.categorical(x) + 1;

  const std::size_t m = y.num_blocks();
  std::vector<double> nu(m);
  double total = 0.0;
  for (std::size_t l = 0; l < m; ++l) {
    double tr = y.block(l).trace();
    if (tr < -kNuTol)
      throw DomainError("eigopt: block " + std::to_string(l) + " of y has trace " +
                        std::to_string(tr));
    nu[l] = std::max(tr, 0.0);
    total += nu[l];
  }
  if (!(total > 0.0)) throw DomainError("eigopt: y has zero trace");
  for (auto& v : nu) v /= total;
  const std::size_t ii = stream.categorical(nu);

  const double inv = 1.0 / y.block(ii).trace();
  Vector xi_x(inst.n());
  for (std::size_t j = 0; j < inst.n(); ++j)
    xi_x[j] = frob_inner(inst.a(j + 1).block(ii), y.block(ii)) * inv;

  BlockSymMatrix xi_y = inst.a(0);
  xi_y += inst.a(jj);
  xi_y *= -1.0;
  return Point(std::vector<Part>{std::move(xi_x), std::move(xi_y)});
}

Lemma42Constants lemma42_constants(const EigInstance& inst, std::size_t k) {
  if (k < 1) throw ConfigError("lemma42_constants: k must be >= 1");
  if (inst.n() < 3 || inst.structure().total() < 3)
    throw ConfigError("lemma42_constants: requires n >= 3 and p^(1) >= 3");
  const double ln = log_n(inst), lp = log_p(inst);
  Lemma42Constants c;
  c.lip_L = 2.0 * ln + 4.0 * lp;
  c.lip_L_eff = c.lip_L * inst.a_inf();
  c.noise_M = 27.0 * (ln + lp) * inst.a_inf() / std::sqrt(static_cast<double>(k));
  c.noise_M_as = 2.0 * inst.a_inf() * std::sqrt(2.0 * ln + 4.0 * lp);
  c.weights = {2.0 * ln, 4.0 * lp};
  return c;
}

double eig_lipschitz(const EigInstance& inst) {
  return (2.0 * log_n(inst) + 4.0 * log_p(inst)) * inst.a_inf();
}

double eig_sup_bound(const EigInstance& inst, double sigma) {
  const double wx = 2.0 * log_n(inst), wy = 4.0 * log_p(inst);
  const double bx = inst.a_inf() + sigma;
  const double by = inst.a0_norm() + inst.a_inf() + sigma;
  return std::sqrt(wx * bx * bx + wy * by * by);
}

StochasticOracle averaged_oracle(const EigInstance& inst, std::size_t k) {
  if (k < 1) throw ConfigError("averaged_oracle: k must be >= 1");
  StochasticOracle o;
  o.sample = [inst, k](const Point& z, RandomStream& s) {
    if (k == 1) return sample_xi(inst, z, s);
    Point acc = sample_xi(inst, z, s);
    for (std::size_t i = 1; i < k; ++i) acc += sample_xi(inst, z, s);
    acc *= 1.0 / static_cast<double>(k);
    return acc;
  };
  o.bias_mu = 0.0;
  o.subgaussian = true;
  const double m_as = 2.0 * inst.a_inf() *
                      std::sqrt(2.0 * log_n(inst) + 4.0 * log_p(inst));
  if (inst.n() >= 3 && inst.structure().total() >= 3) {
    const auto c = lemma42_constants(inst, k);
    o.noise_M = c.noise_M;
    o.stepsize_M = std::min(c.noise_M, m_as);
  } else {
    o.noise_M = m_as;
  }
  return o;
}

StochasticOracle additive_noise_oracle(const EigInstance& inst, double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw ConfigError("additive_noise_oracle: sigma must be finite and >= 0");
  StochasticOracle o;
  o.sample = [inst, sigma](const Point& z, RandomStream& s) {
    Point g = exact_operator(inst, z);
    if (sigma == 0.0) return g;
    for (auto& v : g.vec(0)) v += sigma * s.rademacher();
    auto& m = g.mat(1);
    for (std::size_t l = 0; l < m.num_blocks(); ++l)
      for (std::size_t i = 0; i < m.block(l).size(); ++i)
        m.block(l)(i, i) += sigma * s.rademacher();
    return g;
  };
  o.bias_mu = 0.0;
  o.noise_M = sigma * std::sqrt(2.0 * log_n(inst) + 4.0 * log_p(inst));
  o.subgaussian = true;
  return o;
}

ObjectiveGap objective_and_gap(const EigInstance& inst, const Point& z) {
  check_point(inst, z);
  const auto& y = z.mat(1);
  const double f = lambda_max(inst.affine(z.vec(0)));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j <= inst.n(); ++j) best = std::min(best, frob_inner(inst.a(j), y));
  const double d = frob_inner(inst.a(0), y) + best;
  return {f, d, f - d};
}

SaddleInstance eig_saddle(const EigInstance& inst) {
  SaddleInstance s;
  s.problem.setup = eig_setup(inst);
  s.problem.op = [inst](const Point& z) { return exact_operator(inst, z); };
  s.problem.lip_L = eig_lipschitz(inst);
  s.problem.var_M = 0.0;
  s.problem.kind = ProblemKind::saddle;
  s.x_arity = 1;
  s.primal_value = [inst](const Point& x) { return lambda_max(inst.affine(x.vec(0))); };
  s.dual_value = [inst](const Point& y) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j <= inst.n(); ++j)
      best = std::min(best, frob_inner(inst.a(j), y.mat(0)));
    return frob_inner(inst.a(0), y.mat(0)) + best;
  };
  return s;
}

}  // namespace smpx
