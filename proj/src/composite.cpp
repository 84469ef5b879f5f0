#include "smpx/composite.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smpx/error.hpp"

namespace smpx {

namespace {

struct Dims {
  std::size_t rows;  // p_l
  std::size_t cols;  // q_j
};

Dims coupling_dims(const CompositeProblem& cp, const Coupling& c) {
  if (c.component >= cp.components.size())
    throw InputError("coupling refers to component " + std::to_string(c.component));
  if (c.block >= cp.y_blocks.num_blocks())
    throw InputError("coupling refers to y block " + std::to_string(c.block));
  Dims d{cp.components[c.component].dim, cp.y_blocks.size(c.block)};
  if (c.p.size() != d.rows * d.cols)
    throw InputError("coupling (" + std::to_string(c.component) + ", " +
                     std::to_string(c.block) + ") has wrong size");
  return d;
}

// P M P^T for P rows x cols, M cols x cols.
SymMatrix congruence(const std::vector<double>& p, Dims d, const SymMatrix& m) {
  std::vector<double> pm(d.rows * d.cols, 0.0);
  for (std::size_t i = 0; i < d.rows; ++i)
    for (std::size_t k = 0; k < d.cols; ++k) {
      const double pik = p[i * d.cols + k];
      if (pik == 0.0) continue;
      for (std::size_t c = 0; c < d.cols; ++c) pm[i * d.cols + c] += pik * m(k, c);
    }
  SymMatrix out(d.rows);
  for (std::size_t i = 0; i < d.rows; ++i)
    for (std::size_t r = i; r < d.rows; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < d.cols; ++c) s += pm[i * d.cols + c] * p[r * d.cols + c];
      out(i, r) = s;
      out(r, i) = s;
    }
  return out;
}

// P^T M P for P rows x cols, M rows x rows.
SymMatrix congruence_t(const std::vector<double>& p, Dims d, const SymMatrix& m) {
  std::vector<double> mp(d.rows * d.cols, 0.0);
  for (std::size_t i = 0; i < d.rows; ++i)
    for (std::size_t k = 0; k < d.rows; ++k) {
      const double mik = m(i, k);
      if (mik == 0.0) continue;
      for (std::size_t c = 0; c < d.cols; ++c) mp[i * d.cols + c] += mik * p[k * d.cols + c];
    }
  SymMatrix out(d.cols);
  for (std::size_t a = 0; a < d.cols; ++a)
    for (std::size_t b = a; b < d.cols; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < d.rows; ++i) s += p[i * d.cols + a] * mp[i * d.cols + b];
      out(a, b) = s;
      out(b, a) = s;
    }
  return out;
}

void check_xy(const CompositeProblem& cp, const Point& z) {
  if (z.arity() != 2) throw InputError("composite: expected a point (x, y)");
  if (!(z.mat(1).structure() == cp.y_blocks))
    throw InputError("composite: y has wrong block structure");
}

void check_component(const MatrixComponent& c, std::size_t l, const SymMatrix& f,
                     const std::vector<SymMatrix>& jac, std::size_t xdim) {
  if (f.size() != c.dim)
    throw InputError("component " + std::to_string(l) + ": value has wrong size");
  if (jac.size() != xdim)
    throw InputError("component " + std::to_string(l) + ": Jacobian has " +
                     std::to_string(jac.size()) + " entries, expected " +
                     std::to_string(xdim));
  for (const auto& j : jac)
    if (j.size() != c.dim)
      throw InputError("component " + std::to_string(l) + ": Jacobian entry has wrong size");
}

DualVector assemble(const CompositeProblem& cp, const Point& z,
                    const std::vector<SymMatrix>& vals,
                    const std::vector<std::vector<SymMatrix>>& jacs) {
  const auto& y = z.mat(1);
  const std::size_t xdim = z.vec(0).size();
  Vector fx(xdim, 0.0);
  for (std::size_t l = 0; l < cp.components.size(); ++l) {
    const SymMatrix u = apply_coupling(cp, l, y);
    for (std::size_t i = 0; i < xdim; ++i) fx[i] += frob_inner(jacs[l][i], u);
  }
  BlockSymMatrix fy = apply_adjoint(cp, vals);
  fy *= -1.0;
  if (cp.phi_star_grad) fy += cp.phi_star_grad(y);
  return Point(std::vector<Part>{std::move(fx), std::move(fy)});
}

}  // namespace

std::vector<Coupling> identity_couplings(const BlockStructure& blocks) {
  std::vector<Coupling> out;
  for (std::size_t l = 0; l < blocks.num_blocks(); ++l) {
    const std::size_t p = blocks.size(l);
    Coupling c{l, l, std::vector<double>(p * p, 0.0)};
    for (std::size_t i = 0; i < p; ++i) c.p[i * p + i] = 1.0;
    out.push_back(std::move(c));
  }
  return out;
}

SymMatrix apply_coupling(const CompositeProblem& cp, std::size_t l, const BlockSymMatrix& y,
                         bool with_offset) {
  SymMatrix out(cp.components.at(l).dim);
  for (const auto& c : cp.couplings) {
    if (c.component != l) continue;
    out += congruence(c.p, coupling_dims(cp, c), y.block(c.block));
  }
  if (with_offset && !cp.offsets.empty()) out += cp.offsets.at(l);
  return out;
}

BlockSymMatrix apply_adjoint(const CompositeProblem& cp, const std::vector<SymMatrix>& u) {
  if (u.size() != cp.components.size()) throw InputError("apply_adjoint: wrong arity");
  BlockSymMatrix out(cp.y_blocks);
  for (const auto& c : cp.couplings)
    out.block(c.block) += congruence_t(c.p, coupling_dims(cp, c), u[c.component]);
  return out;
}

SetupPtr composite_setup(const CompositeProblem& cp) {
  if (!cp.x_setup) throw ConfigError("composite: missing x setup");
  return product_setup(cp.x_setup, spectahedron_setup(cp.y_blocks));
}

DualVector composite_operator(const CompositeProblem& cp, const Point& z) {
  check_xy(cp, z);
  const auto& x = z.vec(0);
  std::vector<SymMatrix> vals;
  std::vector<std::vector<SymMatrix>> jacs;
  for (std::size_t l = 0; l < cp.components.size(); ++l) {
    const auto& c = cp.components[l];
    vals.push_back(c.value(x));
    jacs.push_back(c.jacobian(x));
    check_component(c, l, vals.back(), jacs.back(), x.size());
  }
  return assemble(cp, z, vals, jacs);
}

DualVector composite_oracle(const CompositeProblem& cp, const Point& z, RandomStream& stream) {
  check_xy(cp, z);
  const auto& x = z.vec(0);
  std::vector<SymMatrix> vals;
  std::vector<std::vector<SymMatrix>> jacs;
  for (std::size_t l = 0; l < cp.components.size(); ++l) {
    const auto& c = cp.components[l];
    if (c.sample) {
      auto s = c.sample(x, stream);
      vals.push_back(std::move(s.f));
      jacs.push_back(std::move(s.jac));
    } else {
      vals.push_back(c.value(x));
      jacs.push_back(c.jacobian(x));
    }
    check_component(c, l, vals.back(), jacs.back(), x.size());
  }
  return assemble(cp, z, vals, jacs);
}

ConstantsAB constants_AB(const CompositeProblem& cp) {
  std::vector<SymMatrix> gram;
  for (std::size_t j = 0; j < cp.y_blocks.num_blocks(); ++j)
    gram.emplace_back(cp.y_blocks.size(j));
  for (const auto& c : cp.couplings) {
    const Dims d = coupling_dims(cp, c);
    gram[c.block] += congruence_t(c.p, d, SymMatrix::identity(d.rows));
  }
  double a = 0.0;
  for (const auto& g : gram) a = std::max(a, lambda_max(g));
  double b = 0.0;
  for (const auto& o : cp.offsets) b += trace_norm(o);
  return {a, a, b, true};
}

LipschitzLM lipschitz_constants(const CompositeProblem& cp) {
  if (!cp.x_setup) throw ConfigError("composite: missing x setup");
  const auto ab = constants_AB(cp);
  const double a = ab.a_upper, b = ab.b;
  const double ox = cp.x_setup->capacity().omega_radius;
  const double oy = spectahedron_setup(cp.y_blocks)->capacity().omega_radius;
  const double lx = cp.lip_x, mx = cp.noise_x;
  return {5.0 * a * ox * oy * (ox * lx + mx) + b * ox * ox * lx + oy * oy * cp.lip_y,
          (2.0 * a * oy + b) * ox * mx + oy * cp.noise_y};
}

CompositeVI composite_vi(const CompositeProblem& cp) {
  const auto lm = lipschitz_constants(cp);
  CompositeVI out;
  out.problem.setup = composite_setup(cp);
  out.problem.op = [cp](const Point& z) { return composite_operator(cp, z); };
  out.problem.lip_L = lm.lip_L;
  out.problem.var_M = lm.noise_M;
  out.problem.kind = ProblemKind::saddle;
  out.oracle.sample = [cp](const Point& z, RandomStream& s) {
    return composite_oracle(cp, z, s);
  };
  out.oracle.bias_mu = 0.0;
  out.oracle.noise_M = lm.noise_M;
  out.oracle.subgaussian = cp.subgaussian;
  return out;
}

double smmp_phi(const CompositeProblem& cp, const std::vector<SymMatrix>& u) {
  return lambda_max(apply_adjoint(cp, u));
}

SDFScaled sdf_scale(const SDFSystem& sys, std::size_t t) {
  if (t == 0) throw ConfigError("sdf_scale: t must be >= 1");
  if (!sys.x_setup) throw ConfigError("sdf_scale: missing x setup");
  if (sys.components.empty()) throw ConfigError("sdf_scale: no components");
  const double ox = sys.x_setup->capacity().omega_radius;
  const double st = std::sqrt(static_cast<double>(t));

  SDFScaled out;
  for (const auto& c : sys.components) {
    if (c.lip_L < 0.0 || c.noise_M < 0.0)
      throw ConfigError("sdf_scale: constants must be nonnegative");
    out.mu_l.push_back(ox * c.lip_L / st + c.noise_M);
  }
  out.mu = *std::max_element(out.mu_l.begin(), out.mu_l.end());
  if (!(out.mu > 0.0)) throw ConfigError("sdf_scale: all mu_l are zero");
  for (std::size_t l = 0; l < out.mu_l.size(); ++l) {
    if (!(out.mu_l[l] > 0.0))
      throw ConfigError("sdf_scale: component " + std::to_string(l) +
                        " has L = M = 0 and cannot be scaled");
    out.beta.push_back(out.mu / out.mu_l[l]);
  }

  std::vector<std::size_t> sizes;
  auto& cp = out.problem;
  cp.x_setup = sys.x_setup;
  for (std::size_t l = 0; l < sys.components.size(); ++l) {
    const auto& src = sys.components[l].fn;
    const double b = out.beta[l];
    sizes.push_back(src.dim);
    MatrixComponent mc;
    mc.dim = src.dim;
    mc.value = [f = src.value, b](const Vector& x) { return b * f(x); };
    mc.jacobian = [g = src.jacobian, b](const Vector& x) {
      auto j = g(x);
      for (auto& m : j) m *= b;
      return j;
    };
    if (src.sample)
      mc.sample = [s = src.sample, b](const Vector& x, RandomStream& r) {
        auto o = s(x, r);
        o.f *= b;
        for (auto& m : o.jac) m *= b;
        return o;
      };
    cp.components.push_back(std::move(mc));
  }
  cp.y_blocks = BlockStructure(sizes);
  cp.couplings = identity_couplings(cp.y_blocks);
  cp.lip_x = out.mu * st / ox;
  cp.noise_x = out.mu;
  cp.subgaussian = sys.subgaussian;

  const double lnp = std::log(static_cast<double>(cp.y_blocks.total()));
  out.lip_L = 10.0 * std::sqrt(lnp) * ox * out.mu * (st + 1.0);
  out.noise_M = 4.0 * std::sqrt(lnp) * ox * out.mu;
  out.gamma = 1.0 / (10.0 * std::sqrt(3.0 * lnp) * ox * out.mu * (st + 1.0));
  out.predicted_bound = 80.0 * ox * std::sqrt(lnp) * out.mu / st;

  out.vi = composite_vi(cp);
  out.vi.problem.lip_L = out.lip_L;
  out.vi.problem.var_M = out.noise_M;
  out.vi.oracle.noise_M = out.noise_M;
  return out;
}

}  // namespace smpx
