#ifndef SMPX_COMPOSITE_HPP
#define SMPX_COMPOSITE_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "smpx/geometry.hpp"
#include "smpx/rng.hpp"
#include "smpx/symmat.hpp"
#include "smpx/vi.hpp"

namespace smpx {

// Stochastic oracle output for one matrix-valued component: an estimate of
// phi(x) and of its Jacobian (one symmetric matrix per coordinate of x).
struct ComponentSample {
  SymMatrix f;
  std::vector<SymMatrix> jac;
};

// phi: X -> S^p, PSD-convex, with a subgradient selection given as the
// Jacobian list J_i = d phi / d x_i. `sample` may be empty (exact oracle).
struct MatrixComponent {
  std::size_t dim = 0;
  std::function<SymMatrix(const Vector&)> value;
  std::function<std::vector<SymMatrix>(const Vector&)> jacobian;
  std::function<ComponentSample(const Vector&, RandomStream&)> sample;
};

// P_{j l}: p_l x q_j dense block, row-major.
struct Coupling {
  std::size_t component = 0;  // l
  std::size_t block = 0;      // j
  std::vector<double> p;
};

// Composite problem of the matrix-minimax class:
//   min_x max_{y in Y} sum_l <phi_l(x), A_l y + b_l> - Phi_*(y)
// with Y the spectahedron over y_blocks (sizes q_j) and
//   A_l y = sum_j P_{jl} y_j P_{jl}^T.
// x_setup must consume a single dense-vector part.
struct CompositeProblem {
  SetupPtr x_setup;
  BlockStructure y_blocks;
  std::vector<MatrixComponent> components;
  std::vector<Coupling> couplings;
  std::vector<SymMatrix> offsets;  // b_l; empty means all zero
  std::function<double(const BlockSymMatrix&)> phi_star;                // may be empty
  std::function<BlockSymMatrix(const BlockSymMatrix&)> phi_star_grad;    // may be empty
  double lip_x = 0.0;    // L_x
  double noise_x = 0.0;  // M_x
  double lip_y = 0.0;    // L_y
  double noise_y = 0.0;  // M_y
  bool subgaussian = false;
};

// A_l = I mapping y_l to phi_l's space (p_l = q_l): the SDF/SMMP coupling.
std::vector<Coupling> identity_couplings(const BlockStructure& blocks);

// A_l y (+ b_l when with_offset)
SymMatrix apply_coupling(const CompositeProblem& cp, std::size_t l, const BlockSymMatrix& y,
                         bool with_offset = true);
// sum_l A_l^* u_l
BlockSymMatrix apply_adjoint(const CompositeProblem& cp, const std::vector<SymMatrix>& u);

SetupPtr composite_setup(const CompositeProblem& cp);

// F(x, y) = [ sum_l phi_l'(x)^* (A_l y + b_l) ; -sum_l A_l^* phi_l(x) + Phi_*'(y) ]
DualVector composite_operator(const CompositeProblem& cp, const Point& z);
// Same with phi_l and phi_l' replaced by one joint oracle draw.
DualVector composite_oracle(const CompositeProblem& cp, const Point& z, RandomStream& stream);

struct ConstantsAB {
  double a_lower;
  double a_upper;
  double b;
  bool exact;
};

// A = max_{|y|_1 <= 1} sum_l |A_l y|_1 = max_j lambda_max(sum_l P_jl^T P_jl)
// (the maximum of this convex function sits at some +-v v^T), B = sum_l |b_l|_1.
ConstantsAB constants_AB(const CompositeProblem& cp);

struct LipschitzLM {
  double lip_L;
  double noise_M;
};

// L = 5 A Ox Oy [Ox Lx + Mx] + B Ox^2 Lx + Oy^2 Ly,
// M = [2 A Oy + B] Ox Mx + Oy My.
LipschitzLM lipschitz_constants(const CompositeProblem& cp);

struct CompositeVI {
  VIProblem problem;
  StochasticOracle oracle;
};

// Saddle v.i. on the product setup with the constants above.
CompositeVI composite_vi(const CompositeProblem& cp);

// Phi(u) = max_j lambda_max(sum_l P_jl^T u_l P_jl), valid when b = 0 and
// Phi_* = 0.
double smmp_phi(const CompositeProblem& cp, const std::vector<SymMatrix>& u);

// Component psi_l of a semidefinite feasibility system psi_l(x) <= 0 with
// constants (L_l, M_l).
struct SDFComponent {
  MatrixComponent fn;
  double lip_L = 0.0;
  double noise_M = 0.0;
};

struct SDFSystem {
  SetupPtr x_setup;
  std::vector<SDFComponent> components;
  bool subgaussian = false;
};

struct SDFScaled {
  CompositeProblem problem;
  CompositeVI vi;
  std::vector<double> mu_l;
  std::vector<double> beta;
  double mu = 0.0;
  double lip_L = 0.0;   // 10 sqrt(ln sum p) Ox mu (sqrt t + 1)
  double noise_M = 0.0; // 4 sqrt(ln sum p) Ox mu
  double gamma = 0.0;   // 1 / (10 sqrt(3 ln sum p) Ox mu (sqrt t + 1))
  double predicted_bound = 0.0;  // 80 Ox sqrt(ln sum p) mu / sqrt t
};

// mu_l = Ox L_l / sqrt t + M_l, mu = max mu_l, beta_l = mu / mu_l,
// phi_l = beta_l psi_l, L_x = mu sqrt t / Ox, M_x = mu; Y = spectahedron over
// (p_l), A_l y = y_l. ConfigError if every mu_l is zero or some mu_l is zero.
SDFScaled sdf_scale(const SDFSystem& sys, std::size_t t);

}  // namespace smpx

#endif
