#ifndef SMPX_EIGOPT_HPP
#define SMPX_EIGOPT_HPP

#include <cstddef>
#include <vector>

#include "smpx/geometry.hpp"
#include "smpx/rng.hpp"
#include "smpx/symmat.hpp"
#include "smpx/vi.hpp"

namespace smpx {

// min_{x in simplex} lambda_max(A_0 + sum_j x_j A_j) as the bilinear saddle
// point problem over simplex(n) x spectahedron(structure).
class EigInstance {
 public:
  // a[0] = A_0, a[1..n] = A_1..A_n. InputError unless n >= 2 and all share
  // one block structure.
  explicit EigInstance(std::vector<BlockSymMatrix> a);

  std::size_t n() const { return a_.size() - 1; }
  const BlockStructure& structure() const { return a_[0].structure(); }
  const BlockSymMatrix& a(std::size_t j) const { return a_[j]; }
  const std::vector<BlockSymMatrix>& matrices() const { return a_; }
  // max_{1<=j<=n} |A_j|_inf (A_0 excluded).
  double a_inf() const { return a_inf_; }
  // |A_0|_inf
  double a0_norm() const { return a0_norm_; }

  // A(x) = A_0 + sum_j x_j A_j
  BlockSymMatrix affine(const Vector& x) const;

 private:
  std::vector<BlockSymMatrix> a_;
  double a_inf_ = 0.0;
  double a0_norm_ = 0.0;
};

// Product geometry with norm weights wx = 2 ln n, wy = 4 ln p^(1).
SetupPtr eig_setup(const EigInstance& inst);

// F(x, y) = [ (Tr(y A_j))_j ; -A(x) ]
DualVector exact_operator(const EigInstance& inst, const Point& z);

// One draw of the randomized oracle: j ~ x, i ~ nu with nu_l = Tr y_l,
//   Xi^x_j = Tr(A_j^i ybar_i), ybar_i = y_i / Tr y_i,   Xi^y = -(A_0 + A_j).
// The index j is drawn first, then i.
DualVector sample_xi(const EigInstance& inst, const Point& z, RandomStream& stream);

struct Lemma42Constants {
  double lip_L;        // 2 ln n + 4 ln p^(1), as stated
  double lip_L_eff;    // lip_L * A_inf
  double noise_M;      // 27 (ln n + ln p^(1)) A_inf / sqrt k
  double noise_M_as;   // 2 A_inf sqrt(2 ln n + 4 ln p^(1)), almost-sure bound
  NormWeights weights;
};

// ConfigError unless n >= 3, p^(1) >= 3 and k >= 1.
Lemma42Constants lemma42_constants(const EigInstance& inst, std::size_t k);

// Oracle averaging k independent sample_xi draws. noise_M is the lemma
// value; stepsize_M is min(lemma, almost-sure bound). For n < 3 or
// p^(1) < 3 only the almost-sure bound applies.
StochasticOracle averaged_oracle(const EigInstance& inst, std::size_t k);

// Xi = F + sigma (eps, D) with eps in {-1, 1}^n and D a diagonal block
// matrix of independent signs. ||Xi - F||_* = sigma sqrt(2 ln n + 4 ln p^(1)).
StochasticOracle additive_noise_oracle(const EigInstance& inst, double sigma);

struct ObjectiveGap {
  double f_value;    // lambda_max(A(x))
  double dual_value; // <A_0, y> + min_j <A_j, y>
  double err_nash;   // f_value - dual_value
};

ObjectiveGap objective_and_gap(const EigInstance& inst, const Point& z);

// Lipschitz constant used for stepsizes: (2 ln n + 4 ln p^(1)) A_inf.
// Valid for every n, p >= 2 since it dominates sqrt(wx wy) A_inf.
double eig_lipschitz(const EigInstance& inst);

// Bound on ||Xi||_* for every draw of sample_xi plus additive noise of
// level sigma (RMSA stepsize constant).
double eig_sup_bound(const EigInstance& inst, double sigma = 0.0);

// Saddle instance with the exact operator and the closed-form gap.
SaddleInstance eig_saddle(const EigInstance& inst);

}  // namespace smpx

#endif
