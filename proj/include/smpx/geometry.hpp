#ifndef SMPX_GEOMETRY_HPP
#define SMPX_GEOMETRY_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smpx/point.hpp"
#include "smpx/symmat.hpp"

namespace smpx {

class RandomStream;

using DualVector = Point;

// (alpha, Theta, Omega) of a distance-generating function; Omega = sqrt(2 Theta / alpha).
struct Capacity {
  double alpha = 1.0;
  double theta = 0.0;
  double omega_radius = 0.0;
};

// A prox setup bundles a norm on the ambient space, its dual norm, a
// distance-generating function omega that is alpha-strongly convex in that
// norm, and the prox-mapping
//
//   P(z, xi) = argmin_{u in Z} { omega(u) + <xi - omega'(z), u> }.
//
// Setups are immutable and shared through SetupPtr.
class ProxSetup {
 public:
  virtual ~ProxSetup() = default;

  virtual std::string name() const = 0;
  // Number of Point parts this setup consumes.
  virtual std::size_t arity() const = 0;

  virtual double norm(const Point& z) const = 0;
  virtual double dual_norm(const DualVector& xi) const = 0;
  virtual double omega(const Point& z) const = 0;
  // Continuous selection of the subgradient on Z°; DomainError outside Z°.
  virtual DualVector omega_grad(const Point& z) const = 0;
  // V(z, u) = omega(u) - omega(z) - <omega'(z), u - z>
  virtual double bregman(const Point& z, const Point& u) const = 0;
  virtual Point prox(const Point& z, const DualVector& xi) const = 0;

  virtual Capacity capacity() const = 0;
  // z_c = argmin_Z omega
  virtual Point center() const = 0;

  virtual bool contains(const Point& u, double tol = 1e-10) const = 0;
  virtual bool in_interior(const Point& z) const = 0;

  // Random feasible point of Z° (test fixtures, probe sets).
  virtual Point random_point(RandomStream& rng) const = 0;
  // Deterministic "extreme" probes: vertices for the simplex, +-R e_i for the
  // ball, H(+-c E_ii) for the spectahedron.
  virtual std::vector<Point> extreme_points() const = 0;
};

using SetupPtr = std::shared_ptr<const ProxSetup>;

// omega(z) = |z|^2 / 2 on the centered ball of radius R in R^dim.
SetupPtr euclidean_ball(std::size_t dim, double radius = 1.0);
// Entropy on the full standard simplex in R^n, l1 norm. ConfigError if n < 2.
SetupPtr simplex_setup(std::size_t n);
// Matrix entropy on the full spectahedron {z >= 0, Tr z = 1} of the given
// block structure, trace norm. ConfigError if the total size is < 2.
SetupPtr spectahedron_setup(const BlockStructure& blocks);

// Norm weights of a product setup:
//   ||(x, y)||^2 = ||x||^2 / wx + ||y||^2 / wy.
// Defaults are wx = Omega_x^2, wy = Omega_y^2. Larger weights give a weaker
// norm in which the combined omega stays 1-strongly convex.
struct NormWeights {
  double wx;
  double wy;
};

// Combined setup on X x Y with
//   omega(x, y) = omega_x(x) / (alpha_x Omega_x^2) + omega_y(y) / (alpha_y Omega_y^2),
// capacity (1, 1, sqrt 2). ConfigError if a weight is below Omega^2.
SetupPtr product_setup(SetupPtr sx, SetupPtr sy,
                       std::optional<NormWeights> weights = std::nullopt);

// Accessors for product setups (nullptr / throws when not a product).
struct ProductInfo {
  SetupPtr x;
  SetupPtr y;
  double dgf_scale_x;  // alpha_x Omega_x^2
  double dgf_scale_y;
  NormWeights weights;
};
std::optional<ProductInfo> product_info(const ProxSetup& s);

// Free-function forms.
double bregman(const ProxSetup& s, const Point& z, const Point& u);
Point prox(const ProxSetup& s, const Point& z, const DualVector& xi);
Capacity capacity(const ProxSetup& s);

}  // namespace smpx

#endif
