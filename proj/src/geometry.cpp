#include "smpx/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "smpx/error.hpp"
#include "smpx/rng.hpp"

namespace smpx {

namespace {

constexpr double kLogFloor = 1e-300;
// Tolerances for recognising points of the simplex / spectahedron.
constexpr double kSumTol = 1e-9;
constexpr double kEigTol = 1e-10;
// Scale of the H(+-c E_ii) spectahedron probes.
constexpr double kProbeLogScale = 10.0;

void check_arity(const ProxSetup& s, const Point& p, const char* what) {
  if (p.arity() != s.arity())
    throw InputError(s.name() + ": " + what + " has arity " +
                     std::to_string(p.arity()) + ", expected " +
                     std::to_string(s.arity()));
}

void check_finite(const Point& xi, const std::string& who) {
  if (!xi.all_finite()) throw InputError(who + ": non-finite dual vector");
}

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

// --- Euclidean ball ------------------------------------------------------------

class EuclideanBall final : public ProxSetup {
 public:
  EuclideanBall(std::size_t dim, double radius) : dim_(dim), radius_(radius) {
    if (dim == 0) throw ConfigError("euclidean ball: dimension must be >= 1");
    if (!(radius > 0.0) || !std::isfinite(radius))
      throw ConfigError("euclidean ball: radius must be positive");
  }

  std::string name() const override { return "euclidean_ball"; }
  std::size_t arity() const override { return 1; }

  double norm(const Point& z) const override {
    check_arity(*this, z, "point");
    return std::sqrt(dot(z.vec(), z.vec()));
  }
  double dual_norm(const DualVector& xi) const override { return norm(xi); }
  double omega(const Point& z) const override { return 0.5 * dot(checked(z), z.vec()); }
  DualVector omega_grad(const Point& z) const override { return Point(checked(z)); }

  double bregman(const Point& z, const Point& u) const override {
    const auto& a = checked(z);
    const auto& b = checked(u);
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return 0.5 * s;
  }

  Point prox(const Point& z, const DualVector& xi) const override {
    const auto& a = checked(z);
    check_arity(*this, xi, "dual vector");
    check_finite(xi, name());
    Vector u(dim_);
    for (std::size_t i = 0; i < dim_; ++i) u[i] = a[i] - xi.vec()[i];
    const double n = std::sqrt(dot(u, u));
    if (n > radius_)
      for (double& e : u) e *= radius_ / n;
    return Point(std::move(u));
  }

  Capacity capacity() const override {
    return {1.0, 0.5 * radius_ * radius_, radius_};
  }
  Point center() const override { return Point(Vector(dim_, 0.0)); }

  bool contains(const Point& u, double tol) const override {
    if (u.arity() != 1 || !std::holds_alternative<Vector>(u.part(0))) return false;
    if (u.vec().size() != dim_) return false;
    return std::sqrt(dot(u.vec(), u.vec())) <= radius_ + tol;
  }
  bool in_interior(const Point& z) const override { return contains(z, 1e-10); }

  Point random_point(RandomStream& rng) const override {
    Vector g(dim_);
    for (double& e : g) e = rng.normal();
    const double n = std::sqrt(dot(g, g));
    const double r = radius_ * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim_));
    for (double& e : g) e *= n > 0.0 ? r / n : 0.0;
    return Point(std::move(g));
  }

  std::vector<Point> extreme_points() const override {
    std::vector<Point> out;
    for (std::size_t i = 0; i < dim_; ++i) {
      for (double s : {1.0, -1.0}) {
        Vector e(dim_, 0.0);
        e[i] = s * radius_;
        out.emplace_back(std::move(e));
      }
    }
    return out;
  }

 private:
  const Vector& checked(const Point& z) const {
    check_arity(*this, z, "point");
    const auto& v = z.vec();
    if (v.size() != dim_) throw InputError("euclidean ball: dimension mismatch");
    if (!contains(z, 1e-10)) throw DomainError("euclidean ball: point outside Z");
    return v;
  }

  std::size_t dim_;
  double radius_;
};

// --- simplex -------------------------------------------------------------------

class Simplex final : public ProxSetup {
 public:
  explicit Simplex(std::size_t n) : n_(n) {
    if (n < 2) throw ConfigError("simplex setup requires N >= 2");
  }

  std::string name() const override { return "simplex"; }
  std::size_t arity() const override { return 1; }

  double norm(const Point& z) const override {
    double s = 0.0;
    for (double e : shaped(z)) s += std::abs(e);
    return s;
  }
  double dual_norm(const DualVector& xi) const override {
    double m = 0.0;
    for (double e : shaped(xi)) m = std::max(m, std::abs(e));
    return m;
  }
  double omega(const Point& z) const override {
    const auto& v = feasible(z);
    double s = 0.0;
    for (double e : v) s += xlogx(e);
    return s;
  }
  DualVector omega_grad(const Point& z) const override {
    const auto& v = interior(z);
    Vector g(n_);
    for (std::size_t j = 0; j < n_; ++j) g[j] = 1.0 + std::log(std::max(v[j], kLogFloor));
    return Point(std::move(g));
  }

  double bregman(const Point& z, const Point& u) const override {
    const auto& a = interior(z);
    const auto& b = feasible(u);
    double s = 0.0, su = 0.0, sz = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (b[j] > 0.0) s += b[j] * (std::log(b[j]) - std::log(std::max(a[j], kLogFloor)));
      su += b[j];
      sz += a[j];
    }
    return s - su + sz;
  }

  Point prox(const Point& z, const DualVector& xi) const override {
    const auto& a = interior(z);
    const auto& g = shaped(xi);
    check_finite(xi, name());
    Vector s(n_);
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n_; ++j) {
      s[j] = std::log(std::max(a[j], kLogFloor)) - g[j];
      m = std::max(m, s[j]);
    }
    double total = 0.0;
    for (double& e : s) {
      e = std::exp(e - m);
      total += e;
    }
    for (double& e : s) e = std::max(e / total, kLogFloor);
    return Point(std::move(s));
  }

  Capacity capacity() const override {
    const double th = std::log(static_cast<double>(n_));
    return {1.0, th, std::sqrt(2.0 * th)};
  }
  Point center() const override {
    return Point(Vector(n_, 1.0 / static_cast<double>(n_)));
  }

  bool contains(const Point& u, double tol) const override {
    if (u.arity() != 1 || !std::holds_alternative<Vector>(u.part(0))) return false;
    const auto& v = u.vec();
    if (v.size() != n_) return false;
    double s = 0.0;
    for (double e : v) {
      if (!(e >= -tol)) return false;
      s += e;
    }
    return std::abs(s - 1.0) <= std::max(tol, kSumTol);
  }
  bool in_interior(const Point& z) const override {
    if (!contains(z, 0.0)) return false;
    for (double e : z.vec())
      if (!(e > 0.0)) return false;
    return true;
  }

  Point random_point(RandomStream& rng) const override {
    Vector v(n_);
    double total = 0.0;
    for (double& e : v) total += (e = -std::log(rng.uniform_open()));
    for (double& e : v) e = std::max(e / total, kLogFloor);
    return Point(std::move(v));
  }

  std::vector<Point> extreme_points() const override {
    std::vector<Point> out;
    for (std::size_t i = 0; i < n_; ++i) {
      Vector e(n_, 0.0);
      e[i] = 1.0;
      out.emplace_back(std::move(e));
    }
    return out;
  }

 private:
  const Vector& shaped(const Point& p) const {
    check_arity(*this, p, "point");
    const auto& v = p.vec();
    if (v.size() != n_) throw InputError("simplex: dimension mismatch");
    return v;
  }
  const Vector& feasible(const Point& u) const {
    const auto& v = shaped(u);
    if (!contains(u, 1e-12)) throw DomainError("simplex: point outside the simplex");
    return v;
  }
  const Vector& interior(const Point& z) const {
    const auto& v = feasible(z);
    for (std::size_t j = 0; j < n_; ++j)
      if (!(v[j] > 0.0))
        throw DomainError("simplex: coordinate " + std::to_string(j) +
                          " is not positive (point not in Z°)");
    return v;
  }

  std::size_t n_;
};

// --- spectahedron --------------------------------------------------------------

class Spectahedron final : public ProxSetup {
 public:
  explicit Spectahedron(BlockStructure blocks) : blocks_(std::move(blocks)) {
    if (blocks_.total() < 2)
      throw ConfigError("spectahedron setup requires total size N >= 2");
  }

  std::string name() const override { return "spectahedron"; }
  std::size_t arity() const override { return 1; }

  double norm(const Point& z) const override { return trace_norm(shaped(z)); }
  double dual_norm(const DualVector& xi) const override {
    return spectral_norm(shaped(xi));
  }

  double omega(const Point& z) const override {
    double s = 0.0;
    for (const auto& e : feasible_eig(z))
      for (double l : e.values) s += xlogx(l);
    return s;
  }

  DualVector omega_grad(const Point& z) const override {
    auto g = log_of(feasible_eig(z));
    for (std::size_t l = 0; l < g.num_blocks(); ++l)
      g.block(l) += SymMatrix::identity(g.block(l).size());
    return Point(std::move(g));
  }

  double bregman(const Point& z, const Point& u) const override {
    const auto log_z = log_of(feasible_eig(z));
    const auto eu = feasible_eig(u);
    double w = 0.0;
    for (const auto& e : eu)
      for (double l : e.values) w += xlogx(l);
    const auto& um = u.mat();
    return w - frob_inner(um, log_z) - (um.trace() - z.mat().trace());
  }

  Point prox(const Point& z, const DualVector& xi) const override {
    const auto log_z = log_of(feasible_eig(z));
    const auto& g = shaped(xi);
    check_finite(xi, name());
    auto a = log_z;
    a -= g;
    return Point(clamped_entropy_map(a));
  }

  Capacity capacity() const override {
    const double th = std::log(static_cast<double>(blocks_.total()));
    return {1.0, th, std::sqrt(2.0 * th)};
  }
  Point center() const override {
    return Point(BlockSymMatrix::identity(blocks_, 1.0 / static_cast<double>(blocks_.total())));
  }

  bool contains(const Point& u, double tol) const override {
    if (u.arity() != 1 || !std::holds_alternative<BlockSymMatrix>(u.part(0))) return false;
    const auto& m = u.mat();
    if (!(m.structure() == blocks_)) return false;
    if (std::abs(m.trace() - 1.0) > std::max(tol, kSumTol)) return false;
    return lambda_min(m) >= -std::max(tol, kEigTol);
  }
  bool in_interior(const Point& z) const override {
    return contains(z, 0.0) && lambda_min(z.mat()) > 0.0;
  }

  Point random_point(RandomStream& rng) const override {
    const std::size_t n = blocks_.total();
    Vector w(n);
    double total = 0.0;
    for (double& e : w) total += (e = -std::log(rng.uniform_open()));
    BlockSymMatrix out(blocks_);
    std::size_t k = 0;
    for (std::size_t l = 0; l < blocks_.num_blocks(); ++l) {
      const auto basis = eigh(random_symmetric(blocks_.size(l), rng));
      std::vector<double> vals(blocks_.size(l));
      for (double& v : vals) v = w[k++] / total;
      out.block(l) = basis.apply([&, i = std::size_t{0}](double) mutable { return vals[i++]; });
    }
    return Point(std::move(out));
  }

  std::vector<Point> extreme_points() const override {
    std::vector<Point> out;
    for (std::size_t l = 0; l < blocks_.num_blocks(); ++l) {
      for (std::size_t i = 0; i < blocks_.size(l); ++i) {
        for (double s : {kProbeLogScale, -kProbeLogScale}) {
          BlockSymMatrix b(blocks_);
          b.block(l)(i, i) = s;
          out.emplace_back(entropy_map(b));
        }
      }
    }
    return out;
  }

 private:
  const BlockSymMatrix& shaped(const Point& p) const {
    check_arity(*this, p, "point");
    const auto& m = p.mat();
    if (!(m.structure() == blocks_))
      throw InputError("spectahedron: block structure mismatch");
    return m;
  }

  // Eigendecomposition of a point of S. Eigenvalues within -1e-10 of zero are
  // accepted (and clamped before logs): they are indistinguishable from
  // round-off in a reconstructed iterate.
  std::vector<SymEigen> feasible_eig(const Point& z) const {
    const auto& m = shaped(z);
    if (std::abs(m.trace() - 1.0) > kSumTol)
      throw DomainError("spectahedron: trace is not 1");
    auto e = eigh(m);
    for (const auto& b : e)
      if (b.values.back() < -kEigTol)
        throw DomainError("spectahedron: matrix is not positive semidefinite");
    return e;
  }

  BlockSymMatrix log_of(const std::vector<SymEigen>& e) const {
    BlockSymMatrix out(blocks_);
    for (std::size_t l = 0; l < e.size(); ++l)
      out.block(l) = e[l].apply([](double v) { return std::log(std::max(v, kLogFloor)); });
    return out;
  }

  BlockSymMatrix clamped_entropy_map(const BlockSymMatrix& a) const {
    const auto e = eigh(a);
    double shift = -std::numeric_limits<double>::infinity();
    for (const auto& b : e) shift = std::max(shift, b.values.front());
    double total = 0.0;
    for (const auto& b : e)
      for (double l : b.values) total += std::exp(l - shift);
    BlockSymMatrix out(blocks_);
    for (std::size_t l = 0; l < e.size(); ++l)
      out.block(l) = e[l].apply(
          [&](double v) { return std::max(std::exp(v - shift) / total, kLogFloor); });
    return out;
  }

  BlockStructure blocks_;
};

// --- product -------------------------------------------------------------------

class Product final : public ProxSetup {
 public:
  Product(SetupPtr sx, SetupPtr sy, std::optional<NormWeights> weights)
      : sx_(std::move(sx)), sy_(std::move(sy)) {
    if (!sx_ || !sy_) throw ConfigError("product setup: null constituent");
    const auto cx = sx_->capacity(), cy = sy_->capacity();
    const double ox2 = cx.omega_radius * cx.omega_radius;
    const double oy2 = cy.omega_radius * cy.omega_radius;
    if (!(ox2 > 0.0) || !(oy2 > 0.0))
      throw ConfigError("product setup: constituent with zero Omega");
    scale_x_ = cx.alpha * ox2;
    scale_y_ = cy.alpha * oy2;
    weights_ = weights.value_or(NormWeights{ox2, oy2});
    if (weights_.wx < ox2 * (1.0 - 1e-12) || weights_.wy < oy2 * (1.0 - 1e-12))
      throw ConfigError("product setup: norm weights must be >= Omega^2 of each factor");
    nx_ = sx_->arity();
    ny_ = sy_->arity();
  }

  std::string name() const override {
    return "product(" + sx_->name() + "," + sy_->name() + ")";
  }
  std::size_t arity() const override { return nx_ + ny_; }

  double norm(const Point& z) const override {
    check_arity(*this, z, "point");
    const double a = sx_->norm(x(z)), b = sy_->norm(y(z));
    return std::sqrt(a * a / weights_.wx + b * b / weights_.wy);
  }
  double dual_norm(const DualVector& xi) const override {
    check_arity(*this, xi, "dual vector");
    const double a = sx_->dual_norm(x(xi)), b = sy_->dual_norm(y(xi));
    return std::sqrt(weights_.wx * a * a + weights_.wy * b * b);
  }
  double omega(const Point& z) const override {
    check_arity(*this, z, "point");
    return sx_->omega(x(z)) / scale_x_ + sy_->omega(y(z)) / scale_y_;
  }
  DualVector omega_grad(const Point& z) const override {
    check_arity(*this, z, "point");
    auto gx = sx_->omega_grad(x(z));
    auto gy = sy_->omega_grad(y(z));
    gx *= 1.0 / scale_x_;
    gy *= 1.0 / scale_y_;
    return Point::pair(gx, gy);
  }
  double bregman(const Point& z, const Point& u) const override {
    check_arity(*this, z, "point");
    check_arity(*this, u, "point");
    return sx_->bregman(x(z), x(u)) / scale_x_ + sy_->bregman(y(z), y(u)) / scale_y_;
  }
  Point prox(const Point& z, const DualVector& xi) const override {
    check_arity(*this, z, "point");
    check_arity(*this, xi, "dual vector");
    auto ex = x(xi);
    auto ey = y(xi);
    ex *= scale_x_;
    ey *= scale_y_;
    return Point::pair(sx_->prox(x(z), ex), sy_->prox(y(z), ey));
  }

  Capacity capacity() const override { return {1.0, 1.0, std::sqrt(2.0)}; }
  Point center() const override { return Point::pair(sx_->center(), sy_->center()); }

  bool contains(const Point& u, double tol) const override {
    if (u.arity() != arity()) return false;
    return sx_->contains(x(u), tol) && sy_->contains(y(u), tol);
  }
  bool in_interior(const Point& z) const override {
    if (z.arity() != arity()) return false;
    return sx_->in_interior(x(z)) && sy_->in_interior(y(z));
  }

  Point random_point(RandomStream& rng) const override {
    auto a = sx_->random_point(rng);
    auto b = sy_->random_point(rng);
    return Point::pair(a, b);
  }

  // Every pairing of (center or extreme) x with (center or extreme) y.
  std::vector<Point> extreme_points() const override {
    auto xs = sx_->extreme_points();
    auto ys = sy_->extreme_points();
    xs.insert(xs.begin(), sx_->center());
    ys.insert(ys.begin(), sy_->center());
    std::vector<Point> out;
    for (const auto& a : xs)
      for (const auto& b : ys) out.push_back(Point::pair(a, b));
    out.erase(out.begin());  // (center, center) is probed separately
    return out;
  }

  ProductInfo info() const { return {sx_, sy_, scale_x_, scale_y_, weights_}; }

 private:
  Point x(const Point& z) const { return z.slice(0, nx_); }
  Point y(const Point& z) const { return z.slice(nx_, ny_); }

  SetupPtr sx_, sy_;
  double scale_x_ = 1.0, scale_y_ = 1.0;
  NormWeights weights_{1.0, 1.0};
  std::size_t nx_ = 1, ny_ = 1;
};

}  // namespace

SetupPtr euclidean_ball(std::size_t dim, double radius) {
  return std::make_shared<EuclideanBall>(dim, radius);
}

SetupPtr simplex_setup(std::size_t n) { return std::make_shared<Simplex>(n); }

SetupPtr spectahedron_setup(const BlockStructure& blocks) {
  return std::make_shared<Spectahedron>(blocks);
}

SetupPtr product_setup(SetupPtr sx, SetupPtr sy, std::optional<NormWeights> weights) {
  return std::make_shared<Product>(std::move(sx), std::move(sy), weights);
}

std::optional<ProductInfo> product_info(const ProxSetup& s) {
  if (const auto* p = dynamic_cast<const Product*>(&s)) return p->info();
  return std::nullopt;
}

double bregman(const ProxSetup& s, const Point& z, const Point& u) {
  return s.bregman(z, u);
}

Point prox(const ProxSetup& s, const Point& z, const DualVector& xi) {
  return s.prox(z, xi);
}

Capacity capacity(const ProxSetup& s) { return s.capacity(); }

}  // namespace smpx
