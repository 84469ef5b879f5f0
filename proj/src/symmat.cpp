#include "smpx/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "smpx/error.hpp"
#include "smpx/rng.hpp"

namespace smpx {

namespace {
constexpr double kLogFloor = 1e-300;
constexpr int kMaxSweeps = 50;
}  // namespace

// --- SymMatrix ---------------------------------------------------------------

SymMatrix SymMatrix::identity(std::size_t n, double scale) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = scale;
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

SymMatrix SymMatrix::from_rows(std::size_t n, std::vector<double> rows) {
  if (rows.size() != n * n)
    throw InputError("SymMatrix: expected " + std::to_string(n * n) +
                     " entries, got " + std::to_string(rows.size()));
  double scale = 0.0;
  for (double v : rows) {
    if (!std::isfinite(v)) throw InputError("SymMatrix: non-finite entry");
    scale = std::max(scale, std::abs(v));
  }
  const double tol = 1e-12 * std::max(1.0, scale);
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double a = rows[i * n + j], b = rows[j * n + i];
      if (std::abs(a - b) > tol)
        throw InputError("SymMatrix: entry (" + std::to_string(i) + "," +
                         std::to_string(j) + ") breaks symmetry");
      m(i, j) = m(j, i) = i == j ? a : 0.5 * (a + b);
    }
  }
  return m;
}

SymMatrix SymMatrix::outer(std::span<const double> v) {
  SymMatrix m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * v[j];
  return m;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) { return axpy(1.0, o); }
SymMatrix& SymMatrix::operator-=(const SymMatrix& o) { return axpy(-1.0, o); }

SymMatrix& SymMatrix::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

SymMatrix& SymMatrix::axpy(double s, const SymMatrix& o) {
  if (o.n_ != n_) throw InputError("SymMatrix: size mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += s * o.a_[i];
  return *this;
}

double frob_inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.size() != b.size()) throw InputError("frob_inner: size mismatch");
  const auto x = a.data(), y = b.data();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

// --- eigendecomposition ------------------------------------------------------

std::vector<double> SymEigen::column(std::size_t k) const {
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = vec(i, k);
  return c;
}

SymMatrix SymEigen::apply(const std::function<double(double)>& f) const {
  SymMatrix m(n);
  std::vector<double> fl(n);
  for (std::size_t k = 0; k < n; ++k) fl[k] = f(values[k]);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += vec(i, k) * fl[k] * vec(j, k);
      m(i, j) = m(j, i) = s;
    }
  }
  return m;
}

SymEigen eigh(const SymMatrix& input) {
  const std::size_t n = input.size();
  std::vector<double> a(input.data().begin(), input.data().end());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  auto V = [&](std::size_t i, std::size_t j) -> double& { return v[i * n + j]; };

  const double tol = 1e-14 * input.frobenius_norm();
  bool converged = false;
  for (int sweep = 0; sweep <= kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * A(p, q) * A(p, q);
    if (std::sqrt(off) <= tol) {
      converged = true;
      break;
    }
    if (sweep == kMaxSweeps) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0) continue;
        const double app = A(p, p), aqq = A(q, q);
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(app) + g == std::abs(app) &&
            std::abs(aqq) + g == std::abs(aqq)) {
          A(p, q) = A(q, p) = 0.0;
          continue;
        }
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        A(p, q) = A(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged)
    throw NumericalError("eigh: Jacobi did not converge in 50 sweeps (n=" +
                         std::to_string(n) + ")");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return A(i, i) > A(j, j); });
  SymEigen out;
  out.n = n;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = A(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors[i * n + k] = V(i, order[k]);
  }
  return out;
}

// --- blocks ------------------------------------------------------------------

BlockStructure::BlockStructure(std::vector<std::size_t> sizes)
    : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw InputError("BlockStructure: no blocks");
  for (std::size_t s : sizes_)
    if (s == 0) throw InputError("BlockStructure: block size must be >= 1");
}

std::size_t BlockStructure::total() const {
  return std::accumulate(sizes_.begin(), sizes_.end(), std::size_t{0});
}

std::size_t BlockStructure::sum_squares() const {
  std::size_t s = 0;
  for (std::size_t p : sizes_) s += p * p;
  return s;
}

std::size_t BlockStructure::max_size() const {
  return sizes_.empty() ? 0 : *std::max_element(sizes_.begin(), sizes_.end());
}

BlockSymMatrix::BlockSymMatrix(const BlockStructure& s) : structure_(s) {
  blocks_.reserve(s.num_blocks());
  for (std::size_t p : s.sizes()) blocks_.emplace_back(p);
}

BlockSymMatrix::BlockSymMatrix(BlockStructure s, std::vector<SymMatrix> blocks)
    : structure_(std::move(s)), blocks_(std::move(blocks)) {
  if (blocks_.size() != structure_.num_blocks())
    throw InputError("BlockSymMatrix: block count does not match structure");
  for (std::size_t l = 0; l < blocks_.size(); ++l)
    if (blocks_[l].size() != structure_.size(l))
      throw InputError("BlockSymMatrix: block " + std::to_string(l) +
                       " has the wrong size");
}

BlockSymMatrix BlockSymMatrix::identity(const BlockStructure& s, double scale) {
  BlockSymMatrix m(s);
  for (std::size_t l = 0; l < s.num_blocks(); ++l)
    m.blocks_[l] = SymMatrix::identity(s.size(l), scale);
  return m;
}

double BlockSymMatrix::trace() const {
  double t = 0.0;
  for (const auto& b : blocks_) t += b.trace();
  return t;
}

double BlockSymMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& b : blocks_) m = std::max(m, b.max_abs());
  return m;
}

void BlockSymMatrix::check_same(const BlockSymMatrix& o) const {
  if (!(structure_ == o.structure_))
    throw InputError("block structure mismatch");
}

BlockSymMatrix& BlockSymMatrix::operator+=(const BlockSymMatrix& o) { return axpy(1.0, o); }
BlockSymMatrix& BlockSymMatrix::operator-=(const BlockSymMatrix& o) { return axpy(-1.0, o); }

BlockSymMatrix& BlockSymMatrix::operator*=(double s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

BlockSymMatrix& BlockSymMatrix::axpy(double s, const BlockSymMatrix& o) {
  check_same(o);
  for (std::size_t l = 0; l < blocks_.size(); ++l) blocks_[l].axpy(s, o.blocks_[l]);
  return *this;
}

std::vector<SymEigen> eigh(const BlockSymMatrix& a) {
  std::vector<SymEigen> out;
  out.reserve(a.num_blocks());
  for (const auto& b : a.blocks()) out.push_back(eigh(b));
  return out;
}

double frob_inner(const BlockSymMatrix& a, const BlockSymMatrix& b) {
  if (!(a.structure() == b.structure()))
    throw InputError("frob_inner: block structure mismatch");
  double s = 0.0;
  for (std::size_t l = 0; l < a.num_blocks(); ++l) s += frob_inner(a.block(l), b.block(l));
  return s;
}

double lambda_max(const SymMatrix& a) {
  if (a.size() == 1) return a(0, 0);
  return eigh(a).values.front();
}

double lambda_max(const BlockSymMatrix& a) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& b : a.blocks()) m = std::max(m, lambda_max(b));
  return m;
}

double lambda_min(const BlockSymMatrix& a) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : a.blocks()) {
    const double v = b.size() == 1 ? b(0, 0) : eigh(b).values.back();
    m = std::min(m, v);
  }
  return m;
}

double trace_norm(const SymMatrix& a) {
  if (a.size() == 1) return std::abs(a(0, 0));
  double s = 0.0;
  for (double l : eigh(a).values) s += std::abs(l);
  return s;
}

double spectral_norm(const SymMatrix& a) {
  if (a.size() == 1) return std::abs(a(0, 0));
  const auto e = eigh(a);
  return std::max(std::abs(e.values.front()), std::abs(e.values.back()));
}

double trace_norm(const BlockSymMatrix& a) {
  double s = 0.0;
  for (const auto& b : a.blocks()) s += trace_norm(b);
  return s;
}

double spectral_norm(const BlockSymMatrix& a) {
  double m = 0.0;
  for (const auto& b : a.blocks()) m = std::max(m, spectral_norm(b));
  return m;
}

BlockSymMatrix entropy_map(const BlockSymMatrix& b) {
  const auto eig = eigh(b);
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& e : eig) shift = std::max(shift, e.values.front());
  if (!std::isfinite(shift)) throw InputError("entropy_map: non-finite input");
  double total = 0.0;
  for (const auto& e : eig)
    for (double l : e.values) total += std::exp(l - shift);
  BlockSymMatrix out(b.structure());
  for (std::size_t l = 0; l < eig.size(); ++l)
    out.block(l) = eig[l].apply([&](double v) { return std::exp(v - shift) / total; });
  return out;
}

BlockSymMatrix log_map(const BlockSymMatrix& z) {
  BlockSymMatrix out(z.structure());
  for (std::size_t l = 0; l < z.num_blocks(); ++l)
    out.block(l) = eigh(z.block(l)).apply(
        [](double v) { return std::log(std::max(v, kLogFloor)); });
  return out;
}

SymMatrix random_symmetric(std::size_t n, RandomStream& rng, double scale) {
  std::vector<double> r(n * n);
  for (double& v : r) v = scale * (2.0 * rng.uniform() - 1.0);
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = 0.5 * (r[i * n + j] + r[j * n + i]);
  return m;
}

BlockSymMatrix random_symmetric(const BlockStructure& s, RandomStream& rng,
                                double scale) {
  BlockSymMatrix m(s);
  for (std::size_t l = 0; l < s.num_blocks(); ++l)
    m.block(l) = random_symmetric(s.size(l), rng, scale);
  return m;
}

}  // namespace smpx
