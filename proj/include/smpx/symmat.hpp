#ifndef SMPX_SYMMAT_HPP
#define SMPX_SYMMAT_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace smpx {

class RandomStream;

// Dense symmetric matrix, row-major, both triangles stored.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  static SymMatrix identity(std::size_t n, double scale = 1.0);
  static SymMatrix diagonal(std::span<const double> d);
  // Validates symmetry within 1e-12 relative tolerance, then stores the
  // symmetric part.
  static SymMatrix from_rows(std::size_t n, std::vector<double> rows);
  // v v^T
  static SymMatrix outer(std::span<const double> v);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  std::span<const double> data() const { return a_; }

  double trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double s);
  // this += s * o
  SymMatrix& axpy(double s, const SymMatrix& o);

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

  bool operator==(const SymMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

double frob_inner(const SymMatrix& a, const SymMatrix& b);

// Eigenvalues in descending order; vectors(i, k) is component i of the k-th
// eigenvector (column storage in a row-major n x n array).
struct SymEigen {
  std::vector<double> values;
  std::vector<double> vectors;
  std::size_t n = 0;

  double vec(std::size_t i, std::size_t k) const { return vectors[i * n + k]; }
  std::vector<double> column(std::size_t k) const;
  // Q diag(f(lambda)) Q^T
  SymMatrix apply(const std::function<double(double)>& f) const;
};

// Cyclic Jacobi. Stops once the off-diagonal Frobenius mass drops below
// 1e-14 * ||a||_F; throws NumericalError after 50 sweeps.
SymEigen eigh(const SymMatrix& a);

class BlockStructure {
 public:
  BlockStructure() = default;
  explicit BlockStructure(std::vector<std::size_t> sizes);

  const std::vector<std::size_t>& sizes() const { return sizes_; }
  std::size_t num_blocks() const { return sizes_.size(); }
  std::size_t size(std::size_t l) const { return sizes_[l]; }
  // p^(1), p^(2), p^max
  std::size_t total() const;
  std::size_t sum_squares() const;
  std::size_t max_size() const;

  bool operator==(const BlockStructure&) const = default;

 private:
  std::vector<std::size_t> sizes_;
};

class BlockSymMatrix {
 public:
  BlockSymMatrix() = default;
  explicit BlockSymMatrix(const BlockStructure& s);
  BlockSymMatrix(BlockStructure s, std::vector<SymMatrix> blocks);

  static BlockSymMatrix identity(const BlockStructure& s, double scale = 1.0);

  const BlockStructure& structure() const { return structure_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  const SymMatrix& block(std::size_t l) const { return blocks_[l]; }
  SymMatrix& block(std::size_t l) { return blocks_[l]; }
  const std::vector<SymMatrix>& blocks() const { return blocks_; }

  double trace() const;
  double max_abs() const;

  BlockSymMatrix& operator+=(const BlockSymMatrix& o);
  BlockSymMatrix& operator-=(const BlockSymMatrix& o);
  BlockSymMatrix& operator*=(double s);
  BlockSymMatrix& axpy(double s, const BlockSymMatrix& o);

  friend BlockSymMatrix operator+(BlockSymMatrix a, const BlockSymMatrix& b) { return a += b; }
  friend BlockSymMatrix operator-(BlockSymMatrix a, const BlockSymMatrix& b) { return a -= b; }
  friend BlockSymMatrix operator*(double s, BlockSymMatrix a) { return a *= s; }

  bool operator==(const BlockSymMatrix&) const = default;

 private:
  void check_same(const BlockSymMatrix& o) const;

  BlockStructure structure_;
  std::vector<SymMatrix> blocks_;
};

std::vector<SymEigen> eigh(const BlockSymMatrix& a);

// Throws InputError on structure mismatch.
double frob_inner(const BlockSymMatrix& a, const BlockSymMatrix& b);
double lambda_max(const BlockSymMatrix& a);
double lambda_min(const BlockSymMatrix& a);
double lambda_max(const SymMatrix& a);
// |a|_1 = sum |lambda_i|
double trace_norm(const BlockSymMatrix& a);
// |a|_inf = max |lambda_i|
double spectral_norm(const BlockSymMatrix& a);
double spectral_norm(const SymMatrix& a);
double trace_norm(const SymMatrix& a);

// H(b) = exp(b) / Tr exp(b), evaluated with a global max-eigenvalue shift.
BlockSymMatrix entropy_map(const BlockSymMatrix& b);
// Matrix logarithm with eigenvalues clamped below at 1e-300.
BlockSymMatrix log_map(const BlockSymMatrix& z);

// Random symmetric block matrix with entries uniform in [-scale, scale],
// symmetrized as (R + R^T) / 2.
BlockSymMatrix random_symmetric(const BlockStructure& s, RandomStream& rng,
                                double scale = 1.0);
SymMatrix random_symmetric(std::size_t n, RandomStream& rng, double scale = 1.0);

}  // namespace smpx

#endif
