#ifndef SMPX_POINT_HPP
#define SMPX_POINT_HPP

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "smpx/symmat.hpp"

namespace smpx {

using Vector = std::vector<double>;

// One factor of an ambient space: a dense vector or a block-diagonal
// symmetric matrix.
using Part = std::variant<Vector, BlockSymMatrix>;

// Element of a (possibly product) ambient space. A product of setups owns a
// contiguous run of parts per factor, so (x, y) with x in R^n and y a block
// matrix is a two-part point. Dual vectors use the same type: every space
// here is identified with its dual through the standard/Frobenius inner
// product.
class Point {
 public:
  Point() = default;
  explicit Point(Vector v) { parts_.emplace_back(std::move(v)); }
  explicit Point(BlockSymMatrix m) { parts_.emplace_back(std::move(m)); }
  explicit Point(std::vector<Part> parts) : parts_(std::move(parts)) {}

  static Point pair(const Point& x, const Point& y);

  std::size_t arity() const { return parts_.size(); }
  const Part& part(std::size_t i) const { return parts_[i]; }
  Part& part(std::size_t i) { return parts_[i]; }
  const std::vector<Part>& parts() const { return parts_; }

  // Contiguous sub-point [offset, offset + count).
  Point slice(std::size_t offset, std::size_t count) const;

  const Vector& vec(std::size_t i = 0) const;
  Vector& vec(std::size_t i = 0);
  const BlockSymMatrix& mat(std::size_t i = 0) const;
  BlockSymMatrix& mat(std::size_t i = 0);

  // Same shape, all zeros.
  Point zeros_like() const;

  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
  Point& operator*=(double s);
  // this += s * o
  Point& axpy(double s, const Point& o);

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(double s, Point a) { return a *= s; }

  bool all_finite() const;
  bool same_shape(const Point& o) const;

  bool operator==(const Point&) const = default;

 private:
  std::vector<Part> parts_;
};

// <a, b>: dot product on vectors, Frobenius on matrices, summed over parts.
double inner(const Point& a, const Point& b);
double inner(const Part& a, const Part& b);

}  // namespace smpx

#endif
