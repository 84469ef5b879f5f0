#include "smpx/point.hpp"

#include <cmath>

#include "smpx/error.hpp"

namespace smpx {

Point Point::pair(const Point& x, const Point& y) {
  std::vector<Part> parts = x.parts_;
  parts.insert(parts.end(), y.parts_.begin(), y.parts_.end());
  return Point(std::move(parts));
}

Point Point::slice(std::size_t offset, std::size_t count) const {
  if (offset + count > parts_.size()) throw InputError("Point::slice out of range");
  return Point(std::vector<Part>(parts_.begin() + static_cast<std::ptrdiff_t>(offset),
                                 parts_.begin() + static_cast<std::ptrdiff_t>(offset + count)));
}

const Vector& Point::vec(std::size_t i) const {
  if (const auto* v = std::get_if<Vector>(&parts_.at(i))) return *v;
  throw InputError("Point: part is not a vector");
}

Vector& Point::vec(std::size_t i) {
  if (auto* v = std::get_if<Vector>(&parts_.at(i))) return *v;
  throw InputError("Point: part is not a vector");
}

const BlockSymMatrix& Point::mat(std::size_t i) const {
  if (const auto* m = std::get_if<BlockSymMatrix>(&parts_.at(i))) return *m;
  throw InputError("Point: part is not a block matrix");
}

BlockSymMatrix& Point::mat(std::size_t i) {
  if (auto* m = std::get_if<BlockSymMatrix>(&parts_.at(i))) return *m;
  throw InputError("Point: part is not a block matrix");
}

Point Point::zeros_like() const {
  Point z = *this;
  z *= 0.0;
  return z;
}

bool Point::same_shape(const Point& o) const {
  if (parts_.size() != o.parts_.size()) return false;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i].index() != o.parts_[i].index()) return false;
    if (const auto* v = std::get_if<Vector>(&parts_[i])) {
      if (v->size() != std::get<Vector>(o.parts_[i]).size()) return false;
    } else if (!(std::get<BlockSymMatrix>(parts_[i]).structure() ==
                 std::get<BlockSymMatrix>(o.parts_[i]).structure())) {
      return false;
    }
  }
  return true;
}

Point& Point::operator+=(const Point& o) { return axpy(1.0, o); }
Point& Point::operator-=(const Point& o) { return axpy(-1.0, o); }

Point& Point::operator*=(double s) {
  for (auto& p : parts_) {
    if (auto* v = std::get_if<Vector>(&p)) {
      for (double& e : *v) e *= s;
    } else {
      std::get<BlockSymMatrix>(p) *= s;
    }
  }
  return *this;
}

Point& Point::axpy(double s, const Point& o) {
  if (!same_shape(o)) throw InputError("Point: shape mismatch");
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (auto* v = std::get_if<Vector>(&parts_[i])) {
      const auto& w = std::get<Vector>(o.parts_[i]);
      for (std::size_t k = 0; k < v->size(); ++k) (*v)[k] += s * w[k];
    } else {
      std::get<BlockSymMatrix>(parts_[i]).axpy(s, std::get<BlockSymMatrix>(o.parts_[i]));
    }
  }
  return *this;
}

bool Point::all_finite() const {
  for (const auto& p : parts_) {
    if (const auto* v = std::get_if<Vector>(&p)) {
      for (double e : *v)
        if (!std::isfinite(e)) return false;
    } else {
      for (const auto& b : std::get<BlockSymMatrix>(p).blocks())
        for (double e : b.data())
          if (!std::isfinite(e)) return false;
    }
  }
  return true;
}

double inner(const Part& a, const Part& b) {
  if (a.index() != b.index()) throw InputError("inner: part kind mismatch");
  if (const auto* v = std::get_if<Vector>(&a)) {
    const auto& w = std::get<Vector>(b);
    if (v->size() != w.size()) throw InputError("inner: vector size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < v->size(); ++i) s += (*v)[i] * w[i];
    return s;
  }
  return frob_inner(std::get<BlockSymMatrix>(a), std::get<BlockSymMatrix>(b));
}

double inner(const Point& a, const Point& b) {
  if (a.arity() != b.arity()) throw InputError("inner: arity mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.arity(); ++i) s += inner(a.part(i), b.part(i));
  return s;
}

}  // namespace smpx
