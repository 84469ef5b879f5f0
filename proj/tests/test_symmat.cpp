#include <cmath>
#include <vector>

#include "doctest.h"
#include "smpx/error.hpp"
#include "smpx/rng.hpp"
#include "smpx/symmat.hpp"
#include "test_util.hpp"

using namespace smpx;

namespace {

double reconstruction_error(const SymMatrix& a, const SymEigen& e) {
  const std::size_t n = a.size();
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += e.vec(i, k) * e.values[k] * e.vec(j, k);
      err = std::max(err, std::abs(s - a(i, j)));
    }
  return err;
}

double orthogonality_error(const SymEigen& e) {
  double err = 0.0;
  for (std::size_t i = 0; i < e.n; ++i)
    for (std::size_t j = 0; j < e.n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < e.n; ++k) s += e.vec(i, k) * e.vec(j, k);
      err = std::max(err, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  return err;
}

BlockSymMatrix block_diag(std::vector<double> d) {
  return BlockSymMatrix(BlockStructure({d.size()}), {SymMatrix::diagonal(d)});
}

}  // namespace

TEST_CASE("eigh: diagonal input gives descending values and a permutation") {
  const std::vector<double> d{1.0, 2.0};
  const auto e = eigh(SymMatrix::diagonal(d));
  CHECK(e.values[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(e.vec(0, 0)) == doctest::Approx(0.0));
  CHECK(std::abs(e.vec(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(e.vec(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("eigh: swap matrix") {
  const auto e = eigh(SymMatrix::from_rows(2, {0, 1, 1, 0}));
  CHECK(e.values[0] == doctest::Approx(1.0));
  CHECK(e.values[1] == doctest::Approx(-1.0));
  CHECK(orthogonality_error(e) <= 1e-12);
}

TEST_CASE("eigh: random matrices reconstruct") {
  RandomStream rng(11);
  for (std::size_t n : {1u, 2u, 5u, 8u, 20u}) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto a = random_symmetric(n, rng, 3.0);
      const auto e = eigh(a);
      CHECK(orthogonality_error(e) <= 1e-10);
      CHECK(reconstruction_error(a, e) <= 1e-9 * (1.0 + spectral_norm(a)));
      for (std::size_t k = 1; k < n; ++k) CHECK(e.values[k - 1] >= e.values[k]);
    }
  }
}

TEST_CASE("eigh: repeated eigenvalues") {
  const auto a = SymMatrix::identity(4, 2.5);
  const auto e = eigh(a);
  for (double v : e.values) CHECK(v == doctest::Approx(2.5));
  CHECK(orthogonality_error(e) <= 1e-12);
}

TEST_CASE("from_rows rejects asymmetric and non-finite input") {
  CHECK_THROWS_AS(SymMatrix::from_rows(2, {0, 1, 2, 0}), InputError);
  CHECK_THROWS_AS(SymMatrix::from_rows(2, {0, 1, 1}), InputError);
  CHECK_THROWS_AS(SymMatrix::from_rows(1, {NAN}), InputError);
}

TEST_CASE("BlockStructure sizes") {
  BlockStructure s({2, 3, 1});
  CHECK(s.total() == 6);
  CHECK(s.sum_squares() == 14);
  CHECK(s.max_size() == 3);
  CHECK_THROWS_AS(BlockStructure({2, 0}), InputError);
  CHECK_THROWS_AS(BlockStructure(std::vector<std::size_t>{}), InputError);
}

TEST_CASE("entropy_map: zero gives the uniform matrix") {
  BlockStructure s({3, 2});
  const auto h = entropy_map(BlockSymMatrix(s));
  for (std::size_t l = 0; l < 2; ++l)
    for (std::size_t i = 0; i < s.size(l); ++i)
      for (std::size_t j = 0; j < s.size(l); ++j)
        CHECK(h.block(l)(i, j) == doctest::Approx(i == j ? 0.2 : 0.0).epsilon(1e-14));
}

TEST_CASE("entropy_map: diag(ln 2, 0) -> diag(2/3, 1/3)") {
  const auto h = entropy_map(block_diag({std::log(2.0), 0.0}));
  CHECK(h.block(0)(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(h.block(0)(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(h.block(0)(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("entropy_map agrees with a Taylor-series exponential") {
  RandomStream rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    BlockStructure s({1 + rng.uniform_index(6), 1 + rng.uniform_index(6)});
    const auto b = random_symmetric(s, rng, 4.0);
    const auto h = entropy_map(b);
    const auto ref = testing::entropy_map_ref(b);
    CHECK(h.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(testing::max_abs_diff(Point(h), Point(ref)) <= 1e-11);
    CHECK(lambda_min(h) >= 0.0);
  }
}

TEST_CASE("entropy_map survives large shifts") {
  const auto h = entropy_map(block_diag({800.0, 799.0, -800.0}));
  CHECK(h.trace() == doctest::Approx(1.0));
  CHECK(h.block(0)(0, 0) == doctest::Approx(std::exp(1.0) / (1.0 + std::exp(1.0))));
}

TEST_CASE("spectral functions on diag(1, -2)") {
  const auto a = block_diag({1.0, -2.0});
  CHECK(trace_norm(a) == doctest::Approx(3.0));
  CHECK(spectral_norm(a) == doctest::Approx(2.0));
  CHECK(lambda_max(a) == doctest::Approx(1.0));
  CHECK(lambda_min(a) == doctest::Approx(-2.0));
}

TEST_CASE("lambda_max is the maximum of <a, S> over the spectahedron") {
  RandomStream rng(21);
  BlockStructure s({3, 4});
  for (int rep = 0; rep < 20; ++rep) {
    const auto a = random_symmetric(s, rng);
    const double lm = lambda_max(a);
    // certificate: v v^T on the top eigenvector of the best block
    double best = -1e300;
    for (std::size_t l = 0; l < 2; ++l) {
      const auto e = eigh(a.block(l));
      BlockSymMatrix cert(s);
      cert.block(l) = SymMatrix::outer(e.column(0));
      best = std::max(best, frob_inner(a, cert));
    }
    CHECK(best == doctest::Approx(lm).epsilon(1e-12));
    for (int k = 0; k < 50; ++k) {
      const auto sp = entropy_map(random_symmetric(s, rng, 3.0));
      CHECK(frob_inner(a, sp) <= lm + 1e-12);
    }
  }
}

TEST_CASE("frob_inner(I, a) = Tr a and structure mismatch") {
  RandomStream rng(2);
  BlockStructure s({2, 3});
  const auto a = random_symmetric(s, rng);
  CHECK(frob_inner(BlockSymMatrix::identity(s), a) == doctest::Approx(a.trace()));
  CHECK_THROWS_AS(frob_inner(a, BlockSymMatrix(BlockStructure({5}))), InputError);
  CHECK_THROWS_AS(a + BlockSymMatrix(BlockStructure({3, 2})), InputError);
}

TEST_CASE("trace norm duality with the sign certificate") {
  RandomStream rng(3);
  BlockStructure s({4, 2});
  for (int rep = 0; rep < 20; ++rep) {
    const auto a = random_symmetric(s, rng);
    std::vector<SymMatrix> blocks;
    for (std::size_t l = 0; l < 2; ++l)
      blocks.push_back(eigh(a.block(l)).apply([](double v) { return v >= 0 ? 1.0 : -1.0; }));
    const BlockSymMatrix cert(s, blocks);
    CHECK(spectral_norm(cert) == doctest::Approx(1.0));
    CHECK(frob_inner(a, cert) == doctest::Approx(trace_norm(a)).epsilon(1e-12));
    for (int k = 0; k < 20; ++k) {
      auto b = random_symmetric(s, rng);
      b *= 1.0 / spectral_norm(b);
      CHECK(frob_inner(a, b) <= trace_norm(a) + 1e-12);
    }
  }
}

TEST_CASE("log/exp round trip on interior points") {
  RandomStream rng(9);
  BlockStructure s({3, 3, 2});
  for (int rep = 0; rep < 30; ++rep) {
    const auto z = entropy_map(random_symmetric(s, rng, 2.0));
    const auto back = entropy_map(log_map(z));
    CHECK(testing::max_abs_diff(Point(z), Point(back)) <= 1e-9);
  }
}

TEST_CASE("log_map clamps zero eigenvalues") {
  const auto l = log_map(block_diag({1.0, 0.0}));
  CHECK(std::isfinite(l.block(0)(1, 1)));
  CHECK(l.block(0)(1, 1) == doctest::Approx(std::log(1e-300)));
}
