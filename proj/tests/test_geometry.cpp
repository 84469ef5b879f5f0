#include <cmath>
#include <vector>

#include "doctest.h"
#include "prox_checks.hpp"
#include "smpx/error.hpp"
#include "smpx/geometry.hpp"
#include "smpx/rng.hpp"
#include "test_util.hpp"

using namespace smpx;

namespace {

BlockSymMatrix diag_block(std::vector<double> d) {
  return BlockSymMatrix(BlockStructure({d.size()}), {SymMatrix::diagonal(d)});
}

}  // namespace

TEST_CASE("bregman examples") {
  auto ball = euclidean_ball(2);
  CHECK(ball->bregman(Point(Vector{0.3, 0.4}), Point(Vector{0.3, 0.4})) == 0.0);
  CHECK(ball->bregman(Point(Vector{0, 0}), Point(Vector{0.6, 0.8})) ==
        doctest::Approx(0.5).epsilon(1e-15));

  auto simp = simplex_setup(2);
  const double expect = 0.25 * std::log(0.5) + 0.75 * std::log(1.5);
  CHECK(simp->bregman(Point(Vector{0.5, 0.5}), Point(Vector{0.25, 0.75})) ==
        doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("bregman/prox domain errors") {
  auto simp = simplex_setup(3);
  CHECK_THROWS_AS(simp->bregman(Point(Vector{0.0, 0.5, 0.5}), Point(Vector{0.2, 0.3, 0.5})),
                  DomainError);
  CHECK_THROWS_AS(simp->prox(Point(Vector{0.0, 0.5, 0.5}), Point(Vector{0, 0, 0})), DomainError);
  CHECK_THROWS_AS(simp->prox(Point(Vector{0.2, 0.3, 0.5}), Point(Vector{NAN, 0, 0})),
                  InputError);
  auto ball = euclidean_ball(2);
  CHECK_THROWS_AS(ball->prox(Point(Vector{2.0, 0.0}), Point(Vector{0, 0})), DomainError);
  auto spec = spectahedron_setup(BlockStructure({2}));
  CHECK_THROWS_AS(spec->prox(Point(diag_block({0.7, 0.7})), Point(diag_block({0, 0}))),
                  DomainError);
  CHECK_THROWS_AS(spec->prox(Point(diag_block({1.1, -0.1})), Point(diag_block({0, 0}))),
                  DomainError);
  // boundary points are clamped, not rejected: reconstructed iterates carry round-off
  CHECK(spec->prox(Point(diag_block({1.0, 0.0})), Point(diag_block({0, 0}))).all_finite());
}

TEST_CASE("prox examples") {
  auto simp = simplex_setup(3);
  const Point third(Vector{1.0 / 3, 1.0 / 3, 1.0 / 3});
  auto p = simp->prox(third, Point(Vector{0, 0, 0}));
  for (double v : p.vec()) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-15));

  p = simp->prox(third, Point(Vector{std::log(2.0), 0, 0}));
  CHECK(p.vec()[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(p.vec()[1] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(p.vec()[2] == doctest::Approx(0.4).epsilon(1e-15));
  const auto ref = testing::generic_simplex_prox(third.vec(), {std::log(2.0), 0, 0});
  for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(ref[j] - p.vec()[j]) <= 1e-6);

  auto ball = euclidean_ball(2);
  p = ball->prox(Point(Vector{0, 0}), Point(Vector{2, 0}));
  CHECK(p.vec()[0] == doctest::Approx(-1.0));
  CHECK(p.vec()[1] == doctest::Approx(0.0));
}

TEST_CASE("simplex prox is stable for large dual vectors") {
  auto simp = simplex_setup(3);
  const auto p = simp->prox(Point(Vector{0.2, 0.3, 0.5}), Point(Vector{-700.0, 0.0, 650.0}));
  CHECK(p.all_finite());
  CHECK(p.vec()[0] == doctest::Approx(1.0));
  CHECK(p.vec()[0] + p.vec()[1] + p.vec()[2] == doctest::Approx(1.0).epsilon(1e-15));
  // the next step starts from p, so it must still be usable
  CHECK(simp->prox(p, Point(Vector{1.0, 0.0, -1.0})).all_finite());
}

TEST_CASE("capacity") {
  auto c = euclidean_ball(3)->capacity();
  CHECK(c.alpha == 1.0);
  CHECK(c.theta == doctest::Approx(0.5));
  CHECK(c.omega_radius == doctest::Approx(1.0));
  c = euclidean_ball(3, 2.0)->capacity();
  CHECK(c.theta == doctest::Approx(2.0));
  CHECK(c.omega_radius == doctest::Approx(2.0));

  c = simplex_setup(8)->capacity();
  CHECK(c.theta == doctest::Approx(std::log(8.0)));
  CHECK(c.omega_radius == doctest::Approx(std::sqrt(2.0 * std::log(8.0))));

  c = spectahedron_setup(BlockStructure({2, 3}))->capacity();
  CHECK(c.theta == doctest::Approx(std::log(5.0)));

  CHECK_THROWS_AS(simplex_setup(1), ConfigError);
  CHECK_THROWS_AS(spectahedron_setup(BlockStructure({1})), ConfigError);
  CHECK_NOTHROW(spectahedron_setup(BlockStructure({1, 1})));
}

TEST_CASE("capacity invariant Omega = sqrt(2 Theta / alpha)") {
  for (const auto& s : {euclidean_ball(2, 3.0), simplex_setup(5),
                        spectahedron_setup(BlockStructure({2, 2})),
                        product_setup(simplex_setup(3), spectahedron_setup(BlockStructure({3})))}) {
    const auto c = s->capacity();
    CHECK(c.omega_radius == doctest::Approx(std::sqrt(2.0 * c.theta / c.alpha)));
  }
}

TEST_CASE("product setup") {
  auto sx = simplex_setup(3);
  auto sy = spectahedron_setup(BlockStructure({2, 2}));
  auto s = product_setup(sx, sy);
  const auto c = s->capacity();
  CHECK(c.alpha == 1.0);
  CHECK(c.theta == doctest::Approx(1.0));
  CHECK(c.omega_radius == doctest::Approx(std::sqrt(2.0)));

  const Point center = s->center();
  CHECK(center == Point::pair(sx->center(), sy->center()));

  RandomStream rng(4);
  const double ox2 = sx->capacity().omega_radius * sx->capacity().omega_radius;
  const double oy2 = sy->capacity().omega_radius * sy->capacity().omega_radius;
  for (int rep = 0; rep < 50; ++rep) {
    const Point zx = sx->random_point(rng), ux = sx->random_point(rng);
    const Point zy = sy->random_point(rng), uy = sy->random_point(rng);
    const double v = s->bregman(Point::pair(zx, zy), Point::pair(ux, uy));
    CHECK(v == doctest::Approx(sx->bregman(zx, ux) / ox2 + sy->bregman(zy, uy) / oy2)
                   .epsilon(1e-12));

    // prox decomposes with rescaled dual arguments
    const Point xi = testing::random_dual(center, rng, 2.0);
    const Point p = s->prox(Point::pair(zx, zy), xi);
    const Point px = sx->prox(zx, ox2 * xi.slice(0, 1));
    const Point py = sy->prox(zy, oy2 * xi.slice(1, 1));
    CHECK(testing::max_abs_diff(p, Point::pair(px, py)) <= 1e-12);

    const double dn = s->dual_norm(xi);
    const double dx = sx->dual_norm(xi.slice(0, 1)), dy = sy->dual_norm(xi.slice(1, 1));
    CHECK(dn == doctest::Approx(std::sqrt(ox2 * dx * dx + oy2 * dy * dy)));
  }
  CHECK_THROWS_AS(product_setup(sx, sy, NormWeights{0.5, 10.0}), ConfigError);
}

TEST_CASE("weighted product keeps capacity and scales the norm") {
  auto sx = simplex_setup(4);
  auto sy = spectahedron_setup(BlockStructure({3}));
  auto s = product_setup(sx, sy, NormWeights{2.0 * std::log(4.0), 4.0 * std::log(3.0)});
  const auto c = s->capacity();
  CHECK(c.theta == doctest::Approx(1.0));
  CHECK(c.omega_radius == doctest::Approx(std::sqrt(2.0)));
  const auto ex = testing::prox_inequalities(*s, 300, 17, 3.0);
  CHECK(ex.worst() <= 1e-8);
}

TEST_CASE("center minimizes omega (first-order condition)") {
  RandomStream rng(8);
  for (const auto& s : {euclidean_ball(3, 2.0), simplex_setup(6),
                        spectahedron_setup(BlockStructure({2, 3})),
                        product_setup(simplex_setup(3), euclidean_ball(2))}) {
    const Point c = s->center();
    const Point g = s->omega_grad(c);
    for (int i = 0; i < 200; ++i) CHECK(inner(g, s->random_point(rng) - c) >= -1e-10);
  }
}

TEST_CASE("prox inequality suite") {
  int seed = 100;
  // Matrix points lose relative accuracy in eigenvalues below ~1e-12, so the
  // matrix setups stay at dual scales whose prox images remain well inside S.
  struct Case {
    SetupPtr s;
    std::vector<double> scales;
  };
  for (const auto& [s, scales] :
       {Case{euclidean_ball(4, 1.5), {0.1, 1.0, 5.0}}, Case{simplex_setup(7), {0.1, 1.0, 5.0}},
        Case{spectahedron_setup(BlockStructure({3, 1, 2})), {0.1, 1.0, 3.0}},
        Case{product_setup(simplex_setup(3), spectahedron_setup(BlockStructure({2, 2}))),
             {0.1, 1.0}}}) {
    for (double scale : scales) {
      const auto ex = testing::prox_inequalities(*s, 200, seed++, scale);
      INFO(s->name(), " scale ", scale);
      CHECK(ex.lipschitz <= 1e-8);
      CHECK(ex.three_point <= 1e-8);
      CHECK(ex.young <= 1e-8);
      CHECK(ex.two_prox <= 1e-8);
      CHECK(ex.containment <= 1e-10);
      CHECK(ex.min_strong_convexity >= -1e-8);
    }
  }
}

TEST_CASE("closed-form simplex prox matches a generic argmin") {
  RandomStream rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + rng.uniform_index(9);
    auto s = simplex_setup(n);
    Vector z(n), xi(n);
    double tot = 0.0;
    for (auto& v : z) tot += (v = 0.5 + rng.uniform());
    for (auto& v : z) v /= tot;
    for (auto& v : xi) v = 2.0 * rng.uniform() - 1.0;
    const auto p = s->prox(Point(z), Point(xi));
    const auto ref = testing::generic_simplex_prox(z, xi);
    for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(p.vec()[j] - ref[j]) <= 1e-6);
  }
}

TEST_CASE("spectahedron prox is linear in the matrix logarithm") {
  RandomStream rng(41);
  for (int rep = 0; rep < 30; ++rep) {
    BlockStructure bs({1 + rng.uniform_index(8), 1 + rng.uniform_index(8)});
    if (bs.total() < 2) continue;
    auto s = spectahedron_setup(bs);
    const auto a = random_symmetric(bs, rng, 2.0);
    const auto xi = random_symmetric(bs, rng, 2.0);
    const auto z = testing::entropy_map_ref(a);
    const auto p = s->prox(Point(z), Point(xi));
    const auto ref = testing::entropy_map_ref(a - xi);
    CHECK(testing::max_abs_diff(p, Point(ref)) <= 1e-8);
  }
}

TEST_CASE("random points are feasible and interior") {
  RandomStream rng(1);
  for (const auto& s : {euclidean_ball(3), simplex_setup(4),
                        spectahedron_setup(BlockStructure({2, 2}))}) {
    for (int i = 0; i < 100; ++i) {
      const auto u = s->random_point(rng);
      CHECK(s->contains(u));
      CHECK(s->in_interior(u));
    }
    for (const auto& e : s->extreme_points()) CHECK(s->contains(e));
  }
}
