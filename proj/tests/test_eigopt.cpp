#include <cmath>
#include <vector>

#include "doctest.h"
#include "eig_oracles.hpp"
#include "smpx/eigopt.hpp"
#include "smpx/error.hpp"
#include "smpx/rng.hpp"
#include "smpx/vi.hpp"
#include "test_util.hpp"

using namespace smpx;

namespace {

BlockSymMatrix scalar(double v) {
  return BlockSymMatrix(BlockStructure({1}), {SymMatrix::identity(1, v)});
}

// n = 2, one 1x1 block, A0 = 0, A1 = 1, A2 = 3
EigInstance scalar_instance() { return EigInstance({scalar(0.0), scalar(1.0), scalar(3.0)}); }

EigInstance random_eig(std::uint64_t seed, std::size_t n, std::vector<std::size_t> blocks,
                       double scale = 1.0) {
  RandomStream rng(seed);
  BlockStructure s(std::move(blocks));
  std::vector<BlockSymMatrix> a;
  for (std::size_t j = 0; j <= n; ++j) a.push_back(random_symmetric(s, rng, scale));
  return EigInstance(std::move(a));
}

Point random_z(const EigInstance& inst, RandomStream& rng) {
  return eig_setup(inst)->random_point(rng);
}

}  // namespace

TEST_CASE("instance validation and A_inf") {
  CHECK_THROWS_AS(EigInstance({scalar(0.0), scalar(1.0)}), InputError);
  CHECK_THROWS_AS(EigInstance({scalar(0.0), scalar(1.0),
                               BlockSymMatrix(BlockStructure({2}))}),
                  InputError);
  const auto inst = EigInstance({scalar(10.0), scalar(-1.0), scalar(3.0)});
  CHECK(inst.a_inf() == 3.0);
  CHECK(inst.a0_norm() == 10.0);
}

TEST_CASE("exact_operator scalar example") {
  const auto inst = scalar_instance();
  const Point z(std::vector<Part>{Vector{0.5, 0.5}, scalar(1.0)});
  const auto f = exact_operator(inst, z);
  CHECK(f.vec(0)[0] == doctest::Approx(1.0));
  CHECK(f.vec(0)[1] == doctest::Approx(3.0));
  CHECK(f.mat(1).block(0)(0, 0) == doctest::Approx(-2.0));
}

TEST_CASE("exact_operator matches the hand formula; uniform y gives Tr(A_j)/N") {
  const auto inst = random_eig(4, 5, {2, 3, 1});
  RandomStream rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto z = random_z(inst, rng);
    const auto ref = testing::eig_operator_ref(inst, z.vec(0), z.mat(1));
    CHECK(testing::max_abs_diff(exact_operator(inst, z), ref) <= 1e-14);
  }
  const auto& s = inst.structure();
  const Point z(std::vector<Part>{Vector(5, 0.2), BlockSymMatrix::identity(s, 1.0 / 6.0)});
  const auto f = exact_operator(inst, z);
  for (std::size_t j = 0; j < 5; ++j)
    CHECK(f.vec(0)[j] == doctest::Approx(inst.a(j + 1).trace() / 6.0).epsilon(1e-14));
}

TEST_CASE("sample_xi at a vertex with a single 1x1 block is deterministic") {
  const auto inst = scalar_instance();
  const Point z(std::vector<Part>{Vector{1.0, 0.0}, scalar(1.0)});
  RandomStream rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto xi = sample_xi(inst, z, rng);
    CHECK(xi.vec(0)[0] == 1.0);
    CHECK(xi.vec(0)[1] == 3.0);
    CHECK(xi.mat(1).block(0)(0, 0) == -1.0);
  }
  // bias is exactly zero here
  const auto f = exact_operator(inst, z);
  Point mean = f.zeros_like();
  RandomStream r2(5);
  for (int i = 0; i < 100; ++i) mean += sample_xi(inst, z, r2) - f;
  CHECK(testing::max_abs_diff(mean, f.zeros_like()) == 0.0);
}

TEST_CASE("sample_xi draws match the replayed indices and the hand formula") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto inst = random_eig(seed, 4, {2, 1, 2});
    RandomStream rng(seed + 10);
    for (int i = 0; i < 200; ++i) {
      const auto z = random_z(inst, rng);
      const RandomStream before = rng;
      const auto [jj, ii] = testing::replay_draws(before, z.vec(0), z.mat(1));
      const auto xi = sample_xi(inst, z, rng);
      CHECK(rng.counter() == before.counter() + 2);
      CHECK(testing::max_abs_diff(xi, testing::eig_xi_ref(inst, z.mat(1), jj, ii)) <= 1e-15);
    }
  }
}

TEST_CASE("full enumeration: E Xi equals the exact operator") {
  for (std::uint64_t seed : {5u, 6u, 7u, 8u}) {
    const std::size_t n = 2 + seed % 3;
    const auto inst = seed % 2 ? random_eig(seed, n, {1, 1, 1}) : random_eig(seed, n, {2, 2});
    RandomStream rng(seed);
    for (int i = 0; i < 50; ++i) {
      const auto z = random_z(inst, rng);
      const auto mean = testing::eig_enumerated_mean(inst, z.vec(0), z.mat(1));
      CHECK(testing::max_abs_diff(mean, exact_operator(inst, z)) <= 1e-12);
    }
  }
}

TEST_CASE("per-draw boundedness") {
  const auto inst = random_eig(9, 6, {3, 2}, 2.0);
  RandomStream rng(2);
  const double ainf = inst.a_inf();
  for (int i = 0; i < 1000; ++i) {
    const auto z = random_z(inst, rng);
    const auto xi = sample_xi(inst, z, rng);
    const auto f = exact_operator(inst, z);
    for (double v : xi.vec(0)) CHECK(std::abs(v) <= ainf + 1e-12);
    CHECK(spectral_norm(xi.mat(1) - f.mat(1)) <= 2.0 * ainf + 1e-12);
  }
}

TEST_CASE("negative block trace is a domain error; round-off is clamped") {
  const auto inst = random_eig(1, 3, {1, 1});
  BlockStructure s({1, 1});
  const BlockSymMatrix bad(s, {SymMatrix::identity(1, 1.1), SymMatrix::identity(1, -0.1)});
  RandomStream rng(1);
  CHECK_THROWS_AS(sample_xi(inst, Point(std::vector<Part>{Vector{0.3, 0.3, 0.4}, bad}), rng),
                  DomainError);
  const BlockSymMatrix tiny(s, {SymMatrix::identity(1, 1.0 + 1e-14), SymMatrix::identity(1, -1e-14)});
  for (int i = 0; i < 50; ++i) {
    const auto xi = sample_xi(inst, Point(std::vector<Part>{Vector{0.3, 0.3, 0.4}, tiny}), rng);
    CHECK(xi.all_finite());
  }
}

TEST_CASE("lemma constants") {
  const auto inst8 = random_eig(2, 8, {4, 4});
  const auto c = lemma42_constants(inst8, 1);
  CHECK(c.lip_L == doctest::Approx(18.0 * std::log(2.0)));
  CHECK(c.lip_L_eff == doctest::Approx(c.lip_L * inst8.a_inf()));
  CHECK(c.noise_M == doctest::Approx(27.0 * 2.0 * std::log(8.0) * inst8.a_inf()));
  CHECK(c.weights.wx == doctest::Approx(2.0 * std::log(8.0)));
  CHECK(c.weights.wy == doctest::Approx(4.0 * std::log(8.0)));
  CHECK(lemma42_constants(inst8, 4).noise_M == doctest::Approx(c.noise_M / 2.0));
  CHECK(eig_lipschitz(inst8) == doctest::Approx(c.lip_L_eff));

  CHECK_THROWS_AS(lemma42_constants(random_eig(1, 2, {2, 2}), 1), ConfigError);
  CHECK_THROWS_AS(lemma42_constants(random_eig(1, 3, {1, 1}), 1), ConfigError);
  CHECK_THROWS_AS(lemma42_constants(inst8, 0), ConfigError);
  CHECK_THROWS_AS(averaged_oracle(inst8, 0), ConfigError);
}

TEST_CASE("setup uses the lemma norm weights") {
  const auto inst = random_eig(3, 5, {2, 2});
  const auto info = product_info(*eig_setup(inst));
  REQUIRE(info);
  CHECK(info->weights.wx == doctest::Approx(2.0 * std::log(5.0)));
  CHECK(info->weights.wy == doctest::Approx(4.0 * std::log(4.0)));
}

TEST_CASE("effective Lipschitz constant dominates sampled ratios") {
  for (std::uint64_t seed : {1u, 2u}) {
    const auto inst = random_eig(seed, 6, {3, 3});
    const auto s = eig_saddle(inst);
    CHECK(s.problem.lip_L == doctest::Approx(eig_lipschitz(inst)));
    const auto rep = check_regularity(s.problem, 1000, seed);
    CHECK(rep.max_lipschitz_excess <= 1e-8);
    CHECK(rep.min_monotone_gap >= -1e-8);
  }
}

TEST_CASE("averaged oracle: k = 1 is sample_xi, moments scale like 1/k") {
  const auto inst = random_eig(12, 4, {2, 2});
  const auto s = eig_saddle(inst);
  RandomStream rng(4);
  const auto z = s.problem.setup->random_point(rng);

  const auto o1 = averaged_oracle(inst, 1);
  RandomStream a(7), b(7);
  for (int i = 0; i < 20; ++i) CHECK(o1.sample(z, a) == sample_xi(inst, z, b));
  CHECK(o1.subgaussian);
  CHECK(o1.bias_mu == 0.0);

  // enumeration of the averaged oracle for k = 2 on the scalar instance
  const auto sc = scalar_instance();
  const Point zs(std::vector<Part>{Vector{0.25, 0.75}, scalar(1.0)});
  const auto f = exact_operator(sc, zs);
  const auto xi1 = testing::eig_xi_ref(sc, zs.mat(1), 1, 0);
  const auto xi2 = testing::eig_xi_ref(sc, zs.mat(1), 2, 0);
  Point mean2 = f.zeros_like();
  const double px[2] = {0.25, 0.75};
  const Point* xis[2] = {&xi1, &xi2};
  for (int u = 0; u < 2; ++u)
    for (int v = 0; v < 2; ++v) mean2.axpy(px[u] * px[v], 0.5 * (*xis[u] + *xis[v]));
  CHECK(testing::max_abs_diff(mean2, f) <= 1e-15);

  const std::size_t n = 100000;
  const auto m1 = oracle_stats(o1, s.problem, z, n, 1).second_moment;
  for (std::size_t k : {4u, 16u}) {
    const auto mk = oracle_stats(averaged_oracle(inst, k), s.problem, z, n, k).second_moment;
    const double ratio = m1 / mk / static_cast<double>(k);
    INFO("k = ", k, " ratio ", ratio);
    CHECK(ratio >= 0.8);
    CHECK(ratio <= 1.2);
  }
  const auto st = oracle_stats(o1, s.problem, z, n, 99);
  CHECK(st.second_moment <= o1.noise_M * o1.noise_M);
  CHECK(st.second_moment <= *o1.stepsize_M * *o1.stepsize_M);
  CHECK(st.bias <= 0.05 * std::sqrt(st.second_moment));
}

TEST_CASE("additive noise oracle has a fixed deviation norm") {
  const auto inst = random_eig(13, 5, {3, 2});
  const auto s = eig_saddle(inst);
  const auto o = additive_noise_oracle(inst, 0.3);
  const double expect = 0.3 * std::sqrt(2.0 * std::log(5.0) + 4.0 * std::log(5.0));
  CHECK(o.noise_M == doctest::Approx(expect));
  RandomStream rng(1);
  const auto z = s.problem.setup->random_point(rng);
  const auto f = exact_operator(inst, z);
  for (int i = 0; i < 50; ++i)
    CHECK(s.problem.setup->dual_norm(o.sample(z, rng) - f) == doctest::Approx(expect));
  CHECK_THROWS_AS(additive_noise_oracle(inst, -1.0), ConfigError);
}

TEST_CASE("objective and gap examples") {
  const auto inst = scalar_instance();
  auto og = objective_and_gap(inst, Point(std::vector<Part>{Vector{0.5, 0.5}, scalar(1.0)}));
  CHECK(og.f_value == doctest::Approx(2.0));
  CHECK(og.dual_value == doctest::Approx(1.0));
  CHECK(og.err_nash == doctest::Approx(1.0));
  og = objective_and_gap(inst, Point(std::vector<Part>{Vector{1.0, 0.0}, scalar(1.0)}));
  CHECK(og.f_value == doctest::Approx(1.0));
  CHECK(og.err_nash == doctest::Approx(0.0));

  const auto big = random_eig(14, 6, {3, 3});
  RandomStream rng(6);
  for (int i = 0; i < 200; ++i) {
    const auto z = random_z(big, rng);
    const auto g = objective_and_gap(big, z);
    CHECK(g.err_nash >= -1e-8);
    CHECK(g.f_value == doctest::Approx(lambda_max(big.affine(z.vec(0)))));
  }
}

TEST_CASE("sup bound dominates every draw") {
  const auto inst = random_eig(15, 4, {2, 2}, 3.0);
  const auto s = eig_saddle(inst);
  const auto noisy = additive_noise_oracle(inst, 0.5);
  RandomStream rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto z = s.problem.setup->random_point(rng);
    CHECK(s.problem.setup->dual_norm(sample_xi(inst, z, rng)) <= eig_sup_bound(inst) + 1e-12);
    CHECK(s.problem.setup->dual_norm(noisy.sample(z, rng)) <= eig_sup_bound(inst, 0.5) + 1e-12);
  }
}
