#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "smpx/bench.hpp"
#include "smpx/eigopt.hpp"
#include "smpx/error.hpp"
#include "smpx/geometry.hpp"
#include "smpx/solver.hpp"
#include "solver_detail.hpp"

using namespace smpx;

namespace {

VIProblem identity_problem() {
  VIProblem p;
  p.setup = euclidean_ball(1);
  p.op = [](const Point& z) { return z; };
  p.lip_L = 1.0;
  return p;
}

VIProblem zero_problem(SetupPtr s) {
  VIProblem p;
  p.setup = s;
  p.op = [](const Point& z) { return z.zeros_like(); };
  return p;
}

EigInstance bilinear_instance() {
  return *generate_instance("bilinear_simplex_spectahedron",
                            {{"n", 20}, {"blocks", {4, 4, 4}}}, 1)
              .eig;
}

}  // namespace

TEST_CASE("F = 0 keeps both methods at the center") {
  for (const auto& s : {simplex_setup(4), spectahedron_setup(BlockStructure({2, 3})),
                        product_setup(simplex_setup(3), euclidean_ball(2))}) {
    const auto p = zero_problem(s);
    const auto o = exact_oracle(p);
    RunOptions opt;
    opt.checkpoints = {1, 5, 10};
    for (bool smp : {true, false}) {
      const auto rec = smp ? smp_run(p, o, {0.3, 10}, 1, opt) : rmsa_run(p, o, {0.3, 10}, 1, opt);
      for (const auto& c : rec.checkpoints) {
        const auto d = c.z_hat - s->center();
        CHECK(s->norm(d) <= 1e-14);
      }
    }
  }
}

TEST_CASE("SMP forced-start trajectory on F(z) = z") {
  const auto p = identity_problem();
  const auto o = exact_oracle(p);
  std::vector<double> ws, rs;
  RunOptions opt;
  opt.checkpoints = {1, 2, 3};
  opt.on_step = [&](std::size_t, const Point& w, const Point& r) {
    ws.push_back(w.vec()[0]);
    rs.push_back(r.vec()[0]);
  };
  const auto rec = detail::smp_run_from(Point(Vector{1.0}), p, o, {0.5, 3}, RandomStream(0), opt);
  REQUIRE(ws.size() == 3);
  CHECK(ws[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rs[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(ws[1] == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(rs[1] == doctest::Approx(0.5625).epsilon(1e-15));
  CHECK(ws[2] == doctest::Approx(0.28125).epsilon(1e-15));
  CHECK(rec.checkpoints[2].z_hat.vec()[0] ==
        doctest::Approx((0.5 + 0.375 + 0.28125) / 3.0).epsilon(1e-15));
  CHECK(rec.checkpoints[0].z_hat.vec()[0] == doctest::Approx(0.5));
  CHECK(rec.oracle_calls == 6);

  // started at the center everything stays at 0
  const auto rec0 = smp_run(p, o, {0.5, 3}, 0, opt);
  CHECK(rec0.checkpoints.back().z_hat.vec()[0] == 0.0);
}

TEST_CASE("RMSA forced-start trajectory on F(z) = z") {
  const auto p = identity_problem();
  const auto o = exact_oracle(p);
  RunOptions opt;
  opt.checkpoints = {1, 2, 3};
  const auto rec = detail::rmsa_run_from(Point(Vector{1.0}), p, o, {0.5, 3}, RandomStream(0), opt);
  CHECK(rec.checkpoints[0].z_hat.vec()[0] == doctest::Approx(0.5));
  CHECK(rec.checkpoints[1].z_hat.vec()[0] == doctest::Approx(0.375));
  CHECK(rec.checkpoints[2].z_hat.vec()[0] == doctest::Approx(0.875 / 3.0));
  CHECK(rec.oracle_calls == 3);
  CHECK(rec.checkpoints[1].oracle_calls == 2);
}

TEST_CASE("constant_stepsize examples") {
  CHECK(constant_stepsize(1.0, std::sqrt(2.0), 0.0, 1.0, 42) ==
        doctest::Approx(2.0 / std::sqrt(882.0)).epsilon(1e-14));
  CHECK(constant_stepsize(1.0, std::sqrt(2.0), 0.0, 1.0, 42) == doctest::Approx(0.06734).epsilon(1e-4));
  CHECK(constant_stepsize(1.0, 1.0, 1.0, 0.0, 10) == doctest::Approx(1.0 / std::sqrt(3.0)));
  // first branch while small, then ~ t^{-1/2}
  CHECK(constant_stepsize(1.0, 1.0, 1.0, 0.01, 1) == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(constant_stepsize(1.0, 1.0, 1.0, 1.0, 1) == doctest::Approx(std::sqrt(2.0 / 21.0)));
  const double a = constant_stepsize(1.0, 1.0, 1.0, 1.0, 10000);
  const double b = constant_stepsize(1.0, 1.0, 1.0, 1.0, 40000);
  CHECK(a / b == doctest::Approx(2.0));
  CHECK_THROWS_AS(constant_stepsize(1.0, 1.0, 0.0, 0.0, 10), ConfigError);
  CHECK_THROWS_AS(constant_stepsize(1.0, 1.0, 1.0, 1.0, 0), ConfigError);
}

TEST_CASE("theoretical_bounds examples") {
  auto b = theoretical_bounds(1.0, 2.0, 3.0, 0.0, 0.0, 10);
  CHECK(b.k0 == doctest::Approx(1.75 * 4.0 * 3.0 / 10.0));
  CHECK(b.k1 == 0.0);
  b = theoretical_bounds(1.0, std::sqrt(2.0), 0.0, 1.0, 0.0, 49);
  CHECK(b.k0 == doctest::Approx(std::sqrt(2.0)));
  CHECK(b.k1 == doctest::Approx(3.5 * std::sqrt(2.0) / 7.0));
  b = theoretical_bounds(1.0, 1.0, 0.0, 0.0, 0.25, 5);
  CHECK(b.k0 == doctest::Approx(0.5));
  double prev = 1e300;
  for (std::size_t t = 1; t < 5000; t = t * 3 / 2 + 1) {
    const double k0 = theoretical_bounds(1.0, 1.4, 2.0, 0.7, 0.1, t).k0;
    CHECK(k0 <= prev);
    prev = k0;
  }
}

TEST_CASE("stepsize feasibility and argument errors") {
  const auto p = identity_problem();
  const auto o = exact_oracle(p);
  CHECK_THROWS_AS(smp_run(p, o, {0.6, 10}, 0), ConfigError);
  CHECK_NOTHROW(smp_run(p, o, {1.0 / std::sqrt(3.0), 10}, 0));
  CHECK_THROWS_AS(smp_run(p, o, {0.0, 10}, 0), ConfigError);
  CHECK_THROWS_AS(smp_run(p, o, {0.1, 0}, 0), ConfigError);
  RunOptions opt;
  opt.checkpoints = {0, 3};
  CHECK_THROWS_AS(smp_run(p, o, {0.1, 10}, 0, opt), ConfigError);
  opt.checkpoints = {11};
  CHECK_THROWS_AS(rmsa_run(p, o, {0.1, 10}, 0, opt), ConfigError);
}

TEST_CASE("non-finite oracle output names the step") {
  const auto p = identity_problem();
  StochasticOracle o;
  int calls = 0;
  o.sample = [&](const Point& z, RandomStream&) {
    return ++calls >= 7 ? Point(Vector{NAN}) : z;
  };
  try {
    smp_run(p, o, {0.1, 10}, 0);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("step 4") != std::string::npos);
  }
}

TEST_CASE("geometric checkpoints") {
  CHECK(geometric_checkpoints(1) == std::vector<std::size_t>{1});
  CHECK(geometric_checkpoints(10) == std::vector<std::size_t>{1, 2, 4, 8, 10});
  CHECK(geometric_checkpoints(16) == std::vector<std::size_t>{1, 2, 4, 8, 16});
}

TEST_CASE("determinism, oracle counts, averaging and feasibility") {
  const auto inst = bilinear_instance();
  const auto s = eig_saddle(inst);
  const auto o = averaged_oracle(inst, 1);
  const double gamma = constant_stepsize(1.0, std::sqrt(2.0), eig_lipschitz(inst),
                                         o.effective_M(), 300);
  const auto setup = s.problem.setup;
  Point sum;
  std::size_t steps = 0;
  double worst_avg = 0.0;
  bool feasible = true;
  RunOptions opt;
  opt.checkpoints = {1, 17, 300};
  std::vector<Point> z_check;
  opt.on_step = [&](std::size_t tau, const Point& w, const Point& r) {
    feasible = feasible && setup->contains(w, 1e-10) && setup->contains(r, 1e-10) &&
               setup->in_interior(w) && setup->in_interior(r);
    if (steps == 0) sum = w.zeros_like();
    sum += w;
    ++steps;
    if (tau == 17 || tau == 300) z_check.push_back((1.0 / static_cast<double>(tau)) * sum);
  };
  const auto a = smp_run(s.problem, o, {gamma, 300}, 9, opt);
  CHECK(feasible);
  CHECK(a.oracle_calls == 600);
  CHECK(a.checkpoints[1].oracle_calls == 34);
  REQUIRE(z_check.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto d = a.checkpoints[i + 1].z_hat - z_check[i];
    worst_avg = std::max(worst_avg, setup->norm(d));
  }
  CHECK(worst_avg <= 1e-12);

  opt.on_step = nullptr;
  const auto b = smp_run(s.problem, o, {gamma, 300}, 9, opt);
  for (std::size_t i = 0; i < a.checkpoints.size(); ++i)
    CHECK(a.checkpoints[i].z_hat == b.checkpoints[i].z_hat);
  const auto c = smp_run(s.problem, o, {gamma, 300}, 10, opt);
  CHECK(!(a.checkpoints.back().z_hat == c.checkpoints.back().z_hat));

  const auto r = rmsa_run(s.problem, o, {gamma, 300}, 9, opt);
  CHECK(r.oracle_calls == 300);
  CHECK(r.seed == 9);
}

TEST_CASE("exact oracle: doubling t roughly halves Err_N") {
  const auto inst = bilinear_instance();
  const auto s = eig_saddle(inst);
  const auto o = exact_oracle(s.problem);
  const std::size_t t = 12800;
  const double gamma = constant_stepsize(1.0, std::sqrt(2.0), eig_lipschitz(inst), 0.0, t);
  RunOptions opt;
  opt.checkpoints = {100, 200, 400, 800, 1600, 3200, 6400, 12800};
  opt.evaluate = [&](const Point& z) {
    CheckpointErrors e;
    e.err_nash = err_nash_saddle(s, z);
    return e;
  };
  const auto rec = smp_run(s.problem, o, {gamma, t}, 0, opt);
  for (std::size_t i = 1; i < rec.checkpoints.size(); ++i) {
    const double ratio =
        *rec.checkpoints[i - 1].errors.err_nash / *rec.checkpoints[i].errors.err_nash;
    INFO("t = ", rec.checkpoints[i].t, " ratio ", ratio);
    CHECK(ratio >= 1.6);
    CHECK(ratio <= 2.4);
  }
}

TEST_CASE("pure-noise instance decays like t^{-1/2}") {
  // Z = unit ball in R^2, F = c constant (L = 0), Xi = c + sigma (e1, e2) with signs.
  const Vector c{0.5, 0.0};
  const double sigma = 1.0;
  VIProblem p;
  p.setup = euclidean_ball(2);
  p.op = [c](const Point&) { return Point(c); };
  StochasticOracle o;
  o.sample = [c, sigma](const Point&, RandomStream& s) {
    Vector v = c;
    for (auto& e : v) e += sigma * s.rademacher();
    return Point(v);
  };
  o.noise_M = sigma * std::sqrt(2.0);
  const double cn = std::hypot(c[0], c[1]);
  std::vector<double> ts, means;
  for (double lg : {2.0, 2.5, 3.0, 3.5, 4.0}) {
    const auto t = static_cast<std::size_t>(std::llround(std::pow(10.0, lg)));
    const double gamma = constant_stepsize(1.0, 1.0, 0.0, o.noise_M, t);
    RunOptions opt;
    opt.checkpoints = {t};
    double mean = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto rec = smp_run(p, o, {gamma, t}, RandomStream(77, seed), opt);
      mean += inner(Point(c), rec.checkpoints[0].z_hat) + cn;
    }
    ts.push_back(static_cast<double>(t));
    means.push_back(mean / 20.0);
  }
  const double slope = loglog_slope(ts, means);
  INFO("slope ", slope);
  CHECK(slope >= -0.65);
  CHECK(slope <= -0.35);
}

TEST_CASE("bound check on a subgaussian instance") {
  const auto inst = *generate_instance("eig_min", {{"n", 4}, {"blocks", {2, 2}}}, 3).eig;
  const auto s = eig_saddle(inst);
  const auto o = averaged_oracle(inst, 1);
  const std::size_t t = 200;
  const double L = eig_lipschitz(inst);
  const double gamma = constant_stepsize(1.0, std::sqrt(2.0), L, o.effective_M(), t);
  const auto b = theoretical_bounds(1.0, std::sqrt(2.0), L, o.noise_M, 0.0, t);
  RunOptions opt;
  opt.checkpoints = {t};
  int exceed = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto rec = smp_run(s.problem, o, {gamma, t}, seed, opt);
    if (err_nash_saddle(s, rec.checkpoints[0].z_hat) > b.k0 + 3.0 * b.k1) ++exceed;
  }
  CHECK(exceed <= 10);
}
