#include "pitrom/experiments.hpp"
#include "pitrom/reference.hpp"
#include "pitrom/rng.hpp"
#include "pitrom/timestepping.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace pitrom;

namespace {

SpdMatrix scalar_matrix(double value) {
  SpdMatrix::Storage m(1, 1);
  m.insert(0, 0) = value;
  return SpdMatrix(std::move(m));
}

}  // namespace

TEST_SUITE("timestepping") {

TEST_CASE("scalar implicit Euler step has the closed form") {
  // (1 + dt a) u1 = dt f + u0 with a = 1, f = 0, u0 = 1, dt = 1 -> 0.5.
  Vector u0(1), f(1);
  u0 << 1.0;
  f << 0.0;
  const Vector u1 = step_implicit_euler(scalar_matrix(1.0), scalar_matrix(1.0), f, u0, 1.0, 1e-14);
  CHECK(u1(0) == doctest::Approx(0.5).epsilon(1e-12));

  // Generic scalar case.
  const double a = 2.5, dt = 0.2, fval = 1.3, uprev = -0.7;
  Vector fv(1), uv(1);
  fv << fval;
  uv << uprev;
  const Vector u = step_implicit_euler(scalar_matrix(1.0), scalar_matrix(a), fv, uv, dt, 1e-14);
  CHECK(u(0) == doctest::Approx((dt * fval + uprev) / (1.0 + dt * a)).epsilon(1e-12));

  // Zero data, zero state stays zero.
  Vector z(1);
  z << 0.0;
  CHECK(step_implicit_euler(scalar_matrix(1.0), scalar_matrix(1.0), z, z, 0.5, 1e-14)(0) == 0.0);
}

TEST_CASE("solve_full on zero data is identically zero") {
  StoveConfig config;
  config.nx = config.ny = 8;
  config.steps = 10;
  config.signals = {{{-100.0, 0.0, 1.0}, {-100.0, 0.0, 1.0}, {-100.0, 0.0, 1.0}}};
  const Trajectory traj = solve_full(make_stove_problem(config));
  REQUIRE(traj.states.size() == 11);
  for (const auto& u : traj.states) CHECK(u.norm() == 0.0);
}

TEST_CASE("manufactured solution converges at first order in time") {
  const auto study = reference::manufactured_temporal_orders(16, {8, 16, 32, 64}, 1024);
  REQUIRE(study.observed_orders.size() == 3);
  for (double order : study.observed_orders) {
    CHECK(order > 0.9);
    CHECK(order < 1.1);
  }
}

TEST_CASE("manufactured solution converges at second order in space") {
  const auto study = reference::manufactured_spatial_orders({4, 8, 16}, 4096);
  REQUIRE(study.observed_orders.size() == 2);
  for (double order : study.observed_orders) {
    CHECK(order > 1.8);
    CHECK(order < 2.2);
  }
}

TEST_CASE("time-constant data approaches the steady state monotonically") {
  const int nx = 10;
  RectangleMesh mesh(1.0, 1.0, nx, nx, DirichletEdges::all());
  auto field = CoefficientField::constant(nx, nx, 1.0);
  const Vector ones = Vector::Ones(mesh.node_count());
  const int nodes = mesh.node_count();
  TransientProblem problem(
      std::move(mesh), TimeGrid{10.0, 100}, [field](double) { return field; },
      [](double) { return 0.0; }, [ones](double) { return ones; }, [](double) { return 0.0; },
      std::nullopt, Vector::Zero(nodes));
  const ProblemOperators ops(problem);
  const Vector steady = spd_solve(ops.stiffness_at(0), ops.load_at(0), 1e-13);
  const Trajectory traj = solve_full(ops);

  double prev = ops.h1_norm(traj.states[0] - steady);
  for (size_t n = 1; n < traj.states.size(); ++n) {
    const double dist = ops.h1_norm(traj.states[n] - steady);
    CHECK(dist <= prev * (1.0 + 1e-12));
    prev = dist;
  }
  CHECK(prev < 1e-4 * ops.h1_norm(steady));
}

TEST_CASE("solve_local") {
  StoveConfig config;
  config.nx = config.ny = 12;
  config.steps = 40;
  const ProblemOperators ops(make_stove_problem(config));

  SUBCASE("zero steps returns only the start vector") {
    CounterRng rng(5);
    Vector start(ops.n_free());
    for (int i = 0; i < start.size(); ++i) start(i) = rng.next_gaussian();
    const Trajectory traj = solve_local(ops, 7, 0, start);
    REQUIRE(traj.states.size() == 1);
    CHECK((traj.states[0] - start).norm() == 0.0);
    CHECK(traj.start_index == 7);
  }

  SUBCASE("restart from the full trajectory reproduces its slice") {
    const Trajectory full = solve_full(ops);
    for (int start : {0, 11, 30}) {
      const int steps = std::min(10, config.steps - start);
      const Trajectory local = solve_local(ops, start, steps, full.states[start]);
      for (int s = 0; s <= steps; ++s) {
        const double scale = ops.h1_norm(full.states[start + s]);
        const double diff = ops.h1_norm(local.states[s] - full.states[start + s]);
        CHECK(diff <= 1e-10 * std::max(scale, 1e-30));
      }
    }
  }

  SUBCASE("windows beyond the grid are rejected") {
    CHECK_THROWS_AS(solve_local(ops, 35, 10, Vector::Zero(ops.n_free())), std::invalid_argument);
    CHECK_THROWS_AS(solve_local(ops, -1, 2, Vector::Zero(ops.n_free())), std::invalid_argument);
  }

  SUBCASE("zero data dissipates the H1 norm") {
    StoveConfig quiet = config;
    quiet.signals = {{{-100.0, 0.0, 1.0}, {-100.0, 0.0, 1.0}, {-100.0, 0.0, 1.0}}};
    const ProblemOperators quiet_ops(make_stove_problem(quiet));
    CounterRng rng(29);
    Vector start(quiet_ops.n_free());
    for (int i = 0; i < start.size(); ++i) start(i) = rng.next_gaussian();
    const Trajectory traj = solve_local(quiet_ops, 0, 20, start);
    double prev = quiet_ops.h1_norm(traj.states[0]);
    for (size_t s = 1; s < traj.states.size(); ++s) {
      const double now = quiet_ops.h1_norm(traj.states[s]);
      CHECK(now <= prev * (1.0 + 1e-12));
      prev = now;
    }
  }
}

TEST_CASE("stove energy rises during the first heating phase and decays at the end") {
  StoveConfig config;
  config.nx = config.ny = 16;
  const ProblemOperators ops(make_stove_problem(config));
  const Trajectory traj = solve_full(ops);
  const TimeGrid& grid = ops.grid();

  auto index_at = [&](double t) { return static_cast<int>(std::lround(t / grid.dt())); };
  // Ramp-up of the first source: [1, 2.25].
  for (int n = index_at(1.0); n < index_at(2.25); ++n)
    CHECK(ops.l2_norm(traj.states[n + 1]) > ops.l2_norm(traj.states[n]));
  // After every support has ended: [9.6, 10].
  for (int n = index_at(9.6); n < grid.step_count; ++n)
    CHECK(ops.l2_norm(traj.states[n + 1]) < ops.l2_norm(traj.states[n]));
}

TEST_CASE("distinct diffusion keys share cached operators") {
  Spe10Config config;
  config.nx = 22;
  config.ny = 6;
  config.steps = 40;
  const ProblemOperators ops(make_spe10_problem(config));
  CHECK(ops.distinct_operator_count() == 3);  // base, A on, A+B on

  StoveConfig stove;
  stove.nx = stove.ny = 8;
  stove.steps = 10;
  CHECK(ProblemOperators(make_stove_problem(stove)).distinct_operator_count() == 1);
}

TEST_CASE("trajectory files round-trip") {
  StoveConfig config;
  config.nx = config.ny = 8;
  config.steps = 6;
  const ProblemOperators ops(make_stove_problem(config));
  const Trajectory traj = solve_full(ops);

  std::stringstream buffer;
  write_trajectory(buffer, traj, ops.grid().dt());
  double dt = 0.0;
  const Trajectory back = read_trajectory(buffer, &dt);
  CHECK(dt == ops.grid().dt());
  CHECK(back.start_index == traj.start_index);
  REQUIRE(back.states.size() == traj.states.size());
  for (size_t n = 0; n < traj.states.size(); ++n)
    CHECK((back.states[n] - traj.states[n]).norm() == 0.0);
}

}  // TEST_SUITE
