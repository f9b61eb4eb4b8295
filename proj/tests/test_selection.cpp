#include "pitrom/experiments.hpp"
#include "pitrom/reference.hpp"
#include "pitrom/rng.hpp"
#include "pitrom/selection.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace pitrom;

namespace {

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  CounterRng rng(seed);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.next_gaussian();
  return m;
}

DataMatrix stove_rhs() {
  StoveConfig config;
  return build_data_matrix(make_stove_problem(config), DataKind::rhs);
}

}  // namespace

TEST_SUITE("selection") {

TEST_CASE("leverage scores") {
  SUBCASE("orthogonal equal-norm columns give uniform scores") {
    const int n = 30;
    const Matrix a = 2.5 * Matrix::Identity(n, n);
    const LeverageScores scores = leverage_scores({a, "test"}, n);
    for (int j = 0; j < n; ++j) CHECK(scores.scores(j) == doctest::Approx(1.0 / n).epsilon(1e-12));
  }

  SUBCASE("scores vanish on zero columns") {
    Matrix a = Matrix::Zero(10, 8);
    a.col(1) = random_matrix(10, 1, 3);
    a.col(4) = random_matrix(10, 1, 4);
    const LeverageScores scores = leverage_scores({a, "test"}, 2);
    for (int j = 0; j < 8; ++j) {
      if (j == 1 || j == 4)
        CHECK(scores.scores(j) > 1e-12);
      else
        CHECK(scores.scores(j) <= 1e-20);
    }
  }

  SUBCASE("scores sum to one and are nonnegative") {
    const Matrix a = random_matrix(40, 25, 5);
    const LeverageScores scores = leverage_scores({a, "test"}, 7);
    CHECK(std::abs(scores.scores.sum() - 1.0) <= 1e-12);
    CHECK(scores.scores.minCoeff() >= 0.0);
  }

  SUBCASE("stove scores are supported exactly on the active intervals") {
    StoveConfig config;
    const TransientProblem problem = make_stove_problem(config);
    const DataMatrix data = build_data_matrix(problem, DataKind::rhs);
    const LeverageScores scores = leverage_scores(data, 3);
    for (int j = 0; j <= config.steps; ++j) {
      const double t = problem.grid().time(j);
      bool active = false;
      for (const auto& s : config.signals) active = active || s.value(t) != 0.0;
      if (active)
        CHECK(scores.scores(j) > 1e-16);
      else
        CHECK(scores.scores(j) <= 1e-16);
    }
  }

  SUBCASE("rank above the numerical rank is rejected") {
    const DataMatrix data = stove_rhs();  // exact rank 3
    CHECK_THROWS_AS(leverage_scores(data, 4), std::invalid_argument);
    CHECK_THROWS_AS(leverage_scores(data, 0), std::invalid_argument);
  }
}

TEST_CASE("sample_time_points") {
  SUBCASE("one-hot scores always select that index") {
    LeverageScores scores;
    scores.rank = 1;
    scores.scores = Vector::Zero(12);
    scores.scores(5) = 1.0;
    for (std::uint64_t seed : {0ULL, 7ULL, 99ULL}) {
      const TimePointSelection sel = sample_time_points(scores, 6, seed);
      REQUIRE(sel.indices.size() == 1);
      CHECK(sel.indices[0] == 5);
    }
  }

  SUBCASE("deterministic in the seed and de-duplicated") {
    const DataMatrix data = stove_rhs();
    const LeverageScores scores = leverage_scores(data, 3);
    const TimePointSelection a = sample_time_points(scores, 15, 42);
    const TimePointSelection b = sample_time_points(scores, 15, 42);
    CHECK(a.indices == b.indices);
    CHECK(a.indices.size() <= 15);
    CHECK(std::is_sorted(a.indices.begin(), a.indices.end()));
    CHECK(std::adjacent_find(a.indices.begin(), a.indices.end()) == a.indices.end());
  }

  SUBCASE("uniform scores draw uniformly (3 sigma binomial bounds)") {
    const int n = 20;
    LeverageScores scores;
    scores.rank = 1;
    scores.scores = Vector::Constant(n, 1.0 / n);
    const int draws = 40000;
    std::vector<int> counts(n, 0);
    for (int d = 0; d < draws; ++d)
      ++counts[sample_time_points(scores, 1, 1000 + d).indices.front()];
    const double p = 1.0 / n;
    const double sigma = std::sqrt(p * (1.0 - p) * draws);
    for (int j = 0; j < n; ++j) CHECK(std::abs(counts[j] - p * draws) <= 3.0 * sigma);
  }
}

TEST_CASE("deim_select") {
  SUBCASE("diagonal matrix selects indices in magnitude order") {
    Matrix a = Matrix::Zero(3, 3);
    a(0, 0) = 5.0;
    a(1, 1) = 3.0;
    a(2, 2) = 1.0;
    const TimePointSelection sel = deim_select({a, "diag"}, 3);
    CHECK(sel.indices == std::vector<int>{0, 1, 2});
  }

  SUBCASE("returns exactly rank distinct indices, deterministically") {
    const Matrix a = random_matrix(60, 40, 17);
    const TimePointSelection s1 = deim_select({a, "r"}, 5);
    const TimePointSelection s2 = deim_select({a, "r"}, 5);
    CHECK(s1.indices == s2.indices);
    REQUIRE(s1.indices.size() == 5);
    std::vector<int> sorted = s1.indices;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  }

  SUBCASE("matches the brute-force reference on random data") {
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix a = random_matrix(30, 20, 100 + trial);
      const TimePointSelection sel = deim_select({a, "r"}, 4);
      CHECK(sel.indices == reference::deim_indices(reference::gram_right_vectors(a, 4)));
    }
  }

  SUBCASE("is covariant under column permutation") {
    const Matrix a = random_matrix(25, 12, 23);
    const TimePointSelection sel = deim_select({a, "r"}, 4);

    // Rotate columns by 5.
    const int cols = static_cast<int>(a.cols());
    Matrix b(a.rows(), cols);
    for (int j = 0; j < cols; ++j) b.col((j + 5) % cols) = a.col(j);
    const TimePointSelection sel_b = deim_select({b, "r"}, 4);

    std::vector<int> expected;
    for (int idx : sel.indices) expected.push_back((idx + 5) % cols);
    CHECK(sel_b.indices == expected);
  }

  SUBCASE("stove data: one pick per source, near the peaks, matching the reference") {
    StoveConfig config;
    const TransientProblem problem = make_stove_problem(config);
    const DataMatrix data = build_data_matrix(problem, DataKind::rhs);
    const TimePointSelection sel = deim_select(data, 3);
    CHECK(sel.indices == reference::deim_indices(reference::gram_right_vectors(data.values, 3)));

    std::vector<double> times;
    for (int idx : sel.indices) times.push_back(problem.grid().time(idx));
    std::sort(times.begin(), times.end());
    REQUIRE(times.size() == 3);
    CHECK(std::abs(times[0] - 2.25) <= 0.5);
    CHECK(std::abs(times[1] - 5.0) <= 0.5);
    CHECK(std::abs(times[2] - 7.5) <= 0.5);
    for (int s = 0; s < 3; ++s) {
      CHECK(times[s] >= config.signals[s].support_lo());
      CHECK(times[s] <= config.signals[s].support_hi());
    }
  }

  SUBCASE("permeability experiment: rank-1 rhs pick sits on the strong inflow plateau") {
    Spe10Config config;
    const TransientProblem problem = make_spe10_problem(config);
    const DataMatrix data = build_data_matrix(problem, DataKind::rhs);
    const TimePointSelection sel = deim_select(data, 1);
    REQUIRE(sel.indices.size() == 1);
    const double t = problem.grid().time(sel.indices[0]);
    CHECK(t >= 8.0);
    CHECK(t < 9.0);
  }

  SUBCASE("rank above the numerical rank is rejected") {
    const DataMatrix data = stove_rhs();
    CHECK_THROWS_AS(deim_select(data, 4), std::invalid_argument);
  }
}

TEST_CASE("deim interpolation quality") {
  SUBCASE("exact rank-r matrices are recovered exactly") {
    const Matrix u = random_matrix(40, 4, 31);
    const Matrix v = random_matrix(25, 4, 32);
    const DataMatrix data{u * v.transpose(), "lowrank"};
    const TimePointSelection sel = deim_select(data, 4);
    CHECK(deim_interpolation_check(data, sel) <= 1e-9);

    // The projection reproduces the selected columns exactly.
    const Matrix projection = deim_projection(data, sel);
    for (int idx : sel.indices)
      CHECK((projection.col(idx) - data.values.col(idx)).norm() <=
            1e-10 * data.values.col(idx).norm());
  }

  SUBCASE("rank-(r+1) matrices leave at least the optimal tail") {
    const Matrix u = random_matrix(40, 5, 33);
    const Matrix v = random_matrix(25, 5, 34);
    const DataMatrix data{u * v.transpose(), "lowrank"};
    const TimePointSelection sel = deim_select(data, 4);
    const double residual = deim_interpolation_check(data, sel);
    const Vector sigma = reference::gram_singular_values(data.values);
    CHECK(residual >= sigma(4) / data.values.norm() * (1.0 - 1e-10));
  }

  SUBCASE("random matrices stay within a factor 10 of the optimal tail") {
    int within = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const Matrix a = random_matrix(60, 40, 7000 + trial);
      const DataMatrix data{a, "random"};
      const double residual = deim_interpolation_check(data, deim_select(data, 5));
      const Vector sigma = reference::gram_singular_values(a);
      double tail = 0.0;
      for (Eigen::Index i = 5; i < sigma.size(); ++i) tail += sigma(i) * sigma(i);
      if (residual <= 10.0 * std::sqrt(tail) / a.norm()) ++within;
    }
    CHECK(within >= 45);
  }
}

TEST_CASE("merge_selections produces an ordered distinct union") {
  TimePointSelection a;
  a.indices = {8, 3};
  a.source_tag = "rhs";
  TimePointSelection b;
  b.indices = {3, 0, 11};
  b.source_tag = "diffusion";
  const TimePointSelection merged = merge_selections({a, b});
  CHECK(merged.indices == std::vector<int>{0, 3, 8, 11});
  CHECK(merged.source_tag == "rhs+diffusion");
}

TEST_CASE("selection dump format") {
  const DataMatrix data = stove_rhs();
  const TimePointSelection sel = deim_select(data, 3);
  std::stringstream out;
  write_selection(out, sel, TimeGrid{10.0, 200});
  std::string header;
  std::getline(out, header);
  CHECK(header.find("timeIndex") != std::string::npos);
  int index;
  double time;
  int order;
  int rows = 0;
  while (out >> index >> time >> order) {
    CHECK(time == doctest::Approx(index * 0.05));
    CHECK(order == rows + 1);
    ++rows;
  }
  CHECK(rows == 3);
}

}  // TEST_SUITE
