// Acceptance suite: one pass/fail line per criterion. Each criterion can be
// run alone via --criterion N; 0 runs all of them.

#include "pitrom/experiments.hpp"
#include "pitrom/matrix_io.hpp"
#include "pitrom/parallel.hpp"
#include "pitrom/reference.hpp"
#include "pitrom/rng.hpp"
#include "pitrom/rom.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

using namespace pitrom;

namespace {

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  CounterRng rng(seed);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.next_gaussian();
  return m;
}

std::string fmt(double v) { return format_double(v); }

// 1. Full-order correctness: first order in time, second order in space.
CriterionResult criterion1(int) {
  const auto temporal = reference::manufactured_temporal_orders(32, {8, 16, 32, 64}, 2048);
  const auto spatial = reference::manufactured_spatial_orders({4, 8, 16, 32}, 16384);

  bool pass = temporal.observed_orders.size() == 3 && spatial.observed_orders.size() == 3;
  std::ostringstream detail;
  detail << "temporal orders";
  for (double o : temporal.observed_orders) {
    detail << ' ' << fmt(o);
    pass = pass && o >= 0.9 && o <= 1.1;
  }
  detail << "; spatial orders";
  for (double o : spatial.observed_orders) {
    detail << ' ' << fmt(o);
    pass = pass && o >= 1.8 && o <= 2.2;
  }
  return {pass, detail.str()};
}

// 2. DEIM determinism and interpolatory property on random matrices.
CriterionResult criterion2(int) {
  bool pass = true;
  double worst_column_residual = 0.0;
  double worst_exact_residual = 0.0;

  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = random_matrix(60, 40, 24000 + trial);
    const DataMatrix data{a, "random"};
    const TimePointSelection sel = deim_select(data, 5);
    const TimePointSelection repeat = deim_select(data, 5);

    pass = pass && sel.indices.size() == 5 && sel.indices == repeat.indices;
    std::vector<int> sorted = sel.indices;
    std::sort(sorted.begin(), sorted.end());
    pass = pass && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();

    const Matrix projection = deim_projection(data, sel);
    for (int idx : sel.indices) {
      const double rel =
          (projection.col(idx) - a.col(idx)).norm() / std::max(a.col(idx).norm(), 1e-300);
      worst_column_residual = std::max(worst_column_residual, rel);
    }

    // Exact rank-5 input: Eckart-Young exactness of the projection.
    const SvdResult svd = truncated_svd(a, SvdTruncation::rank_cap(5));
    const Matrix low = svd.left * svd.singular_values.asDiagonal() * svd.right.transpose();
    const DataMatrix low_data{low, "lowrank"};
    worst_exact_residual = std::max(
        worst_exact_residual, deim_interpolation_check(low_data, deim_select(low_data, 5)));
  }

  pass = pass && worst_column_residual <= 1e-10 && worst_exact_residual <= 1e-9;
  return {pass, "worst selected-column residual " + fmt(worst_column_residual) +
                    ", worst exact-rank residual " + fmt(worst_exact_residual)};
}

// 3. Stove DEIM selection near the published marks and ROM accuracy.
CriterionResult criterion3(int workers) {
  const StoveConfig config;
  const TransientProblem problem = make_stove_problem(config);
  const ProblemOperators ops(problem);
  const DataMatrix data = build_data_matrix(problem, DataKind::rhs);
  const int rank = numerical_rank(data.values, 1e-10);

  bool pass = rank == 3;
  TimePointSelection sel = deim_select(data, rank);
  sel.source_tag = data.tag;

  std::vector<double> times;
  for (int idx : sel.indices) times.push_back(problem.grid().time(idx));
  std::sort(times.begin(), times.end());
  const std::array<double, 3> marks{2.25, 5.0, 7.5};
  std::ostringstream detail;
  detail << "selected times";
  for (size_t i = 0; i < times.size(); ++i) {
    detail << ' ' << fmt(times[i]);
    pass = pass && std::abs(times[i] - marks[i]) <= 0.5;
    pass = pass && times[i] >= config.signals[i].support_lo() &&
           times[i] <= config.signals[i].support_hi();
  }

  const ReducedBasis basis = generate_basis(ops, sel, config.basis, workers);
  const Trajectory full = solve_full(ops);
  const Trajectory reduced = solve_reduced(ops, basis);
  const double err = rel_l2h1_error(full, reduced, ops.h1(), ops.grid().dt());
  pass = pass && err <= 1e-3;
  detail << "; relL2H1 " << fmt(err) << " (basis dimension " << basis.dimension() << ")";
  return {pass, detail.str()};
}

// 4. Stove quantile ordering across 1000 randomized realizations.
CriterionResult criterion4(int workers) {
  const StoveConfig config;
  std::vector<std::uint64_t> seeds(1000);
  for (size_t i = 0; i < seeds.size(); ++i) seeds[i] = 1000 + i;

  const QuantileStudy deim = run_stove(config, StoveMethod::deim, 3, {}, workers);
  const double deim_err = deim.realizations.front().second;

  const QuantileStudy lev3 = run_stove(config, StoveMethod::leverage, 3, seeds, workers);
  const QuantileStudy lev15 = run_stove(config, StoveMethod::leverage, 15, seeds, workers);

  const double median3 = lev3.quantile(50);
  int below = 0;
  for (const auto& r : lev15.realizations)
    if (r.second <= 10.0 * deim_err) ++below;
  const double fraction = static_cast<double>(below) / lev15.realizations.size();

  const bool pass = median3 >= 10.0 * deim_err && fraction >= 0.95;
  return {pass, "deim " + fmt(deim_err) + ", leverage-3 median " + fmt(median3) +
                    ", leverage-15 fraction within 10x of deim " + fmt(fraction)};
}

// 5. Permeability experiment ordering of the three selection strategies.
CriterionResult criterion5(int workers) {
  const Spe10Config config;
  std::vector<std::uint64_t> seeds(500);
  for (size_t i = 0; i < seeds.size(); ++i) seeds[i] = 40000 + i;

  const Spe10Result deim_end = run_spe10(config, Spe10Method::deim_end, 4, {}, workers);
  const Spe10Result deim_start = run_spe10(config, Spe10Method::deim_start, 4, {}, workers);
  const Spe10Result leverage = run_spe10(config, Spe10Method::leverage, 20, seeds, workers);

  const double err_end = deim_end.study.realizations.front().second;
  const double err_start = deim_start.study.realizations.front().second;
  const double lev88 = leverage.study.quantile(88);

  bool pass = err_end > err_start;
  pass = pass && lev88 < std::min(err_end, err_start);

  // Mean relative L2(t) curves: end-anchored DEIM is worse than start-anchored
  // on most of the interval (3, 10).
  const TimeGrid grid{config.end_time, config.steps};
  int worse = 0, total = 0;
  for (int j = 0; j <= config.steps; ++j) {
    const double t = grid.time(j);
    if (t <= 3.0 || t >= 10.0) continue;
    ++total;
    if (deim_end.mean_rel_l2_over_time(j) > deim_start.mean_rel_l2_over_time(j)) ++worse;
  }
  pass = pass && 2 * worse > total;

  return {pass, "deimEnd " + fmt(err_end) + ", deimStart " + fmt(err_start) + ", leverage p88 " +
                    fmt(lev88) + ", deimEnd worse on " + std::to_string(worse) + "/" +
                    std::to_string(total) + " points in (3,10)"};
}

// 6. POD exactness and Galerkin consistency.
CriterionResult criterion6(int) {
  // POD of the full stove trajectory at the desk-scale default.
  const StoveConfig config;
  const ProblemOperators ops(make_stove_problem(config));
  const Trajectory full = solve_full(ops);
  Matrix snapshots(ops.n_free(), static_cast<Eigen::Index>(full.states.size()));
  for (size_t j = 0; j < full.states.size(); ++j)
    snapshots.col(static_cast<Eigen::Index>(j)) = full.states[j];
  const SvdResult svd = truncated_svd(snapshots, SvdTruncation::rel_tol(1e-12));
  ReducedBasis pod;
  pod.vectors = svd.left;
  pod.singular_values = svd.singular_values;
  const double pod_err =
      rel_l2h1_error(full, solve_reduced(ops, pod), ops.h1(), ops.grid().dt());

  // Identity basis on a smaller instance reproduces the full solve.
  StoveConfig small = config;
  small.nx = small.ny = 24;
  small.steps = 100;
  const ProblemOperators small_ops(make_stove_problem(small));
  const Trajectory small_full = solve_full(small_ops);
  ReducedBasis identity;
  identity.vectors = Matrix::Identity(small_ops.n_free(), small_ops.n_free());
  identity.singular_values = Vector::Ones(small_ops.n_free());
  const Trajectory reproduced = solve_reduced(small_ops, identity);
  double scale = 0.0, worst = 0.0;
  for (const auto& u : small_full.states) scale = std::max(scale, small_ops.h1_norm(u));
  for (size_t n = 0; n < small_full.states.size(); ++n)
    worst = std::max(worst,
                     small_ops.h1_norm(small_full.states[n] - reproduced.states[n]) / scale);

  const bool pass = pod_err <= 1e-8 && worst <= 1e-10;
  return {pass, "POD relL2H1 " + fmt(pod_err) + " (dimension " +
                    std::to_string(pod.dimension()) + "), identity-basis deviation " + fmt(worst)};
}

// 7. Parallel invariance: byte-identical results for 1, 4, and 8 workers.
CriterionResult criterion7(int) {
  StoveConfig config;
  config.basis.seed = 99;

  const TransientProblem problem = make_stove_problem(config);
  const ProblemOperators ops(problem);
  const DataMatrix data = build_data_matrix(problem, DataKind::rhs);
  TimePointSelection sel = deim_select(data, 3);
  sel.source_tag = data.tag;

  std::array<std::string, 3> basis_bytes;
  std::array<std::string, 3> study_bytes;
  const std::array<int, 3> worker_counts{1, 4, 8};
  std::vector<std::uint64_t> seeds(40);
  for (size_t i = 0; i < seeds.size(); ++i) seeds[i] = 7000 + i;

  for (size_t w = 0; w < worker_counts.size(); ++w) {
    const ReducedBasis basis = generate_basis(ops, sel, config.basis, worker_counts[w]);
    std::ostringstream bytes;
    write_matrix(bytes, basis.vectors);
    write_matrix(bytes, Matrix(basis.singular_values));
    basis_bytes[w] = bytes.str();

    const QuantileStudy study =
        run_stove(config, StoveMethod::leverage, 5, seeds, worker_counts[w]);
    std::ostringstream study_stream;
    write_quantile_study(study_stream, study);
    for (const auto& r : study.realizations)
      study_stream << r.first << ' ' << fmt(r.second) << '\n';
    study_bytes[w] = study_stream.str();
  }

  const bool pass = basis_bytes[0] == basis_bytes[1] && basis_bytes[0] == basis_bytes[2] &&
                    study_bytes[0] == study_bytes[1] && study_bytes[0] == study_bytes[2];
  return {pass, pass ? "basis and study bytes identical across 1/4/8 workers"
                     : "outputs differ between worker counts"};
}

// 8. Leverage-score contract: normalization, uniformity, support, sampling.
CriterionResult criterion8(int) {
  bool pass = true;
  std::ostringstream detail;

  // Uniform scores for orthogonal equal-norm columns.
  const int n = 24;
  const LeverageScores uniform = leverage_scores({Matrix(3.0 * Matrix::Identity(n, n)), "id"}, n);
  pass = pass && std::abs(uniform.scores.sum() - 1.0) <= 1e-12;
  for (int j = 0; j < n; ++j)
    pass = pass && std::abs(uniform.scores(j) - 1.0 / n) <= 1e-12;

  // Stove scores: normalized, vanish exactly off the signal supports.
  const StoveConfig config;
  const TransientProblem problem = make_stove_problem(config);
  const DataMatrix data = build_data_matrix(problem, DataKind::rhs);
  const LeverageScores scores = leverage_scores(data, 3);
  pass = pass && std::abs(scores.scores.sum() - 1.0) <= 1e-12;
  for (int j = 0; j <= config.steps; ++j) {
    const double t = problem.grid().time(j);
    bool active = false;
    for (const auto& s : config.signals) active = active || s.value(t) != 0.0;
    pass = pass && (active ? scores.scores(j) > 1e-16 : scores.scores(j) <= 1e-16);
  }
  detail << "score sum deviation " << fmt(std::abs(scores.scores.sum() - 1.0));

  // Empirical sampling frequencies over 1e5 draws stay within 3 sigma.
  const int draws = 100000;
  std::vector<int> counts(scores.scores.size(), 0);
  for (int d = 0; d < draws; ++d)
    ++counts[sample_time_points(scores, 1, 500000 + d).indices.front()];
  int violations = 0;
  for (Eigen::Index j = 0; j < scores.scores.size(); ++j) {
    const double p = scores.scores(j);
    const double sigma = std::sqrt(p * (1.0 - p) * draws);
    if (std::abs(counts[j] - p * draws) > 3.0 * sigma + 1e-12) ++violations;
  }
  pass = pass && violations == 0;
  detail << ", 3-sigma violations " << violations << "/" << scores.scores.size();
  return {pass, detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  int criterion = 0;
  int workers = default_workers();
  app.add_option("--criterion", criterion, "Criterion number (0: all)");
  app.add_option("--workers", workers, "Worker threads");
  CLI11_PARSE(app, argc, argv);

  using Runner = CriterionResult (*)(int);
  const std::array<std::pair<const char*, Runner>, 8> criteria{{
      {"full-order convergence orders", criterion1},
      {"DEIM determinism and interpolation", criterion2},
      {"stove DEIM selection and ROM accuracy", criterion3},
      {"stove quantile ordering", criterion4},
      {"permeability experiment ordering", criterion5},
      {"POD exactness and Galerkin consistency", criterion6},
      {"parallel invariance", criterion7},
      {"leverage-score contract", criterion8},
  }};

  bool all_pass = true;
  for (int c = 1; c <= 8; ++c) {
    if (criterion != 0 && criterion != c) continue;
    const auto start = std::chrono::steady_clock::now();
    CriterionResult result;
    try {
      result = criteria[c - 1].second(workers);
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d (%s): %s [%.1fs] %s\n", c, criteria[c - 1].first,
                result.pass ? "PASS" : "FAIL", elapsed, result.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && result.pass;
  }
  return all_pass ? 0 : 1;
}
