#pragma once

#include "pitrom/linalg.hpp"
#include "pitrom/problem.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace pitrom {

/// Probability weights over the time grid points of a data matrix: the
/// squared row norms of the rank-r right singular vector block, divided by r.
struct LeverageScores {
  int rank = 0;
  Vector scores;  // length = column count, nonnegative, sums to 1
};

/// How a set of time points was chosen.
struct SelectionMethod {
  enum class Kind { deim, leverage };
  Kind kind = Kind::deim;
  int rank = 0;
  int n_rand = 0;          // leverage only
  std::uint64_t seed = 0;  // leverage only
};

/// Distinct time-grid indices plus method metadata. DEIM selections keep the
/// greedy selection order; sampled selections are sorted ascending.
struct TimePointSelection {
  std::vector<int> indices;
  SelectionMethod method;
  std::string source_tag;
};

/// Leverage scores from the rank-r right singular block of the data matrix.
/// rank must not exceed the numerical rank (sigma_rank > 1e-12 sigma_1).
LeverageScores leverage_scores(const DataMatrix& data, int rank);

/// n_rand independent draws with replacement from the score distribution,
/// de-duplicated. Deterministic for a fixed seed.
TimePointSelection sample_time_points(const LeverageScores& scores, int n_rand,
                                      std::uint64_t seed);

/// Greedy DEIM index selection on the leading right singular vectors: the
/// first index maximizes |v_1|; each following vector is reduced by the
/// interpolatory projection onto the already selected indices and the index
/// of the largest residual entry is added. Ties break to the smallest index.
TimePointSelection deim_select(const DataMatrix& data, int rank);

/// The DEIM column projection C (V_r(p,:)^T)^{-1} V_r^T built from the
/// selected columns C; reproduces the selected columns exactly.
Matrix deim_projection(const DataMatrix& data, const TimePointSelection& selection);

/// Relative Frobenius residual |A - C X|_F / |A|_F of the DEIM projection.
double deim_interpolation_check(const DataMatrix& data, const TimePointSelection& selection);

/// Ordered union of several selections (ascending, distinct).
TimePointSelection merge_selections(const std::vector<TimePointSelection>& parts);

/// Selection dump: one line per index, "timeIndex time score-or-order".
void write_selection(std::ostream& out, const TimePointSelection& selection, const TimeGrid& grid,
                     const LeverageScores* scores = nullptr);
void write_selection(const std::filesystem::path& path, const TimePointSelection& selection,
                     const TimeGrid& grid, const LeverageScores* scores = nullptr);

}  // namespace pitrom
