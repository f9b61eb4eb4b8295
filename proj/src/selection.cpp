#include "pitrom/selection.hpp"

#include "pitrom/matrix_io.hpp"
#include "pitrom/rng.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <fstream>
#include <ostream>

namespace pitrom {

namespace {

// Right singular block for a selection of the given rank, with the
// numerical-rank precondition applied.
Matrix right_block(const DataMatrix& data, int rank, const char* who) {
  if (rank < 1) throw std::invalid_argument(std::string(who) + ": rank must be at least 1");
  const SvdResult svd = truncated_svd(data.values, SvdTruncation::rank_cap(rank));
  if (svd.rank() < rank ||
      svd.singular_values(rank - 1) <= 1e-12 * svd.singular_values(0))
    throw std::invalid_argument(std::string(who) + ": rank exceeds the numerical rank of the data");
  return svd.right;
}

int argmax_abs(const Vector& v) {
  int best = 0;
  double best_abs = std::abs(v(0));
  for (int j = 1; j < v.size(); ++j) {
    const double a = std::abs(v(j));
    if (a > best_abs) {  // strict: ties keep the smallest index
      best_abs = a;
      best = j;
    }
  }
  return best;
}

}  // namespace

LeverageScores leverage_scores(const DataMatrix& data, int rank) {
  const Matrix v = right_block(data, rank, "leverage_scores");

  LeverageScores result;
  result.rank = rank;
  result.scores = v.rowwise().squaredNorm();
  const double total = result.scores.sum();  // equals rank up to roundoff
  result.scores /= total;
  return result;
}

TimePointSelection sample_time_points(const LeverageScores& scores, int n_rand,
                                      std::uint64_t seed) {
  if (n_rand < 1) throw std::invalid_argument("sample_time_points: n_rand must be at least 1");

  const int n = static_cast<int>(scores.scores.size());
  Vector cumulative(n);
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    acc += scores.scores(j);
    cumulative(j) = acc;
  }
  cumulative(n - 1) = 1.0;  // guard against roundoff in the last bin

  CounterRng rng(seed);
  std::vector<int> draws;
  draws.reserve(n_rand);
  for (int d = 0; d < n_rand; ++d) {
    const double u = rng.next_unit();
    const double* begin = cumulative.data();
    const int j = static_cast<int>(std::upper_bound(begin, begin + n, u) - begin);
    draws.push_back(std::min(j, n - 1));
  }

  std::sort(draws.begin(), draws.end());
  draws.erase(std::unique(draws.begin(), draws.end()), draws.end());

  TimePointSelection sel;
  sel.indices = std::move(draws);
  sel.method = {SelectionMethod::Kind::leverage, scores.rank, n_rand, seed};
  return sel;
}

TimePointSelection deim_select(const DataMatrix& data, int rank) {
  const Matrix v = right_block(data, rank, "deim_select");

  std::vector<int> picked;
  picked.reserve(rank);
  picked.push_back(argmax_abs(v.col(0)));

  for (int i = 1; i < rank; ++i) {
    // Interpolation system on the already selected indices.
    Matrix sub(i, i);
    Vector rhs(i);
    for (int a = 0; a < i; ++a) {
      for (int b = 0; b < i; ++b) sub(a, b) = v(picked[a], b);
      rhs(a) = v(picked[a], i);
    }
    Eigen::FullPivLU<Matrix> lu(sub);
    lu.setThreshold(1e-14);
    if (lu.rank() < i)
      throw std::runtime_error("deim_select: singular interpolation system");
    const Vector coeffs = lu.solve(rhs);
    const Vector residual = v.col(i) - v.leftCols(i) * coeffs;
    picked.push_back(argmax_abs(residual));
  }

  TimePointSelection sel;
  sel.indices = std::move(picked);
  sel.method = {SelectionMethod::Kind::deim, rank, 0, 0};
  return sel;
}

Matrix deim_projection(const DataMatrix& data, const TimePointSelection& selection) {
  const int r = static_cast<int>(selection.indices.size());
  if (r < 1) throw std::invalid_argument("deim_projection: empty selection");
  const Matrix v = right_block(data, r, "deim_projection");

  Matrix rows(r, r);  // V_r(p, :)
  Matrix columns(data.values.rows(), r);
  for (int a = 0; a < r; ++a) {
    rows.row(a) = v.row(selection.indices[a]);
    columns.col(a) = data.values.col(selection.indices[a]);
  }

  // A ~ C (V_r(p,:)^T)^{-1} V_r^T
  const Matrix coeffs = rows.transpose().partialPivLu().solve(Matrix(v.transpose()));
  return columns * coeffs;
}

double deim_interpolation_check(const DataMatrix& data, const TimePointSelection& selection) {
  const double denom = data.values.norm();
  if (denom == 0.0) return 0.0;
  return (data.values - deim_projection(data, selection)).norm() / denom;
}

TimePointSelection merge_selections(const std::vector<TimePointSelection>& parts) {
  TimePointSelection merged;
  for (const auto& part : parts) {
    merged.indices.insert(merged.indices.end(), part.indices.begin(), part.indices.end());
    if (!merged.source_tag.empty()) merged.source_tag += "+";
    merged.source_tag += part.source_tag;
  }
  std::sort(merged.indices.begin(), merged.indices.end());
  merged.indices.erase(std::unique(merged.indices.begin(), merged.indices.end()),
                       merged.indices.end());
  if (!parts.empty()) merged.method = parts.front().method;
  return merged;
}

void write_selection(std::ostream& out, const TimePointSelection& selection, const TimeGrid& grid,
                     const LeverageScores* scores) {
  out << "# timeIndex time " << (scores ? "score" : "selectionOrder") << '\n';
  for (size_t k = 0; k < selection.indices.size(); ++k) {
    const int j = selection.indices[k];
    out << j << ' ' << format_double(grid.time(j)) << ' ';
    if (scores)
      out << format_double(scores->scores(j));
    else
      out << (k + 1);
    out << '\n';
  }
}

void write_selection(const std::filesystem::path& path, const TimePointSelection& selection,
                     const TimeGrid& grid, const LeverageScores* scores) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_selection: cannot open " + path.string());
  write_selection(out, selection, grid, scores);
}

}  // namespace pitrom
