#pragma once

#include "pitrom/linalg.hpp"
#include "pitrom/selection.hpp"
#include "pitrom/timestepping.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace pitrom {

/// Whether a selected time point is the end or the start of its local window.
enum class AnchorMode { end_point, start_point };

struct BasisGenConfig {
  int n_t = 15;                     // local steps per window
  int k = 13;                       // keep the last n_t - k + 1 states
  double tol = 1e-8;                // SVD truncation of the pooled snapshots
  AnchorMode anchor = AnchorMode::end_point;
  std::uint64_t seed = 0;
  bool include_initial_value = true;
  int samples_per_window = 1;       // random start vectors per window
};

/// Window of local time steps derived from one selected index. Windows with
/// fewer than k steps are clamped to the grid and flagged short.
struct LocalWindow {
  int selected_index = 0;
  int start_index = 0;
  int steps = 0;
  bool is_short = false;
};

std::vector<LocalWindow> windows_from_selection(const TimePointSelection& selection,
                                                const BasisGenConfig& config, int step_count);

/// Column-orthonormal spatial basis plus the singular values of the pooled
/// snapshot matrix it was compressed from.
struct ReducedBasis {
  Matrix vectors;
  Vector singular_values;
  TimePointSelection selection;
  BasisGenConfig config;

  int dimension() const { return static_cast<int>(vectors.cols()); }
};

/// Runs one local solve per window (in parallel) seeded with a Gaussian
/// random start vector, keeps the trailing states, normalizes each snapshot
/// to unit H1 norm, pools them in window order, and compresses with a
/// truncated SVD. The per-window randomness depends only on (config.seed,
/// selected index, sample index), so the result is identical for any worker
/// count.
ReducedBasis generate_basis(const ProblemOperators& ops, const TimePointSelection& selection,
                            const BasisGenConfig& config, int workers = 1);

/// Per-time-point relative H1 error of the H1-orthogonal projection of the
/// trajectory onto the basis span; zero states report the absolute error.
Vector basis_quality_report(const ReducedBasis& basis, const Trajectory& trajectory,
                            const SpdMatrix& h1);

/// Basis dump in the matrix text format plus a sidecar metadata file
/// (<path>.meta) echoing the configuration, selection, and singular values.
void write_basis(const std::filesystem::path& path, const ReducedBasis& basis);
ReducedBasis read_basis(const std::filesystem::path& path);

}  // namespace pitrom
