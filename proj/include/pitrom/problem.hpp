#pragma once

#include "pitrom/assembly.hpp"
#include "pitrom/linalg.hpp"
#include "pitrom/mesh.hpp"

#include <functional>
#include <optional>
#include <string>

namespace pitrom {

/// Uniform time grid t_j = j * dt for j = 0..step_count on [0, end_time].
struct TimeGrid {
  double end_time = 1.0;
  int step_count = 1;

  double dt() const { return end_time / step_count; }
  double time(int j) const { return j * dt(); }
  int point_count() const { return step_count + 1; }
};

/// Discrete parabolic problem d/dt u + div(kappa grad u) = f with
/// homogeneous Dirichlet conditions on the marked edges and an optional
/// constant-density Neumann inflow on one boundary segment.
///
/// diffusion_key must map equal times to equal keys only when the diffusion
/// field is identical; operator caches are built per distinct key.
class TransientProblem {
public:
  TransientProblem(RectangleMesh mesh, TimeGrid grid,
                   std::function<CoefficientField(double)> diffusion,
                   std::function<double(double)> diffusion_key,
                   std::function<Vector(double)> source,
                   std::function<double(double)> inflow,
                   std::optional<BoundarySegment> inflow_segment, Vector initial_value);

  const RectangleMesh& mesh() const { return mesh_; }
  const TimeGrid& grid() const { return grid_; }
  CoefficientField diffusion(double t) const { return diffusion_(t); }
  double diffusion_key(double t) const { return diffusion_key_(t); }
  Vector source(double t) const { return source_(t); }
  double inflow(double t) const { return inflow_(t); }
  const std::optional<BoundarySegment>& inflow_segment() const { return inflow_segment_; }
  const Vector& initial_value() const { return initial_value_; }

private:
  RectangleMesh mesh_;
  TimeGrid grid_;
  std::function<CoefficientField(double)> diffusion_;
  std::function<double(double)> diffusion_key_;
  std::function<Vector(double)> source_;
  std::function<double(double)> inflow_;
  std::optional<BoundarySegment> inflow_segment_;
  Vector initial_value_;  // full nodal, zero on Dirichlet nodes
};

/// Matrix whose column j holds the data vector at time grid point j.
struct DataMatrix {
  Matrix values;
  std::string tag;
};

enum class DataKind { rhs, diffusion };

/// rhs: column j is the assembled load F_j (free dofs). diffusion: column j
/// holds the per-cell diffusion values at t_j.
DataMatrix build_data_matrix(const TransientProblem& problem, DataKind kind);

}  // namespace pitrom
