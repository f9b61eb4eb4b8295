#include "pitrom/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace pitrom {

TransientProblem::TransientProblem(RectangleMesh mesh, TimeGrid grid,
                                   std::function<CoefficientField(double)> diffusion,
                                   std::function<double(double)> diffusion_key,
                                   std::function<Vector(double)> source,
                                   std::function<double(double)> inflow,
                                   std::optional<BoundarySegment> inflow_segment,
                                   Vector initial_value)
    : mesh_(std::move(mesh)),
      grid_(grid),
      diffusion_(std::move(diffusion)),
      diffusion_key_(std::move(diffusion_key)),
      source_(std::move(source)),
      inflow_(std::move(inflow)),
      inflow_segment_(std::move(inflow_segment)),
      initial_value_(std::move(initial_value)) {
  if (!(grid_.end_time > 0.0) || grid_.step_count < 1)
    throw std::invalid_argument("TransientProblem: invalid time grid");
  if (!diffusion_ || !diffusion_key_ || !source_ || !inflow_)
    throw std::invalid_argument("TransientProblem: missing data function");
  if (mesh_.free_count() == mesh_.node_count())
    throw std::invalid_argument("TransientProblem: at least one Dirichlet node is required");
  if (initial_value_.size() != mesh_.node_count())
    throw std::invalid_argument("TransientProblem: initial value must be a full nodal vector");
  if (!initial_value_.allFinite())
    throw std::invalid_argument("TransientProblem: non-finite initial value");
  for (int n = 0; n < mesh_.node_count(); ++n)
    if (mesh_.is_dirichlet(n) && initial_value_(n) != 0.0)
      throw std::invalid_argument("TransientProblem: initial value must vanish on Dirichlet nodes");
}

DataMatrix build_data_matrix(const TransientProblem& problem, DataKind kind) {
  const TimeGrid& grid = problem.grid();
  const int cols = grid.point_count();

  if (kind == DataKind::rhs) {
    Matrix values(problem.mesh().free_count(), cols);
    for (int j = 0; j < cols; ++j) {
      const double t = grid.time(j);
      values.col(j) = assemble_load(problem.mesh(), problem.source(t), problem.inflow(t),
                                    problem.inflow_segment());
    }
    return {std::move(values), "rhs"};
  }

  Matrix values(problem.mesh().cell_count(), cols);
  for (int j = 0; j < cols; ++j) {
    const CoefficientField field = problem.diffusion(grid.time(j));
    if (field.nx() != problem.mesh().nx() || field.ny() != problem.mesh().ny())
      throw std::invalid_argument("build_data_matrix: diffusion raster does not match mesh");
    for (int c = 0; c < problem.mesh().cell_count(); ++c) values(c, j) = field.value(c);
  }
  return {std::move(values), "diffusion"};
}

}  // namespace pitrom
