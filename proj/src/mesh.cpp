#include "pitrom/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace pitrom {

RectangleMesh::RectangleMesh(double lx, double ly, int nx, int ny, DirichletEdges dirichlet)
    : lx_(lx), ly_(ly), nx_(nx), ny_(ny) {
  if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("RectangleMesh: extents must be positive");
  if (nx < 2 || ny < 2) throw std::invalid_argument("RectangleMesh: need at least 2 cells per direction");

  triangles_.reserve(triangle_count());
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) {
      const int n00 = node_index(i, j);
      const int n10 = node_index(i + 1, j);
      const int n01 = node_index(i, j + 1);
      const int n11 = node_index(i + 1, j + 1);
      triangles_.push_back({n00, n10, n11});
      triangles_.push_back({n00, n11, n01});
    }

  dirichlet_mask_.assign(node_count(), false);
  for (int i = 0; i <= nx_; ++i) {
    if (dirichlet.bottom) dirichlet_mask_[node_index(i, 0)] = true;
    if (dirichlet.top) dirichlet_mask_[node_index(i, ny_)] = true;
  }
  for (int j = 0; j <= ny_; ++j) {
    if (dirichlet.left) dirichlet_mask_[node_index(0, j)] = true;
    if (dirichlet.right) dirichlet_mask_[node_index(nx_, j)] = true;
  }

  free_index_.assign(node_count(), -1);
  for (int n = 0; n < node_count(); ++n)
    if (!dirichlet_mask_[n]) {
      free_index_[n] = free_count_++;
      free_nodes_.push_back(n);
    }
}

Vector RectangleMesh::restrict_to_free(const Vector& full) const {
  if (full.size() != node_count()) throw std::invalid_argument("restrict_to_free: size mismatch");
  Vector v(free_count_);
  for (int f = 0; f < free_count_; ++f) v(f) = full(free_nodes_[f]);
  return v;
}

Vector RectangleMesh::prolong_to_full(const Vector& free) const {
  if (free.size() != free_count_) throw std::invalid_argument("prolong_to_full: size mismatch");
  Vector v = Vector::Zero(node_count());
  for (int f = 0; f < free_count_; ++f) v(free_nodes_[f]) = free(f);
  return v;
}

std::vector<std::pair<int, int>> RectangleMesh::boundary_edges(BoundarySegment::Edge edge) const {
  std::vector<std::pair<int, int>> edges;
  switch (edge) {
    case BoundarySegment::Edge::bottom:
      for (int i = 0; i < nx_; ++i) edges.emplace_back(node_index(i, 0), node_index(i + 1, 0));
      break;
    case BoundarySegment::Edge::top:
      for (int i = 0; i < nx_; ++i) edges.emplace_back(node_index(i, ny_), node_index(i + 1, ny_));
      break;
    case BoundarySegment::Edge::left:
      for (int j = 0; j < ny_; ++j) edges.emplace_back(node_index(0, j), node_index(0, j + 1));
      break;
    case BoundarySegment::Edge::right:
      for (int j = 0; j < ny_; ++j) edges.emplace_back(node_index(nx_, j), node_index(nx_, j + 1));
      break;
  }
  return edges;
}

double RectangleMesh::edge_mid_param(BoundarySegment::Edge edge, const std::pair<int, int>& e) const {
  const bool horizontal =
      edge == BoundarySegment::Edge::bottom || edge == BoundarySegment::Edge::top;
  return horizontal ? 0.5 * (node_x(e.first) + node_x(e.second))
                    : 0.5 * (node_y(e.first) + node_y(e.second));
}

double RectangleMesh::edge_length(BoundarySegment::Edge edge) const {
  const bool horizontal =
      edge == BoundarySegment::Edge::bottom || edge == BoundarySegment::Edge::top;
  return horizontal ? hx() : hy();
}

CoefficientField::CoefficientField(int nx, int ny, std::vector<double> cell_values)
    : nx_(nx), ny_(ny), values_(std::move(cell_values)) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("CoefficientField: invalid raster size");
  if (static_cast<int>(values_.size()) != nx * ny)
    throw std::invalid_argument("CoefficientField: value count does not match raster size");
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("CoefficientField: values must be finite and nonnegative");
}

CoefficientField CoefficientField::constant(int nx, int ny, double value) {
  return CoefficientField(nx, ny, std::vector<double>(static_cast<size_t>(nx) * ny, value));
}

CoefficientField CoefficientField::from_function(const RectangleMesh& mesh,
                                                 const std::function<double(double, double)>& f) {
  std::vector<double> values(mesh.cell_count());
  for (int c = 0; c < mesh.cell_count(); ++c)
    values[c] = f(mesh.cell_center_x(c), mesh.cell_center_y(c));
  return CoefficientField(mesh.nx(), mesh.ny(), std::move(values));
}

}  // namespace pitrom
