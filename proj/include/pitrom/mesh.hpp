#pragma once

#include "pitrom/linalg.hpp"

#include <array>
#include <functional>
#include <vector>

namespace pitrom {

/// Which sides of the rectangle carry homogeneous Dirichlet conditions.
/// Remaining boundary nodes are Neumann.
struct DirichletEdges {
  bool bottom = false;
  bool top = false;
  bool left = false;
  bool right = false;

  static DirichletEdges all() { return {true, true, true, true}; }
};

/// A span along one side of the rectangle, parameterized by x (bottom/top)
/// or y (left/right).
struct BoundarySegment {
  enum class Edge { bottom, top, left, right };
  Edge edge = Edge::top;
  double lo = 0.0;
  double hi = 0.0;
};

/// Uniform triangulation of [0,lx] x [0,ly]: nx * ny rectangular cells, each
/// split into two triangles along the same diagonal (lower-left to
/// upper-right). Nodes are numbered row by row from the bottom-left corner.
class RectangleMesh {
public:
  RectangleMesh(double lx, double ly, int nx, int ny, DirichletEdges dirichlet);

  double lx() const { return lx_; }
  double ly() const { return ly_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double hx() const { return lx_ / nx_; }
  double hy() const { return ly_ / ny_; }

  int node_count() const { return (nx_ + 1) * (ny_ + 1); }
  int cell_count() const { return nx_ * ny_; }
  int triangle_count() const { return 2 * nx_ * ny_; }

  int node_index(int i, int j) const { return j * (nx_ + 1) + i; }
  double node_x(int node) const { return (node % (nx_ + 1)) * hx(); }
  double node_y(int node) const { return (node / (nx_ + 1)) * hy(); }

  const std::array<int, 3>& triangle(int t) const { return triangles_[t]; }
  int cell_of_triangle(int t) const { return t / 2; }
  double cell_center_x(int cell) const { return (cell % nx_ + 0.5) * hx(); }
  double cell_center_y(int cell) const { return (cell / nx_ + 0.5) * hy(); }
  double cell_area() const { return hx() * hy(); }

  bool is_dirichlet(int node) const { return dirichlet_mask_[node]; }
  int dirichlet_count() const { return node_count() - free_count_; }

  int free_count() const { return free_count_; }
  /// Free-dof index of a node, or -1 for Dirichlet nodes.
  int free_index(int node) const { return free_index_[node]; }
  int node_of_free(int free) const { return free_nodes_[free]; }

  Vector restrict_to_free(const Vector& full) const;
  Vector prolong_to_full(const Vector& free) const;

  /// Boundary edges (node pairs) along one side, ordered by position.
  std::vector<std::pair<int, int>> boundary_edges(BoundarySegment::Edge edge) const;
  /// Midpoint parameter (x or y) of a boundary edge on the given side.
  double edge_mid_param(BoundarySegment::Edge edge, const std::pair<int, int>& e) const;
  double edge_length(BoundarySegment::Edge edge) const;

private:
  double lx_, ly_;
  int nx_, ny_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<bool> dirichlet_mask_;
  std::vector<int> free_index_;
  std::vector<int> free_nodes_;
  int free_count_ = 0;
};

/// Nonnegative diffusion coefficient, piecewise constant per rectangle cell.
class CoefficientField {
public:
  CoefficientField(int nx, int ny, std::vector<double> cell_values);

  static CoefficientField constant(int nx, int ny, double value);
  /// Samples f at cell centroids.
  static CoefficientField from_function(const RectangleMesh& mesh,
                                        const std::function<double(double, double)>& f);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double value(int cell) const { return values_[cell]; }
  const std::vector<double>& values() const { return values_; }

private:
  int nx_, ny_;
  std::vector<double> values_;
};

}  // namespace pitrom
