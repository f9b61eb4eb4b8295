#include "pitrom/assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace pitrom {

namespace {

using Triplet = Eigen::Triplet<double>;

// P1 element matrices from vertex coordinates. b/c are the gradients of the
// barycentric coordinates scaled by 2*area.
struct LocalGeometry {
  double area;
  std::array<double, 3> b;
  std::array<double, 3> c;
};

LocalGeometry local_geometry(const RectangleMesh& mesh, int t) {
  const auto& tri = mesh.triangle(t);
  std::array<double, 3> x{}, y{};
  for (int v = 0; v < 3; ++v) {
    x[v] = mesh.node_x(tri[v]);
    y[v] = mesh.node_y(tri[v]);
  }
  LocalGeometry g{};
  g.area = 0.5 * ((x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0]));
  for (int v = 0; v < 3; ++v) {
    const int v1 = (v + 1) % 3, v2 = (v + 2) % 3;
    g.b[v] = y[v1] - y[v2];
    g.c[v] = x[v2] - x[v1];
  }
  return g;
}

enum class Restriction { free_dofs, none };

// index of a node in the assembled system, or -1 when eliminated
int dof_of(const RectangleMesh& mesh, int node, Restriction r) {
  return r == Restriction::free_dofs ? mesh.free_index(node) : node;
}

int system_dim(const RectangleMesh& mesh, Restriction r) {
  return r == Restriction::free_dofs ? mesh.free_count() : mesh.node_count();
}

SpdMatrix assemble(const RectangleMesh& mesh, Restriction restriction, bool with_mass,
                   const CoefficientField* kappa) {
  const int dim = system_dim(mesh, restriction);
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<size_t>(mesh.triangle_count()) * 9);

  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangle(t);
    const LocalGeometry g = local_geometry(mesh, t);
    const double k = kappa ? kappa->value(mesh.cell_of_triangle(t)) : 0.0;

    for (int a = 0; a < 3; ++a) {
      const int ia = dof_of(mesh, tri[a], restriction);
      if (ia < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const int ib = dof_of(mesh, tri[b], restriction);
        if (ib < 0) continue;
        double value = 0.0;
        if (kappa) value += k * (g.b[a] * g.b[b] + g.c[a] * g.c[b]) / (4.0 * g.area);
        if (with_mass) value += g.area / 12.0 * (a == b ? 2.0 : 1.0);
        triplets.emplace_back(ia, ib, value);
      }
    }
  }

  SpdMatrix::Storage m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return SpdMatrix(std::move(m));
}

}  // namespace

SpdMatrix assemble_mass(const RectangleMesh& mesh) {
  return assemble(mesh, Restriction::free_dofs, true, nullptr);
}

SpdMatrix assemble_mass_unrestricted(const RectangleMesh& mesh) {
  return assemble(mesh, Restriction::none, true, nullptr);
}

SpdMatrix assemble_stiffness(const RectangleMesh& mesh, const CoefficientField& kappa) {
  if (kappa.nx() != mesh.nx() || kappa.ny() != mesh.ny())
    throw std::invalid_argument("assemble_stiffness: coefficient raster does not match mesh");
  return assemble(mesh, Restriction::free_dofs, false, &kappa);
}

SpdMatrix assemble_stiffness_unrestricted(const RectangleMesh& mesh, const CoefficientField& kappa) {
  if (kappa.nx() != mesh.nx() || kappa.ny() != mesh.ny())
    throw std::invalid_argument("assemble_stiffness: coefficient raster does not match mesh");
  return assemble(mesh, Restriction::none, false, &kappa);
}

SpdMatrix h1_inner_product(const RectangleMesh& mesh) {
  const CoefficientField unit = CoefficientField::constant(mesh.nx(), mesh.ny(), 1.0);
  return assemble(mesh, Restriction::free_dofs, true, &unit);
}

Vector assemble_load(const RectangleMesh& mesh, const Vector& source, double flux,
                     const std::optional<BoundarySegment>& segment) {
  if (source.size() != mesh.node_count())
    throw std::invalid_argument("assemble_load: source must be a full nodal vector");
  if (!source.allFinite()) throw std::invalid_argument("assemble_load: non-finite source");

  Vector full = Vector::Zero(mesh.node_count());
  // Volume term M * source, element by element.
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangle(t);
    const double area = local_geometry(mesh, t).area;
    for (int a = 0; a < 3; ++a) {
      double v = 0.0;
      for (int b = 0; b < 3; ++b) v += (a == b ? 2.0 : 1.0) * source(tri[b]);
      full(tri[a]) += area / 12.0 * v;
    }
  }

  // Boundary mass of a constant flux density: each edge inside the segment
  // contributes flux * |edge| / 2 to both endpoints.
  if (segment && flux != 0.0) {
    const double len = mesh.edge_length(segment->edge);
    for (const auto& e : mesh.boundary_edges(segment->edge)) {
      const double mid = mesh.edge_mid_param(segment->edge, e);
      if (mid < segment->lo || mid > segment->hi) continue;
      full(e.first) += 0.5 * flux * len;
      full(e.second) += 0.5 * flux * len;
    }
  }

  return mesh.restrict_to_free(full);
}

}  // namespace pitrom
