#pragma once

#include "pitrom/linalg.hpp"
#include "pitrom/mesh.hpp"

#include <optional>

namespace pitrom {

/// Consistent P1 mass matrix on the free (non-Dirichlet) degrees of freedom.
SpdMatrix assemble_mass(const RectangleMesh& mesh);
/// Mass matrix over all nodes, no boundary elimination.
SpdMatrix assemble_mass_unrestricted(const RectangleMesh& mesh);

/// P1 stiffness matrix with per-cell diffusion coefficient, Dirichlet rows
/// and columns eliminated.
SpdMatrix assemble_stiffness(const RectangleMesh& mesh, const CoefficientField& kappa);
SpdMatrix assemble_stiffness_unrestricted(const RectangleMesh& mesh, const CoefficientField& kappa);

/// H1 inner-product matrix M + K1 (unit-coefficient stiffness) on free dofs.
SpdMatrix h1_inner_product(const RectangleMesh& mesh);

/// Load vector M * source plus the boundary-mass contribution of a constant
/// Neumann flux density on the given segment, restricted to free dofs.
/// `source` is a full nodal vector.
Vector assemble_load(const RectangleMesh& mesh, const Vector& source, double flux,
                     const std::optional<BoundarySegment>& segment);

}  // namespace pitrom
