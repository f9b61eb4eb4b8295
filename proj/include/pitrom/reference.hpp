#pragma once

#include "pitrom/linalg.hpp"
#include "pitrom/mesh.hpp"
#include "pitrom/problem.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pitrom::reference {

// Independent reference computations used to validate the main
// implementations. These deliberately take different algorithmic routes
// (Gram-matrix eigendecompositions, explicit quadrature, hand-rolled
// elimination) than the code they check.

/// Singular values from the eigendecomposition of the smaller Gram matrix.
Vector gram_singular_values(const Matrix& a);

/// Leading right singular vectors from the eigendecomposition of A^T A.
Matrix gram_right_vectors(const Matrix& a, int rank);

/// Numerical rank via column-pivoted Householder QR (|R_ii| > rel_tol |R_00|).
/// Unlike the Gram route this resolves ranks far below sqrt(machine epsilon).
int qr_numerical_rank(const Matrix& a, double rel_tol);

/// Greedy interpolation-point selection on the columns of v, written with
/// hand-rolled Gaussian elimination.
std::vector<int> deim_indices(const Matrix& right_vectors);

/// Midpoint-rule integral of a per-cell field.
double field_integral(const RectangleMesh& mesh, const CoefficientField& field);

/// L2 norm of a P1 nodal function via the edge-midpoint quadrature rule
/// (exact for quadratics).
double p1_l2_norm(const RectangleMesh& mesh, const Vector& full_nodal);

/// L2 distance between a P1 nodal function and a smooth function.
double p1_l2_error(const RectangleMesh& mesh, const Vector& full_nodal,
                   const std::function<double(double, double)>& exact);

/// Heat problem with known solution exp(-t) sin(pi x) sin(pi y) on the unit
/// square (unit diffusion, matching source and initial value).
TransientProblem manufactured_heat_problem(int nx, int ny, double end_time, int steps);

struct ConvergenceStudy {
  std::vector<double> errors;
  std::vector<double> observed_orders;  // log2 of successive error ratios
};

/// Temporal orders on a fixed mesh against a fine-step reference solution.
ConvergenceStudy manufactured_temporal_orders(int nx, const std::vector<int>& step_counts,
                                              int reference_steps);

/// Spatial orders against the exact solution with a fine fixed time step.
ConvergenceStudy manufactured_spatial_orders(const std::vector<int>& mesh_sizes, int steps);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs every reference check and reports one line per check.
std::vector<CheckResult> run_all_checks();

}  // namespace pitrom::reference
