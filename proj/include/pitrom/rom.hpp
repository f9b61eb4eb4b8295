#pragma once

#include "pitrom/basisgen.hpp"
#include "pitrom/linalg.hpp"
#include "pitrom/timestepping.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace pitrom {

struct ErrorReport {
  double rel_l2h1 = 0.0;
  Vector rel_l2_over_time;
  int basis_dimension = 0;
  std::string method;
};

/// Galerkin reduced-order time stepping: the implicit Euler recursion
/// projected onto the basis, returned as lifted full-dimensional states.
/// The initial reduced state solves (phi^T M phi) a_0 = phi^T M u_0.
Trajectory solve_reduced(const ProblemOperators& ops, const ReducedBasis& basis);

/// sqrt(sum_{n>=1} dt |u_n - v_n|_H1^2) / sqrt(sum_{n>=1} dt |u_n|_H1^2).
/// The initial states are excluded; an identically zero full trajectory is an
/// error.
double rel_l2h1_error(const Trajectory& full, const Trajectory& reduced, const SpdMatrix& h1,
                      double dt);

/// Per-time-point relative L2 error, falling back to the absolute error when
/// |u_n| <= 1e-14 * max_j |u_j|.
Vector rel_l2_over_time(const Trajectory& full, const Trajectory& reduced, const SpdMatrix& mass);

/// Error-report dump: "timeIndex time relL2" rows plus a summary comment
/// carrying the scalar space-time error.
void write_error_report(std::ostream& out, const ErrorReport& report, const TimeGrid& grid);
void write_error_report(const std::filesystem::path& path, const ErrorReport& report,
                        const TimeGrid& grid);

}  // namespace pitrom
