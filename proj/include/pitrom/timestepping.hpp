#pragma once

#include "pitrom/linalg.hpp"
#include "pitrom/problem.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <vector>

namespace pitrom {

/// States u_{start_index} .. u_{start_index + steps} on the problem's time
/// grid, each a free-dof vector.
struct Trajectory {
  int start_index = 0;
  std::vector<Vector> states;

  int end_index() const { return start_index + static_cast<int>(states.size()) - 1; }
};

/// One implicit Euler step: solves (M + dt A) u = dt f + M u_prev with the
/// conjugate-gradient solver.
Vector step_implicit_euler(const SpdMatrix& mass, const SpdMatrix& stiffness, const Vector& load,
                           const Vector& u_prev, double dt, double solver_tol);

/// Assembled operators of a TransientProblem, built once and read-only
/// afterwards so they can be shared across threads. One stiffness matrix and
/// one factorized step matrix are kept per distinct diffusion key; loads are
/// precomputed for every time grid point.
class ProblemOperators {
public:
  /// cache_loads controls whether the load vectors of all grid points are
  /// precomputed (cheap for the bundled experiments, costly for very fine
  /// grids).
  explicit ProblemOperators(TransientProblem problem, double solver_tol = 1e-12,
                            bool cache_loads = true);

  const TransientProblem& problem() const { return problem_; }
  const RectangleMesh& mesh() const { return problem_.mesh(); }
  const TimeGrid& grid() const { return problem_.grid(); }
  int n_free() const { return problem_.mesh().free_count(); }
  double solver_tol() const { return solver_tol_; }

  const SpdMatrix& mass() const { return mass_; }
  const SpdMatrix& h1() const { return h1_; }
  const SpdMatrix& stiffness_at(int time_index) const;
  /// The factorized implicit Euler matrix M + dt A at a time index.
  const SpdMatrix& step_matrix_at(int time_index) const;
  Vector load_at(int time_index) const;

  /// Advances u_prev from grid point time_index-1 to time_index.
  Vector step(int time_index, const Vector& u_prev) const;

  double h1_norm(const Vector& v) const { return h1_.norm(v); }
  double l2_norm(const Vector& v) const { return mass_.norm(v); }

  /// Initial value restricted to free dofs.
  const Vector& initial_state() const { return initial_state_; }

  int distinct_operator_count() const { return static_cast<int>(key_ops_.size()); }

private:
  struct KeyOps {
    SpdMatrix stiffness;
    SpdSolver step_solver;  // factorization is not movable: built in place

    KeyOps(SpdMatrix stiffness_in, SpdMatrix step_matrix)
        : stiffness(std::move(stiffness_in)), step_solver(std::move(step_matrix)) {}
  };

  TransientProblem problem_;
  double solver_tol_;
  SpdMatrix mass_;
  SpdMatrix h1_;
  Vector initial_state_;
  std::vector<std::unique_ptr<KeyOps>> key_ops_;
  std::vector<int> slot_of_index_;  // time index -> key_ops_ slot
  std::vector<Vector> loads_;
};

/// Full-order implicit Euler evolution over the whole grid, states u_0..u_M.
Trajectory solve_full(const ProblemOperators& ops);
Trajectory solve_full(const TransientProblem& problem);

/// Local evolution over `steps` steps starting from grid point start_index
/// with the given free-dof initial vector.
Trajectory solve_local(const ProblemOperators& ops, int start_index, int steps, Vector u_start);

/// Trajectory file: header line "startIndex dt", then the states as columns
/// in the matrix text format.
void write_trajectory(std::ostream& out, const Trajectory& traj, double dt);
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj, double dt);
Trajectory read_trajectory(std::istream& in, double* dt_out = nullptr);
Trajectory read_trajectory(const std::filesystem::path& path, double* dt_out = nullptr);

}  // namespace pitrom
