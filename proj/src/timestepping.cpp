#include "pitrom/timestepping.hpp"

#include "pitrom/matrix_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace pitrom {

Vector step_implicit_euler(const SpdMatrix& mass, const SpdMatrix& stiffness, const Vector& load,
                           const Vector& u_prev, double dt, double solver_tol) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_implicit_euler: dt must be positive");
  if (mass.dim() != stiffness.dim() || load.size() != mass.dim() || u_prev.size() != mass.dim())
    throw std::invalid_argument("step_implicit_euler: dimension mismatch");

  const SpdMatrix system = mass.plus_scaled(stiffness, dt);
  const Vector rhs = dt * load + mass.apply(u_prev);
  return spd_solve(system, rhs, solver_tol);
}

ProblemOperators::ProblemOperators(TransientProblem problem, double solver_tol, bool cache_loads)
    : problem_(std::move(problem)),
      solver_tol_(solver_tol),
      mass_(assemble_mass(problem_.mesh())),
      h1_(h1_inner_product(problem_.mesh())),
      initial_state_(problem_.mesh().restrict_to_free(problem_.initial_value())) {
  const TimeGrid& grid = problem_.grid();
  const double dt = grid.dt();

  std::map<double, int> slot_of_key;
  slot_of_index_.resize(grid.point_count());
  for (int j = 0; j < grid.point_count(); ++j) {
    const double t = grid.time(j);
    const double key = problem_.diffusion_key(t);
    auto it = slot_of_key.find(key);
    if (it == slot_of_key.end()) {
      SpdMatrix stiffness = assemble_stiffness(problem_.mesh(), problem_.diffusion(t));
      SpdMatrix step_matrix = mass_.plus_scaled(stiffness, dt);
      key_ops_.push_back(std::make_unique<KeyOps>(std::move(stiffness), std::move(step_matrix)));
      it = slot_of_key.emplace(key, static_cast<int>(key_ops_.size()) - 1).first;
    }
    slot_of_index_[j] = it->second;
  }

  if (cache_loads) {
    loads_.reserve(grid.point_count());
    for (int j = 0; j < grid.point_count(); ++j) {
      const double t = grid.time(j);
      loads_.push_back(assemble_load(problem_.mesh(), problem_.source(t), problem_.inflow(t),
                                     problem_.inflow_segment()));
    }
  }
}

const SpdMatrix& ProblemOperators::stiffness_at(int time_index) const {
  return key_ops_[slot_of_index_.at(time_index)]->stiffness;
}

const SpdMatrix& ProblemOperators::step_matrix_at(int time_index) const {
  return key_ops_[slot_of_index_.at(time_index)]->step_solver.matrix();
}

Vector ProblemOperators::load_at(int time_index) const {
  if (time_index < 0 || time_index >= grid().point_count())
    throw std::invalid_argument("load_at: time index outside the grid");
  if (!loads_.empty()) return loads_[time_index];
  const double t = grid().time(time_index);
  return assemble_load(problem_.mesh(), problem_.source(t), problem_.inflow(t),
                       problem_.inflow_segment());
}

Vector ProblemOperators::step(int time_index, const Vector& u_prev) const {
  const Vector rhs = grid().dt() * load_at(time_index) + mass_.apply(u_prev);
  return key_ops_[slot_of_index_[time_index]]->step_solver.solve(rhs, solver_tol_);
}

namespace {

Trajectory evolve(const ProblemOperators& ops, int start_index, int steps, Vector u_start) {
  Trajectory traj;
  traj.start_index = start_index;
  traj.states.reserve(steps + 1);
  traj.states.push_back(std::move(u_start));
  for (int s = 1; s <= steps; ++s) {
    const int index = start_index + s;
    try {
      traj.states.push_back(ops.step(index, traj.states.back()));
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("time step " + std::to_string(index) + ": " + e.what(),
                             e.achieved_residual(), e.iterations());
    }
  }
  return traj;
}

}  // namespace

Trajectory solve_full(const ProblemOperators& ops) {
  return evolve(ops, 0, ops.grid().step_count, ops.initial_state());
}

Trajectory solve_full(const TransientProblem& problem) {
  return solve_full(ProblemOperators(problem));
}

Trajectory solve_local(const ProblemOperators& ops, int start_index, int steps, Vector u_start) {
  if (start_index < 0 || steps < 0 || start_index + steps > ops.grid().step_count)
    throw std::invalid_argument("solve_local: window exceeds the time grid");
  if (u_start.size() != ops.n_free())
    throw std::invalid_argument("solve_local: initial vector has wrong dimension");
  if (!u_start.allFinite()) throw std::invalid_argument("solve_local: non-finite initial vector");
  return evolve(ops, start_index, steps, std::move(u_start));
}

void write_trajectory(std::ostream& out, const Trajectory& traj, double dt) {
  out << traj.start_index << ' ' << format_double(dt) << '\n';
  Matrix m(traj.states.empty() ? 0 : traj.states.front().size(),
           static_cast<Eigen::Index>(traj.states.size()));
  for (size_t j = 0; j < traj.states.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = traj.states[j];
  write_matrix(out, m);
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj, double dt) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trajectory: cannot open " + path.string());
  write_trajectory(out, traj, dt);
  if (!out) throw std::runtime_error("write_trajectory: write failed for " + path.string());
}

Trajectory read_trajectory(std::istream& in, double* dt_out) {
  Trajectory traj;
  double dt = 0.0;
  if (!(in >> traj.start_index >> dt)) throw std::runtime_error("read_trajectory: malformed header");
  if (dt_out) *dt_out = dt;
  const Matrix m = read_matrix(in);
  traj.states.reserve(m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) traj.states.push_back(m.col(j));
  return traj;
}

Trajectory read_trajectory(const std::filesystem::path& path, double* dt_out) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_trajectory: cannot open " + path.string());
  return read_trajectory(in, dt_out);
}

}  // namespace pitrom
