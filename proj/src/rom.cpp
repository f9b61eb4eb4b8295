#include "pitrom/rom.hpp"

#include "pitrom/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

namespace pitrom {

Trajectory solve_reduced(const ProblemOperators& ops, const ReducedBasis& basis) {
  const Matrix& phi = basis.vectors;
  if (phi.cols() < 1) throw std::invalid_argument("solve_reduced: empty basis");
  if (phi.rows() != ops.n_free())
    throw std::invalid_argument("solve_reduced: basis does not match the problem dimension");

  const TimeGrid& grid = ops.grid();
  const double dt = grid.dt();

  const Matrix mass_reduced = phi.transpose() * (ops.mass().storage() * phi);
  const Eigen::LLT<Matrix> mass_llt(mass_reduced);
  if (mass_llt.info() != Eigen::Success)
    throw std::runtime_error("solve_reduced: reduced mass matrix not positive definite");

  // One factorized reduced step matrix per distinct full-order step matrix.
  std::map<const SpdMatrix*, Eigen::LLT<Matrix>> step_llt;
  for (int n = 1; n <= grid.step_count; ++n) {
    const SpdMatrix* key = &ops.step_matrix_at(n);
    if (step_llt.count(key)) continue;
    Eigen::LLT<Matrix> llt(Matrix(phi.transpose() * (key->storage() * phi)));
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("solve_reduced: reduced step matrix not positive definite");
    step_llt.emplace(key, std::move(llt));
  }

  Vector a = mass_llt.solve(phi.transpose() * ops.mass().apply(ops.initial_state()));

  Trajectory traj;
  traj.start_index = 0;
  traj.states.reserve(grid.point_count());
  traj.states.push_back(phi * a);
  for (int n = 1; n <= grid.step_count; ++n) {
    const Vector rhs =
        dt * (phi.transpose() * ops.load_at(n)) + mass_reduced * a;
    a = step_llt.at(&ops.step_matrix_at(n)).solve(rhs);
    traj.states.push_back(phi * a);
  }
  return traj;
}

namespace {

void check_aligned(const Trajectory& full, const Trajectory& reduced) {
  if (full.start_index != reduced.start_index ||
      full.states.size() != reduced.states.size())
    throw std::invalid_argument("error metric: trajectories are not aligned");
  if (!full.states.empty() && full.states[0].size() != reduced.states[0].size())
    throw std::invalid_argument("error metric: state dimensions differ");
}

}  // namespace

double rel_l2h1_error(const Trajectory& full, const Trajectory& reduced, const SpdMatrix& h1,
                      double dt) {
  check_aligned(full, reduced);
  if (!(dt > 0.0)) throw std::invalid_argument("rel_l2h1_error: dt must be positive");

  double num = 0.0, den = 0.0;
  for (size_t n = 1; n < full.states.size(); ++n) {
    const Vector diff = full.states[n] - reduced.states[n];
    num += dt * h1.inner(diff, diff);
    den += dt * h1.inner(full.states[n], full.states[n]);
  }
  if (den <= 0.0)
    throw std::domain_error("rel_l2h1_error: full solution is identically zero");
  return std::sqrt(num / den);
}

Vector rel_l2_over_time(const Trajectory& full, const Trajectory& reduced, const SpdMatrix& mass) {
  check_aligned(full, reduced);

  const size_t count = full.states.size();
  Vector full_norms(count);
  double max_norm = 0.0;
  for (size_t n = 0; n < count; ++n) {
    full_norms(static_cast<Eigen::Index>(n)) = mass.norm(full.states[n]);
    max_norm = std::max(max_norm, full_norms(static_cast<Eigen::Index>(n)));
  }

  Vector errors(count);
  for (size_t n = 0; n < count; ++n) {
    const double diff = mass.norm(full.states[n] - reduced.states[n]);
    const double denom = full_norms(static_cast<Eigen::Index>(n));
    errors(static_cast<Eigen::Index>(n)) = denom > 1e-14 * max_norm ? diff / denom : diff;
  }
  return errors;
}

void write_error_report(std::ostream& out, const ErrorReport& report, const TimeGrid& grid) {
  out << "# timeIndex time relL2\n";
  out << "# relL2H1 " << format_double(report.rel_l2h1) << '\n';
  out << "# basisDimension " << report.basis_dimension << " method " << report.method << '\n';
  for (Eigen::Index n = 0; n < report.rel_l2_over_time.size(); ++n)
    out << n << ' ' << format_double(grid.time(static_cast<int>(n))) << ' '
        << format_double(report.rel_l2_over_time(n)) << '\n';
}

void write_error_report(const std::filesystem::path& path, const ErrorReport& report,
                        const TimeGrid& grid) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_error_report: cannot open " + path.string());
  write_error_report(out, report, grid);
}

}  // namespace pitrom
