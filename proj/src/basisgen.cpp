#include "pitrom/basisgen.hpp"

#include "pitrom/matrix_io.hpp"
#include "pitrom/parallel.hpp"
#include "pitrom/rng.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace pitrom {

namespace {

void validate_config(const BasisGenConfig& config) {
  if (config.n_t < 1 || config.k < 1 || config.k > config.n_t)
    throw std::invalid_argument("BasisGenConfig: need 1 <= k <= n_t");
  if (!(config.tol > 0.0 && config.tol < 1.0))
    throw std::invalid_argument("BasisGenConfig: tol must be in (0,1)");
  if (config.samples_per_window < 1)
    throw std::invalid_argument("BasisGenConfig: samples_per_window must be at least 1");
}

}  // namespace

std::vector<LocalWindow> windows_from_selection(const TimePointSelection& selection,
                                                const BasisGenConfig& config, int step_count) {
  validate_config(config);

  std::vector<int> ordered = selection.indices;
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  std::vector<LocalWindow> windows;
  windows.reserve(ordered.size());
  for (int p : ordered) {
    if (p < 0 || p > step_count)
      throw std::invalid_argument("windows_from_selection: index outside the time grid");
    LocalWindow w;
    w.selected_index = p;
    if (config.anchor == AnchorMode::end_point) {
      w.start_index = std::max(0, p - config.n_t);
      w.steps = std::min(config.n_t, p);
    } else {
      w.start_index = p;
      w.steps = std::min(config.n_t, step_count - p);
    }
    w.is_short = w.steps < config.k;
    windows.push_back(w);
  }
  return windows;
}

ReducedBasis generate_basis(const ProblemOperators& ops, const TimePointSelection& selection,
                            const BasisGenConfig& config, int workers) {
  validate_config(config);
  const auto windows = windows_from_selection(selection, config, ops.grid().step_count);

  // Per-window snapshot blocks, filled independently and pooled in window
  // order afterwards.
  std::vector<std::vector<Vector>> blocks(windows.size());
  parallel_for(static_cast<int>(windows.size()), workers, [&](int wi) {
    const LocalWindow& w = windows[wi];
    std::vector<Vector>& block = blocks[wi];
    for (int sample = 0; sample < config.samples_per_window; ++sample) {
      CounterRng rng(derive_seed(config.seed, static_cast<std::uint64_t>(w.selected_index),
                                 static_cast<std::uint64_t>(sample)));
      Vector start(ops.n_free());
      for (int i = 0; i < start.size(); ++i) start(i) = rng.next_gaussian();

      const Trajectory local = solve_local(ops, w.start_index, w.steps, std::move(start));
      const int first_kept = w.is_short ? 0 : config.k;
      for (int s = first_kept; s <= w.steps; ++s) {
        const double norm = ops.h1_norm(local.states[s]);
        if (norm > 0.0) block.push_back(local.states[s] / norm);
      }
    }
  });

  std::vector<Vector> pool;
  for (auto& block : blocks)
    for (auto& snapshot : block) pool.push_back(std::move(snapshot));

  if (config.include_initial_value) {
    const Vector& u0 = ops.initial_state();
    const double norm = ops.h1_norm(u0);
    if (norm > 0.0) pool.push_back(u0 / norm);
  }

  if (pool.empty())
    throw std::runtime_error("generate_basis: no snapshots (empty selection and zero initial value)");

  Matrix snapshots(ops.n_free(), static_cast<Eigen::Index>(pool.size()));
  for (size_t c = 0; c < pool.size(); ++c) snapshots.col(static_cast<Eigen::Index>(c)) = pool[c];

  const SvdResult svd = truncated_svd(snapshots, SvdTruncation::rel_tol(config.tol));
  if (svd.rank() == 0) throw std::runtime_error("generate_basis: snapshot pool is zero");

  ReducedBasis basis;
  basis.vectors = svd.left;
  basis.singular_values = svd.singular_values;
  basis.selection = selection;
  basis.config = config;
  return basis;
}

Vector basis_quality_report(const ReducedBasis& basis, const Trajectory& trajectory,
                            const SpdMatrix& h1) {
  const Matrix& phi = basis.vectors;
  if (phi.rows() != h1.dim())
    throw std::invalid_argument("basis_quality_report: basis does not match the inner product");

  // H1-orthogonal projection: (phi^T H phi) a = phi^T H u.
  const Matrix h_phi = h1.storage() * phi;
  const Matrix gram = phi.transpose() * h_phi;
  const Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("basis_quality_report: projection system not positive definite");

  Vector errors(trajectory.states.size());
  for (size_t n = 0; n < trajectory.states.size(); ++n) {
    const Vector& u = trajectory.states[n];
    if (u.size() != phi.rows())
      throw std::invalid_argument("basis_quality_report: state dimension mismatch");
    const Vector a = llt.solve(h_phi.transpose() * u);
    const Vector residual = u - phi * a;
    const double u_norm = h1.norm(u);
    const double r_norm = h1.norm(residual);
    errors(static_cast<Eigen::Index>(n)) = u_norm > 0.0 ? r_norm / u_norm : r_norm;
  }
  return errors;
}

namespace {

const char* anchor_name(AnchorMode mode) {
  return mode == AnchorMode::end_point ? "end" : "start";
}

}  // namespace

void write_basis(const std::filesystem::path& path, const ReducedBasis& basis) {
  write_matrix(path, basis.vectors);

  std::ofstream meta(path.string() + ".meta");
  if (!meta) throw std::runtime_error("write_basis: cannot open " + path.string() + ".meta");
  meta << "n_t " << basis.config.n_t << '\n'
       << "k " << basis.config.k << '\n'
       << "tol " << format_double(basis.config.tol) << '\n'
       << "anchor " << anchor_name(basis.config.anchor) << '\n'
       << "seed " << basis.config.seed << '\n'
       << "include_initial_value " << (basis.config.include_initial_value ? 1 : 0) << '\n'
       << "samples_per_window " << basis.config.samples_per_window << '\n'
       << "source " << basis.selection.source_tag << '\n';
  meta << "selection";
  for (int j : basis.selection.indices) meta << ' ' << j;
  meta << '\n';
  meta << "singular_values";
  for (Eigen::Index i = 0; i < basis.singular_values.size(); ++i)
    meta << ' ' << format_double(basis.singular_values(i));
  meta << '\n';
}

ReducedBasis read_basis(const std::filesystem::path& path) {
  ReducedBasis basis;
  basis.vectors = read_matrix(path);

  std::ifstream meta(path.string() + ".meta");
  if (!meta) throw std::runtime_error("read_basis: cannot open " + path.string() + ".meta");
  std::string line;
  while (std::getline(meta, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "n_t") ls >> basis.config.n_t;
    else if (key == "k") ls >> basis.config.k;
    else if (key == "tol") ls >> basis.config.tol;
    else if (key == "anchor") {
      std::string a;
      ls >> a;
      basis.config.anchor = a == "start" ? AnchorMode::start_point : AnchorMode::end_point;
    } else if (key == "seed") ls >> basis.config.seed;
    else if (key == "include_initial_value") {
      int v = 1;
      ls >> v;
      basis.config.include_initial_value = v != 0;
    } else if (key == "samples_per_window") ls >> basis.config.samples_per_window;
    else if (key == "source") ls >> basis.selection.source_tag;
    else if (key == "selection") {
      int j;
      while (ls >> j) basis.selection.indices.push_back(j);
    } else if (key == "singular_values") {
      std::vector<double> sv;
      double s;
      while (ls >> s) sv.push_back(s);
      basis.singular_values = Eigen::Map<Vector>(sv.data(), static_cast<Eigen::Index>(sv.size()));
    }
  }
  return basis;
}

}  // namespace pitrom
