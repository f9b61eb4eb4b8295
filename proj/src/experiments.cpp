#include "pitrom/experiments.hpp"

#include "pitrom/matrix_io.hpp"
#include "pitrom/parallel.hpp"
#include "pitrom/rng.hpp"
#include "pitrom/selection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

namespace pitrom {

double SignalBump::value(double t) const {
  if (t < support_lo() || t > support_hi()) return 0.0;
  const double s = (t - center) / width;
  return height * std::exp(-s * s);
}

TransientProblem make_stove_problem(const StoveConfig& config) {
  RectangleMesh mesh(config.lx, config.ly, config.nx, config.ny, DirichletEdges::all());

  auto masks = std::make_shared<std::array<Vector, 3>>();
  for (int p = 0; p < 3; ++p) {
    Vector mask = Vector::Zero(mesh.node_count());
    for (int n = 0; n < mesh.node_count(); ++n)
      if (config.patches[p].contains(mesh.node_x(n), mesh.node_y(n))) mask(n) = 1.0;
    (*masks)[p] = std::move(mask);
  }

  auto field = std::make_shared<CoefficientField>(
      CoefficientField::constant(config.nx, config.ny, config.kappa));
  const auto signals = config.signals;

  return TransientProblem(
      std::move(mesh), TimeGrid{config.end_time, config.steps},
      [field](double) { return *field; }, [](double) { return 0.0; },
      [masks, signals](double t) {
        Vector s = signals[0].value(t) * (*masks)[0];
        s += signals[1].value(t) * (*masks)[1];
        s += signals[2].value(t) * (*masks)[2];
        return s;
      },
      [](double) { return 0.0; }, std::nullopt,
      Vector::Zero((*masks)[0].size()));
}

namespace {

// Inflow density and channel on/off signals of the permeability experiment,
// matching the plotted step functions: left-closed, right-open intervals.
double spe10_inflow(double t) {
  if (t >= 1.0 && t < 5.5) return 1.0;
  if (t >= 8.0 && t < 9.0) return 5.0;
  return 0.0;
}

double spe10_channels_a_on(double t) {
  return ((t >= 3.0 && t < 7.5) || (t >= 8.0 && t < 10.0)) ? 1.0 : 0.0;
}

double spe10_channels_b_on(double t) { return (t >= 8.0 && t < 10.0) ? 1.0 : 0.0; }

}  // namespace

TransientProblem make_spe10_problem(const Spe10Config& config) {
  DirichletEdges dirichlet;
  dirichlet.bottom = true;
  RectangleMesh mesh(config.lx, config.ly, config.nx, config.ny, dirichlet);

  CoefficientField background =
      config.raster_path.empty()
          ? synthetic_channel_field(config.nx, config.ny, config.synthetic_seed, config.kappa_min)
          : read_raster(config.raster_path, config.kappa_min);
  if (background.nx() != config.nx || background.ny() != config.ny)
    throw std::invalid_argument("make_spe10_problem: raster size does not match the mesh");

  struct ChannelData {
    std::vector<double> base;
    std::vector<char> in_a, in_b;
    double value;
    int nx, ny;
  };
  auto data = std::make_shared<ChannelData>();
  data->base = background.values();
  data->value = config.channel_value;
  data->nx = config.nx;
  data->ny = config.ny;
  data->in_a.assign(mesh.cell_count(), 0);
  data->in_b.assign(mesh.cell_count(), 0);
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const double x = mesh.cell_center_x(c);
    const double y = mesh.cell_center_y(c);
    if (y < config.channel_y0) continue;
    for (const auto& strip : config.channels_a)
      if (x >= strip.first && x <= strip.second) data->in_a[c] = 1;
    for (const auto& strip : config.channels_b)
      if (x >= strip.first && x <= strip.second) data->in_b[c] = 1;
  }

  BoundarySegment inflow_segment{BoundarySegment::Edge::top, config.inflow_lo, config.inflow_hi};
  const int node_count = mesh.node_count();

  return TransientProblem(
      std::move(mesh), TimeGrid{config.end_time, config.steps},
      [data](double t) {
        const double a = spe10_channels_a_on(t);
        const double b = spe10_channels_b_on(t);
        std::vector<double> values = data->base;
        if (a != 0.0 || b != 0.0)
          for (size_t c = 0; c < values.size(); ++c)
            values[c] += data->value * (a * data->in_a[c] + b * data->in_b[c]);
        return CoefficientField(data->nx, data->ny, std::move(values));
      },
      [](double t) { return spe10_channels_a_on(t) + 2.0 * spe10_channels_b_on(t); },
      [node_count](double) { return Vector::Zero(node_count); }, spe10_inflow, inflow_segment,
      Vector::Zero(node_count));
}

namespace {

// In-place box filter of per-cell values along one axis, truncated at the
// raster boundary.
void box_filter(std::vector<double>& v, int nx, int ny, int radius, bool along_x) {
  if (radius < 1) return;
  std::vector<double> out(v.size());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double sum = 0.0;
      int count = 0;
      for (int d = -radius; d <= radius; ++d) {
        const int ii = along_x ? i + d : i;
        const int jj = along_x ? j : j + d;
        if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
        sum += v[jj * nx + ii];
        ++count;
      }
      out[j * nx + i] = sum / count;
    }
  v = std::move(out);
}

}  // namespace

CoefficientField synthetic_channel_field(int nx, int ny, std::uint64_t seed, double floor) {
  CounterRng rng(seed);
  std::vector<double> g(static_cast<size_t>(nx) * ny);
  for (double& v : g) v = rng.next_gaussian();

  // Long horizontal, short vertical correlation gives streaky media.
  const int rx = std::max(2, nx / 10);
  const int ry = std::max(1, ny / 15);
  for (int pass = 0; pass < 2; ++pass) {
    box_filter(g, nx, ny, rx, true);
    box_filter(g, nx, ny, ry, false);
  }

  double mean = 0.0;
  for (double v : g) mean += v;
  mean /= g.size();
  double var = 0.0;
  for (double v : g) var += (v - mean) * (v - mean);
  var /= g.size();
  const double scale = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;

  std::vector<double> kappa(g.size());
  for (size_t c = 0; c < g.size(); ++c) {
    const double log10_kappa = std::clamp(1.5 * scale * (g[c] - mean), -3.0, 3.0);
    kappa[c] = std::max(std::pow(10.0, log10_kappa), floor);
  }
  return CoefficientField(nx, ny, std::move(kappa));
}

void write_raster(const std::filesystem::path& path, const CoefficientField& field) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_raster: cannot open " + path.string());
  out << field.nx() << ' ' << field.ny() << '\n';
  for (int j = 0; j < field.ny(); ++j) {
    for (int i = 0; i < field.nx(); ++i) {
      if (i) out << ' ';
      out << format_double(field.value(j * field.nx() + i));
    }
    out << '\n';
  }
}

CoefficientField read_raster(const std::filesystem::path& path, double floor) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_raster: cannot open " + path.string());
  int nx = 0, ny = 0;
  if (!(in >> nx >> ny) || nx < 1 || ny < 1)
    throw std::runtime_error("read_raster: malformed header in " + path.string());
  std::vector<double> values(static_cast<size_t>(nx) * ny);
  for (double& v : values) {
    if (!(in >> v)) throw std::runtime_error("read_raster: truncated data in " + path.string());
    v = std::max(v, floor);
  }
  return CoefficientField(nx, ny, std::move(values));
}

double QuantileStudy::quantile(double level) const {
  if (realizations.empty()) throw std::domain_error("QuantileStudy: no realizations");
  std::vector<double> sorted;
  sorted.reserve(realizations.size());
  for (const auto& r : realizations) sorted.push_back(r.second);
  std::sort(sorted.begin(), sorted.end());

  const int count = static_cast<int>(sorted.size());
  if (level <= 0.0) return sorted.front();
  if (level >= 100.0) return sorted.back();
  const int rank = static_cast<int>(std::ceil(level / 100.0 * count));
  return sorted[std::clamp(rank - 1, 0, count - 1)];
}

std::vector<double> QuantileStudy::quantiles() const {
  std::vector<double> values;
  values.reserve(levels.size());
  for (double level : levels) values.push_back(quantile(level));
  return values;
}

namespace {

constexpr std::array<double, 8> kStoveLevels{0, 5, 25, 50, 75, 97, 99, 100};
constexpr std::array<double, 8> kSpe10Levels{0, 5, 25, 50, 75, 88, 97, 100};

struct Realization {
  double error = 0.0;
  Vector curve;
};

Realization realize(const ProblemOperators& ops, const Trajectory& full,
                    const TimePointSelection& selection, const BasisGenConfig& config,
                    bool want_curve) {
  const ReducedBasis basis = generate_basis(ops, selection, config, 1);
  const Trajectory reduced = solve_reduced(ops, basis);
  Realization r;
  r.error = rel_l2h1_error(full, reduced, ops.h1(), ops.grid().dt());
  if (want_curve) r.curve = rel_l2_over_time(full, reduced, ops.mass());
  return r;
}

void sort_by_seed(std::vector<std::pair<std::uint64_t, double>>& realizations) {
  std::sort(realizations.begin(), realizations.end());
}

}  // namespace

QuantileStudy run_stove(const StoveConfig& config, StoveMethod method, int n_rand,
                        const std::vector<std::uint64_t>& seeds, int workers) {
  const TransientProblem problem = make_stove_problem(config);
  const ProblemOperators ops(problem);
  const Trajectory full = solve_full(ops);
  const DataMatrix data = build_data_matrix(problem, DataKind::rhs);
  const int rank =
      config.selection_rank > 0 ? config.selection_rank : numerical_rank(data.values, 1e-10);

  QuantileStudy study;
  study.levels.assign(kStoveLevels.begin(), kStoveLevels.end());

  if (method == StoveMethod::deim) {
    TimePointSelection selection = deim_select(data, rank);
    selection.source_tag = data.tag;
    const Realization r = realize(ops, full, selection, config.basis, false);
    study.realizations.emplace_back(config.basis.seed, r.error);
    return study;
  }

  const LeverageScores scores = leverage_scores(data, rank);
  study.realizations.resize(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), workers, [&](int i) {
    const std::uint64_t seed = seeds[i];
    TimePointSelection selection = sample_time_points(scores, n_rand, seed);
    selection.source_tag = data.tag;
    BasisGenConfig bcfg = config.basis;
    bcfg.seed = seed;
    try {
      const Realization r = realize(ops, full, selection, bcfg, false);
      study.realizations[i] = {seed, r.error};
    } catch (const std::exception& e) {
      throw std::runtime_error("stove realization with seed " + std::to_string(seed) + ": " +
                               e.what());
    }
  });
  sort_by_seed(study.realizations);
  return study;
}

Spe10Result run_spe10(const Spe10Config& config, Spe10Method method, int n_rand,
                      const std::vector<std::uint64_t>& seeds, int workers) {
  const TransientProblem problem = make_spe10_problem(config);
  const ProblemOperators ops(problem);
  const Trajectory full = solve_full(ops);

  const DataMatrix data_rhs = build_data_matrix(problem, DataKind::rhs);
  const DataMatrix data_diff = build_data_matrix(problem, DataKind::diffusion);
  const int rank_rhs = config.selection_rank_rhs > 0 ? config.selection_rank_rhs
                                                     : numerical_rank(data_rhs.values, 1e-10);
  const int rank_diff = config.selection_rank_diffusion > 0
                            ? config.selection_rank_diffusion
                            : numerical_rank(data_diff.values, 1e-10);

  Spe10Result result;
  result.study.levels.assign(kSpe10Levels.begin(), kSpe10Levels.end());
  const int curve_length = ops.grid().point_count();

  if (method != Spe10Method::leverage) {
    TimePointSelection sel_rhs = deim_select(data_rhs, rank_rhs);
    sel_rhs.source_tag = data_rhs.tag;
    TimePointSelection sel_diff = deim_select(data_diff, rank_diff);
    sel_diff.source_tag = data_diff.tag;
    const TimePointSelection selection = merge_selections({sel_rhs, sel_diff});

    BasisGenConfig bcfg = config.basis;
    bcfg.anchor =
        method == Spe10Method::deim_start ? AnchorMode::start_point : AnchorMode::end_point;
    const Realization r = realize(ops, full, selection, bcfg, true);
    result.study.realizations.emplace_back(bcfg.seed, r.error);
    result.mean_rel_l2_over_time = r.curve;
    return result;
  }

  const LeverageScores scores_rhs = leverage_scores(data_rhs, rank_rhs);
  const LeverageScores scores_diff = leverage_scores(data_diff, rank_diff);
  const int n_rhs = n_rand / 2;
  const int n_diff = n_rand - n_rhs;

  std::vector<Realization> runs(seeds.size());
  result.study.realizations.resize(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), workers, [&](int i) {
    const std::uint64_t seed = seeds[i];
    TimePointSelection sel_rhs = sample_time_points(scores_rhs, n_rhs, derive_seed(seed, 0));
    sel_rhs.source_tag = data_rhs.tag;
    TimePointSelection sel_diff = sample_time_points(scores_diff, n_diff, derive_seed(seed, 1));
    sel_diff.source_tag = data_diff.tag;
    const TimePointSelection selection = merge_selections({sel_rhs, sel_diff});

    BasisGenConfig bcfg = config.basis;
    bcfg.seed = seed;
    try {
      runs[i] = realize(ops, full, selection, bcfg, true);
      result.study.realizations[i] = {seed, runs[i].error};
    } catch (const std::exception& e) {
      throw std::runtime_error("realization with seed " + std::to_string(seed) + ": " + e.what());
    }
  });

  Vector mean = Vector::Zero(curve_length);
  for (const auto& run : runs) mean += run.curve;
  if (!runs.empty()) mean /= static_cast<double>(runs.size());
  result.mean_rel_l2_over_time = std::move(mean);
  sort_by_seed(result.study.realizations);
  return result;
}

namespace {

std::string level_label(double level) {
  if (level <= 0.0) return "min";
  if (level >= 100.0) return "max";
  std::ostringstream out;
  out << 'p' << level;
  return out.str();
}

}  // namespace

void write_quantile_study(std::ostream& out, const QuantileStudy& study) {
  out << "# realizations " << study.realizations.size() << '\n';
  out << "#";
  for (double level : study.levels) out << ' ' << level_label(level);
  out << '\n';
  const std::vector<double> values = study.quantiles();
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out << ' ';
    out << format_double(values[i]);
  }
  out << '\n';
}

void write_quantile_study(const std::filesystem::path& path, const QuantileStudy& study) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_quantile_study: cannot open " + path.string());
  write_quantile_study(out, study);
}

void write_curve(std::ostream& out, const TimeGrid& grid, const Vector& curve) {
  out << "# timeIndex time value\n";
  for (Eigen::Index n = 0; n < curve.size(); ++n)
    out << n << ' ' << format_double(grid.time(static_cast<int>(n))) << ' '
        << format_double(curve(n)) << '\n';
}

void write_curve(const std::filesystem::path& path, const TimeGrid& grid, const Vector& curve) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_curve: cannot open " + path.string());
  write_curve(out, grid, curve);
}

void apply_config(StoveConfig& config, const ConfigFile& file) {
  config.nx = file.get_int("mesh", "nx", config.nx);
  config.ny = file.get_int("mesh", "ny", config.ny);
  config.lx = file.get_double("mesh", "lx", config.lx);
  config.ly = file.get_double("mesh", "ly", config.ly);
  config.end_time = file.get_double("time", "end", config.end_time);
  config.steps = file.get_int("time", "steps", config.steps);
  config.kappa = file.get_double("stove", "kappa", config.kappa);
  for (int s = 0; s < 3; ++s) {
    const std::string key = "signal" + std::to_string(s + 1);
    if (file.has("stove", key)) {
      const auto v = file.get_doubles("stove", key);
      if (v.size() != 3)
        throw std::runtime_error("stove config: " + key + " needs center height width");
      config.signals[s] = {v[0], v[1], v[2]};
    }
    const std::string patch_key = "patch" + std::to_string(s + 1);
    if (file.has("stove", patch_key)) {
      const auto v = file.get_doubles("stove", patch_key);
      if (v.size() != 4)
        throw std::runtime_error("stove config: " + patch_key + " needs x0 y0 x1 y1");
      config.patches[s] = {v[0], v[1], v[2], v[3]};
    }
  }
  config.selection_rank = file.get_int("selection", "rank", config.selection_rank);
  config.basis.n_t = file.get_int("basis", "nt", config.basis.n_t);
  config.basis.k = file.get_int("basis", "k", config.basis.k);
  config.basis.tol = file.get_double("basis", "tol", config.basis.tol);
  if (file.has("basis", "anchor"))
    config.basis.anchor = file.get("basis", "anchor", "end") == "start" ? AnchorMode::start_point
                                                                        : AnchorMode::end_point;
  config.basis.seed = static_cast<std::uint64_t>(file.get_int("basis", "seed",
                                                              static_cast<int>(config.basis.seed)));
  config.basis.samples_per_window =
      file.get_int("basis", "samples", config.basis.samples_per_window);
}

void apply_config(Spe10Config& config, const ConfigFile& file) {
  config.nx = file.get_int("mesh", "nx", config.nx);
  config.ny = file.get_int("mesh", "ny", config.ny);
  config.lx = file.get_double("mesh", "lx", config.lx);
  config.ly = file.get_double("mesh", "ly", config.ly);
  config.end_time = file.get_double("time", "end", config.end_time);
  config.steps = file.get_int("time", "steps", config.steps);
  config.kappa_min = file.get_double("spe10", "kappa_min", config.kappa_min);
  config.channel_value = file.get_double("spe10", "channel_value", config.channel_value);
  if (file.has("spe10", "raster")) config.raster_path = file.get("spe10", "raster", "");
  config.synthetic_seed = static_cast<std::uint64_t>(
      file.get_int("spe10", "synthetic_seed", static_cast<int>(config.synthetic_seed)));
  if (file.has("spe10", "inflow")) {
    const auto v = file.get_doubles("spe10", "inflow");
    if (v.size() != 2) throw std::runtime_error("spe10 config: inflow needs lo hi");
    config.inflow_lo = v[0];
    config.inflow_hi = v[1];
  }
  config.selection_rank_rhs = file.get_int("selection", "rank_rhs", config.selection_rank_rhs);
  config.selection_rank_diffusion =
      file.get_int("selection", "rank_diffusion", config.selection_rank_diffusion);
  config.basis.n_t = file.get_int("basis", "nt", config.basis.n_t);
  config.basis.k = file.get_int("basis", "k", config.basis.k);
  config.basis.tol = file.get_double("basis", "tol", config.basis.tol);
  if (file.has("basis", "anchor"))
    config.basis.anchor = file.get("basis", "anchor", "end") == "start" ? AnchorMode::start_point
                                                                        : AnchorMode::end_point;
  config.basis.seed = static_cast<std::uint64_t>(file.get_int("basis", "seed",
                                                              static_cast<int>(config.basis.seed)));
  config.basis.samples_per_window =
      file.get_int("basis", "samples", config.basis.samples_per_window);
}

}  // namespace pitrom
