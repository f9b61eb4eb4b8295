#pragma once

#include "pitrom/basisgen.hpp"
#include "pitrom/config_file.hpp"
#include "pitrom/problem.hpp"
#include "pitrom/rom.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <utility>
#include <vector>

namespace pitrom {

/// Smooth bump h * exp(-((t-c)/w)^2) truncated to |t - c| <= 2w.
struct SignalBump {
  double center = 0.0;
  double height = 0.0;
  double width = 1.0;

  double value(double t) const;
  double support_lo() const { return center - 2.0 * width; }
  double support_hi() const { return center + 2.0 * width; }
};

/// Axis-aligned rectangular source footprint.
struct SourcePatch {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

/// Heat equation on the unit square with three spatially disjoint sources
/// switched on and off in time, homogeneous Dirichlet boundary.
struct StoveConfig {
  int nx = 64, ny = 64;
  double lx = 1.0, ly = 1.0;
  double end_time = 10.0;
  int steps = 200;
  double kappa = 1.0;
  std::array<SignalBump, 3> signals{{{2.25, 30.6, 1.0}, {5.0, 20.0, 1.5}, {7.5, 22.5, 1.0}}};
  std::array<SourcePatch, 3> patches{{{0.125, 0.125, 0.375, 0.375},
                                      {0.625, 0.125, 0.875, 0.375},
                                      {0.375, 0.625, 0.625, 0.875}}};
  int selection_rank = 0;  // 0: numerical rank of the data matrix at 1e-10
  BasisGenConfig basis;
};

/// Flow problem with a heterogeneous background permeability, two sets of
/// high-conductivity channels switching in time, and a time-dependent Neumann
/// inflow on a top-edge segment. Dirichlet on the bottom edge.
struct Spe10Config {
  int nx = 110, ny = 30;
  double lx = 2.2, ly = 0.6;
  double end_time = 10.0;
  int steps = 200;
  double kappa_min = 1e-3;
  double channel_value = 1e3;
  std::filesystem::path raster_path;  // empty: synthetic background field
  std::uint64_t synthetic_seed = 7;
  // channel strips (x0, x1), all spanning y in [0.2, 0.6]
  std::array<std::pair<double, double>, 2> channels_a{{{0.5, 0.6}, {1.0, 1.1}}};
  std::array<std::pair<double, double>, 1> channels_b{{{1.6, 1.7}}};
  double channel_y0 = 0.2;
  double inflow_lo = 0.4, inflow_hi = 1.8;
  int selection_rank_rhs = 0;
  int selection_rank_diffusion = 0;
  BasisGenConfig basis;
};

TransientProblem make_stove_problem(const StoveConfig& config);
TransientProblem make_spe10_problem(const Spe10Config& config);

void apply_config(StoveConfig& config, const ConfigFile& file);
void apply_config(Spe10Config& config, const ConfigFile& file);

/// Synthetic channelized permeability: a log-normal field with long
/// horizontal and short vertical correlation, values spanning roughly
/// [1e-3, 1e3]. Deterministic in the seed.
CoefficientField synthetic_channel_field(int nx, int ny, std::uint64_t seed, double floor);

/// Permeability raster file: "nx ny" header, then nx*ny cell values row-major
/// starting with the bottom row.
void write_raster(const std::filesystem::path& path, const CoefficientField& field);
CoefficientField read_raster(const std::filesystem::path& path, double floor);

/// Relative L2(H1) errors of repeated runs plus nearest-rank quantiles.
struct QuantileStudy {
  std::vector<double> levels;  // percent; 0 = min, 100 = max
  std::vector<std::pair<std::uint64_t, double>> realizations;  // (seed, error), sorted by seed

  double quantile(double level) const;
  std::vector<double> quantiles() const;
};

enum class StoveMethod { deim, leverage };

QuantileStudy run_stove(const StoveConfig& config, StoveMethod method, int n_rand,
                        const std::vector<std::uint64_t>& seeds, int workers);

enum class Spe10Method { deim_end, deim_start, leverage };

struct Spe10Result {
  QuantileStudy study;
  Vector mean_rel_l2_over_time;
};

/// DEIM variants run one deterministic realization with 1 + 3 selected points
/// (rhs + diffusion union); leverage draws n_rand/2 points per data matrix
/// for every seed.
Spe10Result run_spe10(const Spe10Config& config, Spe10Method method, int n_rand,
                      const std::vector<std::uint64_t>& seeds, int workers);

void write_quantile_study(std::ostream& out, const QuantileStudy& study);
void write_quantile_study(const std::filesystem::path& path, const QuantileStudy& study);
void write_curve(std::ostream& out, const TimeGrid& grid, const Vector& curve);
void write_curve(const std::filesystem::path& path, const TimeGrid& grid, const Vector& curve);

}  // namespace pitrom
