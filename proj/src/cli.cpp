#include "pitrom/cli.hpp"

#include "pitrom/experiments.hpp"
#include "pitrom/matrix_io.hpp"
#include "pitrom/parallel.hpp"
#include "pitrom/reference.hpp"
#include "pitrom/rng.hpp"
#include "pitrom/rom.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

namespace pitrom {

namespace {

struct ProblemChoice {
  std::string name = "stove";
  std::string config_path;

  StoveConfig stove;
  Spe10Config spe10;

  void load() {
    if (!config_path.empty()) {
      const ConfigFile file = ConfigFile::load(config_path);
      apply_config(stove, file);
      apply_config(spe10, file);
    }
  }

  TransientProblem make() const {
    return name == "spe10" ? make_spe10_problem(spe10) : make_stove_problem(stove);
  }

  BasisGenConfig& basis() { return name == "spe10" ? spe10.basis : stove.basis; }
};

void add_problem_options(CLI::App* cmd, ProblemChoice& choice) {
  cmd->add_option("--problem", choice.name, "Bundled problem: stove or spe10")
      ->check(CLI::IsMember({"stove", "spe10"}))
      ->capture_default_str();
  cmd->add_option("--config", choice.config_path, "Configuration file overriding the defaults");
}

std::vector<std::uint64_t> expand_seeds(std::vector<std::uint64_t> seeds, int realizations) {
  if (realizations <= 0) {
    if (seeds.empty()) seeds.push_back(0);
    return seeds;
  }
  const std::uint64_t base = seeds.empty() ? 0 : seeds.front();
  std::vector<std::uint64_t> expanded;
  expanded.reserve(realizations);
  for (int r = 0; r < realizations; ++r) expanded.push_back(base + static_cast<std::uint64_t>(r));
  return expanded;
}

TimePointSelection select_for(const TransientProblem& problem, const ProblemChoice& choice,
                              const std::string& method, int n_rand, std::uint64_t seed) {
  const bool deim = method == "deim" || method == "deimstar";
  if (choice.name == "spe10") {
    const DataMatrix rhs = build_data_matrix(problem, DataKind::rhs);
    const DataMatrix diff = build_data_matrix(problem, DataKind::diffusion);
    const int rank_rhs = choice.spe10.selection_rank_rhs > 0
                             ? choice.spe10.selection_rank_rhs
                             : numerical_rank(rhs.values, 1e-10);
    const int rank_diff = choice.spe10.selection_rank_diffusion > 0
                              ? choice.spe10.selection_rank_diffusion
                              : numerical_rank(diff.values, 1e-10);
    TimePointSelection a, b;
    if (deim) {
      a = deim_select(rhs, rank_rhs);
      b = deim_select(diff, rank_diff);
    } else {
      a = sample_time_points(leverage_scores(rhs, rank_rhs), n_rand / 2, derive_seed(seed, 0));
      b = sample_time_points(leverage_scores(diff, rank_diff), n_rand - n_rand / 2,
                             derive_seed(seed, 1));
    }
    a.source_tag = rhs.tag;
    b.source_tag = diff.tag;
    return merge_selections({a, b});
  }

  const DataMatrix data = build_data_matrix(problem, DataKind::rhs);
  const int rank = choice.stove.selection_rank > 0 ? choice.stove.selection_rank
                                                   : numerical_rank(data.values, 1e-10);
  TimePointSelection sel =
      deim ? deim_select(data, rank)
           : sample_time_points(leverage_scores(data, rank), n_rand, seed);
  sel.source_tag = data.tag;
  return sel;
}

int run_oracle() {
  const auto results = reference::run_all_checks();
  bool all = true;
  for (const auto& r : results) {
    std::printf("%-4s %-60s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    all = all && r.passed;
  }
  std::printf("%zu checks, %s\n", results.size(), all ? "all passed" : "FAILURES present");
  return all ? 0 : 1;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Parallel-in-time reduced basis toolkit for heterogeneous parabolic problems"};
  app.require_subcommand(1);

  int workers = default_workers();
  app.add_option("--workers", workers, "Worker threads for parallel sections")
      ->capture_default_str();

  // solve: full-order run, trajectory dump
  ProblemChoice solve_choice;
  std::string solve_out = "trajectory.txt";
  auto* solve_cmd = app.add_subcommand("solve", "Full-order solve and trajectory dump");
  add_problem_options(solve_cmd, solve_choice);
  solve_cmd->add_option("--out", solve_out, "Output path")->capture_default_str();

  // select: time point selection dump
  ProblemChoice select_choice;
  std::string select_data = "rhs";
  std::string select_method = "deim";
  int select_rank = 0;
  int select_nrand = 10;
  std::uint64_t select_seed = 0;
  std::string select_out = "selection.txt";
  auto* select_cmd = app.add_subcommand("select", "Select time points from a data matrix");
  add_problem_options(select_cmd, select_choice);
  select_cmd->add_option("--data", select_data, "Data matrix: rhs or diffusion")
      ->check(CLI::IsMember({"rhs", "diffusion"}))
      ->capture_default_str();
  select_cmd->add_option("--method", select_method, "deim or leverage")
      ->check(CLI::IsMember({"deim", "leverage"}))
      ->capture_default_str();
  select_cmd->add_option("--rank", select_rank, "Selection rank (0: numerical rank)")
      ->capture_default_str();
  select_cmd->add_option("--nrand", select_nrand, "Leverage draws")->capture_default_str();
  select_cmd->add_option("--seed", select_seed, "Leverage sampling seed")->capture_default_str();
  select_cmd->add_option("--out", select_out, "Output path")->capture_default_str();

  // basis: generate and dump a reduced basis
  ProblemChoice basis_choice;
  std::string basis_method = "deim";
  int basis_nrand = 10;
  std::uint64_t basis_seed = 0;
  std::string basis_anchor;
  std::string basis_out = "basis.txt";
  auto* basis_cmd = app.add_subcommand("basis", "Generate a reduced basis");
  add_problem_options(basis_cmd, basis_choice);
  basis_cmd->add_option("--method", basis_method, "deim, deimstar, or leverage")
      ->check(CLI::IsMember({"deim", "deimstar", "leverage"}))
      ->capture_default_str();
  basis_cmd->add_option("--nrand", basis_nrand, "Leverage draws")->capture_default_str();
  basis_cmd->add_option("--seed", basis_seed, "Seed for sampling and start vectors")
      ->capture_default_str();
  basis_cmd->add_option("--nt", basis_choice.stove.basis.n_t, "Local window steps");
  basis_cmd->add_option("--k", basis_choice.stove.basis.k, "First kept step in a window");
  basis_cmd->add_option("--tol", basis_choice.stove.basis.tol, "Snapshot SVD truncation");
  basis_cmd->add_option("--anchor", basis_anchor, "Window anchor: end or start")
      ->check(CLI::IsMember({"end", "start"}));
  basis_cmd->add_option("--out", basis_out, "Output path")->capture_default_str();

  // rom: reduced run + error report
  ProblemChoice rom_choice;
  std::string rom_basis_path;
  std::string rom_out = "error_report.txt";
  auto* rom_cmd = app.add_subcommand("rom", "Reduced-order solve and error report");
  add_problem_options(rom_cmd, rom_choice);
  rom_cmd->add_option("--basis", rom_basis_path, "Basis file produced by `basis`")->required();
  rom_cmd->add_option("--out", rom_out, "Output path")->capture_default_str();

  // stove / spe10 experiment drivers
  std::string stove_method = "deim";
  int stove_nrand = 3;
  std::vector<std::uint64_t> stove_seeds;
  int stove_realizations = 0;
  std::string stove_out = "stove";
  ProblemChoice stove_choice;
  auto* stove_cmd = app.add_subcommand("stove", "Heat-source experiment quantile study");
  stove_cmd->add_option("--config", stove_choice.config_path, "Configuration file");
  stove_cmd->add_option("--method", stove_method, "deim or leverage")
      ->check(CLI::IsMember({"deim", "leverage"}))
      ->capture_default_str();
  stove_cmd->add_option("--nrand", stove_nrand, "Leverage draws per realization")
      ->capture_default_str();
  stove_cmd->add_option("--nt", stove_choice.stove.basis.n_t, "Local window steps");
  stove_cmd->add_option("--k", stove_choice.stove.basis.k, "First kept step in a window");
  stove_cmd->add_option("--tol", stove_choice.stove.basis.tol, "Snapshot SVD truncation");
  stove_cmd->add_option("--seeds", stove_seeds, "Realization seeds (first seed when combined with --realizations)");
  stove_cmd->add_option("--realizations", stove_realizations, "Number of realizations");
  stove_cmd->add_option("--out", stove_out, "Output prefix")->capture_default_str();

  std::string spe10_method = "deim";
  int spe10_nrand = 20;
  std::vector<std::uint64_t> spe10_seeds;
  int spe10_realizations = 0;
  std::string spe10_out = "spe10";
  ProblemChoice spe10_choice;
  auto* spe10_cmd = app.add_subcommand("spe10", "Permeability experiment quantile study");
  spe10_cmd->add_option("--config", spe10_choice.config_path, "Configuration file");
  spe10_cmd->add_option("--method", spe10_method, "deim, deimstar, or leverage")
      ->check(CLI::IsMember({"deim", "deimstar", "leverage"}))
      ->capture_default_str();
  spe10_cmd->add_option("--nrand", spe10_nrand, "Leverage draws per realization (split per data matrix)")
      ->capture_default_str();
  spe10_cmd->add_option("--nt", spe10_choice.spe10.basis.n_t, "Local window steps");
  spe10_cmd->add_option("--k", spe10_choice.spe10.basis.k, "First kept step in a window");
  spe10_cmd->add_option("--tol", spe10_choice.spe10.basis.tol, "Snapshot SVD truncation");
  spe10_cmd->add_option("--seeds", spe10_seeds, "Realization seeds (first seed when combined with --realizations)");
  spe10_cmd->add_option("--realizations", spe10_realizations, "Number of realizations");
  spe10_cmd->add_option("--out", spe10_out, "Output prefix")->capture_default_str();

  auto* oracle_cmd =
      app.add_subcommand("oracle", "Run the independent reference checks and print a table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve_cmd->parsed()) {
      solve_choice.load();
      const TransientProblem problem = solve_choice.make();
      const ProblemOperators ops(problem);
      const Trajectory traj = solve_full(ops);
      write_trajectory(std::filesystem::path(solve_out), traj, problem.grid().dt());
      std::printf("wrote %s (dimension %d, %zu states)\n", solve_out.c_str(), ops.n_free(),
                  traj.states.size());
      return 0;
    }

    if (select_cmd->parsed()) {
      select_choice.load();
      const TransientProblem problem = select_choice.make();
      const DataMatrix data = build_data_matrix(
          problem, select_data == "diffusion" ? DataKind::diffusion : DataKind::rhs);
      const int rank = select_rank > 0 ? select_rank : numerical_rank(data.values, 1e-10);
      if (select_method == "deim") {
        TimePointSelection sel = deim_select(data, rank);
        sel.source_tag = data.tag;
        write_selection(std::filesystem::path(select_out), sel, problem.grid());
      } else {
        const LeverageScores scores = leverage_scores(data, rank);
        TimePointSelection sel = sample_time_points(scores, select_nrand, select_seed);
        sel.source_tag = data.tag;
        write_selection(std::filesystem::path(select_out), sel, problem.grid(), &scores);
      }
      std::printf("wrote %s (rank %d)\n", select_out.c_str(), rank);
      return 0;
    }

    if (basis_cmd->parsed()) {
      basis_choice.load();
      basis_choice.spe10.basis = basis_choice.stove.basis;  // shared flag storage
      if (!basis_anchor.empty()) {
        const AnchorMode anchor =
            basis_anchor == "start" ? AnchorMode::start_point : AnchorMode::end_point;
        basis_choice.stove.basis.anchor = anchor;
        basis_choice.spe10.basis.anchor = anchor;
      }
      if (basis_method == "deimstar") {
        basis_choice.stove.basis.anchor = AnchorMode::start_point;
        basis_choice.spe10.basis.anchor = AnchorMode::start_point;
      }
      basis_choice.stove.basis.seed = basis_seed;
      basis_choice.spe10.basis.seed = basis_seed;

      const TransientProblem problem = basis_choice.make();
      const ProblemOperators ops(problem);
      const TimePointSelection sel =
          select_for(problem, basis_choice, basis_method, basis_nrand, basis_seed);
      const ReducedBasis basis = generate_basis(ops, sel, basis_choice.basis(), workers);
      write_basis(std::filesystem::path(basis_out), basis);
      std::printf("wrote %s (dimension %d from %zu selected points)\n", basis_out.c_str(),
                  basis.dimension(), sel.indices.size());
      return 0;
    }

    if (rom_cmd->parsed()) {
      rom_choice.load();
      const TransientProblem problem = rom_choice.make();
      const ProblemOperators ops(problem);
      const ReducedBasis basis = read_basis(rom_basis_path);
      const Trajectory full = solve_full(ops);
      const Trajectory reduced = solve_reduced(ops, basis);

      ErrorReport report;
      report.rel_l2h1 = rel_l2h1_error(full, reduced, ops.h1(), problem.grid().dt());
      report.rel_l2_over_time = rel_l2_over_time(full, reduced, ops.mass());
      report.basis_dimension = basis.dimension();
      report.method = basis.selection.source_tag.empty() ? "basis" : basis.selection.source_tag;
      write_error_report(std::filesystem::path(rom_out), report, problem.grid());
      std::printf("wrote %s (relL2H1 %s)\n", rom_out.c_str(),
                  format_double(report.rel_l2h1).c_str());
      return 0;
    }

    if (stove_cmd->parsed()) {
      stove_choice.load();
      const auto seeds = expand_seeds(stove_seeds, stove_realizations);
      const StoveMethod method =
          stove_method == "deim" ? StoveMethod::deim : StoveMethod::leverage;
      const QuantileStudy study =
          run_stove(stove_choice.stove, method, stove_nrand, seeds, workers);
      const std::string path = stove_out + "_quantiles.txt";
      write_quantile_study(std::filesystem::path(path), study);
      std::printf("wrote %s (%zu realizations, median %s)\n", path.c_str(),
                  study.realizations.size(), format_double(study.quantile(50)).c_str());
      return 0;
    }

    if (spe10_cmd->parsed()) {
      spe10_choice.load();
      const auto seeds = expand_seeds(spe10_seeds, spe10_realizations);
      const Spe10Method method = spe10_method == "deim"
                                     ? Spe10Method::deim_end
                                     : (spe10_method == "deimstar" ? Spe10Method::deim_start
                                                                   : Spe10Method::leverage);
      const Spe10Result result =
          run_spe10(spe10_choice.spe10, method, spe10_nrand, seeds, workers);
      const std::string qpath = spe10_out + "_quantiles.txt";
      const std::string cpath = spe10_out + "_mean_rel_l2.txt";
      write_quantile_study(std::filesystem::path(qpath), result.study);
      write_curve(std::filesystem::path(cpath), TimeGrid{spe10_choice.spe10.end_time,
                                                         spe10_choice.spe10.steps},
                  result.mean_rel_l2_over_time);
      std::printf("wrote %s and %s (%zu realizations, median %s)\n", qpath.c_str(), cpath.c_str(),
                  result.study.realizations.size(),
                  format_double(result.study.quantile(50)).c_str());
      return 0;
    }

    if (oracle_cmd->parsed()) return run_oracle();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  return 0;
}

}  // namespace pitrom
