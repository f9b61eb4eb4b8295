#include "pitrom/cli.hpp"
#include "pitrom/config_file.hpp"
#include "pitrom/experiments.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pitrom;

namespace {

StoveConfig quick_stove() {
  StoveConfig config;
  config.nx = config.ny = 12;
  config.steps = 60;
  config.basis.n_t = 8;
  config.basis.k = 7;
  return config;
}

int run_cli(std::vector<std::string> args) {
  std::vector<char*> argv;
  args.insert(args.begin(), "pitrom");
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("quantile study: nearest rank, monotone levels") {
  QuantileStudy study;
  study.levels = {0, 5, 25, 50, 75, 97, 99, 100};
  for (int i = 20; i >= 1; --i) study.realizations.emplace_back(i, i * 0.01);

  CHECK(study.quantile(0) == doctest::Approx(0.01));
  CHECK(study.quantile(100) == doctest::Approx(0.20));
  CHECK(study.quantile(50) == doctest::Approx(0.10));  // ceil(0.5*20) = 10th smallest
  CHECK(study.quantile(5) == doctest::Approx(0.01));   // ceil(0.05*20) = 1st
  CHECK(study.quantile(97) == doctest::Approx(0.20));  // ceil(0.97*20) = 20th

  const auto values = study.quantiles();
  for (size_t i = 1; i < values.size(); ++i) CHECK(values[i] >= values[i - 1]);
}

TEST_CASE("stove study bookkeeping") {
  const StoveConfig config = quick_stove();

  SUBCASE("deim runs exactly one realization") {
    const QuantileStudy study = run_stove(config, StoveMethod::deim, 3, {1, 2, 3}, 1);
    CHECK(study.realizations.size() == 1);
  }

  SUBCASE("leverage runs one realization per seed and is worker-invariant") {
    const std::vector<std::uint64_t> seeds{11, 12, 13, 14, 15, 16};
    const QuantileStudy a = run_stove(config, StoveMethod::leverage, 3, seeds, 1);
    const QuantileStudy b = run_stove(config, StoveMethod::leverage, 3, seeds, 4);
    REQUIRE(a.realizations.size() == seeds.size());
    REQUIRE(b.realizations.size() == seeds.size());
    for (size_t i = 0; i < seeds.size(); ++i) {
      CHECK(a.realizations[i].first == b.realizations[i].first);
      CHECK(a.realizations[i].second == b.realizations[i].second);
    }

    std::stringstream sa, sb;
    write_quantile_study(sa, a);
    write_quantile_study(sb, b);
    CHECK(sa.str() == sb.str());
  }
}

TEST_CASE("spe10 study on a coarse mesh") {
  Spe10Config config;
  config.nx = 22;
  config.ny = 6;
  config.steps = 60;
  config.basis.n_t = 8;
  config.basis.k = 7;

  const Spe10Result deim_end = run_spe10(config, Spe10Method::deim_end, 4, {}, 1);
  CHECK(deim_end.study.realizations.size() == 1);
  CHECK(deim_end.mean_rel_l2_over_time.size() == config.steps + 1);

  const Spe10Result leverage = run_spe10(config, Spe10Method::leverage, 8, {1, 2, 3}, 2);
  CHECK(leverage.study.realizations.size() == 3);
  // Early times are exactly zero for both full and reduced solves.
  CHECK(leverage.mean_rel_l2_over_time(0) == 0.0);
}

TEST_CASE("config files override the defaults") {
  std::stringstream ini(
      "# comment\n"
      "[mesh]\n"
      "nx = 20\nny = 10\n"
      "[time]\n"
      "steps = 80\n"
      "[stove]\n"
      "kappa = 2.5\n"
      "signal1 = 2.0 10.0 0.5\n"
      "patch2 = 0.5 0.5 0.75 0.75\n"
      "[basis]\n"
      "nt = 12\nk = 11\ntol = 1e-6\nanchor = start\nseed = 9\n");
  const ConfigFile file = ConfigFile::parse(ini);

  StoveConfig config;
  apply_config(config, file);
  CHECK(config.nx == 20);
  CHECK(config.ny == 10);
  CHECK(config.steps == 80);
  CHECK(config.kappa == 2.5);
  CHECK(config.signals[0].center == 2.0);
  CHECK(config.signals[0].height == 10.0);
  CHECK(config.signals[1].height == 20.0);  // untouched
  CHECK(config.patches[1].x0 == 0.5);
  CHECK(config.basis.n_t == 12);
  CHECK(config.basis.k == 11);
  CHECK(config.basis.tol == 1e-6);
  CHECK(config.basis.anchor == AnchorMode::start_point);
  CHECK(config.basis.seed == 9);

  std::stringstream bad("[mesh\nnx = 3\n");
  CHECK_THROWS_AS(ConfigFile::parse(bad), std::runtime_error);
}

TEST_CASE("cli workflows") {
  const auto dir = std::filesystem::temp_directory_path() / "pitrom_cli_test";
  std::filesystem::create_directories(dir);
  const auto config_path = dir / "tiny.ini";
  {
    std::ofstream out(config_path);
    out << "[mesh]\nnx = 10\nny = 10\n[time]\nsteps = 40\n[basis]\nnt = 6\nk = 5\n";
  }
  const std::string cfg = config_path.string();

  SUBCASE("solve, select, basis, rom chain") {
    const auto traj = (dir / "traj.txt").string();
    CHECK(run_cli({"solve", "--problem", "stove", "--config", cfg, "--out", traj}) == 0);
    CHECK(std::filesystem::exists(traj));

    const auto sel = (dir / "sel.txt").string();
    CHECK(run_cli({"select", "--problem", "stove", "--config", cfg, "--method", "deim", "--out",
                   sel}) == 0);
    CHECK(slurp(sel).find("timeIndex") != std::string::npos);

    const auto scores = (dir / "scores.txt").string();
    CHECK(run_cli({"select", "--problem", "stove", "--config", cfg, "--method", "leverage",
                   "--nrand", "5", "--seed", "3", "--out", scores}) == 0);
    CHECK(slurp(scores).find("score") != std::string::npos);

    const auto basis = (dir / "basis.txt").string();
    CHECK(run_cli({"basis", "--problem", "stove", "--config", cfg, "--method", "deim", "--out",
                   basis}) == 0);
    CHECK(std::filesystem::exists(basis));
    CHECK(std::filesystem::exists(basis + ".meta"));

    const auto report = (dir / "report.txt").string();
    CHECK(run_cli({"rom", "--problem", "stove", "--config", cfg, "--basis", basis, "--out",
                   report}) == 0);
    CHECK(slurp(report).find("relL2H1") != std::string::npos);
  }

  SUBCASE("identical invocations produce identical bytes") {
    const auto out1 = (dir / "q1").string();
    const auto out2 = (dir / "q2").string();
    CHECK(run_cli({"stove", "--config", cfg, "--method", "leverage", "--nrand", "3", "--seeds",
                   "5", "--realizations", "4", "--out", out1}) == 0);
    CHECK(run_cli({"stove", "--config", cfg, "--method", "leverage", "--nrand", "3", "--seeds",
                   "5", "--realizations", "4", "--out", out2}) == 0);
    CHECK(slurp(out1 + "_quantiles.txt") == slurp(out2 + "_quantiles.txt"));
  }

  SUBCASE("malformed flags exit with code 2") {
    CHECK(run_cli({"stove", "--method", "nonsense"}) == 2);
    CHECK(run_cli({"frobnicate"}) == 2);
  }

  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
