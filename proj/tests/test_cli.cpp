#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "gp/config.hpp"
#include "gp/dynamics.hpp"
#include "helpers.hpp"

using namespace gp;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("gp_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("thread cap reads the environment") {
  unsetenv("GP_THREADS");
  CHECK(thread_cap() == 1);
  setenv("GP_THREADS", "3", 1);
  CHECK(thread_cap() == 3);
  setenv("GP_THREADS", "garbage", 1);
  CHECK(thread_cap() == 1);
  unsetenv("GP_THREADS");
}

TEST_CASE("snapshot round trip is byte-exact") {
  auto dir = temp_dir("snap");
  auto g = make_grid(2, 16, 12.5);
  Field f = gptest::random_field(g, 42);
  const fs::path p1 = dir / "a.gpf", p2 = dir / "b.gpf";
  write_snapshot(p1, f, 3.25);

  Snapshot s = read_snapshot(p1);
  CHECK(s.t == 3.25);
  CHECK(s.field.grid().dim() == 2);
  CHECK(s.field.grid().n() == 16);
  CHECK(s.field.grid().length() == 12.5);
  CHECK(s.field.rep() == Rep::physical);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(s.field[i] == f[i]);

  write_snapshot(p2, s.field, s.t);
  CHECK(fnv1a_file(p1) == fnv1a_file(p2));

  std::ofstream bad(dir / "bad.gpf", std::ios::binary);
  bad << "NOPE";
  bad.close();
  CHECK_THROWS(read_snapshot(dir / "bad.gpf"));
  CHECK_THROWS(read_snapshot(dir / "missing.gpf"));
}

TEST_CASE("fnv1a matches the reference vector") {
  auto dir = temp_dir("fnv");
  std::ofstream os(dir / "abc.txt", std::ios::binary);
  os << "abc";
  os.close();
  CHECK(fnv1a_file(dir / "abc.txt") == 0xe71fa2190541574bull);
}

TEST_CASE("gaussian datum: norm, modulation and besov linearity") {
  auto g = make_grid(2, 128, 100.0);
  const double a = 0.02, w = 5.0;
  Field f = make_gaussian_datum(g, a, w, {50.0, 50.0, 0.0});
  // continuum L2 norm a (pi w^2)^{d/4}
  const double want = a * std::pow(std::numbers::pi * w * w, 0.5);
  CHECK(lp_norm(f, 2.0) == doctest::Approx(want).epsilon(1e-8));

  // a negative center coordinate selects the box center
  ExperimentConfig cfg;
  cfg.dim = 2;
  cfg.n = 128;
  cfg.L = 100.0;
  cfg.datum.amplitude = a;
  cfg.datum.width = w;
  cfg.task = "simulate";
  Field f2 = build_datum(cfg);
  const double peak_idx_err =
      std::abs(f2[g->flatten({64, 64, 0})]) - a;
  CHECK(std::abs(peak_idx_err) < 1e-12);

  // modulation keeps |f| and tilts the spectrum
  Field fm = make_gaussian_datum(g, a, w, {50.0, 50.0, 0.0}, 0.3);
  for (std::size_t i = 0; i < f.size(); ++i)
    CHECK(std::abs(std::abs(fm[i]) - std::abs(f[i])) < 1e-14);

  const double b1 = besov_norm(f, 1.0, 1.0, 1.0);
  Field f4 = make_gaussian_datum(g, 4.0 * a, w, {50.0, 50.0, 0.0});
  CHECK(besov_norm(f4, 1.0, 1.0, 1.0) ==
        doctest::Approx(4.0 * b1).epsilon(1e-12));
  CHECK_THROWS_AS(make_gaussian_datum(g, a, -1.0, {0, 0, 0}),
                  std::invalid_argument);
}

TEST_CASE("config parsing is strict") {
  nlohmann::json j = {{"dim", 2},
                      {"grid", {{"n", 64}, {"L", 50.0}}},
                      {"task", "simulate"}};
  ExperimentConfig cfg = parse_config(j);
  CHECK(cfg.dim == 2);
  CHECK(cfg.n == 64);
  CHECK(cfg.L == 50.0);
  CHECK(cfg.datum.kind == "gaussian");

  auto fails = [](nlohmann::json jj, const std::string& field) {
    try {
      parse_config(jj);
      FAIL("expected ValidationError for " << field);
    } catch (const ValidationError& e) {
      CHECK(e.field() == field);
    }
  };
  nlohmann::json unknown = j;
  unknown["typo_key"] = 1;
  fails(unknown, "config.typo_key");

  nlohmann::json bad_dim = j;
  bad_dim["dim"] = 4;
  fails(bad_dim, "dim");

  nlohmann::json bad_task = j;
  bad_task["task"] = "frobnicate";
  fails(bad_task, "task");

  nlohmann::json bad_n = j;
  bad_n["grid"]["n"] = 15;
  fails(bad_n, "grid.n");

  nlohmann::json bad_center = j;
  bad_center["datum"] = {{"center", {1.0}}};
  fails(bad_center, "datum.center");
}

TEST_CASE("simulate task writes outputs, a manifest, and is deterministic") {
  nlohmann::json j = {
      {"name", "smoke"},
      {"dim", 2},
      {"grid", {{"n", 32}, {"L", 30.0}}},
      {"datum", {{"amplitude", 0.01}, {"width", 4.0}}},
      {"task", "simulate"},
      {"task_params", {{"T", 0.5}, {"dt", 0.01}, {"samples", 3}}}};

  auto run_into = [&](const fs::path& dir) {
    nlohmann::json jj = j;
    jj["out_dir"] = dir.string();
    ExperimentConfig cfg = parse_config(jj);
    REQUIRE(run(cfg) == 0);
    return dir;
  };
  auto d1 = run_into(temp_dir("sim1"));
  auto d2 = run_into(temp_dir("sim2"));

  for (const char* name : {"norms.csv", "final.gpf", "manifest.json"}) {
    CHECK(fs::exists(d1 / name));
    if (std::string(name) != "manifest.json")  // manifest embeds out_dir
      CHECK(fnv1a_file(d1 / name) == fnv1a_file(d2 / name));
  }
  std::ifstream mf(d1 / "manifest.json");
  nlohmann::json m = nlohmann::json::parse(mf);
  CHECK(m["version"] == "1.0.0");
  REQUIRE(m["outputs"].size() == 2);
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a_file(d1 / "norms.csv")));
  CHECK(m["outputs"][0]["fnv1a64"] == hex);

  // the final snapshot agrees with an in-process rerun
  ExperimentConfig cfg = parse_config(j);
  cfg.out_dir = d1;
  Field u0 = build_datum(cfg);
  SolverConfig sc;
  sc.dt = 0.01;
  auto res = evolve(v_from_u_full(u0), 0.5, sc);
  Snapshot s = read_snapshot(d1 / "final.gpf");
  CHECK(gptest::rel_err(s.field, u_from_v_full(res.vtraj.fields.back())) <
        1e-12);
}

TEST_CASE("task validation and abort exit paths") {
  auto dir = temp_dir("err");
  nlohmann::json j = {{"dim", 2},
                      {"grid", {{"n", 16}, {"L", 10.0}}},
                      {"task", "simulate"},
                      {"out_dir", dir.string()},
                      {"task_params", {{"scheme", "leapfrog"}}}};
  ExperimentConfig cfg = parse_config(j);
  CHECK_THROWS_AS(run(cfg), ValidationError);

  // an unphysical amplitude trips the numerical guard: exit code 3
  nlohmann::json j3 = j;
  j3["task_params"] = {{"T", 1.0}, {"dt", 0.1}};
  j3["datum"] = {{"amplitude", 2000.0}, {"width", 2.0}};
  ExperimentConfig cfg3 = parse_config(j3);
  CHECK(run(cfg3) == 3);
}

TEST_CASE("small scatter and verify-symbols tasks run end to end") {
  auto dir = temp_dir("scatter");
  nlohmann::json j = {
      {"dim", 2},
      {"grid", {{"n", 32}, {"L", 40.0}}},
      {"datum", {{"amplitude", 0.005}, {"width", 5.0}}},
      {"task", "scatter"},
      {"out_dir", dir.string()},
      {"task_params",
       {{"T", 2.0}, {"T_max", 16.0}, {"node_dt", 0.5}, {"sweeps", 10}}}};
  ExperimentConfig cfg = parse_config(j);
  CHECK(run(cfg) == 0);
  for (const char* name : {"sweeps.csv", "z_T.gpf", "u_T.gpf", "u_Tmax.gpf",
                           "decay_report.csv", "manifest.json"})
    CHECK(fs::exists(dir / name));

  auto dir2 = temp_dir("symbols");
  nlohmann::json js = {{"dim", 2},
                       {"task", "verify-symbols"},
                       {"out_dir", dir2.string()},
                       {"task_params", {{"r_points", 50}}}};
  CHECK(run(parse_config(js)) == 0);
  // every formula row reports pass
  std::ifstream cs(dir2 / "symbol_checks.csv");
  std::string line;
  std::getline(cs, line);  // header
  int rows = 0;
  while (std::getline(cs, line)) {
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == "1");
  }
  CHECK(rows == 6);
}
