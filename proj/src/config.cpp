#include "gp/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include "gp/analysis.hpp"
#include "gp/dynamics.hpp"
#include "gp/normal_form.hpp"
#include "gp/operators.hpp"
#include "gp/scattering.hpp"

namespace gp {

namespace fs = std::filesystem;
using json = nlohmann::json;

int thread_cap() {
  const char* env = std::getenv("GP_THREADS");
  if (!env) return 1;
  const int v = std::atoi(env);
  return v > 0 ? v : 1;
}

namespace {

template <typename T>
void put(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void write_snapshot(const fs::path& path, const Field& f, double t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_snapshot: cannot open " + path.string());
  os.write("GPF1", 4);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid().dim()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid().n()));
  put<double>(os, f.grid().length());
  put<double>(os, t);
  put<std::uint8_t>(os, f.rep() == Rep::physical ? 0 : 1);
  for (const auto& v : f.values()) {
    put<double>(os, v.real());
    put<double>(os, v.imag());
  }
  if (!os) throw std::runtime_error("write_snapshot: write failed");
}

Snapshot read_snapshot(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_snapshot: cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "GPF1", 4) != 0)
    throw std::runtime_error("read_snapshot: bad magic in " + path.string());
  const auto dim = static_cast<int>(get<std::uint32_t>(is));
  const auto n = static_cast<int>(get<std::uint32_t>(is));
  const double L = get<double>(is);
  const double t = get<double>(is);
  const auto rep = get<std::uint8_t>(is) == 0 ? Rep::physical : Rep::spectral;
  auto grid = make_grid(dim, n, L);
  Field f(grid, rep);
  for (auto& v : f.values()) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    v = cplx{re, im};
  }
  if (!is) throw std::runtime_error("read_snapshot: truncated " + path.string());
  return Snapshot{std::move(f), t};
}

Field make_gaussian_datum(const GridPtr& grid, double amplitude, double width,
                          const std::array<double, 3>& center,
                          double modulation) {
  if (!(width > 0.0))
    throw std::invalid_argument("make_gaussian_datum: width must be positive");
  const double L = grid->length();
  Field f(grid, Rep::physical);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto x = grid->x(i);
    double r2 = 0.0;
    double d1 = 0.0;
    for (int a = 0; a < grid->dim(); ++a) {
      double d = x[static_cast<std::size_t>(a)] -
                 center[static_cast<std::size_t>(a)];
      d -= L * std::round(d / L);
      r2 += d * d;
      if (a == 0) d1 = d;
    }
    f[i] = amplitude * std::exp(-r2 / (2.0 * width * width)) *
           std::polar(1.0, modulation * d1);
  }
  return f;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_csv: cannot open " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i)
    os << (i ? "," : "") << header[i];
  os << "\n";
  char buf[48];
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("write_csv: row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.12g", row[i]);
      os << (i ? "," : "") << buf;
    }
    os << "\n";
  }
}

std::uint64_t fnv1a_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("fnv1a_file: cannot open " + path.string());
  std::uint64_t h = 14695981039346656037ull;
  char buf[8192];
  while (is.read(buf, sizeof buf) || is.gcount() > 0) {
    for (std::streamsize i = 0; i < is.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (!is) break;
  }
  return h;
}

namespace {

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ValidationError(path, "must be an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (item.key() == a) ok = true;
    if (!ok) throw ValidationError(path + "." + item.key(), "unknown key");
  }
}

double jnum(const json& j, const std::string& path, const char* key,
            double def) {
  if (!j.contains(key)) return def;
  if (!j[key].is_number()) throw ValidationError(path + "." + key, "must be a number");
  return j[key].get<double>();
}

std::int64_t jint(const json& j, const std::string& path, const char* key,
                  std::int64_t def) {
  if (!j.contains(key)) return def;
  if (!j[key].is_number_integer())
    throw ValidationError(path + "." + key, "must be an integer");
  return j[key].get<std::int64_t>();
}

std::string jstr(const json& j, const std::string& path, const char* key,
                 const std::string& def) {
  if (!j.contains(key)) return def;
  if (!j[key].is_string()) throw ValidationError(path + "." + key, "must be a string");
  return j[key].get<std::string>();
}

bool jbool(const json& j, const std::string& path, const char* key, bool def) {
  if (!j.contains(key)) return def;
  if (!j[key].is_boolean())
    throw ValidationError(path + "." + key, "must be a boolean");
  return j[key].get<bool>();
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  check_keys(j, "config",
             {"name", "dim", "grid", "datum", "task", "task_params", "seed",
              "out_dir"});
  ExperimentConfig cfg;
  cfg.name = jstr(j, "config", "name", cfg.name);
  cfg.dim = static_cast<int>(jint(j, "config", "dim", cfg.dim));
  if (cfg.dim != 2 && cfg.dim != 3)
    throw ValidationError("dim", "must be 2 or 3");
  if (j.contains("grid")) {
    check_keys(j["grid"], "grid", {"n", "L"});
    cfg.n = static_cast<int>(jint(j["grid"], "grid", "n", cfg.n));
    cfg.L = jnum(j["grid"], "grid", "L", cfg.L);
  }
  if (cfg.n < 8 || cfg.n % 2 != 0)
    throw ValidationError("grid.n", "must be even and >= 8");
  if (!(cfg.L > 0.0)) throw ValidationError("grid.L", "must be positive");
  if (j.contains("datum")) {
    const json& d = j["datum"];
    check_keys(d, "datum",
               {"kind", "amplitude", "width", "center", "modulation", "path"});
    cfg.datum.kind = jstr(d, "datum", "kind", cfg.datum.kind);
    if (cfg.datum.kind != "gaussian" && cfg.datum.kind != "from_file")
      throw ValidationError("datum.kind", "must be gaussian or from_file");
    cfg.datum.amplitude = jnum(d, "datum", "amplitude", cfg.datum.amplitude);
    cfg.datum.width = jnum(d, "datum", "width", cfg.datum.width);
    cfg.datum.modulation = jnum(d, "datum", "modulation", cfg.datum.modulation);
    cfg.datum.path = jstr(d, "datum", "path", cfg.datum.path);
    if (d.contains("center")) {
      if (!d["center"].is_array() ||
          d["center"].size() != static_cast<std::size_t>(cfg.dim))
        throw ValidationError("datum.center", "must be an array of dim numbers");
      for (std::size_t a = 0; a < d["center"].size(); ++a) {
        if (!d["center"][a].is_number())
          throw ValidationError("datum.center", "must be an array of numbers");
        cfg.datum.center[a] = d["center"][a].get<double>();
      }
    }
  }
  cfg.task = jstr(j, "config", "task", "");
  static const char* tasks[] = {"simulate",       "scatter",     "decay",
                                "phase-scan",     "verify-symbols",
                                "normal-form",    "oracle"};
  bool task_ok = false;
  for (const char* t : tasks)
    if (cfg.task == t) task_ok = true;
  if (!task_ok) throw ValidationError("task", "unknown task '" + cfg.task + "'");
  if (j.contains("task_params")) {
    if (!j["task_params"].is_object())
      throw ValidationError("task_params", "must be an object");
    cfg.task_params = j["task_params"];
  }
  cfg.seed = static_cast<std::uint64_t>(jint(j, "config", "seed", 0));
  cfg.out_dir = jstr(j, "config", "out_dir", ".");
  return cfg;
}

Field build_datum(const ExperimentConfig& cfg) {
  auto grid = make_grid(cfg.dim, cfg.n, cfg.L);
  if (cfg.datum.kind == "from_file") {
    if (cfg.datum.path.empty())
      throw ValidationError("datum.path", "required for kind from_file");
    Snapshot s = read_snapshot(cfg.datum.path);
    if (s.field.grid().dim() != cfg.dim || s.field.grid().n() != cfg.n ||
        std::abs(s.field.grid().length() - cfg.L) > 1e-12)
      throw ValidationError("datum.path", "snapshot grid does not match config");
    return s.field.rep() == Rep::physical ? s.field : to_physical(s.field);
  }
  std::array<double, 3> c = cfg.datum.center;
  for (int a = 0; a < cfg.dim; ++a) {
    auto& v = c[static_cast<std::size_t>(a)];
    if (v < 0.0) v = 0.5 * cfg.L;
    if (v > cfg.L) throw ValidationError("datum.center", "outside the box");
  }
  if (!(cfg.datum.width > 0.0))
    throw ValidationError("datum.width", "must be positive");
  return make_gaussian_datum(grid, cfg.datum.amplitude, cfg.datum.width, c,
                             cfg.datum.modulation);
}

namespace {

json config_json(const ExperimentConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["dim"] = cfg.dim;
  j["grid"] = {{"n", cfg.n}, {"L", cfg.L}};
  j["datum"] = {{"kind", cfg.datum.kind},
                {"amplitude", cfg.datum.amplitude},
                {"width", cfg.datum.width},
                {"center", {cfg.datum.center[0], cfg.datum.center[1],
                            cfg.datum.center[2]}},
                {"modulation", cfg.datum.modulation},
                {"path", cfg.datum.path}};
  j["task"] = cfg.task;
  j["task_params"] = cfg.task_params;
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir.string();
  return j;
}

void write_manifest(const ExperimentConfig& cfg,
                    const std::vector<fs::path>& outputs) {
  json m;
  m["name"] = cfg.name;
  m["version"] = "1.0.0";
  m["config"] = config_json(cfg);
  m["outputs"] = json::array();
  for (const auto& p : outputs) {
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a_file(p)));
    m["outputs"].push_back(
        {{"path", p.filename().string()}, {"fnv1a64", hex}});
  }
  std::ofstream os(cfg.out_dir / "manifest.json");
  os << m.dump(2) << "\n";
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  return out;
}

std::vector<double> logspace(double lo, double hi, int count) {
  auto out = linspace(std::log(lo), std::log(hi), count);
  for (auto& v : out) v = std::exp(v);
  return out;
}

std::vector<fs::path> task_simulate(const ExperimentConfig& cfg) {
  const json& p = cfg.task_params;
  check_keys(p, "task_params", {"T", "dt", "scheme", "dealias", "samples"});
  const double T = jnum(p, "task_params", "T", 10.0);
  if (!(T > 0.0)) throw ValidationError("task_params.T", "must be positive");
  SolverConfig sc;
  sc.dt = jnum(p, "task_params", "dt", 1e-3);
  const std::string scheme = jstr(p, "task_params", "scheme", "strang_rk4");
  if (scheme == "strang_rk4")
    sc.scheme = Scheme::strang_rk4;
  else if (scheme == "etd_rk2")
    sc.scheme = Scheme::etd_rk2;
  else
    throw ValidationError("task_params.scheme", "must be strang_rk4 or etd_rk2");
  sc.dealias = jbool(p, "task_params", "dealias", true);
  const int samples =
      static_cast<int>(jint(p, "task_params", "samples", 11));
  if (samples < 2) throw ValidationError("task_params.samples", "must be >= 2");
  sc.sample_times = linspace(0.0, T, samples);

  Field u0 = build_datum(cfg);
  EvolveResult r = evolve(v_from_u_full(u0), T, sc);

  std::vector<std::vector<double>> rows;
  for (const auto& c : r.conservation)
    rows.push_back({c.t, c.energy, c.charge, c.l2, c.h1dot, c.l4, c.linf});
  const fs::path csv = cfg.out_dir / "norms.csv";
  write_csv(csv, {"t", "energy", "charge", "l2", "h1dot", "l4", "linf"}, rows);
  const fs::path snap = cfg.out_dir / "final.gpf";
  write_snapshot(snap, u_from_v_full(r.vtraj.fields.back()), T);
  return {csv, snap};
}

std::vector<fs::path> task_decay(const ExperimentConfig& cfg) {
  const json& p = cfg.task_params;
  check_keys(p, "task_params", {"q", "t_lo", "t_hi", "num_times"});
  double q = std::numeric_limits<double>::infinity();
  if (p.contains("q") && p["q"].is_number()) q = p["q"].get<double>();
  else if (p.contains("q") && (!p["q"].is_string() || p["q"] != "inf"))
    throw ValidationError("task_params.q", "must be a number or \"inf\"");
  const double t_lo = jnum(p, "task_params", "t_lo", 5.0);
  const double t_hi = jnum(p, "task_params", "t_hi", cfg.L / 4.0 - 10.0);
  const int nt = static_cast<int>(jint(p, "task_params", "num_times", 16));
  if (!(t_lo > 0.0 && t_hi > t_lo))
    throw ValidationError("task_params.t_lo", "need 0 < t_lo < t_hi");
  if (nt < 8) throw ValidationError("task_params.num_times", "must be >= 8");

  Field phi = build_datum(cfg);
  const auto times = logspace(t_lo, t_hi, nt);
  std::vector<std::vector<double>> rows;
  for (double t : times) {
    Field f = to_physical(propagate(to_spectral(phi), t));
    rows.push_back({t, lp_norm(f, q)});
  }
  DecayFit fit = linear_decay_experiment(phi, q, times);
  const fs::path csv = cfg.out_dir / "decay.csv";
  write_csv(csv, {"t", "norm"}, rows);
  const fs::path fcsv = cfg.out_dir / "decay_fit.csv";
  write_csv(fcsv, {"exponent", "intercept", "r_squared", "t_lo", "t_hi"},
            {{fit.exponent, fit.intercept, fit.r_squared, fit.t_lo, fit.t_hi}});
  return {csv, fcsv};
}

PhaseKind parse_kind(const std::string& s) {
  if (s == "Phi0") return PhaseKind::Phi0;
  if (s == "PhiPlus") return PhaseKind::PhiPlus;
  if (s == "PhiMinus") return PhaseKind::PhiMinus;
  throw ValidationError("task_params.kind", "unknown phase kind '" + s + "'");
}

RegionId parse_region(const std::string& s) {
  if (s == "Dplus") return RegionId::Dplus;
  if (s == "Dzero") return RegionId::Dzero;
  if (s == "Dminus") return RegionId::Dminus;
  if (s == "DF") return RegionId::DF;
  if (s == "DTplus") return RegionId::DTplus;
  if (s == "DTzero") return RegionId::DTzero;
  if (s == "DX") return RegionId::DX;
  throw ValidationError("task_params.region", "unknown region '" + s + "'");
}

std::vector<fs::path> task_phase_scan(const ExperimentConfig& cfg) {
  const json& p = cfg.task_params;
  check_keys(p, "task_params", {"mode", "kind", "region", "samples", "delta"});
  const std::string mode = jstr(p, "task_params", "mode", "lower_bound");
  const auto samples = static_cast<std::size_t>(
      jint(p, "task_params", "samples", 100000));
  const double delta = jnum(p, "task_params", "delta", 0.05);
  const std::uint64_t seed = cfg.seed ? cfg.seed : 12345;

  ScanResult r;
  if (mode == "lower_bound") {
    r = phase_lower_bound_scan(parse_kind(jstr(p, "task_params", "kind", "Phi0")),
                               parse_region(jstr(p, "task_params", "region",
                                                 "Dplus")),
                               samples, delta, seed);
  } else if (mode == "time_bound") {
    r = phi_plus_time_bound_scan(samples, delta, seed);
  } else {
    throw ValidationError("task_params.mode",
                          "must be lower_bound or time_bound");
  }
  const fs::path csv = cfg.out_dir / "phase_scan.csv";
  write_csv(csv,
            {"min_ratio", "samples", "xi_x", "xi_y", "xi_z", "eta_x", "eta_y",
             "eta_z"},
            {{r.min_ratio, static_cast<double>(r.samples), r.argmin_xi[0],
              r.argmin_xi[1], r.argmin_xi[2], r.argmin_eta[0], r.argmin_eta[1],
              r.argmin_eta[2]}});
  return {csv};
}

std::vector<fs::path> task_verify_symbols(const ExperimentConfig& cfg) {
  const json& p = cfg.task_params;
  check_keys(p, "task_params", {"r_points"});
  const int np = static_cast<int>(jint(p, "task_params", "r_points", 200));
  if (np < 2) throw ValidationError("task_params.r_points", "must be >= 2");
  // Central differences with relative step 1e-5 on [0.01, 100]; extended
  // precision keeps roundoff below the 1e-6 pass threshold where the
  // derivatives are tiny.
  const auto rs = logspace(1e-2, 1e2, np);
  auto br = [](long double r) { return sqrtl(2.0L + r * r); };
  auto H = [&](long double r) { return r * br(r); };
  auto H1 = [&](long double r) { return 2.0L * (1.0L + r * r) / br(r); };
  auto H2 = [&](long double r) {
    const long double b = br(r);
    return 2.0L * r * (3.0L + r * r) / (b * b * b);
  };
  auto H3 = [&](long double r) {
    const long double b = br(r);
    return 12.0L / (b * b * b * b * b);
  };
  auto Iof = [&](long double r) {
    const long double b = br(r);
    return -4.0L / (r * r * b * b * b);
  };
  auto fd = [](auto&& f, long double r, long double h) {
    return (f(r + h) - f(r - h)) / (2.0L * h);
  };
  double worst[6] = {0, 0, 0, 0, 0, 0};
  for (double r : rs) {
    const long double rl = r, h = 1e-5L * rl;
    const auto d = symbol_derivatives(r);
    const long double fd1 = fd(H, rl, h), fd2 = fd(H1, rl, h);
    const double vals[6] = {d.H1, d.H2, d.H3, d.H4, d.I, d.I1};
    const double fds[6] = {
        static_cast<double>(fd1),
        static_cast<double>(fd2),
        static_cast<double>(fd(H2, rl, h)),
        static_cast<double>(fd(H3, rl, h)),
        static_cast<double>(fd2 / rl - fd1 / (rl * rl)),
        static_cast<double>(fd(Iof, rl, h))};
    for (int i = 0; i < 6; ++i) {
      const double rel = std::abs(vals[i] - fds[i]) /
                         std::max(1e-300, std::abs(fds[i]));
      worst[i] = std::max(worst[i], rel);
    }
  }
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 6; ++i)
    rows.push_back({static_cast<double>(i + 1), worst[i],
                    worst[i] <= 1e-6 ? 1.0 : 0.0});
  const fs::path csv = cfg.out_dir / "symbol_checks.csv";
  write_csv(csv, {"formula", "max_rel_err", "pass"}, rows);
  return {csv};
}

std::vector<fs::path> task_normal_form(const ExperimentConfig& cfg) {
  const json& p = cfg.task_params;
  check_keys(p, "task_params", {"tol", "maxiter"});
  const double tol = jnum(p, "task_params", "tol", 1e-12);
  const int maxiter = static_cast<int>(jint(p, "task_params", "maxiter", 50));

  Field u = build_datum(cfg);
  double dropped = 0.0;
  Field z = to_normal_form(u, &dropped);
  NormalFormPair back = from_normal_form(z, tol, maxiter);
  const double base = lp_norm(u, 2.0);
  const double rel =
      base > 0.0 ? lp_norm(back.u - u, 2.0) / base : lp_norm(back.u - u, 2.0);
  const fs::path csv = cfg.out_dir / "normal_form.csv";
  write_csv(csv,
            {"converged", "iterations", "rel_roundtrip_err", "dropped_zero_mode"},
            {{back.converged ? 1.0 : 0.0,
              static_cast<double>(back.fixed_point_iters), rel, dropped}});
  return {csv};
}

std::vector<fs::path> task_scatter(const ExperimentConfig& cfg, bool* diverged) {
  const json& p = cfg.task_params;
  check_keys(p, "task_params",
             {"T", "T_max", "sweeps", "tol", "alpha", "beta", "kappa", "eps",
              "node_dt"});
  ScatteringConfig sc;
  sc.T = jnum(p, "task_params", "T", 10.0);
  sc.T_max = jnum(p, "task_params", "T_max", 80.0);
  sc.sweeps = static_cast<int>(jint(p, "task_params", "sweeps", 12));
  sc.tol = jnum(p, "task_params", "tol", 1e-8);
  sc.alpha = jnum(p, "task_params", "alpha", 0.85);
  sc.beta = jnum(p, "task_params", "beta", 0.48);
  sc.kappa = jnum(p, "task_params", "kappa", 0.05);
  sc.eps = jnum(p, "task_params", "eps", cfg.dim == 3 ? 3.0 / 68.0 : 0.1);
  sc.dim = cfg.dim;
  sc.time_nodes = sc.resolved_nodes(jnum(p, "task_params", "node_dt", 0.25));
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError("task_params", e.what());
  }

  Field phi = build_datum(cfg);
  ScatterResult r = iterate(phi, sc);
  *diverged = r.diag.diverged;

  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < r.diag.D.size(); ++k)
    rows.push_back({static_cast<double>(k + 1), r.diag.D[k], r.diag.E[k],
                    k > 0 ? r.diag.contraction_ratios[k - 1] : 0.0});
  const fs::path sweeps_csv = cfg.out_dir / "sweeps.csv";
  write_csv(sweeps_csv, {"k", "D", "E", "ratio"}, rows);

  const fs::path zsnap = cfg.out_dir / "z_T.gpf";
  const fs::path usnap = cfg.out_dir / "u_T.gpf";
  const fs::path usnap2 = cfg.out_dir / "u_Tmax.gpf";
  write_snapshot(zsnap, r.ztraj.fields.front(), sc.T);
  write_snapshot(usnap, r.utraj.fields.front(), sc.T);
  write_snapshot(usnap2, r.utraj.fields.back(), sc.T_max);

  // Correction-term decay table: z'' is defined by subtraction,
  // z'' = z - z0 + nu - z'.
  auto [z0, u0] = free_profile(phi, r.ztraj.times);
  Trajectory zp = z_prime(z0);
  std::vector<std::vector<double>> drows;
  for (std::size_t i = 0; i < r.ztraj.size(); ++i) {
    const Field& zpi = zp.at(i);
    Field nu = nu_field(r.utraj.at(i));
    Field zpp = r.ztraj.at(i) - z0.at(i) + nu - zpi;
    drows.push_back({r.ztraj.times[i], sobolev_norm(zpi, 1.0, true),
                     sobolev_norm(zpi, sc.eps, true),
                     sobolev_norm(nu, 1.0, true) + sobolev_norm(nu, 2.0, true),
                     sobolev_norm(nu, sc.eps, true),
                     sobolev_norm(zpp, 1.0, false)});
  }
  const fs::path dcsv = cfg.out_dir / "decay_report.csv";
  write_csv(dcsv,
            {"t", "zprime_h1", "zprime_heps", "nu_h1_h2", "nu_heps", "zpp_h1"},
            drows);
  return {sweeps_csv, zsnap, usnap, usnap2, dcsv};
}

std::vector<fs::path> task_oracle(const ExperimentConfig& cfg) {
  const json& p = cfg.task_params;
  check_keys(p, "task_params", {"case"});
  const std::string which = jstr(p, "task_params", "case", "small2d");
  if (which != "small2d")
    throw ValidationError("task_params.case", "only small2d is available");

  auto grid = make_grid(2, 64, 160.0);
  const double sigma = 0.09;
  auto fhat = [sigma](double r) { return std::exp(-r * r / (2 * sigma * sigma)); };
  Field phi(grid, Rep::spectral);
  for (std::size_t i = 0; i < phi.size(); ++i)
    phi[i] = cplx{fhat(grid->xi_abs(i)), 0.0};

  const std::array<std::array<int, 3>, 5> modes = {
      {{1, 0, 0}, {2, 1, 0}, {0, 3, 0}, {4, 2, 0}, {5, 5, 0}}};
  std::vector<std::vector<double>> rows;
  for (const auto& m : modes) {
    const Vec3 xi{grid->freq_step() * m[0], grid->freq_step() * m[1], 0.0};
    const cplx direct = bilinear_integral_direct(
        fhat, fhat, PhaseKind::PhiPlus, xi, 0.0, 1.0, *grid,
        BilinearTerm::u1sq, 65);
    const cplx spec = bilinear_integral_spectral(
        phi, phi, BilinearTerm::u1sq, PhaseKind::PhiPlus, m, 0.0, 1.0, 65);
    const double rel = std::abs(direct - spec) / std::abs(direct);
    rows.push_back({static_cast<double>(m[0]), static_cast<double>(m[1]),
                    direct.real(), direct.imag(), spec.real(), spec.imag(),
                    rel});
  }
  const fs::path csv = cfg.out_dir / "oracle.csv";
  write_csv(csv,
            {"mode_x", "mode_y", "re_direct", "im_direct", "re_spectral",
             "im_spectral", "rel_err"},
            rows);
  return {csv};
}

}  // namespace

int run(const ExperimentConfig& cfg) {
  try {
    fs::create_directories(cfg.out_dir);
    std::vector<fs::path> outputs;
    bool diverged = false;
    if (cfg.task == "simulate") outputs = task_simulate(cfg);
    else if (cfg.task == "decay") outputs = task_decay(cfg);
    else if (cfg.task == "phase-scan") outputs = task_phase_scan(cfg);
    else if (cfg.task == "verify-symbols") outputs = task_verify_symbols(cfg);
    else if (cfg.task == "normal-form") outputs = task_normal_form(cfg);
    else if (cfg.task == "scatter") outputs = task_scatter(cfg, &diverged);
    else if (cfg.task == "oracle") outputs = task_oracle(cfg);
    else throw ValidationError("task", "unknown task '" + cfg.task + "'");
    write_manifest(cfg, outputs);
    return diverged ? 3 : 0;
  } catch (const ValidationError&) {
    throw;  // caller reports the field path and exits 2
  } catch (const NumericalAbort&) {
    return 3;
  }
}

}  // namespace gp
