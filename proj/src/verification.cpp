#include "gp/verification.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <thread>

#include "gp/analysis.hpp"
#include "gp/config.hpp"
#include "gp/dynamics.hpp"
#include "gp/operators.hpp"
#include "gp/scattering.hpp"

namespace gp {

namespace {

CheckResult make_check(std::string id, double measured, double lo, double hi,
                       double tol, std::string note = "") {
  CheckResult r;
  r.check_id = std::move(id);
  r.measured = measured;
  r.expected_lo = lo;
  r.expected_hi = hi;
  r.tolerance = tol;
  r.status = (measured >= lo - tol && measured <= hi + tol) ? "pass" : "fail";
  r.note = std::move(note);
  return r;
}

Field random_field(const GridPtr& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Field f(grid, Rep::physical);
  for (auto& v : f.values()) v = cplx{dist(rng), dist(rng)};
  return f;
}

double rel_err(const Field& a, const Field& b) {
  return lp_norm(a - b, 2.0) / std::max(1e-300, lp_norm(b, 2.0));
}

void run_pool(const std::vector<std::function<void()>>& jobs) {
  const int threads =
      std::min<int>(thread_cap(), static_cast<int>(jobs.size()));
  if (threads <= 1) {
    for (const auto& j : jobs) j();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        jobs[i]();
      }
    });
  for (auto& t : pool) t.join();
}

}  // namespace

std::vector<CheckResult> run_identity_suite(bool perturb_dispersion) {
  const double factor = perturb_dispersion ? 1.01 : 1.0;
  std::vector<CheckResult> out;

  // Multiplier identities on random fields, both dimensions.
  double p_plus_q = 0.0, u_sq = 0.0, two_q = 0.0, v_round = 0.0;
  int which = 0;
  for (auto grid : {make_grid(2, 64, 40.0), make_grid(3, 32, 30.0)}) {
    for (int trial = 0; trial < 10; ++trial) {
      Field f = random_field(grid, 1000 + 100 * which + trial);
      Field pq = apply_symbol(f, SymbolId::P) + apply_symbol(f, SymbolId::Q);
      p_plus_q = std::max(p_plus_q, rel_err(pq, f));
      Field uu = apply_symbol(apply_symbol(f, SymbolId::U), SymbolId::U);
      u_sq = std::max(u_sq, rel_err(uu, apply_symbol(f, SymbolId::Q)));
      Field lap = apply_multiplier(f, [](double r) { return r * r; });
      two_q = std::max(
          two_q, rel_err(apply_symbol(lap, SymbolId::P),
                         cplx{2.0, 0.0} * apply_symbol(f, SymbolId::Q)));
      Field nozero = apply_multiplier_drop_zero(f, [](double) { return 1.0; });
      Field round = v_map(v_inverse_map(nozero));
      v_round = std::max(v_round, rel_err(round, nozero));
    }
    ++which;
  }
  out.push_back(make_check("op.p_plus_q", p_plus_q, 0.0, 0.0, 1e-12));
  out.push_back(make_check("op.u_squared", u_sq, 0.0, 0.0, 1e-12));
  out.push_back(make_check("op.two_q_is_minus_p_lap", two_q, 0.0, 0.0, 1e-12));
  out.push_back(make_check("op.v_roundtrip", v_round, 0.0, 0.0, 1e-12));

  // Symbol derivative formulas against central differences with relative step
  // 1e-5 on r in [0.01, 100]; the differenced functions run in extended
  // precision so roundoff stays below the 1e-6 tolerance even where the
  // derivatives are tiny. The perturbation factor is applied to the
  // differentiated function only.
  {
    const long double pf = factor;
    auto br = [](long double r) { return sqrtl(2.0L + r * r); };
    auto H = [&](long double r) { return pf * r * br(r); };
    auto H1 = [&](long double r) {
      return pf * 2.0L * (1.0L + r * r) / br(r);
    };
    auto H2 = [&](long double r) {
      const long double b = br(r);
      return pf * 2.0L * r * (3.0L + r * r) / (b * b * b);
    };
    auto H3 = [&](long double r) {
      const long double b = br(r);
      return pf * 12.0L / (b * b * b * b * b);
    };
    auto Iof = [&](long double r) {
      const long double b = br(r);
      return pf * -4.0L / (r * r * b * b * b);
    };
    auto fd = [](auto&& f, long double r, long double h) {
      return (f(r + h) - f(r - h)) / (2.0L * h);
    };
    const char* ids[6] = {"sym.H1", "sym.H2", "sym.H3",
                          "sym.H4", "sym.I",  "sym.I1"};
    double worst[6] = {0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 200; ++i) {
      const double r = 1e-2 * std::pow(1e4, i / 199.0);
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
      for (int k = 0; k < 6; ++k)
        worst[k] = std::max(worst[k], std::abs(vals[k] - fds[k]) /
                                          std::max(1e-300, std::abs(fds[k])));
    }
    for (int k = 0; k < 6; ++k)
      out.push_back(make_check(ids[k], worst[k], 0.0, 0.0, 1e-6));
  }

  // Phase gradient against finite differences on random configurations.
  {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Vec3 xi{dist(rng), dist(rng), dist(rng)};
      const Vec3 eta{dist(rng), dist(rng), dist(rng)};
      if (norm(eta) < 0.1 || norm(eta - xi) < 0.1 || norm(xi) < 0.1) continue;
      for (auto kind :
           {PhaseKind::Phi0, PhaseKind::PhiPlus, PhaseKind::PhiMinus}) {
        const Vec3 g = phase_gradient(kind, xi, eta);
        const double h = 1e-5;
        for (int a = 0; a < 3; ++a) {
          Vec3 ep = eta, em = eta;
          ep[static_cast<std::size_t>(a)] += h;
          em[static_cast<std::size_t>(a)] -= h;
          const double fdv =
              (phase_value(kind, xi, ep) - phase_value(kind, xi, em)) /
              (2 * h);
          worst = std::max(
              worst, std::abs(g[static_cast<std::size_t>(a)] - fdv));
        }
      }
    }
    out.push_back(make_check("phase.gradient_fd", worst, 0.0, 0.0, 1e-8));
  }

  // Angle identity: |eta-hat - (eta-xi)-hat|^2 |eta||eta-xi|
  //               = |xi|^2 - (|eta| - |eta-xi|)^2.
  {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Vec3 xi{dist(rng), dist(rng), dist(rng)};
      const Vec3 eta{dist(rng), dist(rng), dist(rng)};
      const double s = norm(eta), d = norm(eta - xi);
      if (s < 1e-6 || d < 1e-6) continue;
      const Vec3 diff = hat(eta) - hat(eta - xi);
      const double lhs = dot(diff, diff) * s * d;
      const double rhs = dot(xi, xi) - (s - d) * (s - d);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    out.push_back(make_check("phase.angle_identity", worst, 0.0, 0.0, 1e-12));
  }

  // H(a+b) - H(a) - H(b) superadditivity decomposition.
  {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> dist(1e-3, 10.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double a = dist(rng), b = dist(rng);
      const double lhs = dispersion(a + b) - dispersion(a) - dispersion(b);
      const double rhs =
          a * b * (2 * a + b) / (bracket(a + b) + bracket(a)) +
          a * b * (a + 2 * b) / (bracket(a + b) + bracket(b));
      worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    out.push_back(make_check("phase.sum_identity", worst, 0.0, 0.0, 1e-12));
  }

  // Dyadic blocks sum back to the original field (zero mode excluded).
  {
    auto grid = make_grid(2, 64, 40.0);
    Field f = random_field(grid, 17);
    Field nozero = apply_multiplier_drop_zero(f, [](double) { return 1.0; });
    DyadicPartition part(*grid);
    Field sum(grid, Rep::physical);
    for (int jlev = part.j_min(); jlev <= part.j_max(); ++jlev)
      sum += part.block(f, jlev);
    out.push_back(
        make_check("spec.partition_unity", rel_err(sum, nozero), 0.0, 0.0,
                   1e-12));
  }

  // Discrete Parseval under the quadrature-weight normalization.
  {
    auto grid = make_grid(3, 16, 20.0);
    Field f = random_field(grid, 19);
    const double phys = lp_norm(f, 2.0);
    Field fh = to_spectral(f);
    double acc = 0.0;
    for (const auto& v : fh.values()) acc += std::norm(v);
    const double spec = std::sqrt(acc / grid->volume());
    out.push_back(make_check("spec.parseval",
                             std::abs(phys - spec) / phys, 0.0, 0.0, 1e-12));
  }

  return out;
}

std::vector<CheckResult> run_rate_suite(Budget budget) {
  const bool full = budget == Budget::full;
  const int n2 = full ? 256 : 128;
  const double L2 = full ? 200.0 : 100.0;
  const int n3 = full ? 64 : 48;
  const double L3 = full ? 80.0 : 60.0;

  std::vector<CheckResult> out;
  std::vector<std::function<void()>> jobs;
  std::vector<CheckResult> slots(full ? 5 : 4);

  auto times_of = [](double lo, double hi) {
    std::vector<double> t(12);
    for (int i = 0; i < 12; ++i)
      t[static_cast<std::size_t>(i)] =
          lo * std::pow(hi / lo, i / 11.0);
    return t;
  };

  // The 2D datum carries a unit frequency so its spectrum sits where the
  // dispersion has order-one curvature; a low-frequency Gaussian is still in
  // the wave-like regime on these windows and fits a shallower slope.
  jobs.push_back([&, n2, L2] {
    auto grid = make_grid(2, n2, L2);
    Field phi = make_gaussian_datum(grid, 1.0, 2.0, {L2 / 2, L2 / 2, 0.0}, 1.0);
    auto fit = linear_decay_experiment(
        phi, std::numeric_limits<double>::infinity(),
        times_of(5.0, full ? 40.0 : 25.0));
    slots[0] = make_check("rate.linf_2d", fit.exponent, -1.0, -1.0, 0.15);
  });
  jobs.push_back([&, n2, L2] {
    auto grid = make_grid(2, n2, L2);
    Field phi = make_gaussian_datum(grid, 1.0, 2.0, {L2 / 2, L2 / 2, 0.0}, 1.0);
    auto fit =
        linear_decay_experiment(phi, 2.0, times_of(5.0, full ? 40.0 : 25.0));
    slots[1] = make_check("rate.l2_2d", std::abs(fit.exponent), 0.0, 0.0, 1e-6);
  });
  jobs.push_back([&, n2, L2] {
    auto grid = make_grid(2, n2, L2);
    Field phi = make_gaussian_datum(grid, 1.0, 2.0, {L2 / 2, L2 / 2, 0.0}, 1.0);
    auto fit =
        linear_decay_experiment(phi, 4.0, times_of(5.0, full ? 40.0 : 25.0));
    slots[2] = make_check("rate.l4_2d", fit.exponent, -0.5, -0.5, 0.1);
  });
  jobs.push_back([&, n3, L3] {
    auto grid = make_grid(3, n3, L3);
    Field phi =
        make_gaussian_datum(grid, 1.0, 2.5, {L3 / 2, L3 / 2, L3 / 2});
    auto fit = linear_decay_experiment(
        phi, std::numeric_limits<double>::infinity(),
        times_of(3.0, full ? 15.0 : 12.0));
    slots[3] = make_check("rate.linf_3d", fit.exponent, -1.5, -1.5, 0.2);
  });
  if (full) {
    // Critical-exponent stress: a datum far above the contraction radius
    // must be detected as divergent, reported as a skip, never a crash.
    jobs.push_back([&] {
      auto grid = make_grid(3, 48, 40.0);
      Field phi = make_gaussian_datum(grid, 1.5, 3.0, {20.0, 20.0, 20.0});
      ScatteringConfig sc;
      sc.T = 5.0;
      sc.T_max = 40.0;
      sc.dim = 3;
      sc.eps = 0.0;
      sc.sweeps = 12;
      sc.time_nodes = sc.resolved_nodes(0.5);
      ScatterResult r = iterate(phi, sc);
      CheckResult c;
      c.check_id = "rate.crit3d_divergence";
      c.measured = static_cast<double>(r.diag.sweeps_run);
      c.expected_lo = 1.0;
      c.expected_hi = 12.0;
      c.tolerance = 0.0;
      if (r.diag.diverged) {
        c.status = "skip";
        c.note = "divergence detected: " + r.diag.note;
      } else {
        c.status = "fail";
        c.note = "expected divergence was not detected";
      }
      slots[4] = c;
    });
  }

  run_pool(jobs);
  for (auto& c : slots) out.push_back(std::move(c));
  return out;
}

void write_report(const std::filesystem::path& path,
                  const std::vector<CheckResult>& results) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_report: cannot open " + path.string());
  os << "check_id,status,measured,expected_lo,expected_hi,tolerance,note\n";
  char buf[48];
  for (const auto& r : results) {
    os << r.check_id << "," << r.status;
    for (double v : {r.measured, r.expected_lo, r.expected_hi, r.tolerance}) {
      std::snprintf(buf, sizeof buf, "%.12g", v);
      os << "," << buf;
    }
    os << "," << r.note << "\n";
  }
}

}  // namespace gp
