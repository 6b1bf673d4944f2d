#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gp/analysis.hpp"
#include "gp/operators.hpp"
#include "helpers.hpp"

using namespace gp;

TEST_CASE("decay fit recovers exact power laws") {
  std::vector<double> times, vals;
  for (int i = 0; i < 12; ++i) {
    const double t = 2.0 * std::pow(1.4, i);
    times.push_back(t);
    vals.push_back(3.0 * std::pow(t, -1.5));
  }
  DecayFit fit = decay_fit(times, vals);
  CHECK(fit.exponent == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.t_lo == times.front());
  CHECK(fit.t_hi == times.back());

  std::vector<double> flat(times.size(), 0.7);
  DecayFit cf = decay_fit(times, flat);
  CHECK(cf.exponent == doctest::Approx(0.0));
  CHECK(cf.r_squared == doctest::Approx(1.0));

  CHECK_THROWS_AS(decay_fit({1, 2, 3}, {1, 1, 1}), std::invalid_argument);
  std::vector<double> neg = vals;
  neg[3] = -1.0;
  CHECK_THROWS_AS(decay_fit(times, neg), std::invalid_argument);
}

TEST_CASE("decay fit tolerates mild noise") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<double> times, vals;
  for (int i = 0; i < 24; ++i) {
    const double t = 3.0 * std::pow(1.3, i);
    times.push_back(t);
    vals.push_back((1.0 + noise(rng)) / t);
  }
  DecayFit fit = decay_fit(times, vals);
  CHECK(fit.exponent == doctest::Approx(-1.0).epsilon(0.05));
  CHECK(fit.r_squared > 0.99);
}

TEST_CASE("free flow preserves the L2 norm exactly") {
  auto g = make_grid(2, 32, 40.0);
  Field phi = gptest::gaussian(g, 0.1, 3.0);
  std::vector<double> times;
  for (int i = 0; i < 9; ++i) times.push_back(1.0 + i);
  DecayFit fit = linear_decay_experiment(phi, 2.0, times);
  CHECK(std::abs(fit.exponent) < 1e-10);
}

TEST_CASE("region membership") {
  const double d = 0.05;
  const Vec3 xi{1.0, 0.0, 0.0};
  // mu = |eta| - |eta - xi|, lambda = |eta| + |eta - xi| - |xi|
  CHECK(in_region(RegionId::Dplus, d, xi, {2.0, 0.0, 0.0}));        // mu = 1
  CHECK_FALSE(in_region(RegionId::Dzero, d, xi, {2.0, 0.0, 0.0}));
  CHECK(in_region(RegionId::Dminus, d, xi, {-2.0, 0.0, 0.0}));      // mu = -1
  CHECK(in_region(RegionId::Dzero, d, xi, {0.5, 0.8, 0.0}));        // mu = 0
  CHECK_FALSE(in_region(RegionId::Dplus, d, xi, {0.5, 0.8, 0.0}));
  CHECK(in_region(RegionId::DF, d, xi, {15.0, 0.0, 0.0}));          // lambda = 28
  CHECK_FALSE(in_region(RegionId::DF, d, xi, {2.0, 0.0, 0.0}));     // lambda = 2
  CHECK(in_region(RegionId::DTplus, d, xi, {2.0, 0.0, 0.0}));
  CHECK_THROWS_AS(in_region(RegionId::Dplus, 0.5, xi, {2.0, 0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(in_region(RegionId::Dplus, d, {0.0, 0.0, 0.0}, xi),
                  std::invalid_argument);

  // the three angular sectors cover every pair
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 500; ++k) {
    const Vec3 eta{u(rng), u(rng), 0.0};
    if (norm(eta) < 1e-6 || norm(eta - xi) < 1e-6) continue;
    const bool covered = in_region(RegionId::Dplus, d, xi, eta) ||
                         in_region(RegionId::Dzero, d, xi, eta) ||
                         in_region(RegionId::Dminus, d, xi, eta);
    CHECK(covered);
  }
}

TEST_CASE("phase lower-bound scans are positive on all supported pairs") {
  const std::size_t n = 20000;
  const std::pair<PhaseKind, RegionId> pairs[] = {
      {PhaseKind::Phi0, RegionId::Dplus},
      {PhaseKind::Phi0, RegionId::Dzero},
      {PhaseKind::PhiPlus, RegionId::DF},
      {PhaseKind::PhiPlus, RegionId::DTplus},
      {PhaseKind::PhiPlus, RegionId::DTzero},
      {PhaseKind::PhiPlus, RegionId::DX},
  };
  for (const auto& [kind, region] : pairs) {
    ScanResult r = phase_lower_bound_scan(kind, region, n, 0.05);
    CHECK(r.min_ratio > 0.0);
    CHECK(r.samples == n);
    // every sample really lies in the claimed region
    CHECK(in_region(region, 0.05, r.argmin_xi, r.argmin_eta));
  }
  CHECK_THROWS_AS(phase_lower_bound_scan(PhaseKind::PhiMinus, RegionId::DF, 10,
                                         0.05),
                  std::invalid_argument);
  CHECK_THROWS_AS(phase_lower_bound_scan(PhaseKind::Phi0, RegionId::DF, 10,
                                         0.05),
                  std::invalid_argument);

  // deterministic given the seed
  ScanResult a = phase_lower_bound_scan(PhaseKind::Phi0, RegionId::Dplus, 500,
                                        0.05, 7);
  ScanResult b = phase_lower_bound_scan(PhaseKind::Phi0, RegionId::Dplus, 500,
                                        0.05, 7);
  CHECK(a.min_ratio == b.min_ratio);
}

TEST_CASE("time-bound scan and the frozen low-frequency point") {
  ScanResult r = phi_plus_time_bound_scan(20000, 0.05);
  CHECK(r.min_ratio > 0.0);
  CHECK(r.samples == 20000);

  // Phi+ at eta = xi/2 scaled by <xi>/|xi|^3 approaches a positive constant
  const Vec3 xi{0.1, 0.0, 0.0};
  const double val = phase_value(PhaseKind::PhiPlus, xi, 0.5 * xi);
  CHECK(val * japanese(0.1) / 1e-3 == doctest::Approx(0.2661).epsilon(1e-3));
}

TEST_CASE("direct bilinear quadrature: trivial and closed-form cases") {
  auto g = make_grid(2, 32, 120.0);
  auto zero = [](double) { return 0.0; };
  auto fhat = [](double r) { return std::exp(-r * r / (2.0 * 0.09 * 0.09)); };
  const Vec3 xi{g->freq_step(), 0.0, 0.0};

  cplx none = bilinear_integral_direct(zero, fhat, PhaseKind::PhiPlus, xi, 0.0,
                                       1.0, *g, BilinearTerm::u1sq);
  CHECK(std::abs(none) == doctest::Approx(0.0));

  // with the phase dropped the time integral is exactly (t_hi - t_lo)
  cplx flat = bilinear_integral_direct(fhat, fhat, PhaseKind::PhiPlus, xi, 0.0,
                                       2.0, *g, BilinearTerm::u1sq, 65, true);
  cplx manual{0.0, 0.0};
  for (std::size_t i = 0; i < g->size(); ++i) {
    const auto ev = g->xi(i);
    const Vec3 eta{ev[0], ev[1], ev[2]};
    const double se = norm(eta), de = norm(eta - xi);
    manual += symbol_value(SymbolId::U, se) * symbol_value(SymbolId::U, de) *
              fhat(se) * fhat(de);
  }
  manual *= 2.0 / g->volume();
  CHECK(std::abs(flat - manual) < 1e-12 * std::abs(manual));

  CHECK_THROWS_AS(bilinear_integral_direct(fhat, fhat, PhaseKind::PhiPlus, xi,
                                           0.0, 1.0, *g, BilinearTerm::u1sq,
                                           64),
                  std::invalid_argument);
  // far too few time nodes cannot resolve the phase over a long window
  CHECK_THROWS_AS(bilinear_integral_direct(fhat, fhat, PhaseKind::PhiPlus, xi,
                                           0.0, 500.0, *g, BilinearTerm::u1sq,
                                           3),
                  std::invalid_argument);
}

TEST_CASE("direct and spectral evaluations agree") {
  auto g = make_grid(2, 64, 160.0);
  const double sigma = 0.09;
  auto fhat = [sigma](double r) {
    return std::exp(-r * r / (2.0 * sigma * sigma));
  };
  Field phi(g, Rep::spectral);
  for (std::size_t i = 0; i < phi.size(); ++i)
    phi[i] = cplx{fhat(g->xi_abs(i)), 0.0};

  for (auto kind : {PhaseKind::PhiPlus, PhaseKind::Phi0}) {
    for (auto term : {BilinearTerm::u1sq, BilinearTerm::cross}) {
      const std::array<int, 3> mode{2, 1, 0};
      const Vec3 xi{2.0 * g->freq_step(), g->freq_step(), 0.0};
      cplx direct = bilinear_integral_direct(fhat, fhat, kind, xi, 0.0, 1.0,
                                             *g, term);
      cplx spec = bilinear_integral_spectral(phi, phi, term, kind, mode, 0.0,
                                             1.0);
      CHECK(std::abs(direct - spec) <= 1e-6 * std::abs(direct));
    }
  }

  // bilinearity: scaling one leg scales the integral
  cplx one = bilinear_integral_spectral(phi, phi, BilinearTerm::u1sq,
                                        PhaseKind::PhiPlus, {1, 0, 0}, 0.0,
                                        1.0);
  cplx three = bilinear_integral_spectral(phi * cplx{3.0, 0.0}, phi,
                                          BilinearTerm::u1sq,
                                          PhaseKind::PhiPlus, {1, 0, 0}, 0.0,
                                          1.0);
  CHECK(std::abs(three - 3.0 * one) < 1e-12 * std::abs(one));
}
