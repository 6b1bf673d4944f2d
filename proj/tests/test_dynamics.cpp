#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gp/dynamics.hpp"
#include "helpers.hpp"

using namespace gp;
using gptest::random_field;

namespace {

Field remove_mean(Field f) {
  cplx m{0.0, 0.0};
  for (const auto& v : f.values()) m += v;
  m /= static_cast<double>(f.size());
  for (auto& v : f.values()) v -= m;
  return f;
}

}  // namespace

TEST_CASE("nonlinearity is the pointwise cubic polynomial") {
  auto g = make_grid(2, 16, 10.0);
  Field u = random_field(g, 2, 0.3);
  Field F = nonlinearity_F(u, false);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const cplx w = u[i];
    const cplx want = w * w + 2.0 * std::norm(w) + std::norm(w) * w;
    CHECK(std::abs(F[i] - want) < 1e-14);
  }
  // real constant c: F = 3c^2 + c^3; imaginary ib: F = b^2 + i b^3
  Field c(g, Rep::physical);
  for (auto& v : c.values()) v = cplx{0.1, 0.0};
  Field Fc = nonlinearity_F(c, false);
  CHECK(std::abs(Fc[0] - cplx{0.03 + 0.001, 0.0}) < 1e-15);
  for (auto& v : c.values()) v = cplx{0.0, 0.2};
  Field Fi = nonlinearity_F(c, false);
  CHECK(std::abs(Fi[0] - cplx{0.04, 0.008}) < 1e-15);
}

TEST_CASE("conserved functionals of constant fields") {
  auto g = make_grid(3, 8, 5.0);
  const double vol = g->volume();
  Field u(g, Rep::physical);
  for (auto& v : u.values()) v = cplx{0.0, 0.3};
  CHECK(charge(u) == doctest::Approx(0.09 * vol).epsilon(1e-13));
  CHECK(energy(u) == doctest::Approx(0.5 * 0.09 * 0.09 * vol).epsilon(1e-12));
  for (auto& v : u.values()) v = cplx{0.2, 0.0};
  const double rho = 0.04 + 0.4;
  CHECK(charge(u) == doctest::Approx(rho * vol).epsilon(1e-13));
  CHECK(energy(u) == doctest::Approx(0.5 * rho * rho * vol).epsilon(1e-12));
}

TEST_CASE("rhs reduces to the linear generator for tiny amplitude") {
  auto g = make_grid(2, 32, 20.0);
  Field v = random_field(g, 8, 1e-6);
  Field r = rhs_v(v);
  Field lin = apply_multiplier_cplx(
      v, [](double s) -> cplx { return cplx{0.0, -dispersion(s)}; });
  CHECK(gptest::rel_err(r, lin) < 1e-4);
}

TEST_CASE("step with the nonlinearity disabled is the exact linear flow") {
  auto g = make_grid(2, 32, 20.0);
  Field v = remove_mean(random_field(g, 5, 0.1));
  for (auto scheme : {Scheme::strang_rk4, Scheme::etd_rk2}) {
    Field got = step(v, 0.3, scheme, true, true);
    Field want = propagate(v, 0.3);
    CHECK(gptest::rel_err(got, want) < 1e-12);
  }
  CHECK_THROWS_AS(step(v, -0.1, Scheme::strang_rk4), std::invalid_argument);
}

TEST_CASE("zero mode follows the nilpotent 2x2 flow exactly") {
  auto g = make_grid(2, 16, 10.0);
  Field v(g, Rep::physical);
  for (auto& w : v.values()) w = cplx{0.4, -0.1};
  const double dt = 0.05;
  Field out = step(v, dt, Scheme::strang_rk4, true, true);
  for (const auto& w : out.values()) {
    CHECK(w.real() == doctest::Approx(0.4).epsilon(1e-13));
    CHECK(w.imag() == doctest::Approx(-0.1 - 2.0 * dt * 0.4).epsilon(1e-12));
  }
}

TEST_CASE("u/v conversions round trip including the zero mode") {
  auto g = make_grid(2, 32, 20.0);
  Field v = random_field(g, 17, 0.2);
  Field u = u_from_v_full(v);
  Field back = v_from_u_full(u);
  CHECK(gptest::rel_err(back, v) < 1e-12);
  Field u2 = u_from_v_full(back);
  CHECK(gptest::rel_err(u2, u) < 1e-12);
}

TEST_CASE("energy and charge drift stays at time-discretization level") {
  auto g = make_grid(2, 64, 40.0);
  Field u0 = gptest::gaussian(g, 0.01, 5.0);
  Field v0 = v_from_u_full(u0);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.sample_times = {0.0, 0.5, 1.0};
  auto res = evolve(v0, 1.0, cfg);
  REQUIRE(res.conservation.size() == 3);
  const double e0 = res.conservation.front().energy;
  const double q0 = res.conservation.front().charge;
  CHECK(e0 > 0.0);
  for (const auto& c : res.conservation) {
    CHECK(std::abs(c.energy - e0) <= 1e-7 * std::abs(e0));
    CHECK(std::abs(c.charge - q0) <= 1e-7 * std::abs(q0));
  }
}

TEST_CASE("both schemes converge at second order") {
  auto g = make_grid(2, 32, 20.0);
  Field v0 = remove_mean(random_field(g, 23, 0.05));
  const double T = 0.5;
  auto final_u = [&](Scheme s, double dt) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.scheme = s;
    return u_from_v_full(evolve(v0, T, cfg).vtraj.fields.back());
  };
  for (auto s : {Scheme::strang_rk4, Scheme::etd_rk2}) {
    Field ref = final_u(s, 0.003125);
    const double e1 = gptest::rel_err(final_u(s, 0.05), ref);
    const double e2 = gptest::rel_err(final_u(s, 0.025), ref);
    const double e3 = gptest::rel_err(final_u(s, 0.0125), ref);
    const double o1 = std::log2(e1 / e2);
    const double o2 = std::log2(e2 / e3);
    CHECK(o1 > 1.6);
    CHECK(o2 > 1.6);
    CHECK(o1 < 3.0);
  }
}

TEST_CASE("evolve validates samples and guards against blow-up") {
  auto g = make_grid(2, 16, 10.0);
  Field v0 = random_field(g, 3, 0.01);
  SolverConfig cfg;
  cfg.sample_times = {2.0};
  CHECK_THROWS_AS(evolve(v0, 1.0, cfg), std::invalid_argument);

  Field huge(g, Rep::physical);
  for (auto& v : huge.values()) v = cplx{2.0e3, 0.0};
  CHECK_THROWS_AS(step(huge, 0.01, Scheme::strang_rk4), NumericalAbort);
}
