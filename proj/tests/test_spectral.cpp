#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "gp/spectral.hpp"
#include "helpers.hpp"

using namespace gp;
using gptest::random_field;

TEST_CASE("grid validation and index round trips") {
  CHECK_THROWS_AS(Grid(4, 16, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(2, 15, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(2, 16, -1.0), std::invalid_argument);

  auto g = make_grid(3, 16, 20.0);
  CHECK(g->size() == 16u * 16u * 16u);
  CHECK(g->spacing() == doctest::Approx(1.25));
  CHECK(g->freq_step() == doctest::Approx(2.0 * std::numbers::pi / 20.0));
  // DFT ordering: index n/2 is the most negative frequency
  CHECK(g->mode(0) == 0);
  CHECK(g->mode(7) == 7);
  CHECK(g->mode(8) == -8);
  CHECK(g->mode(15) == -1);
  for (std::size_t idx : {0u, 1u, 137u, 4095u}) {
    CHECK(g->flatten(g->unflatten(idx)) == idx);
  }
  auto xi = g->xi(g->flatten({1, 2, 3}));
  CHECK(xi[0] == doctest::Approx(1.0 * g->freq_step()));
  CHECK(xi[1] == doctest::Approx(2.0 * g->freq_step()));
  CHECK(xi[2] == doctest::Approx(3.0 * g->freq_step()));
}

TEST_CASE("transform round trip and Parseval") {
  auto g = make_grid(2, 32, 25.0);
  Field f = random_field(g, 7);
  Field back = to_physical(to_spectral(f));
  CHECK(gptest::rel_err(back, f) < 1e-13);

  double phys = 0.0, spec = 0.0;
  Field fh = to_spectral(f);
  for (const auto& v : f.values()) phys += std::norm(v);
  for (const auto& v : fh.values()) spec += std::norm(v);
  phys *= g->cell_volume();
  spec /= g->volume();
  CHECK(phys == doctest::Approx(spec).epsilon(1e-13));

  CHECK_THROWS_AS(to_spectral(fh), std::invalid_argument);
  CHECK_THROWS_AS(to_physical(f), std::invalid_argument);
}

TEST_CASE("constant field transforms to c L^d at the zero mode") {
  auto g = make_grid(2, 16, 12.0);
  Field f(g, Rep::physical);
  for (auto& v : f.values()) v = cplx{0.75, -0.25};
  Field fh = to_spectral(f);
  CHECK(std::abs(fh[0] - cplx{0.75, -0.25} * g->volume()) < 1e-10);
  for (std::size_t i = 1; i < fh.size(); ++i) CHECK(std::abs(fh[i]) < 1e-10);
}

TEST_CASE("gaussian transform matches the continuum formula") {
  // f = e^{-|x-c|^2/(2w^2)} has fhat(xi) = 2 pi w^2 e^{-w^2|xi|^2/2} (d=2)
  // up to the phase from the center offset.
  auto g = make_grid(2, 64, 40.0);
  const double w = 3.0;
  Field f = gptest::gaussian(g, 1.0, w);
  Field fh = to_spectral(f);
  for (std::size_t i = 0; i < fh.size(); ++i) {
    const double r = g->xi_abs(i);
    if (r > 1.0) continue;
    const double want =
        2.0 * std::numbers::pi * w * w * std::exp(-0.5 * w * w * r * r);
    CHECK(std::abs(fh[i]) == doctest::Approx(want).epsilon(1e-7));
  }
}

TEST_CASE("multipliers, gradient, divergence") {
  auto g = make_grid(2, 32, 17.0);
  Field f = random_field(g, 11);

  Field same = apply_multiplier(f, [](double) { return 1.0; });
  CHECK(gptest::rel_err(same, f) < 1e-13);

  // divergence(gradient(f)) is the -|xi|^2 multiplier
  Field lap = divergence(gradient(f));
  Field lap2 = apply_multiplier(f, [](double r) { return -r * r; });
  CHECK(gptest::rel_err(lap, lap2) < 1e-12);

  double dropped = 0.0;
  Field dz = apply_multiplier_drop_zero(
      f, [](double) { return 1.0; }, &dropped);
  Field dzs = to_spectral(dz);
  CHECK(std::abs(dzs[0]) < 1e-12);
  Field fs = to_spectral(f);
  CHECK(dropped == doctest::Approx(std::abs(fs[0]) / std::sqrt(g->volume())));
}

TEST_CASE("dealias zeroes modes beyond n/3 per axis") {
  auto g = make_grid(2, 12, 10.0);  // cut = 4
  Field s(g, Rep::spectral);
  for (auto& v : s.values()) v = cplx{1.0, 0.0};
  Field d = dealias(s);
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto ix = g->unflatten(i);
    const bool keep =
        std::abs(g->mode(ix[0])) <= 4 && std::abs(g->mode(ix[1])) <= 4;
    CHECK(std::abs(d[i]) == doctest::Approx(keep ? 1.0 : 0.0));
  }
}

TEST_CASE("lp norms") {
  auto g = make_grid(3, 8, 6.0);
  Field f(g, Rep::physical);
  for (auto& v : f.values()) v = cplx{0.0, -2.0};
  const double L = g->length();
  CHECK(lp_norm(f, 2.0) == doctest::Approx(2.0 * std::pow(L, 1.5)));
  CHECK(lp_norm(f, 4.0) == doctest::Approx(2.0 * std::pow(L, 0.75)));
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(lp_norm(f, inf) == doctest::Approx(2.0));
  CHECK_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);

  // triangle inequality on random fields
  Field a = random_field(g, 3), b = random_field(g, 4);
  CHECK(lp_norm(a + b, 2.0) <= lp_norm(a, 2.0) + lp_norm(b, 2.0) + 1e-12);
}

TEST_CASE("sobolev norm of a single lattice mode") {
  auto g = make_grid(2, 32, 21.0);
  Field s(g, Rep::spectral);
  const std::size_t idx = g->flatten({3, 2, 0});
  s[idx] = cplx{2.0, 1.0};
  const double r = g->xi_abs(idx);
  const double amp = std::abs(s[idx]) / std::sqrt(g->volume());
  CHECK(sobolev_norm(s, 0.0, true) == doctest::Approx(amp));
  CHECK(sobolev_norm(s, 1.0, true) == doctest::Approx(r * amp));
  CHECK(sobolev_norm(s, 0.5, false) ==
        doctest::Approx(std::pow(1.0 + r * r, 0.25) * amp));
  // homogeneous norms ignore the zero mode
  s[0] = cplx{100.0, 0.0};
  CHECK(sobolev_norm(s, 1.0, true) == doctest::Approx(r * amp));
}

TEST_CASE("dyadic partition sums to one and reconstructs") {
  auto g = make_grid(2, 32, 15.0);
  DyadicPartition part(*g);
  CHECK(part.j_min() < part.j_max());
  for (double r : {g->freq_step(), 0.9, 1.7, 3.3, g->freq_max_axis()}) {
    double s = 0.0;
    for (int j = part.j_min(); j <= part.j_max(); ++j) s += part.chi(j, r);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
  // blocks reconstruct f up to its mean
  Field f = random_field(g, 21);
  Field acc(g, Rep::spectral);
  for (int j = part.j_min(); j <= part.j_max(); ++j)
    acc += part.block(to_spectral(f), j);
  Field want = to_spectral(f);
  want[0] = cplx{0.0, 0.0};
  CHECK(gptest::rel_err(acc, want) < 1e-12);
}

TEST_CASE("besov norms") {
  auto g = make_grid(2, 32, 15.0);
  Field f = random_field(g, 5);

  // homogeneity in amplitude
  const double b1 = besov_norm(f, 1.0, 1.0, 1.0);
  const double b3 = besov_norm(f * cplx{3.0, 0.0}, 1.0, 1.0, 1.0);
  CHECK(b3 == doctest::Approx(3.0 * b1).epsilon(1e-12));

  // B^0_{2,2} is equivalent to L^2 off the zero mode; overlapping cos^2
  // tapers keep the ratio within [1/sqrt(2), 1]
  const double b022 = besov_norm(f, 0.0, 2.0, 2.0);
  const double l2off = sobolev_norm(f, 0.0, true);
  CHECK(b022 <= l2off * (1.0 + 1e-10));
  CHECK(b022 >= l2off / std::sqrt(2.0) * (1.0 - 1e-10));

  // q = inf takes the sup over blocks
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(besov_norm(f, 0.0, 2.0, inf) <= b022 + 1e-12);
}

TEST_CASE("besov of a single mode sits at the right dyadic weight") {
  auto g = make_grid(2, 32, 15.0);
  Field s(g, Rep::spectral);
  const std::size_t idx = g->flatten({5, 0, 0});
  s[idx] = cplx{1.0, 0.0};
  const double r = g->xi_abs(idx);
  const double got = besov_norm(s, 1.0, 2.0, 1.0);
  const double l2 = sobolev_norm(s, 0.0, true);
  // weight 2^{js} over the (at most two) blocks containing r
  CHECK(got >= 0.5 * r * l2);
  CHECK(got <= 2.0 * r * l2);
}
