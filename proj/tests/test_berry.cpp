#include <doctest.h>

#include <cmath>

#include "qhall/berry.hpp"
#include "qhall/diophantine.hpp"
#include "qhall/error.hpp"

using namespace qhall;

TEST_CASE("filled-band Chern numbers equal the Diophantine t") {
  for (std::int64_t q = 2; q <= 6; ++q) {
    for (std::int64_t p = 1; p < q; ++p) {
      const auto f = reduce_flux(p, q);
      if (f.q() != q) continue;
      for (const auto& g : band_gaps(f, {32, 32})) {
        const auto c = gap_chern(f, g.r, 32);
        CHECK(c.residue < 1e-6);
        CHECK(c.value == gap_label(f, g.r).t);
      }
    }
  }
}

TEST_CASE("single isolated bands carry t_r - t_(r-1)") {
  const auto f = reduce_flux(2, 7);
  std::int64_t below = 0;
  for (int r = 1; r <= 7; ++r) {
    const std::int64_t above = r < 7 ? gap_label(f, r).t : 0;
    CHECK(band_chern(f, r - 1, r).value == above - below);
    below = above;
  }
}

TEST_CASE("all bands together are trivial") {
  for (std::int64_t q = 1; q <= 5; ++q) {
    const auto c = band_chern(reduce_flux(1, q), 0, static_cast<int>(q));
    CHECK(c.value == 0);
    CHECK(std::abs(c.curvature_sum) < 1e-9);
  }
}

TEST_CASE("curvature field total is the sum of its plaquettes") {
  const auto f = reduce_flux(1, 3);
  const MomentumMesh mesh{12, 12};
  const auto field = curvature_field(hofstadter_band_family(f, mesh, 0, 1),
                                     ParameterGrid::torus(12, 12));
  double sum = 0;
  for (double v : field.values) sum += v;
  CHECK(field.total() == doctest::Approx(sum));
  CHECK(chern_number(field).value == 1);
}

TEST_CASE("curvature is independent of the thread count") {
  const auto grid = ParameterGrid::torus(16, 16);
  const auto fam = hofstadter_band_family(reduce_flux(2, 5), {16, 16}, 0, 2);
  CHECK(curvature_field(fam, grid, 1).values == curvature_field(fam, grid, 3).values);
}

TEST_CASE("orthogonal neighbours make a link singular") {
  const StateFamily fam = [](int i, int) {
    cmat v = cmat::Zero(2, 1);
    v(i % 2, 0) = 1.0;
    return v;
  };
  CHECK_THROWS_AS(curvature_field(fam, ParameterGrid::torus(4, 4)), SingularLink);
}

TEST_CASE("a half-integer curvature sum fails to round") {
  CurvatureField field{ParameterGrid::torus(1, 2), {0.5 * M_PI, 0.5 * M_PI}};
  CHECK_THROWS_AS(chern_number(field), RoundingFailure);
}

TEST_CASE("monopole bands: Chern -1 and +1, stable under refinement") {
  const auto g = monopole_chern(SpinBand::ground, 24, 48);
  CHECK(g.value == -1);
  CHECK(g.residue < 1e-9);
  CHECK(monopole_chern(SpinBand::ground, 48, 96).value == -1);
  CHECK(monopole_chern(SpinBand::excited, 24, 48).value == 1);
}

TEST_CASE("closed-form spinors reproduce the numerical curvature") {
  const int np = 12, na = 24;
  const auto grid = ParameterGrid::sphere(np, na);
  const StateFamily closed = [&](int i, int j) {
    const double polar = M_PI * i / np;
    const double az = two_pi * j / na;
    const SpinGauge gauge = i == 0 ? SpinGauge::south : SpinGauge::north;
    cmat v(2, 1);
    v.col(0) = monopole_state(polar, az, SpinBand::ground, gauge).spinor;
    return v;
  };
  const auto a = curvature_field(closed, grid);
  const auto b = curvature_field(monopole_family(grid, SpinBand::ground), grid);
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    CHECK(a.values[k] == doctest::Approx(b.values[k]).epsilon(1e-10));
  }
  // Each cell carries minus half its solid angle, up to discretization.
  for (int i = 0; i < np; ++i) {
    const double solid = two_pi / na * (std::cos(M_PI * i / np) - std::cos(M_PI * (i + 1) / np));
    CHECK(a.at(i, 0) == doctest::Approx(-0.5 * solid).epsilon(0.05));
  }
}

TEST_CASE("monopole spinors are eigenvectors and respect their gauge poles") {
  for (double polar : {0.3, 1.2, 2.9}) {
    for (auto gauge : {SpinGauge::north, SpinGauge::south}) {
      const auto g = monopole_state(polar, 0.7, SpinBand::ground, gauge);
      const auto e = monopole_state(polar, 0.7, SpinBand::excited, gauge);
      const cmat h = monopole_hamiltonian(polar, 0.7);
      CHECK((h * g.spinor + g.spinor).norm() < 1e-12);
      CHECK((h * e.spinor - e.spinor).norm() < 1e-12);
      CHECK(std::abs(g.spinor.norm() - 1.0) < 1e-12);
    }
  }
  CHECK_THROWS_AS(monopole_state(0.0, 0.0, SpinBand::ground, SpinGauge::north),
                  GaugeUndefined);
  CHECK_THROWS_AS(monopole_state(M_PI, 0.0, SpinBand::ground, SpinGauge::south),
                  GaugeUndefined);
  CHECK_NOTHROW(monopole_state(0.0, 0.0, SpinBand::ground, SpinGauge::south));
}

TEST_CASE("transition function winds once") {
  for (double lat : {-1.0, 0.0, 0.5, 1.2}) {
    CHECK(transition_phase_winding(lat, 360, SpinBand::ground) == 1);
    CHECK(transition_phase_winding(lat, 360, SpinBand::excited) == -1);
  }
  CHECK_THROWS_AS(transition_phase_winding(0.5 * M_PI, 360), GaugeUndefined);
}

TEST_CASE("latitude holonomy is -2 pi sin(latitude) mod 2 pi") {
  for (double deg : {-60.0, -30.0, 0.0, 30.0, 60.0}) {
    const double lat = deg * M_PI / 180;
    double expected = std::fmod(-two_pi * std::sin(lat), two_pi);
    if (expected < 0) expected += two_pi;
    double d = std::abs(latitude_holonomy(lat, 100000) - expected);
    d = std::min(d, two_pi - d);
    CHECK(d < 1e-6);
  }
  CHECK_THROWS_AS(latitude_holonomy(0.1, 99), qhall::invalid_argument);
  CHECK_THROWS_AS(latitude_holonomy(0.5 * M_PI, 1000), qhall::invalid_argument);
}

TEST_CASE("holonomy equals the enclosed curvature") {
  for (double lat : {-0.9, 0.2, 1.0}) {
    const double h = latitude_holonomy(lat, 20000);
    const double cap = cap_curvature_integral(lat, 64, 256);
    double d = std::abs(h - cap);
    CHECK(std::min(d, two_pi - d) < 1e-3);
  }
}
