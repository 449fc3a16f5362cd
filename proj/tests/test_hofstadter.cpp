#include <doctest.h>

#include <cmath>
#include <random>

#include "qhall/error.hpp"
#include "qhall/hofstadter.hpp"

using namespace qhall;

TEST_CASE("flux reduction keeps the signed numerator") {
  const auto a = reduce_flux(2, 6);
  CHECK(a.p() == 1);
  CHECK(a.q() == 3);
  CHECK(a.original_p() == 1);

  const auto b = reduce_flux(-1, 3);
  CHECK(b.p() == 2);
  CHECK(b.original_p() == -1);
  CHECK(b.value() == doctest::Approx(-1.0 / 3));

  const auto c = reduce_flux(1, -3);
  CHECK(c.q() == 3);
  CHECK(c.original_p() == -1);

  const auto z = reduce_flux(0, 5);
  CHECK(z.q() == 1);
  CHECK(z.p() == 0);

  CHECK_THROWS_AS(reduce_flux(1, 0), ZeroDenominator);
  CHECK(reduce_flux(4, 3).shifted(-1) == reduce_flux(1, 3));
  CHECK(reduce_flux(1, 3).negated().original_p() == -1);
}

TEST_CASE("q = 1 reduces to the square-lattice dispersion") {
  const auto f = reduce_flux(0, 1);
  for (double k1 : {0.0, 0.3, 2.0}) {
    for (double k2 : {0.0, 1.1, 4.0}) {
      const auto e = spectrum(f, {k1, k2});
      REQUIRE(e.size() == 1);
      CHECK(e[0] == doctest::Approx(2 * std::cos(k1) + 2 * std::cos(k2)).epsilon(1e-12));
    }
  }
}

TEST_CASE("half flux has the Dirac dispersion +-2 sqrt(cos^2 k1 + cos^2 k2)") {
  const auto f = reduce_flux(1, 2);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, two_pi);
  for (int n = 0; n < 20; ++n) {
    const double k1 = u(rng) / 2, k2 = u(rng);
    const double w = 2 * std::sqrt(std::pow(std::cos(k1), 2) + std::pow(std::cos(k2), 2));
    const auto e = spectrum(f, {k1, k2});
    CHECK(e[0] == doctest::Approx(-w).epsilon(1e-10));
    CHECK(e[1] == doctest::Approx(w).epsilon(1e-10));
  }
}

TEST_CASE("characteristic polynomial depends on k only via cos(q k1) + cos(q k2)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, two_pi);
  for (auto [p, q] : {std::pair{1, 3}, {2, 5}, {3, 7}, {3, 8}}) {
    const auto f = reduce_flux(p, q);
    const double energy = 0.37;
    const auto charpoly = [&](double k1, double k2) {
      const cmat h = bloch_hamiltonian(f, {k1, k2}).matrix;
      const cmat m = cmat::Identity(q, q) * energy - h;
      return m.determinant();
    };
    const cplx f0 = charpoly(0.0, 0.0);
    const double g0 = 2.0;
    double coefficient = 0.0;
    for (int n = 0; n < 10; ++n) {
      const double k1 = u(rng) / q, k2 = u(rng);
      const cplx fk = charpoly(k1, k2);
      CHECK(std::abs(fk.imag()) < 1e-9);
      const double g = std::cos(q * k1) + std::cos(q * k2);
      if (std::abs(g - g0) < 1e-3) continue;
      const double c = (fk.real() - f0.real()) / (g - g0);
      if (coefficient == 0.0) coefficient = c;
      CHECK(c == doctest::Approx(coefficient).epsilon(1e-8));
    }
    CHECK(std::abs(coefficient) == doctest::Approx(2.0).epsilon(1e-8));
  }
}

TEST_CASE("Bloch matrix is Hermitian and its spectrum lies in [-4, 4]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, two_pi);
  for (int q = 1; q <= 9; ++q) {
    for (int p = 0; p < q; ++p) {
      const auto f = reduce_flux(p, q);
      const BlochMomentum k{u(rng) / q, u(rng)};
      CHECK(hermiticity_defect(bloch_hamiltonian(f, k).matrix) == 0.0);
      for (double e : spectrum(f, k)) {
        CHECK(std::abs(e) <= 4.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("spectrum is periodic in the flux and even under flux reflection") {
  const auto f = reduce_flux(2, 7);
  const MomentumMesh mesh{8, 8};
  for (int i = 0; i < mesh.n1; ++i) {
    for (int j = 0; j < mesh.n2; ++j) {
      const auto k = mesh.at(f, i, j);
      CHECK(spectrum(f, k) == spectrum(f.shifted(3), k));
    }
  }
  const auto a = band_structure(f, {32, 32});
  const auto b = band_structure(f.negated(), {32, 32});
  for (int band = 0; band < 7; ++band) {
    CHECK(a.band_min(band) == doctest::Approx(b.band_min(band)).epsilon(1e-12));
    CHECK(a.band_max(band) == doctest::Approx(b.band_max(band)).epsilon(1e-12));
  }
}

TEST_CASE("gaps at flux 1/3 have the closed-form edges") {
  const auto gaps = band_gaps(reduce_flux(1, 3), {32, 32});
  REQUIRE(gaps.size() == 2);
  CHECK(gaps[0].r == 1);
  CHECK(gaps[0].e_low == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(gaps[0].e_high == doctest::Approx(1 - std::sqrt(3.0)).epsilon(1e-9));
  CHECK(gaps[1].r == 2);
  CHECK(gaps[1].e_low == doctest::Approx(std::sqrt(3.0) - 1).epsilon(1e-9));
  CHECK(gaps[1].e_high == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("the middle gap is closed for even q") {
  for (auto [p, q] : {std::pair{1, 2}, {1, 4}, {3, 4}, {1, 6}, {3, 8}}) {
    for (const auto& g : band_gaps(reduce_flux(p, q), {32, 32})) {
      CHECK(g.r != q / 2);
    }
  }
  CHECK(band_gaps(reduce_flux(1, 4), {32, 32}).size() == 2);
}

TEST_CASE("band structure is independent of the thread count") {
  const auto f = reduce_flux(3, 8);
  const auto a = band_structure(f, {20, 20}, 1);
  const auto b = band_structure(f, {20, 20}, 4);
  CHECK(a.energies == b.energies);
}

TEST_CASE("gap detection rejects coarse meshes") {
  CHECK_THROWS_AS(band_gaps(reduce_flux(1, 3), {8, 32}), qhall::invalid_argument);
}
