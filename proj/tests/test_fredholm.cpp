#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qhall/error.hpp"
#include "qhall/fredholm.hpp"

using namespace qhall;

namespace {

LatticeModel model(int L, std::int64_t p, std::int64_t q, Boundary b) {
  LatticeModel m;
  m.L = L;
  m.flux = reduce_flux(p, q);
  m.boundary = b;
  return m;
}

}  // namespace

TEST_CASE("zero-flux lattice is the grid adjacency") {
  for (auto b : {Boundary::open, Boundary::periodic}) {
    const int L = 4;
    const cmat h = build_lattice(model(L, 0, 1, b));
    for (int x = 0; x < L; ++x) {
      for (int y = 0; y < L; ++y) {
        for (int x2 = 0; x2 < L; ++x2) {
          for (int y2 = 0; y2 < L; ++y2) {
            int dx = std::abs(x - x2), dy = std::abs(y - y2);
            if (b == Boundary::periodic) {
              dx = std::min(dx, L - dx);
              dy = std::min(dy, L - dy);
            }
            const double expected = dx + dy == 1 ? 1.0 : 0.0;
            CHECK(h(site_index(L, x, y), site_index(L, x2, y2)) == cplx(expected, 0.0));
          }
        }
      }
    }
  }
}

TEST_CASE("periodic lattice spectrum equals the Bloch spectrum on the matching mesh") {
  const int L = 12;
  const auto f = reduce_flux(1, 3);
  const cmat h = build_lattice(model(L, 1, 3, Boundary::periodic));
  CHECK(hermiticity_defect(h) < 1e-14);
  rvec lattice = hermitian_eigenvalues(h);
  std::vector<double> a(lattice.data(), lattice.data() + lattice.size());
  const auto bands = band_structure(f, {L / 3, L});
  std::vector<double> b = bands.energies;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-10));
  CHECK_THROWS_AS(build_lattice(model(10, 1, 3, Boundary::periodic)), qhall::invalid_argument);
}

TEST_CASE("lattice construction is deterministic") {
  auto m = model(8, 1, 4, Boundary::open);
  m.disorder = 1.0;
  m.seed = 42;
  const cmat a = build_lattice(m), b = build_lattice(m);
  CHECK(a == b);
  m.seed = 43;
  CHECK_FALSE(a == build_lattice(m));
  for (double v : disorder_potential(m)) CHECK(std::abs(v) <= 0.5);
}

TEST_CASE("Fermi projector basics") {
  const auto m = model(8, 1, 4, Boundary::open);
  const cmat h = build_lattice(m);
  const auto none = fermi_projector(h, -10.0, 8);
  const auto all = fermi_projector(h, 10.0, 8);
  CHECK(none.matrix.norm() == 0.0);
  CHECK((all.matrix - cmat::Identity(64, 64)).norm() < 1e-10);
  const auto p = fermi_projector(h, -1.3, 8);
  CHECK(p.matrix.trace().real() == doctest::Approx(static_cast<double>(p.states_below)));
  CHECK((p.matrix * p.matrix - p.matrix).norm() < 1e-10);
  CHECK(hermiticity_defect(p.matrix) < 1e-12);
  const rvec e = hermitian_eigenvalues(h);
  CHECK_THROWS_AS(fermi_projector(h, e(10), 8), FermiOnSpectrum);
}

TEST_CASE("flux unitary has unit-modulus entries and avoids sites") {
  const auto sites = lattice_sites(6);
  const auto u = flux_unitary(sites, 2.5, 2.5);
  for (Eigen::Index k = 0; k < u.diagonal.size(); ++k) {
    CHECK(std::abs(std::abs(u.diagonal(k)) - 1.0) < 1e-14);
  }
  CHECK_THROWS_AS(flux_unitary(sites, 2.0, 3.0), qhall::invalid_argument);
  CHECK(default_flux_center(12) == std::pair{5.5, 5.5});
}

TEST_CASE("trivial projectors have index zero") {
  const auto sites = lattice_sites(6);
  const auto u = flux_unitary(sites, 2.5, 2.5);
  FermiProjector p;
  p.L = 6;
  p.sites = sites;
  p.matrix = cmat::Zero(36, 36);
  CHECK(relative_index(p, u).rounded == 0);
  p.matrix = cmat::Identity(36, 36);
  const auto e = relative_index(p, u);
  CHECK(e.rounded == 0);
  CHECK(std::abs(e.trace_value) < 1e-12);
}

TEST_CASE("spectral pairing and zero trace of the projector difference") {
  const auto m = model(12, 1, 3, Boundary::open);
  const auto p = fermi_projector(build_lattice(m), -1.5, 12);
  const auto [ax, ay] = default_flux_center(12);
  const cmat a = projector_difference(p, flux_unitary(p.sites, ax, ay));
  CHECK(std::abs(a.trace()) < 1e-9);
  rvec e = hermitian_eigenvalues(a);
  const Eigen::Index n = e.size();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(std::abs(e(k)) - 1.0) < 1e-6) continue;
    CHECK(e(k) == doctest::Approx(-e(n - 1 - k)).epsilon(1e-7));
  }
  CHECK(std::abs((a * a * a).trace()) < 1e-8);
}

TEST_CASE("lowest gap at flux 1/3 has index 1") {
  const auto est = index_estimate(model(36, 1, 3, Boundary::periodic), -1.5);
  CHECK(est.rounded == 1);
  CHECK(est.residue < 0.1);
  CHECK(est.eigencount == 1);
  CHECK_FALSE(est.non_convergent);
  CHECK(std::abs(est.trace_imag) < 1e-9);
  const auto upper = index_estimate(model(36, 1, 3, Boundary::periodic), 1.5);
  CHECK(upper.rounded == -1);
}

TEST_CASE("index does not depend on where the flux is inserted") {
  const auto m = model(36, 1, 3, Boundary::open);
  const auto p = fermi_projector(build_lattice(m), -1.5, 36);
  const auto [ax, ay] = default_flux_center(36);
  for (double shift : {0.0, 1.0, 2.0}) {
    const auto e = relative_index(p, flux_unitary(p.sites, ax + shift, ay - shift));
    CHECK(e.rounded == 1);
    CHECK(e.residue < 0.1);
  }
}

TEST_CASE("block-diagonal projector matches the dense one") {
  const auto m = model(12, 1, 3, Boundary::periodic);
  const auto dense = fermi_projector(build_lattice(m), -1.5, 12);
  const auto block = clean_periodic_projector(m, -1.5, lattice_sites(12));
  CHECK((dense.matrix - block.matrix).norm() < 1e-10);
  CHECK(dense.states_below == block.states_below);
}

TEST_CASE("index estimates converge with size") {
  const auto scan =
      index_convergence_scan(model(12, 1, 3, Boundary::open), -1.5, {12, 24, 36}, {}, 2);
  REQUIRE(scan.size() == 3);
  for (const auto& e : scan) CHECK(e.rounded == 1);
  CHECK(scan[1].residue < scan[0].residue);
  CHECK(scan[2].residue < scan[1].residue);
  CHECK_THROWS_AS(index_convergence_scan(model(12, 1, 3, Boundary::open), -1.5, {24, 12}),
                  qhall::invalid_argument);
}

TEST_CASE("Fermi level inside a band is flagged") {
  const auto est = index_estimate(model(24, 1, 3, Boundary::open), -2.3);
  CHECK(est.non_convergent);
}

TEST_CASE("weak disorder keeps the index") {
  auto m = model(24, 1, 3, Boundary::open);
  m.disorder = 1.0;
  m.seed = 7;
  CHECK(index_estimate(m, -1.5).rounded == 1);
}

TEST_CASE("kernel dimensions") {
  CHECK(kernel_dims(cmat::Identity(3, 3)) == std::pair<long, long>{0, 0});
  CHECK(kernel_dims(cmat::Zero(3, 2)) == std::pair<long, long>{2, 3});
  cmat d = cmat::Zero(3, 3);
  d(0, 0) = 1.0;
  CHECK(kernel_dims(d) == std::pair<long, long>{2, 2});
  cmat r = cmat::Random(4, 4);
  r.col(3) = r.col(0) + r.col(1);
  const auto [a, b] = kernel_dims(r);
  CHECK(a == b);
  CHECK(a == 1);
}

TEST_CASE("large Hermitian eigensolves stay accurate") {
  const cmat h = build_lattice(model(24, 1, 3, Boundary::open));
  const auto eig = hermitian_eigen(h);
  const cmat residual = h * eig.vectors - eig.vectors * eig.values.asDiagonal();
  CHECK(residual.norm() < 1e-9);
  const cmat gram = eig.vectors.adjoint() * eig.vectors;
  CHECK((gram - cmat::Identity(576, 576)).norm() < 1e-9);
}

TEST_CASE("inertia count matches the eigenvalues") {
  const cmat h = build_lattice(model(12, 1, 4, Boundary::open));
  const rvec e = hermitian_eigenvalues(h);
  for (double shift : {-3.1, -0.77, 0.05, 2.2}) {
    const long direct = static_cast<long>((e.array() > shift).count());
    CHECK(count_eigenvalues_above(h, shift) == direct);
  }
}
