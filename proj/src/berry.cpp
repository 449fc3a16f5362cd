#include "qhall/berry.hpp"

#include <cmath>
#include <string>

#include "qhall/error.hpp"

namespace qhall {
namespace {

using Topology = ParameterGrid::Topology;

// Normalized overlap determinant det(a^* b) / |det(a^* b)|.
cplx link(const cmat& a, const cmat& b, int i, int j, char dir) {
  const cplx d = (a.adjoint() * b).determinant();
  const double m = std::abs(d);
  if (!(m >= link_tolerance)) {
    throw SingularLink("overlap determinant " + std::to_string(m) +
                       " on the " + dir + "-link at (" + std::to_string(i) +
                       ", " + std::to_string(j) + ")");
  }
  return d / m;
}

}  // namespace

double CurvatureField::total() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

CurvatureField curvature_field(const StateFamily& family,
                               const ParameterGrid& grid, int threads) {
  if (grid.n1 < 1 || grid.n2 < 1) {
    throw invalid_argument("curvature_field: empty grid");
  }
  const int n1 = grid.n1;
  const int n2 = grid.n2;
  const bool sphere = grid.topology == Topology::sphere;
  const int rows = sphere ? n1 + 1 : n1;

  // Evaluate every grid point once; pole rows share the j = 0 frame.
  std::vector<cmat> frames(static_cast<std::size_t>(rows) * n2);
  parallel_for(frames.size(), threads, [&](std::size_t s) {
    const int i = static_cast<int>(s / n2);
    const int j = static_cast<int>(s % n2);
    const bool pole = sphere && (i == 0 || i == n1);
    if (!pole || j == 0) frames[s] = family(i, j);
  });
  if (sphere) {
    for (int j = 1; j < n2; ++j) {
      frames[static_cast<std::size_t>(j)] = frames[0];
      frames[static_cast<std::size_t>(n1) * n2 + j] =
          frames[static_cast<std::size_t>(n1) * n2];
    }
  }
  const auto frame = [&](int i, int j) -> const cmat& {
    if (!sphere) i %= n1;
    j %= n2;
    return frames[static_cast<std::size_t>(i) * n2 + j];
  };

  CurvatureField field{grid, std::vector<double>(grid.plaquettes())};
  parallel_for(grid.plaquettes(), threads, [&](std::size_t s) {
    const int i = static_cast<int>(s / n2);
    const int j = static_cast<int>(s % n2);
    // (i, j) -> (i+1, j) -> (i+1, j+1) -> (i, j+1) -> (i, j)
    const cplx u1 = link(frame(i, j), frame(i + 1, j), i, j, '1');
    const cplx u2 = link(frame(i + 1, j), frame(i + 1, j + 1), i + 1, j, '2');
    const cplx u3 = link(frame(i, j + 1), frame(i + 1, j + 1), i, j + 1, '1');
    const cplx u4 = link(frame(i, j), frame(i, j + 1), i, j, '2');
    double phase = std::arg(u1 * u2 * std::conj(u3) * std::conj(u4));
    if (phase <= -M_PI) phase += two_pi;  // principal branch (-pi, pi]
    field.values[s] = phase;
  });
  return field;
}

ChernResult chern_number(const CurvatureField& field) {
  ChernResult r;
  r.curvature_sum = field.total() / two_pi;
  r.value = std::lround(r.curvature_sum);
  r.residue = std::abs(r.curvature_sum - static_cast<double>(r.value));
  if (r.residue > round_tolerance) {
    throw RoundingFailure("curvature sum " + std::to_string(r.curvature_sum) +
                          " is not within round_tolerance of an integer");
  }
  return r;
}

ChernResult chern_number(const StateFamily& family, const ParameterGrid& grid,
                         int threads) {
  return chern_number(curvature_field(family, grid, threads));
}

StateFamily hofstadter_band_family(const RationalFlux& flux,
                                   const MomentumMesh& mesh, int band_lo,
                                   int band_hi) {
  if (band_lo < 0 || band_hi > flux.q() || band_lo >= band_hi) {
    throw invalid_argument("band range [" + std::to_string(band_lo) + ", " +
                           std::to_string(band_hi) + ") at flux " + flux.str());
  }
  return [flux, mesh, band_lo, band_hi](int i, int j) -> cmat {
    const auto eig =
        hermitian_eigen(bloch_hamiltonian(flux, mesh.at(flux, i, j)).matrix);
    return eig.vectors.middleCols(band_lo, band_hi - band_lo);
  };
}

ChernResult band_chern(const RationalFlux& flux, int band_lo, int band_hi,
                       int mesh, int threads) {
  const MomentumMesh m{mesh, mesh};
  return chern_number(hofstadter_band_family(flux, m, band_lo, band_hi),
                      ParameterGrid::torus(mesh, mesh), threads);
}

ChernResult gap_chern(const RationalFlux& flux, int r, int mesh, int threads) {
  if (r < 1 || r >= flux.q()) {
    throw InvalidGapIndex("r=" + std::to_string(r) + " at flux " + flux.str());
  }
  return band_chern(flux, 0, r, mesh, threads);
}

}  // namespace qhall
