#include "qhall/hofstadter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qhall/error.hpp"

namespace qhall {

RationalFlux RationalFlux::reduce(std::int64_t p, std::int64_t q) {
  if (q == 0) throw ZeroDenominator("flux " + std::to_string(p) + "/0");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const std::int64_t g = std::gcd(p, q);  // gcd(0, q) == q
  RationalFlux f;
  f.q_ = q / g;
  f.original_p_ = p / g;
  f.p_ = ((f.original_p_ % f.q_) + f.q_) % f.q_;
  return f;
}

std::string RationalFlux::str() const {
  return std::to_string(original_p_) + "/" + std::to_string(q_);
}

BlochMomentum MomentumMesh::at(const RationalFlux& flux, int i, int j) const {
  return {two_pi * i / (static_cast<double>(flux.q()) * n1),
          two_pi * j / static_cast<double>(n2)};
}

BlochHamiltonian bloch_hamiltonian(const RationalFlux& flux,
                                   const BlochMomentum& k) {
  const auto q = static_cast<Eigen::Index>(flux.q());
  const double alpha = two_pi * static_cast<double>(flux.p()) / flux.q();
  cmat h = cmat::Zero(q, q);
  for (Eigen::Index j = 0; j < q; ++j) {
    h(j, j) = 2.0 * std::cos(k.k2 + alpha * static_cast<double>(j));
  }
  for (Eigen::Index j = 0; j + 1 < q; ++j) {
    h(j, j + 1) += 1.0;
    h(j + 1, j) += 1.0;
  }
  const cplx corner = std::polar(1.0, -static_cast<double>(q) * k.k1);
  h(q - 1, 0) += corner;
  h(0, q - 1) += std::conj(corner);
  return {flux, k, std::move(h)};
}

std::vector<double> spectrum(const RationalFlux& flux, const BlochMomentum& k) {
  const rvec ev = hermitian_eigenvalues(bloch_hamiltonian(flux, k).matrix);
  return {ev.data(), ev.data() + ev.size()};
}

double BandStructure::band_min(int band) const {
  double m = energies.at(static_cast<std::size_t>(band));
  for (std::size_t s = band; s < energies.size(); s += flux.q()) {
    m = std::min(m, energies[s]);
  }
  return m;
}

double BandStructure::band_max(int band) const {
  double m = energies.at(static_cast<std::size_t>(band));
  for (std::size_t s = band; s < energies.size(); s += flux.q()) {
    m = std::max(m, energies[s]);
  }
  return m;
}

BandStructure band_structure(const RationalFlux& flux, const MomentumMesh& mesh,
                             int threads) {
  if (mesh.n1 < 1 || mesh.n2 < 1) {
    throw invalid_argument("band_structure: empty momentum mesh");
  }
  BandStructure bs{flux, mesh, {}};
  const auto q = static_cast<std::size_t>(flux.q());
  bs.energies.resize(mesh.size() * q);
  parallel_for(mesh.size(), threads, [&](std::size_t s) {
    const int i = static_cast<int>(s / mesh.n2);
    const int j = static_cast<int>(s % mesh.n2);
    const auto e = spectrum(flux, mesh.at(flux, i, j));
    std::copy(e.begin(), e.end(), bs.energies.begin() + s * q);
  });
  return bs;
}

std::vector<GapWindow> band_gaps(const BandStructure& bands) {
  std::vector<GapWindow> gaps;
  for (int r = 1; r < bands.bands(); ++r) {
    const double lo = bands.band_max(r - 1);
    const double hi = bands.band_min(r);
    if (hi - lo > gap_tolerance) gaps.push_back({r, lo, hi});
  }
  return gaps;
}

std::vector<GapWindow> band_gaps(const RationalFlux& flux,
                                 const MomentumMesh& mesh, int threads) {
  if (mesh.n1 < 16 || mesh.n2 < 16) {
    throw invalid_argument("band_gaps: mesh must be at least 16 x 16");
  }
  return band_gaps(band_structure(flux, mesh, threads));
}

}  // namespace qhall
