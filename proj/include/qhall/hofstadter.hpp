#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qhall/linalg.hpp"

namespace qhall {

/// Rational flux quanta per plaquette.
///
/// `p()` is the numerator reduced modulo `q()` into [0, q), which is all the
/// Hamiltonian depends on. The signed, unshifted numerator is kept in
/// `original_p()` so diagrams can place rows at their true value and the
/// reflection p/q -> -p/q stays expressible.
class RationalFlux {
public:
  RationalFlux() = default;

  /// Reduces p/q to lowest terms. Throws ZeroDenominator when q == 0.
  static RationalFlux reduce(std::int64_t p, std::int64_t q);

  std::int64_t p() const { return p_; }
  std::int64_t q() const { return q_; }
  std::int64_t original_p() const { return original_p_; }
  double value() const { return static_cast<double>(original_p_) / q_; }
  double canonical_value() const { return static_cast<double>(p_) / q_; }

  RationalFlux negated() const { return reduce(-original_p_, q_); }
  RationalFlux shifted(std::int64_t periods) const {
    return reduce(original_p_ + periods * q_, q_);
  }

  std::string str() const;

  friend bool operator==(const RationalFlux&, const RationalFlux&) = default;

private:
  std::int64_t p_ = 0;
  std::int64_t q_ = 1;
  std::int64_t original_p_ = 0;
};

inline RationalFlux reduce_flux(std::int64_t p, std::int64_t q) {
  return RationalFlux::reduce(p, q);
}

/// Point of the magnetic Brillouin zone, k1 in [0, 2pi/q), k2 in [0, 2pi).
struct BlochMomentum {
  double k1 = 0.0;
  double k2 = 0.0;
};

/// Periodic momentum mesh over the magnetic Brillouin zone. Point (i, j) sits
/// at k1 = 2pi i / (q n1), k2 = 2pi j / n2; the far edges are not sampled, so
/// index arithmetic modulo (n1, n2) closes the torus.
struct MomentumMesh {
  int n1 = 32;
  int n2 = 32;

  BlochMomentum at(const RationalFlux& flux, int i, int j) const;
  std::size_t size() const { return static_cast<std::size_t>(n1) * n2; }
};

/// Harper reduction of H = U + U* + V + V* in the Landau gauge.
///
/// The q x q matrix is cyclic tridiagonal: diagonal 2 cos(k2 + 2 pi p j / q),
/// unit off-diagonals, and the corner (q-1, 0) carries e^{-i q k1} with its
/// conjugate at (0, q-1). This orientation makes the link-variable Chern
/// numbers of the filled bands equal the Diophantine t of each gap. For
/// q == 1 the corners fold onto the diagonal, giving 2 cos k1 + 2 cos k2;
/// for q == 2 the corner adds to the unit bond.
struct BlochHamiltonian {
  RationalFlux flux;
  BlochMomentum k;
  cmat matrix;
};

BlochHamiltonian bloch_hamiltonian(const RationalFlux& flux,
                                   const BlochMomentum& k);

/// q eigenvalues, ascending.
std::vector<double> spectrum(const RationalFlux& flux, const BlochMomentum& k);

struct BandStructure {
  RationalFlux flux;
  MomentumMesh mesh;
  /// energies[(i * n2 + j) * q + band], ascending within each point.
  std::vector<double> energies;

  int bands() const { return static_cast<int>(flux.q()); }
  double energy(int i, int j, int band) const {
    return energies[(static_cast<std::size_t>(i) * mesh.n2 + j) * flux.q() +
                    band];
  }
  /// Minimum and maximum of band `band` (0-based) over the mesh.
  double band_min(int band) const;
  double band_max(int band) const;
};

BandStructure band_structure(const RationalFlux& flux, const MomentumMesh& mesh,
                             int threads = 1);

inline constexpr double gap_tolerance = 1e-8;

/// Spectral gap above the r lowest bands.
struct GapWindow {
  int r = 0;
  double e_low = 0.0;
  double e_high = 0.0;

  double mid() const { return 0.5 * (e_low + e_high); }
  double width() const { return e_high - e_low; }
};

std::vector<GapWindow> band_gaps(const BandStructure& bands);

/// Requires mesh >= 16 x 16.
std::vector<GapWindow> band_gaps(const RationalFlux& flux,
                                 const MomentumMesh& mesh, int threads = 1);

}  // namespace qhall
