#pragma once

#include <cstdint>
#include <optional>

#include "qhall/hofstadter.hpp"

namespace qhall {

/// Solution of r = s q + t p labelling the r-th gap at flux p/q.
/// t is the Hall conductance in units of e^2/h.
struct GapLabel {
  std::int64_t r = 0;
  std::int64_t t = 0;
  std::int64_t s = 0;

  friend bool operator==(const GapLabel&, const GapLabel&) = default;
};

/// The unique (s, t) with r = s q + t p and |t| < q/2, for the flux's own
/// signed numerator. Throws InvalidGapIndex for r outside [1, q-1] and
/// AmbiguousLabel when q is even and only |t| = q/2 solves the equation.
GapLabel gap_label(const RationalFlux& flux, std::int64_t r);

/// Hall conductance at chemical potential `mu`: 0 below or above the
/// spectrum, t of the enclosing gap, nullopt (NotInGap) inside a band or on
/// a gap edge.
std::optional<std::int64_t> hall_conductance_at(double mu,
                                                const RationalFlux& flux,
                                                const MomentumMesh& mesh,
                                                int threads = 1);

/// Same, reusing precomputed bands.
std::optional<std::int64_t> hall_conductance_at(double mu,
                                                const BandStructure& bands);

/// Split-Landau-level reading of the same Hamiltonian: the diagram row
/// `flux_ratio` = p/q is the Harper problem at the inverted flux q/p, so the
/// label returned is gap_label(q/p, r). In that picture the electron density
/// in gap r is r/q = s_phys + sigma * (p/q), which identifies the Hall
/// integer sigma with the returned `s` (see split_landau_conductance).
/// Throws InvalidFlux when p == 0.
GapLabel split_landau_label(const RationalFlux& flux_ratio, std::int64_t r);

/// Harper flux q/p for a split-Landau row p/q. Throws InvalidFlux if p == 0.
RationalFlux invert_flux(const RationalFlux& flux_ratio);

inline std::int64_t split_landau_conductance(const GapLabel& label) {
  return label.s;
}

}  // namespace qhall
