#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qhall/hofstadter.hpp"
#include "qhall/linalg.hpp"

namespace qhall {

enum class Boundary { open, periodic };

/// Square L x L lattice with flux per plaquette, Landau gauge, and i.i.d.
/// on-site disorder uniform in [-W/2, W/2].
struct LatticeModel {
  int L = 12;
  RationalFlux flux;
  double disorder = 0.0;
  std::uint64_t seed = 0;
  Boundary boundary = Boundary::open;
};

struct Site {
  int x = 0;
  int y = 0;
};

/// Site (x, y) has index x * L + y.
inline int site_index(int L, int x, int y) { return x * L + y; }

std::vector<Site> lattice_sites(int L);

/// On-site potentials of the model, one per site in index order. The
/// generator is a seeded mt19937_64 mapped to doubles by its top 53 bits.
std::vector<double> disorder_potential(const LatticeModel& model);

/// Nearest-neighbour hopping, unit magnitude. Vertical bonds carry the Peierls
/// phase <x, y+1| H |x, y> = e^{2 pi i phi x}, so every plaquette encloses
/// flux +phi counterclockwise. Periodic boundaries need L % q == 0.
cmat build_lattice(const LatticeModel& model);

/// Projector onto eigenstates below the Fermi energy, on `sites`. For the
/// dense route `sites` lists every lattice site; the translation-invariant
/// route may return a window of them.
struct FermiProjector {
  double fermi_energy = 0.0;
  int L = 0;
  std::vector<Site> sites;
  cmat matrix;
  long states_below = 0;  // eigenvalues below E_F on the full lattice
};

inline constexpr double fermi_spectrum_clearance = 1e-9;

/// Dense spectral projector. Throws FermiOnSpectrum when E_F is within 1e-9
/// of an eigenvalue.
FermiProjector fermi_projector(const cmat& h, double fermi_energy, int L);

/// Exact Fermi projector of the clean periodic lattice, block-diagonalized by
/// the vertical momentum, restricted to `window`. Equal to the dense route on
/// the same sites.
FermiProjector clean_periodic_projector(const LatticeModel& model,
                                        double fermi_energy,
                                        std::vector<Site> window);

/// Plaquette centre closest to the middle of an L x L box.
std::pair<double, double> default_flux_center(int L);

/// Diagonal gauge transformation e^{i arg(x - a)} inserting one flux quantum
/// at `center`.
struct FluxUnitary {
  double ax = 0.0;
  double ay = 0.0;
  cvec diagonal;
};

/// Throws invalid_argument when the centre coincides with a site.
FluxUnitary flux_unitary(const std::vector<Site>& sites, double ax, double ay);

struct IndexOptions {
  /// Radius of the disk around the flux centre over which the trace and the
  /// eigenvalue count are taken; <= 0 selects 0.3 L.
  double trace_radius = 0.0;
  /// Radius of the site window kept by the translation-invariant route;
  /// <= 0 selects 0.4 L.
  double window_radius = 0.0;
  double eig_tol = 0.1;
  double convergence_residue = 0.2;
};

struct IndexEstimate {
  double trace_value = 0.0;
  long rounded = 0;
  double residue = 0.0;
  long eigencount = 0;
  double tolerance_used = 0.1;
  bool non_convergent = false;
  double trace_radius = 0.0;
  long disk_sites = 0;
  double trace_imag = 0.0;
};

/// A = P - U P U^*, trace of A^3 over the disk of radius trace_radius about
/// the flux centre, and (# eigenvalues of A restricted to that disk within
/// eig_tol of +1) - (# within eig_tol of -1). The unrestricted finite-volume
/// trace equals Tr A = 0 identically; the disk isolates the flux insertion
/// from the compensating boundary contribution.
IndexEstimate relative_index(const FermiProjector& p, const FluxUnitary& u,
                             const IndexOptions& options = {});

/// A = P - U P U^* as a dense matrix on the projector's sites.
cmat projector_difference(const FermiProjector& p, const FluxUnitary& u);

/// Full pipeline for one model. Clean periodic models use the block route on
/// the window disk; everything else is diagonalized densely.
IndexEstimate index_estimate(const LatticeModel& model, double fermi_energy,
                             const IndexOptions& options = {});

/// One estimate per size, models otherwise equal to `model`.
std::vector<IndexEstimate> index_convergence_scan(
    const LatticeModel& model, double fermi_energy, const std::vector<int>& sizes,
    const IndexOptions& options = {}, int threads = 1);

/// (dim ker M, dim ker M^*) from singular values below 1e-8 * sigma_max.
std::pair<long, long> kernel_dims(const cmat& m);

std::string to_string(Boundary b);

}  // namespace qhall
