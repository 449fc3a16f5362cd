#pragma once

#include <functional>
#include <vector>

#include "qhall/hofstadter.hpp"
#include "qhall/linalg.hpp"

namespace qhall {

inline constexpr double link_tolerance = 1e-6;
inline constexpr double round_tolerance = 1e-3;

/// Closed two-parameter grid.
///
/// torus:  points (i, j), i in [0, n1), j in [0, n2), both indices periodic.
/// sphere: i in [0, n1] runs from the north pole (i = 0) to the south pole
///         (i = n1); j in [0, n2) is the periodic azimuth. The pole rows are
///         evaluated once (at j = 0) and shared by every j, so the first and
///         last rows of plaquettes contract to triangles.
struct ParameterGrid {
  enum class Topology { torus, sphere };
  Topology topology = Topology::torus;
  int n1 = 32;
  int n2 = 32;

  static ParameterGrid torus(int n1, int n2) {
    return {Topology::torus, n1, n2};
  }
  static ParameterGrid sphere(int n_polar, int n_azimuth) {
    return {Topology::sphere, n_polar, n_azimuth};
  }
  std::size_t plaquettes() const { return static_cast<std::size_t>(n1) * n2; }
};

/// Maps grid point (i, j) to a matrix whose n columns are an orthonormal
/// frame of the subspace being tracked.
using StateFamily = std::function<cmat(int i, int j)>;

/// Plaquette phases in (-pi, pi], oriented (parameter 1, parameter 2).
struct CurvatureField {
  ParameterGrid grid;
  std::vector<double> values;  // values[i * n2 + j]

  double at(int i, int j) const {
    return values[static_cast<std::size_t>(i) * grid.n2 + j];
  }
  /// Ordered sum of all plaquette phases.
  double total() const;
};

struct ChernResult {
  long value = 0;
  double curvature_sum = 0.0;  // total phase / 2 pi, before rounding
  double residue = 0.0;        // |curvature_sum - value|
};

/// Link-variable curvature. Throws SingularLink when an overlap determinant
/// has modulus below link_tolerance.
CurvatureField curvature_field(const StateFamily& family,
                               const ParameterGrid& grid, int threads = 1);

/// Throws RoundingFailure when the curvature sum is farther than
/// round_tolerance from an integer.
ChernResult chern_number(const CurvatureField& field);
ChernResult chern_number(const StateFamily& family, const ParameterGrid& grid,
                         int threads = 1);

/// Bands [band_lo, band_hi) of the Harper matrix over the magnetic Brillouin
/// zone, on the torus grid point (i, j) of `mesh`.
StateFamily hofstadter_band_family(const RationalFlux& flux,
                                   const MomentumMesh& mesh, int band_lo,
                                   int band_hi);

/// Chern number of bands [band_lo, band_hi) on an n x n mesh.
ChernResult band_chern(const RationalFlux& flux, int band_lo, int band_hi,
                       int mesh = 32, int threads = 1);

/// Sum of the Chern numbers of the r lowest bands (the filled bands below
/// gap r).
ChernResult gap_chern(const RationalFlux& flux, int r, int mesh = 32,
                      int threads = 1);

// ---------------------------------------------------------------------------
// Spin-1/2 monopole, H = sigma . B^ with B^ = (sin t cos f, sin t sin f, cos t)

enum class SpinBand { ground, excited };

/// Gauge of the spinor: `north` is the section that is smooth everywhere but
/// at the north pole (it extends over the south pole), `south` the reverse.
enum class SpinGauge { north, south };

struct MonopoleState {
  double polar = 0.0;
  double azimuth = 0.0;
  SpinBand band = SpinBand::ground;
  cvec spinor;        // unit norm
  double eigenvalue;  // -1 for ground, +1 for excited
};

/// Closed-form eigenspinor in the requested gauge. Throws GaugeUndefined when
/// the gauge is asked for at its singular pole.
MonopoleState monopole_state(double polar, double azimuth, SpinBand band,
                             SpinGauge gauge);

cmat monopole_hamiltonian(double polar, double azimuth);

/// State family on ParameterGrid::sphere(n_polar, n_azimuth) built from
/// numerically diagonalized sigma . B^, with a fixed gauge at each pole.
StateFamily monopole_family(const ParameterGrid& grid, SpinBand band);

ChernResult monopole_chern(SpinBand band, int n_polar = 24, int n_azimuth = 48);

/// Integer winding of gamma, chi_north = e^{i gamma} chi_south, as the
/// azimuth increases once around the circle of latitude `latitude`.
/// Throws GaugeUndefined at the poles.
long transition_phase_winding(double latitude, int steps,
                              SpinBand band = SpinBand::ground);

// ---------------------------------------------------------------------------
// Parallel transport on the unit sphere

/// Transports a tangent vector eastward around the circle of latitude
/// `latitude` using `steps` geodesic segments and returns the rotation
/// angle of the vector, counterclockwise about the outward normal, in
/// [0, 2 pi). The exact value is 2 pi (1 - sin latitude) mod 2 pi.
double latitude_holonomy(double latitude, int steps);

/// Sum of the holonomies of the geodesic cells of an n_polar x n_azimuth
/// grid covering the cap north of `latitude`, reduced to [0, 2 pi).
double cap_curvature_integral(double latitude, int n_polar, int n_azimuth);

// ---------------------------------------------------------------------------
// Adiabatic response

/// Two-parameter Hermitian family H(Phi, theta). Derivatives are optional;
/// missing ones are taken by central differences.
struct HermitianFamily {
  std::function<cmat(double phi, double theta)> h;
  std::function<cmat(double phi, double theta)> d_phi;
  std::function<cmat(double phi, double theta)> d_theta;

  cmat hamiltonian(double phi, double theta) const { return h(phi, theta); }
  cmat derivative_phi(double phi, double theta) const;
  cmat derivative_theta(double phi, double theta) const;
};

/// sigma . B^(Phi, theta) with Phi the polar and theta the azimuthal angle.
HermitianFamily spin_half_family();

struct ResponseOptions {
  double phi_start = 0.0;
  double tolerance = 1e-10;  // local error per step
  double initial_step = 1e-2;
  double min_step = 1e-9;
  double gap_factor = 10.0;  // required gap / rate
};

struct ResponseReport {
  double rate = 0.0;
  double duration = 0.0;
  /// rate > 0: time integral of <psi|d_theta H|psi> along the drive.
  /// rate = 0: the instantaneous ground-state current.
  double measured = 0.0;
  /// Integral of (d_theta E - K dPhi/dt) dt, or d_theta E when rate = 0.
  /// The sign of the curvature term is the one fixed by i d psi/dt = H psi
  /// with K from ground_curvature.
  double predicted = 0.0;
  double relative_error = 0.0;
  double max_norm_drift = 0.0;
  double min_gap = 0.0;
  long steps = 0;
};

/// Ground-state Berry curvature K = 2 Im <d_Phi psi | d_theta psi>.
double ground_curvature(const HermitianFamily& family, double phi,
                        double theta);

/// Integrates i d psi/dt = H(phi_start + 2 pi rate t, theta0) psi from the
/// instantaneous ground state for a time cycle_fraction / rate, so `rate` is
/// in flux quanta (cycles of Phi) per unit time. Throws GapClosure when the
/// instantaneous gap drops below gap_factor * rate, and IntegratorFailure
/// when the step controller cannot meet its tolerance.
ResponseReport adiabatic_response_check(const HermitianFamily& family,
                                        double theta0, double rate,
                                        double cycle_fraction,
                                        const ResponseOptions& options = {});

}  // namespace qhall
