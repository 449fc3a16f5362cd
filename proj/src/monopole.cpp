#include "qhall/berry.hpp"

#include <cmath>

#include "qhall/error.hpp"

namespace qhall {
namespace {

constexpr double pole_eps = 1e-12;

}  // namespace

cmat monopole_hamiltonian(double polar, double azimuth) {
  const double bx = std::sin(polar) * std::cos(azimuth);
  const double by = std::sin(polar) * std::sin(azimuth);
  const double bz = std::cos(polar);
  cmat h(2, 2);
  h << bz, cplx(bx, -by), cplx(bx, by), -bz;
  return h;
}

MonopoleState monopole_state(double polar, double azimuth, SpinBand band,
                             SpinGauge gauge) {
  const bool at_north = polar < pole_eps;
  const bool at_south = polar > M_PI - pole_eps;
  if ((gauge == SpinGauge::north && at_north) ||
      (gauge == SpinGauge::south && at_south)) {
    throw GaugeUndefined("spinor gauge evaluated at its singular pole");
  }
  const double c = std::cos(0.5 * polar);
  const double s = std::sin(0.5 * polar);
  const cplx e = std::polar(1.0, azimuth);

  MonopoleState st{polar, azimuth, band, cvec(2), 0.0};
  if (band == SpinBand::ground) {
    st.eigenvalue = -1.0;
    if (gauge == SpinGauge::south) {
      st.spinor << -s * std::conj(e), c;
    } else {
      st.spinor << -s, c * e;
    }
  } else {
    st.eigenvalue = 1.0;
    if (gauge == SpinGauge::south) {
      st.spinor << c, s * e;
    } else {
      st.spinor << c * std::conj(e), s;
    }
  }
  return st;
}

StateFamily monopole_family(const ParameterGrid& grid, SpinBand band) {
  if (grid.topology != ParameterGrid::Topology::sphere) {
    throw invalid_argument("monopole_family needs a sphere grid");
  }
  const int column = band == SpinBand::ground ? 0 : 1;
  return [grid, column](int i, int j) -> cmat {
    const double polar = M_PI * i / grid.n1;
    const double azimuth = two_pi * j / grid.n2;
    const auto eig = hermitian_eigen(monopole_hamiltonian(polar, azimuth));
    return eig.vectors.col(column);
  };
}

ChernResult monopole_chern(SpinBand band, int n_polar, int n_azimuth) {
  const auto grid = ParameterGrid::sphere(n_polar, n_azimuth);
  return chern_number(monopole_family(grid, band), grid);
}

long transition_phase_winding(double latitude, int steps, SpinBand band) {
  if (!(std::abs(latitude) < 0.5 * M_PI)) {
    throw GaugeUndefined("latitude must lie strictly between the poles");
  }
  if (steps < 3) throw invalid_argument("transition_phase_winding: steps < 3");
  const double polar = 0.5 * M_PI - latitude;

  // gamma(f) = arg <chi_south | chi_north>, unwrapped along the circle.
  const auto gamma = [&](double azimuth) {
    const auto n = monopole_state(polar, azimuth, band, SpinGauge::north);
    const auto s = monopole_state(polar, azimuth, band, SpinGauge::south);
    return std::arg(s.spinor.dot(n.spinor));
  };
  double total = 0.0;
  double prev = gamma(0.0);
  for (int k = 1; k <= steps; ++k) {
    const double cur = gamma(two_pi * k / steps);
    double d = cur - prev;
    d -= two_pi * std::round(d / two_pi);
    total += d;
    prev = cur;
  }
  return std::lround(total / two_pi);
}

}  // namespace qhall
