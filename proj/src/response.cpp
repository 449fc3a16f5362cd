#include "qhall/berry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qhall/error.hpp"

namespace qhall {
namespace {

constexpr double fd_step = 1e-5;

// exp(-i h_eff) for Hermitian h_eff.
cmat unitary_exp(const cmat& h_eff) {
  const auto eig = hermitian_eigen(h_eff);
  cvec phases(eig.values.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = std::polar(1.0, -eig.values(k));
  }
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

// Fourth-order Magnus step for i psi' = H(t) psi over [t, t + h].
template <class HAt>
cvec magnus_step(const HAt& h_at, double t, double h, const cvec& psi) {
  static const double c = std::sqrt(3.0) / 6.0;
  const cmat h1 = h_at(t + (0.5 - c) * h);
  const cmat h2 = h_at(t + (0.5 + c) * h);
  // Omega = -i h_eff with h_eff = h/2 (H1 + H2) - i sqrt(3) h^2 / 12 [H2, H1]
  const cmat comm = h2 * h1 - h1 * h2;
  const cmat h_eff = 0.5 * h * (h1 + h2) -
                     cplx(0.0, std::sqrt(3.0) / 12.0 * h * h) * comm;
  return unitary_exp(0.5 * (h_eff + h_eff.adjoint())) * psi;
}

double expectation(const cvec& psi, const cmat& op) {
  return psi.dot(op * psi).real();
}

}  // namespace

cmat HermitianFamily::derivative_phi(double phi, double theta) const {
  if (d_phi) return d_phi(phi, theta);
  return (h(phi + fd_step, theta) - h(phi - fd_step, theta)) / (2 * fd_step);
}

cmat HermitianFamily::derivative_theta(double phi, double theta) const {
  if (d_theta) return d_theta(phi, theta);
  return (h(phi, theta + fd_step) - h(phi, theta - fd_step)) / (2 * fd_step);
}

HermitianFamily spin_half_family() {
  HermitianFamily f;
  f.h = [](double phi, double theta) { return monopole_hamiltonian(phi, theta); };
  f.d_phi = [](double phi, double theta) {
    const double bx = std::cos(phi) * std::cos(theta);
    const double by = std::cos(phi) * std::sin(theta);
    const double bz = -std::sin(phi);
    cmat m(2, 2);
    m << bz, cplx(bx, -by), cplx(bx, by), -bz;
    return m;
  };
  f.d_theta = [](double phi, double theta) {
    const double bx = -std::sin(phi) * std::sin(theta);
    const double by = std::sin(phi) * std::cos(theta);
    cmat m(2, 2);
    m << 0.0, cplx(bx, -by), cplx(bx, by), 0.0;
    return m;
  };
  return f;
}

double ground_curvature(const HermitianFamily& family, double phi,
                        double theta) {
  const auto eig = hermitian_eigen(family.hamiltonian(phi, theta));
  const cmat dp = eig.vectors.adjoint() * family.derivative_phi(phi, theta) *
                  eig.vectors;
  const cmat dt = eig.vectors.adjoint() *
                  family.derivative_theta(phi, theta) * eig.vectors;
  double k = 0.0;
  for (Eigen::Index m = 1; m < eig.values.size(); ++m) {
    const double de = eig.values(m) - eig.values(0);
    k += 2.0 * (dp(0, m) * dt(m, 0)).imag() / (de * de);
  }
  return k;
}

namespace {

double ground_energy(const HermitianFamily& family, double phi, double theta) {
  return hermitian_eigenvalues(family.hamiltonian(phi, theta))(0);
}

double ground_gap(const HermitianFamily& family, double phi, double theta) {
  const rvec e = hermitian_eigenvalues(family.hamiltonian(phi, theta));
  return e.size() < 2 ? std::numeric_limits<double>::infinity() : e(1) - e(0);
}

// Integral over Phi of (d_theta E / dPhi/dt - K), composite Simpson. The curvature
// enters with a minus sign for evolution i d psi/dt = H psi and K oriented
// (Phi, theta) as in ground_curvature.
double predicted_transport(const HermitianFamily& family, double theta0,
                           double rate, double phi0, double phi1) {
  const int n = 4096;
  const double h = (phi1 - phi0) / n;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double phi = phi0 + k * h;
    const auto eig = hermitian_eigen(family.hamiltonian(phi, theta0));
    const cvec g = eig.vectors.col(0);
    const double de_dtheta =
        expectation(g, family.derivative_theta(phi, theta0));
    const double f =
        de_dtheta / (two_pi * rate) - ground_curvature(family, phi, theta0);
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += w * f;
  }
  return sum * h / 3.0;
}

double relative(double measured, double predicted) {
  const double diff = std::abs(measured - predicted);
  return std::abs(predicted) > 1e-8 ? diff / std::abs(predicted) : diff;
}

}  // namespace

ResponseReport adiabatic_response_check(const HermitianFamily& family,
                                        double theta0, double rate,
                                        double cycle_fraction,
                                        const ResponseOptions& options) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw invalid_argument("adiabatic_response_check: rate must be >= 0");
  }
  const double phi0 = options.phi_start;
  ResponseReport report;
  report.rate = rate;

  if (rate == 0.0) {
    // Static limit: the current is the Feynman-Hellmann derivative.
    const auto eig = hermitian_eigen(family.hamiltonian(phi0, theta0));
    report.measured =
        expectation(eig.vectors.col(0), family.derivative_theta(phi0, theta0));
    report.predicted = (ground_energy(family, phi0, theta0 + fd_step) -
                        ground_energy(family, phi0, theta0 - fd_step)) /
                       (2 * fd_step);
    report.relative_error = relative(report.measured, report.predicted);
    report.min_gap = ground_gap(family, phi0, theta0);
    return report;
  }
  if (!(cycle_fraction > 0.0)) {
    throw invalid_argument("adiabatic_response_check: cycle_fraction <= 0");
  }

  // rate counts flux quanta per unit time: dPhi/dt = 2 pi rate.
  const double phi_dot = two_pi * rate;
  const double duration = cycle_fraction / rate;
  report.duration = duration;
  const auto h_at = [&](double t) {
    return family.hamiltonian(phi0 + phi_dot * t, theta0);
  };
  const auto current_at = [&](double t) {
    return family.derivative_theta(phi0 + phi_dot * t, theta0);
  };

  const auto start = hermitian_eigen(h_at(0.0));
  cvec psi = start.vectors.col(0);
  const double width = start.values(start.values.size() - 1) - start.values(0);
  // Resolve the fastest internal oscillation for the current quadrature.
  const double h_max = width > 0 ? 0.3 / width : 1.0;

  report.min_gap = ground_gap(family, phi0, theta0);
  const double required_gap = options.gap_factor * rate;
  if (report.min_gap < required_gap) {
    throw GapClosure("initial gap " + std::to_string(report.min_gap));
  }

  double t = 0.0;
  double h = std::min(options.initial_step, h_max);
  double transported = 0.0;
  double last_current = expectation(psi, current_at(0.0));
  while (t < duration) {
    h = std::min({h, h_max, duration - t});
    const cvec coarse = magnus_step(h_at, t, h, psi);
    const cvec half = magnus_step(h_at, t, 0.5 * h, psi);
    const cvec fine = magnus_step(h_at, t + 0.5 * h, 0.5 * h, half);
    const double err = (fine - coarse).norm() / 15.0;

    if (err > options.tolerance) {
      const double shrink =
          std::max(0.1, 0.9 * std::pow(options.tolerance / err, 0.2));
      h *= shrink;
      if (h < options.min_step) {
        throw IntegratorFailure("step size underflow at t=" +
                                std::to_string(t));
      }
      continue;
    }

    const double mid_current = expectation(half, current_at(t + 0.5 * h));
    const double end_current = expectation(fine, current_at(t + h));
    transported += h / 6.0 * (last_current + 4.0 * mid_current + end_current);
    last_current = end_current;
    psi = fine;
    t += h;
    ++report.steps;

    report.max_norm_drift =
        std::max(report.max_norm_drift, std::abs(psi.norm() - 1.0));
    const double gap = ground_gap(family, phi0 + phi_dot * t, theta0);
    report.min_gap = std::min(report.min_gap, gap);
    if (gap < required_gap) {
      throw GapClosure("instantaneous gap " + std::to_string(gap) +
                       " below " + std::to_string(required_gap));
    }

    const double grow =
        err > 0 ? std::min(2.0, 0.9 * std::pow(options.tolerance / err, 0.2))
                : 2.0;
    h *= std::max(1.0, grow);
  }

  report.measured = transported;
  report.predicted = predicted_transport(family, theta0, rate, phi0,
                                         phi0 + phi_dot * duration);
  report.relative_error = relative(report.measured, report.predicted);
  return report;
}

}  // namespace qhall
