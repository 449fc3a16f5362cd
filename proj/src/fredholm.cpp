#include "qhall/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <cblas.h>

#include "qhall/error.hpp"

namespace qhall {
namespace {

void check_model(const LatticeModel& m) {
  if (m.L < 4) throw invalid_argument("lattice size L must be >= 4");
  if (!(m.disorder >= 0.0) || !std::isfinite(m.disorder)) {
    throw invalid_argument("disorder strength must be finite and >= 0");
  }
  if (m.boundary == Boundary::periodic && m.L % m.flux.q() != 0) {
    throw invalid_argument("periodic lattice needs L divisible by q");
  }
}

// Vertical-bond phase on column x.
cplx peierls(const RationalFlux& flux, int x) {
  const double frac = static_cast<double>((flux.p() * x) % flux.q()) / flux.q();
  return std::polar(1.0, two_pi * frac);
}

// |site - a| < radius for every returned index.
std::vector<Eigen::Index> disk(const std::vector<Site>& sites, double ax,
                               double ay, double radius) {
  std::vector<Eigen::Index> out;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    if (std::hypot(sites[k].x - ax, sites[k].y - ay) < radius) {
      out.push_back(static_cast<Eigen::Index>(k));
    }
  }
  return out;
}

double clearance(const rvec& values, double e) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    best = std::min(best, std::abs(values(k) - e));
  }
  return best;
}

}  // namespace

std::string to_string(Boundary b) {
  return b == Boundary::open ? "open" : "periodic";
}

std::vector<Site> lattice_sites(int L) {
  std::vector<Site> sites;
  sites.reserve(static_cast<std::size_t>(L) * L);
  for (int x = 0; x < L; ++x) {
    for (int y = 0; y < L; ++y) sites.push_back({x, y});
  }
  return sites;
}

std::vector<double> disorder_potential(const LatticeModel& model) {
  std::vector<double> v(static_cast<std::size_t>(model.L) * model.L, 0.0);
  if (model.disorder == 0.0) return v;
  std::mt19937_64 rng(model.seed);
  for (double& e : v) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    e = model.disorder * (u - 0.5);
  }
  return v;
}

cmat build_lattice(const LatticeModel& model) {
  check_model(model);
  const int L = model.L;
  const bool wrap = model.boundary == Boundary::periodic;
  const auto n = static_cast<Eigen::Index>(L) * L;
  cmat h = cmat::Zero(n, n);
  const auto v = disorder_potential(model);
  for (int x = 0; x < L; ++x) {
    const cplx w = peierls(model.flux, x);
    for (int y = 0; y < L; ++y) {
      const int s = site_index(L, x, y);
      h(s, s) = v[static_cast<std::size_t>(s)];
      if (x + 1 < L || wrap) {
        const int r = site_index(L, (x + 1) % L, y);
        h(r, s) += 1.0;
        h(s, r) += 1.0;
      }
      if (y + 1 < L || wrap) {
        const int u = site_index(L, x, (y + 1) % L);
        h(u, s) += w;
        h(s, u) += std::conj(w);
      }
    }
  }
  return h;
}

FermiProjector fermi_projector(const cmat& h, double fermi_energy, int L) {
  const auto eig = hermitian_eigen(h);
  if (clearance(eig.values, fermi_energy) < fermi_spectrum_clearance) {
    throw FermiOnSpectrum("E_F=" + std::to_string(fermi_energy));
  }
  Eigen::Index occ = 0;
  while (occ < eig.values.size() && eig.values(occ) < fermi_energy) ++occ;
  FermiProjector p;
  p.fermi_energy = fermi_energy;
  p.L = L;
  p.sites = lattice_sites(L);
  if (static_cast<Eigen::Index>(p.sites.size()) != h.rows()) {
    throw invalid_argument("fermi_projector: matrix is not L^2 x L^2");
  }
  const auto v = eig.vectors.leftCols(occ);
  p.matrix = v * v.adjoint();
  p.states_below = occ;
  return p;
}

FermiProjector clean_periodic_projector(const LatticeModel& model,
                                        double fermi_energy,
                                        std::vector<Site> window) {
  check_model(model);
  if (model.boundary != Boundary::periodic || model.disorder != 0.0) {
    throw invalid_argument("block projector needs a clean periodic lattice");
  }
  const int L = model.L;
  // For vertical momentum ky the lattice reduces to a ring in x with on-site
  // energy 2 cos(ky - 2 pi phi x).
  std::vector<cmat> blocks(static_cast<std::size_t>(L));
  long below = 0;
  for (int m = 0; m < L; ++m) {
    const double ky = two_pi * m / L;
    cmat h = cmat::Zero(L, L);
    for (int x = 0; x < L; ++x) {
      h(x, x) = 2.0 * std::cos(ky - std::arg(peierls(model.flux, x)));
      h(x, (x + 1) % L) += 1.0;
      h((x + 1) % L, x) += 1.0;
    }
    const auto eig = hermitian_eigen(h);
    if (clearance(eig.values, fermi_energy) < fermi_spectrum_clearance) {
      throw FermiOnSpectrum("E_F=" + std::to_string(fermi_energy));
    }
    Eigen::Index occ = 0;
    while (occ < L && eig.values(occ) < fermi_energy) ++occ;
    below += occ;
    const auto v = eig.vectors.leftCols(occ);
    blocks[static_cast<std::size_t>(m)] = v * v.adjoint();
  }

  // G[d](x, x') = <x, y + d| P |x', y>.
  std::vector<cmat> g(static_cast<std::size_t>(L), cmat::Zero(L, L));
  for (int d = 0; d < L; ++d) {
    cmat& gd = g[static_cast<std::size_t>(d)];
    for (int m = 0; m < L; ++m) {
      gd += std::polar(1.0 / L, two_pi * static_cast<double>((m * d) % L) / L) *
            blocks[static_cast<std::size_t>(m)];
    }
  }

  FermiProjector p;
  p.fermi_energy = fermi_energy;
  p.L = L;
  p.states_below = below;
  p.sites = std::move(window);
  const auto n = static_cast<Eigen::Index>(p.sites.size());
  p.matrix.resize(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const Site& sb = p.sites[static_cast<std::size_t>(b)];
    for (Eigen::Index a = 0; a < n; ++a) {
      const Site& sa = p.sites[static_cast<std::size_t>(a)];
      const int d = ((sa.y - sb.y) % L + L) % L;
      p.matrix(a, b) = g[static_cast<std::size_t>(d)](sa.x, sb.x);
    }
  }
  return p;
}

std::pair<double, double> default_flux_center(int L) {
  const double c = L / 2 - 0.5;
  return {c, c};
}

FluxUnitary flux_unitary(const std::vector<Site>& sites, double ax, double ay) {
  FluxUnitary u{ax, ay, cvec(static_cast<Eigen::Index>(sites.size()))};
  for (std::size_t k = 0; k < sites.size(); ++k) {
    const double dx = sites[k].x - ax;
    const double dy = sites[k].y - ay;
    if (std::hypot(dx, dy) < 1e-12) {
      throw invalid_argument("flux centre coincides with a lattice site");
    }
    u.diagonal(static_cast<Eigen::Index>(k)) = std::polar(1.0, std::atan2(dy, dx));
  }
  return u;
}

cmat projector_difference(const FermiProjector& p, const FluxUnitary& u) {
  if (u.diagonal.size() != p.matrix.rows()) {
    throw invalid_argument("flux unitary and projector sizes differ");
  }
  const cvec& d = u.diagonal;
  cmat a = p.matrix;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      a(i, j) *= 1.0 - d(i) * std::conj(d(j));
    }
  }
  return a;
}

IndexEstimate relative_index(const FermiProjector& p, const FluxUnitary& u,
                             const IndexOptions& options) {
  IndexEstimate est;
  est.tolerance_used = options.eig_tol;
  est.trace_radius =
      options.trace_radius > 0 ? options.trace_radius : 0.3 * p.L;

  const cmat a = projector_difference(p, u);
  const auto d = disk(p.sites, u.ax, u.ay, est.trace_radius);
  est.disk_sites = static_cast<long>(d.size());
  if (d.empty()) return est;

  // Tr over the disk of A^3 = Tr(R A R^*) with R = A restricted to disk rows,
  // evaluated as sum_jk A_jk conj(G_jk), G = R^* R. Only the upper triangle of
  // G is formed (zherk); the lower one is its conjugate.
  const cmat rows = a(d, Eigen::all);
  const auto n = static_cast<int>(a.rows());
  const auto k = static_cast<int>(rows.rows());
  cmat g(n, n);
  cblas_zherk(CblasColMajor, CblasUpper, CblasConjTrans, n, k, 1.0, rows.data(),
              k, 0.0, g.data(), n);
  cplx tr = 0.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    cplx col = a(c, c) * std::conj(g(c, c));
    for (Eigen::Index r = 0; r < c; ++r) {
      col += a(r, c) * std::conj(g(r, c)) + a(c, r) * g(r, c);
    }
    tr += col;
  }
  est.trace_imag = tr.imag();
  if (std::abs(tr.imag()) >= 1e-9) {
    throw error("relative_index: trace has imaginary part " +
                std::to_string(tr.imag()));
  }
  est.trace_value = tr.real();
  est.rounded = std::lround(est.trace_value);
  est.residue = std::abs(est.trace_value - static_cast<double>(est.rounded));
  est.non_convergent = est.residue > options.convergence_residue;

  g.resize(0, 0);
  const cmat block = rows(Eigen::all, d);
  const long plus = count_eigenvalues_above(block, 1.0 - options.eig_tol);
  const long minus = k - count_eigenvalues_above(block, -1.0 + options.eig_tol);
  est.eigencount = plus - minus;
  return est;
}

IndexEstimate index_estimate(const LatticeModel& model, double fermi_energy,
                             const IndexOptions& options) {
  check_model(model);
  const auto [ax, ay] = default_flux_center(model.L);
  FermiProjector p;
  if (model.boundary == Boundary::periodic && model.disorder == 0.0) {
    const double radius =
        options.window_radius > 0 ? options.window_radius : 0.4 * model.L;
    std::vector<Site> window;
    for (const Site& s : lattice_sites(model.L)) {
      if (std::hypot(s.x - ax, s.y - ay) < radius) window.push_back(s);
    }
    p = clean_periodic_projector(model, fermi_energy, std::move(window));
  } else {
    p = fermi_projector(build_lattice(model), fermi_energy, model.L);
  }
  return relative_index(p, flux_unitary(p.sites, ax, ay), options);
}

std::vector<IndexEstimate> index_convergence_scan(
    const LatticeModel& model, double fermi_energy, const std::vector<int>& sizes,
    const IndexOptions& options, int threads) {
  if (!std::is_sorted(sizes.begin(), sizes.end())) {
    throw invalid_argument("index_convergence_scan: sizes must be ascending");
  }
  std::vector<IndexEstimate> out(sizes.size());
  parallel_for(sizes.size(), threads, [&](std::size_t k) {
    LatticeModel m = model;
    m.L = sizes[k];
    out[k] = index_estimate(m, fermi_energy, options);
  });
  return out;
}

std::pair<long, long> kernel_dims(const cmat& m) {
  const long rows = static_cast<long>(m.rows());
  const long cols = static_cast<long>(m.cols());
  if (m.size() == 0) return {cols, rows};
  const Eigen::JacobiSVD<cmat> svd(m);
  const rvec& sv = svd.singularValues();
  const double tol = 1e-8 * sv.maxCoeff();
  long rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > tol) ++rank;
  }
  return {cols - rank, rows - rank};
}

}  // namespace qhall
