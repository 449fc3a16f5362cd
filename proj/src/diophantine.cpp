#include "qhall/diophantine.hpp"

#include <cstdlib>
#include <string>
#include <tuple>

#include "qhall/error.hpp"

namespace qhall {
namespace {

// Returns (g, x, y) with a x + b y = g = gcd(a, b), for a, b >= 0.
std::tuple<std::int64_t, std::int64_t, std::int64_t> extended_gcd(
    std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b;
  std::int64_t old_x = 1, x = 0;
  std::int64_t old_y = 0, y = 1;
  while (r != 0) {
    const std::int64_t quot = old_r / r;
    std::tie(old_r, r) = std::make_tuple(r, old_r - quot * r);
    std::tie(old_x, x) = std::make_tuple(x, old_x - quot * x);
    std::tie(old_y, y) = std::make_tuple(y, old_y - quot * y);
  }
  return {old_r, old_x, old_y};
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t d = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --d;
  return d;
}

}  // namespace

GapLabel gap_label(const RationalFlux& flux, std::int64_t r) {
  const std::int64_t p = flux.original_p();
  const std::int64_t q = flux.q();
  if (q < 2 || r < 1 || r > q - 1) {
    throw InvalidGapIndex("r=" + std::to_string(r) + " at flux " + flux.str());
  }

  // t p == r (mod q): t0 = r * p^{-1} mod q, then shift into |t| <= q/2.
  const std::int64_t pm = ((p % q) + q) % q;
  const auto [g, inv, unused] = extended_gcd(pm, q);
  (void)unused;
  if (g != 1) {
    throw InvalidFlux("flux " + flux.str() + " is not reduced");
  }
  std::int64_t t = ((r % q) * (((inv % q) + q) % q)) % q;  // in [0, q)
  if (2 * t > q) t -= q;                                   // now in (-q/2, q/2]
  if (2 * std::llabs(t) == q) {
    throw AmbiguousLabel("gap r=" + std::to_string(r) + " at flux " +
                         flux.str() + " has |t| = q/2");
  }
  const std::int64_t rest = r - t * p;
  const std::int64_t s = floor_div(rest, q);
  if (s * q != rest) {
    throw error("gap_label: internal arithmetic inconsistency");
  }
  return {r, t, s};
}

std::optional<std::int64_t> hall_conductance_at(double mu,
                                                const BandStructure& bands) {
  const int nb = bands.bands();
  if (mu < bands.band_min(0)) return 0;
  if (mu > bands.band_max(nb - 1)) return 0;
  for (const auto& gap : band_gaps(bands)) {
    if (mu > gap.e_low && mu < gap.e_high) {
      return gap_label(bands.flux, gap.r).t;
    }
  }
  return std::nullopt;
}

std::optional<std::int64_t> hall_conductance_at(double mu,
                                                const RationalFlux& flux,
                                                const MomentumMesh& mesh,
                                                int threads) {
  if (mesh.n1 < 16 || mesh.n2 < 16) {
    throw invalid_argument("hall_conductance_at: mesh must be >= 16 x 16");
  }
  return hall_conductance_at(mu, band_structure(flux, mesh, threads));
}

RationalFlux invert_flux(const RationalFlux& flux_ratio) {
  if (flux_ratio.original_p() == 0) {
    throw InvalidFlux("cannot invert zero flux ratio");
  }
  return RationalFlux::reduce(flux_ratio.q(), flux_ratio.original_p());
}

GapLabel split_landau_label(const RationalFlux& flux_ratio, std::int64_t r) {
  return gap_label(invert_flux(flux_ratio), r);
}

}  // namespace qhall
