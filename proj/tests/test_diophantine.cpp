#include <doctest.h>

#include <cstdlib>
#include <optional>
#include <vector>

#include "qhall/diophantine.hpp"
#include "qhall/error.hpp"

using namespace qhall;

namespace {

// Exhaustive search over |t| <= q/2; returns every solution found.
std::vector<GapLabel> brute_force(std::int64_t p, std::int64_t q, std::int64_t r) {
  std::vector<GapLabel> found;
  for (std::int64_t t = -q; t <= q; ++t) {
    if (2 * std::llabs(t) > q) continue;
    for (std::int64_t s = -3 * q - 3 * std::llabs(p); s <= 3 * q + 3 * std::llabs(p); ++s) {
      if (s * q + t * p == r) found.push_back({r, t, s});
    }
  }
  return found;
}

}  // namespace

TEST_CASE("gap labels agree with exhaustive search") {
  for (std::int64_t q = 2; q <= 12; ++q) {
    for (std::int64_t p = -q; p <= 2 * q; ++p) {
      const auto f = reduce_flux(p, q);
      if (f.q() != q) continue;
      for (std::int64_t r = 1; r < q; ++r) {
        const auto all = brute_force(f.original_p(), q, r);
        std::vector<GapLabel> strict;
        for (const auto& g : all) {
          if (2 * std::llabs(g.t) < q) strict.push_back(g);
        }
        if (strict.size() == 1) {
          CHECK(gap_label(f, r) == strict.front());
        } else {
          CHECK(strict.empty());
          CHECK_THROWS_AS(gap_label(f, r), AmbiguousLabel);
        }
      }
    }
  }
}

TEST_CASE("known labels") {
  CHECK(gap_label(reduce_flux(1, 3), 1) == GapLabel{1, 1, 0});
  CHECK(gap_label(reduce_flux(1, 3), 2) == GapLabel{2, -1, 1});
  CHECK(gap_label(reduce_flux(2, 5), 1).t == -2);
  CHECK(gap_label(reduce_flux(3, 8), 1).t == 3);
  CHECK(gap_label(reduce_flux(2, 3), 1) == GapLabel{1, -1, 1});
}

TEST_CASE("ambiguity happens exactly at the closed middle gap of even q") {
  for (std::int64_t q = 2; q <= 16; q += 2) {
    for (std::int64_t p = 1; p < q; ++p) {
      const auto f = reduce_flux(p, q);
      if (f.q() != q) continue;
      for (std::int64_t r = 1; r < q; ++r) {
        if (r == q / 2) {
          CHECK_THROWS_AS(gap_label(f, r), AmbiguousLabel);
        } else {
          CHECK_NOTHROW(gap_label(f, r));
        }
      }
    }
  }
}

TEST_CASE("label symmetries") {
  for (std::int64_t q = 3; q <= 11; ++q) {
    for (std::int64_t p = 1; p < q; ++p) {
      const auto f = reduce_flux(p, q);
      if (f.q() != q) continue;
      for (std::int64_t r = 1; r < q; ++r) {
        if (2 * r == q) continue;
        const auto g = gap_label(f, r);
        CHECK(gap_label(f.negated(), r).t == -g.t);
        CHECK(gap_label(f, q - r).t == -g.t);
        CHECK(gap_label(f.shifted(1), r).t == g.t);
        CHECK(gap_label(f.shifted(1), r).s == g.s - g.t);
      }
    }
  }
}

TEST_CASE("gap index out of range") {
  CHECK_THROWS_AS(gap_label(reduce_flux(1, 3), 0), InvalidGapIndex);
  CHECK_THROWS_AS(gap_label(reduce_flux(1, 3), 3), InvalidGapIndex);
  CHECK_THROWS_AS(gap_label(reduce_flux(0, 1), 1), InvalidGapIndex);
}

TEST_CASE("Hall conductance at a chemical potential") {
  const auto f = reduce_flux(1, 3);
  const MomentumMesh mesh{32, 32};
  CHECK(hall_conductance_at(-5.0, f, mesh) == std::optional<std::int64_t>(0));
  CHECK(hall_conductance_at(5.0, f, mesh) == std::optional<std::int64_t>(0));
  CHECK(hall_conductance_at(-1.4, f, mesh) == std::optional<std::int64_t>(1));
  CHECK(hall_conductance_at(1.4, f, mesh) == std::optional<std::int64_t>(-1));
  CHECK_FALSE(hall_conductance_at(0.0, f, mesh).has_value());
  const auto edge = band_gaps(f, mesh).front().e_low;
  CHECK(edge == doctest::Approx(-2.0));
  CHECK_FALSE(hall_conductance_at(edge, f, mesh).has_value());
  CHECK_FALSE(hall_conductance_at(0.0, reduce_flux(1, 2), mesh).has_value());
}

TEST_CASE("split-landau reading inverts the flux ratio") {
  CHECK(invert_flux(reduce_flux(3, 2)) == reduce_flux(2, 3));
  CHECK(split_landau_label(reduce_flux(3, 2), 1) == gap_label(reduce_flux(2, 3), 1));
  CHECK(split_landau_label(reduce_flux(3, 2), 1) == GapLabel{1, -1, 1});
  CHECK(split_landau_conductance(split_landau_label(reduce_flux(3, 2), 1)) == 1);
  CHECK_THROWS_AS(invert_flux(reduce_flux(0, 3)), InvalidFlux);
  CHECK(invert_flux(reduce_flux(-1, 3)).original_p() == -3);
}
