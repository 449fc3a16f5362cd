#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qhall/hofstadter.hpp"

namespace qhall {

enum class DiagramMode { tight_binding, split_landau };

std::string to_string(DiagramMode mode);
/// Accepts "tight-binding" and "split-landau"; throws invalid_argument.
DiagramMode parse_diagram_mode(const std::string& name);

/// A cell holds a Hall integer, or nullopt when mu lies in a band, on a band
/// edge, or in a gap whose label is ambiguous.
using Cell = std::optional<std::int64_t>;

struct DiagramOptions {
  DiagramMode mode = DiagramMode::tight_binding;
  double mu_min = -4.2;
  double mu_max = 4.2;
  int mu_steps = 512;
  int q_max = 12;
  /// Flux rows cover [flux_min, flux_max], integer bounds.
  int flux_min = 0;
  int flux_max = 1;
  MomentumMesh mesh{32, 32};
  int threads = 1;
};

struct PhaseDiagram {
  DiagramMode mode = DiagramMode::tight_binding;
  std::vector<double> mu_axis;
  /// Sorted by value. In split-landau mode a row p/q is the Harper problem
  /// at flux q/p.
  std::vector<RationalFlux> flux_axis;
  /// cells[row * mu_axis.size() + k]
  std::vector<Cell> cells;

  const Cell& at(std::size_t row, std::size_t k) const {
    return cells[row * mu_axis.size() + k];
  }
};

/// Reduced fractions p/q with q <= q_max in [lo, hi], ascending.
std::vector<RationalFlux> farey_fluxes(int q_max, int lo, int hi);

/// mu_k on a uniform grid, computed so that a symmetric range gives
/// mu_{n-1-k} == -mu_k exactly.
std::vector<double> mu_grid(double mu_min, double mu_max, int steps);

/// Tight-binding rows take t of the enclosing gap; split-landau rows take s of
/// the label at the inverted flux and skip p == 0. Requires q_max >= 2 and
/// mu_steps >= 16. Rows are computed in parallel; the result does not depend
/// on the thread count.
PhaseDiagram compute_diagram(const DiagramOptions& options);

/// Cell value for one row and chemical potential.
Cell diagram_cell(DiagramMode mode, const RationalFlux& row,
                  const BandStructure& bands, double mu);

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Zero is white and InBand black. Positive integers run from red (+1) to
/// yellow (+span), negative ones from blue (-1) to cyan (-span); magnitudes
/// beyond span take the end colour.
class ColorMap {
public:
  static constexpr int default_span = 8;

  explicit ColorMap(int span = default_span);

  /// Span max(8, largest |C| in the diagram), so the map stays injective.
  static ColorMap for_diagram(const PhaseDiagram& diagram);

  int span() const { return span_; }
  Rgb color(const Cell& cell) const;

private:
  int span_;
};

/// Palette table "chern,r,g,b" for integers -span..span followed by "band".
std::string palette_csv(const ColorMap& map);

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, top row first
};

/// Nearest-cell rasterization: columns sample mu left to right, rows sample
/// flux from the top of the window down. Requires width, height >= 16.
Image render(const PhaseDiagram& diagram, const ColorMap& map, int width,
             int height);

/// Binary PPM: "P6", one '#' comment line per entry of `comments`, then
/// width, height, 255 and the pixels.
void write_ppm(std::ostream& out, const Image& image,
               const std::vector<std::string>& comments = {});

/// '#' comment lines, header "mu,p,q,chern", one row per cell with the
/// literal "band" for InBand.
void write_diagram_csv(std::ostream& out, const PhaseDiagram& diagram,
                       const std::vector<std::string>& comments = {});

}  // namespace qhall
