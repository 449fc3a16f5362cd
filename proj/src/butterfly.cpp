#include "qhall/butterfly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "qhall/diophantine.hpp"
#include "qhall/error.hpp"

namespace qhall {

std::string to_string(DiagramMode mode) {
  return mode == DiagramMode::tight_binding ? "tight-binding" : "split-landau";
}

DiagramMode parse_diagram_mode(const std::string& name) {
  if (name == "tight-binding") return DiagramMode::tight_binding;
  if (name == "split-landau") return DiagramMode::split_landau;
  throw invalid_argument("unknown diagram mode '" + name + "'");
}

std::vector<RationalFlux> farey_fluxes(int q_max, int lo, int hi) {
  if (q_max < 1 || hi < lo) throw invalid_argument("farey_fluxes: empty range");
  std::vector<RationalFlux> out;
  for (std::int64_t q = 1; q <= q_max; ++q) {
    for (std::int64_t p = lo * q; p <= hi * q; ++p) {
      if (std::gcd(p, q) == 1) out.push_back(RationalFlux::reduce(p, q));
    }
  }
  std::sort(out.begin(), out.end(), [](const RationalFlux& a, const RationalFlux& b) {
    return a.original_p() * b.q() < b.original_p() * a.q();
  });
  return out;
}

std::vector<double> mu_grid(double mu_min, double mu_max, int steps) {
  const double centre = 0.5 * (mu_min + mu_max);
  const double half = 0.5 * (mu_max - mu_min);
  std::vector<double> mu(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    mu[static_cast<std::size_t>(k)] =
        centre + half * static_cast<double>(2 * k - steps + 1) / (steps - 1);
  }
  return mu;
}

namespace {

struct RowSpectrum {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<GapWindow> gaps;
};

RowSpectrum row_spectrum(const BandStructure& bands) {
  return {bands.band_min(0), bands.band_max(bands.bands() - 1), band_gaps(bands)};
}

Cell cell_from(DiagramMode mode, const RationalFlux& row, const RowSpectrum& s,
               double mu) {
  if (mu < s.lo || mu > s.hi) return 0;
  for (const auto& gap : s.gaps) {
    if (!(mu > gap.e_low && mu < gap.e_high)) continue;
    try {
      if (mode == DiagramMode::tight_binding) return gap_label(row, gap.r).t;
      return split_landau_conductance(split_landau_label(row, gap.r));
    } catch (const AmbiguousLabel&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

Cell diagram_cell(DiagramMode mode, const RationalFlux& row,
                  const BandStructure& bands, double mu) {
  return cell_from(mode, row, row_spectrum(bands), mu);
}

PhaseDiagram compute_diagram(const DiagramOptions& o) {
  if (o.q_max < 2) throw invalid_argument("compute_diagram: q_max must be >= 2");
  if (o.mu_steps < 16) {
    throw invalid_argument("compute_diagram: mu_steps must be >= 16");
  }
  if (!(o.mu_max > o.mu_min)) {
    throw invalid_argument("compute_diagram: empty mu range");
  }
  PhaseDiagram d;
  d.mode = o.mode;
  d.mu_axis = mu_grid(o.mu_min, o.mu_max, o.mu_steps);
  for (const auto& f : farey_fluxes(o.q_max, o.flux_min, o.flux_max)) {
    if (o.mode == DiagramMode::split_landau && f.original_p() == 0) continue;
    d.flux_axis.push_back(f);
  }

  const std::size_t n_mu = d.mu_axis.size();
  d.cells.resize(d.flux_axis.size() * n_mu);
  parallel_for(d.flux_axis.size(), o.threads, [&](std::size_t row) {
    const RationalFlux& f = d.flux_axis[row];
    const RationalFlux harper =
        o.mode == DiagramMode::tight_binding ? f : invert_flux(f);
    const RowSpectrum spec = row_spectrum(band_structure(harper, o.mesh, 1));
    for (std::size_t k = 0; k < n_mu; ++k) {
      d.cells[row * n_mu + k] = cell_from(o.mode, f, spec, d.mu_axis[k]);
    }
  });
  return d;
}

ColorMap::ColorMap(int span) : span_(span) {
  if (span < 1) throw invalid_argument("ColorMap: span must be >= 1");
}

ColorMap ColorMap::for_diagram(const PhaseDiagram& diagram) {
  std::int64_t widest = default_span;
  for (const auto& c : diagram.cells) {
    if (c) widest = std::max<std::int64_t>(widest, std::llabs(*c));
  }
  return ColorMap(static_cast<int>(widest));
}

Rgb ColorMap::color(const Cell& cell) const {
  if (!cell) return {0, 0, 0};
  if (*cell == 0) return {255, 255, 255};
  const std::int64_t m = std::min<std::int64_t>(std::llabs(*cell), span_);
  const auto ramp = static_cast<std::uint8_t>(
      span_ == 1 ? 0 : std::lround(255.0 * static_cast<double>(m - 1) / (span_ - 1)));
  if (*cell > 0) return {255, ramp, 0};
  return {0, ramp, 255};
}

std::string palette_csv(const ColorMap& map) {
  std::string out = "chern,r,g,b\n";
  const auto line = [&](const std::string& label, const Rgb& c) {
    out += label + "," + std::to_string(c.r) + "," + std::to_string(c.g) + "," +
           std::to_string(c.b) + "\n";
  };
  for (int c = -map.span(); c <= map.span(); ++c) {
    line(std::to_string(c), map.color(Cell{c}));
  }
  line("band", map.color(std::nullopt));
  return out;
}

namespace {

// Index of the nearest value in a sorted axis; ties go to the lower index.
std::size_t nearest(const std::vector<double>& axis, double v) {
  const auto it = std::lower_bound(axis.begin(), axis.end(), v);
  if (it == axis.begin()) return 0;
  if (it == axis.end()) return axis.size() - 1;
  const auto hi = static_cast<std::size_t>(it - axis.begin());
  return (v - axis[hi - 1] <= axis[hi] - v) ? hi - 1 : hi;
}

}  // namespace

Image render(const PhaseDiagram& diagram, const ColorMap& map, int width,
             int height) {
  if (width < 16 || height < 16) {
    throw invalid_argument("render: width and height must be >= 16");
  }
  Image img{width, height,
            std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height * 3, 0)};
  if (diagram.flux_axis.empty() || diagram.mu_axis.empty()) return img;

  std::vector<double> flux_values;
  for (const auto& f : diagram.flux_axis) flux_values.push_back(f.value());
  const double mu_lo = diagram.mu_axis.front();
  const double mu_hi = diagram.mu_axis.back();
  const double f_lo = flux_values.front();
  const double f_hi = flux_values.back();

  std::vector<std::size_t> column_cell(static_cast<std::size_t>(width));
  for (int c = 0; c < width; ++c) {
    const double mu = mu_lo + (c + 0.5) / width * (mu_hi - mu_lo);
    column_cell[static_cast<std::size_t>(c)] = nearest(diagram.mu_axis, mu);
  }
  for (int r = 0; r < height; ++r) {
    const double f = f_hi - (r + 0.5) / height * (f_hi - f_lo);
    const std::size_t row = nearest(flux_values, f);
    for (int c = 0; c < width; ++c) {
      const Rgb px = map.color(diagram.at(row, column_cell[static_cast<std::size_t>(c)]));
      const std::size_t o = (static_cast<std::size_t>(r) * width + c) * 3;
      img.rgb[o] = px.r;
      img.rgb[o + 1] = px.g;
      img.rgb[o + 2] = px.b;
    }
  }
  return img;
}

void write_ppm(std::ostream& out, const Image& image,
               const std::vector<std::string>& comments) {
  out << "P6\n";
  for (const auto& c : comments) out << "# " << c << "\n";
  out << image.width << " " << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.rgb.data()),
            static_cast<std::streamsize>(image.rgb.size()));
}

void write_diagram_csv(std::ostream& out, const PhaseDiagram& diagram,
                       const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "mu,p,q,chern\n";
  char mu_text[32];
  for (std::size_t row = 0; row < diagram.flux_axis.size(); ++row) {
    const auto& f = diagram.flux_axis[row];
    const std::string pq =
        std::to_string(f.original_p()) + "," + std::to_string(f.q()) + ",";
    for (std::size_t k = 0; k < diagram.mu_axis.size(); ++k) {
      std::snprintf(mu_text, sizeof mu_text, "%.10g", diagram.mu_axis[k]);
      const Cell& c = diagram.at(row, k);
      out << mu_text << "," << pq << (c ? std::to_string(*c) : "band") << "\n";
    }
  }
}

}  // namespace qhall
