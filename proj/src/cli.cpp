#include "qhall/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qhall/berry.hpp"
#include "qhall/butterfly.hpp"
#include "qhall/diophantine.hpp"
#include "qhall/error.hpp"
#include "qhall/fredholm.hpp"
#include "qhall/hofstadter.hpp"

#ifndef QHALL_VERSION
#define QHALL_VERSION "0.0.0"
#endif

namespace qhall::cli {

using json = nlohmann::ordered_json;

const char* version() { return QHALL_VERSION; }

namespace {

// Options that steer where or how fast results are produced but not what they
// are; they stay out of the config echo so outputs are comparable byte for
// byte.
bool echoed(const std::string& name) {
  static const char* skip[] = {"help", "config", "threads", "out", "data",
                               "palette"};
  for (const char* s : skip) {
    if (name == s) return false;
  }
  return true;
}

struct Echo {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> params;

  std::string line() const {
    std::string s = std::string("qhall ") + version() + " " + subcommand;
    for (const auto& [k, v] : params) s += " " + k + "=" + v;
    return s;
  }
  json object() const {
    json cfg = json::object();
    for (const auto& [k, v] : params) cfg[k] = v;
    return json{{"version", version()}, {"subcommand", subcommand},
                {"config", cfg}};
  }
};

Echo echo_of(const CLI::App& sub) {
  Echo e{sub.get_name(), {}};
  for (const CLI::Option* opt : sub.get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty() || !echoed(names.front())) continue;
    std::string value =
        opt->count() > 0 ? opt->results().back() : opt->get_default_str();
    if (value.empty()) continue;
    e.params.emplace_back(names.front(), value);
  }
  return e;
}

// Output sink: a file, or `fallback` for "" and "-".
class Sink {
public:
  Sink(const std::string& path, std::ostream& fallback, bool binary = false) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(
        path, binary ? std::ios::out | std::ios::binary : std::ios::out);
    if (!*file_) throw invalid_argument("cannot open '" + path + "' for writing");
    stream_ = file_.get();
  }
  std::ostream& get() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw error("write failed");
  }

private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

void write_json(const json& j, const std::string& path, std::ostream& out) {
  Sink sink(path, out);
  sink.get() << j.dump(2) << "\n";
  sink.finish();
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

RationalFlux flux_of(long p, long q) { return RationalFlux::reduce(p, q); }

struct Common {
  long p = 1;
  long q = 3;
  int threads = 0;
  std::string out = "-";
};

void add_flux(CLI::App* sub, Common& c) {
  sub->add_option("--p", c.p, "flux numerator")->required();
  sub->add_option("--q", c.q, "flux denominator")->required();
}

void add_threads(CLI::App* sub, Common& c) {
  sub->add_option("--threads", c.threads, "worker threads (0: all cores)")
      ->check(CLI::NonNegativeNumber);
}

void add_out(CLI::App* sub, std::string& target, const std::string& what) {
  sub->add_option("--out", target, what + " ('-' for standard output)");
}

using Handler = std::function<void(const Echo&)>;

struct Registry {
  std::vector<std::pair<CLI::App*, Handler>> entries;
  void add(CLI::App* sub, Handler h) { entries.emplace_back(sub, std::move(h)); }
};

// --- subcommands -----------------------------------------------------------

void spectrum_cmd(CLI::App& app, Registry& reg, std::ostream& out) {
  auto c = std::make_shared<Common>();
  auto nk = std::make_shared<int>(64);
  auto* sub = app.add_subcommand("spectrum", "Bloch energies on a k mesh (CSV)");
  add_flux(sub, *c);
  sub->add_option("--nk", *nk, "mesh points per direction")->check(CLI::PositiveNumber);
  add_threads(sub, *c);
  add_out(sub, c->out, "CSV file");
  reg.add(sub, [c, nk, &out](const Echo& echo) {
    const auto flux = flux_of(c->p, c->q);
    const MomentumMesh mesh{*nk, *nk};
    const auto bands = band_structure(flux, mesh, c->threads);
    Sink sink(c->out, out);
    auto& os = sink.get();
    os << "# " << echo.line() << "\n";
    os << "k1,k2";
    for (int b = 1; b <= bands.bands(); ++b) os << ",E_" << b;
    os << "\n";
    for (int i = 0; i < mesh.n1; ++i) {
      for (int j = 0; j < mesh.n2; ++j) {
        const auto k = mesh.at(flux, i, j);
        os << number(k.k1) << "," << number(k.k2);
        for (int b = 0; b < bands.bands(); ++b) os << "," << number(bands.energy(i, j, b));
        os << "\n";
      }
    }
    sink.finish();
  });
}

void gaps_cmd(CLI::App& app, Registry& reg, std::ostream& out) {
  auto c = std::make_shared<Common>();
  auto mesh = std::make_shared<int>(32);
  auto* sub = app.add_subcommand("gaps", "open gaps with mid-gap energies and labels (CSV)");
  add_flux(sub, *c);
  sub->add_option("--mesh", *mesh, "k mesh per direction (>= 16)");
  add_threads(sub, *c);
  add_out(sub, c->out, "CSV file");
  reg.add(sub, [c, mesh, &out](const Echo& echo) {
    const auto flux = flux_of(c->p, c->q);
    const auto gaps = band_gaps(flux, MomentumMesh{*mesh, *mesh}, c->threads);
    Sink sink(c->out, out);
    auto& os = sink.get();
    os << "# " << echo.line() << "\n";
    os << "r,e_low,e_high,mid,width,t,s\n";
    for (const auto& g : gaps) {
      os << g.r << "," << number(g.e_low) << "," << number(g.e_high) << ","
         << number(g.mid()) << "," << number(g.width()) << ",";
      try {
        const auto label = gap_label(flux, g.r);
        os << label.t << "," << label.s << "\n";
      } catch (const AmbiguousLabel&) {
        os << "ambiguous,ambiguous\n";
      }
    }
    sink.finish();
  });
}

void chern_cmd(CLI::App& app, Registry& reg, std::ostream& out) {
  auto c = std::make_shared<Common>();
  auto mesh = std::make_shared<int>(32);
  auto band = std::make_shared<int>(0);
  auto gap = std::make_shared<int>(0);
  auto* sub = app.add_subcommand("chern", "link-variable Chern number of a band or of the bands below a gap");
  add_flux(sub, *c);
  auto* band_opt = sub->add_option("--band", *band, "band, 1 = lowest")->default_str("");
  auto* gap_opt = sub->add_option("--gap", *gap, "gap index r: sum over the r lowest bands")
                      ->default_str("");
  band_opt->excludes(gap_opt);
  sub->add_option("--mesh", *mesh, "k mesh per direction")->check(CLI::PositiveNumber);
  add_threads(sub, *c);
  add_out(sub, c->out, "JSON file");
  reg.add(sub, [c, mesh, band, gap, band_opt, gap_opt, &out](const Echo& echo) {
    if (band_opt->count() == 0 && gap_opt->count() == 0) {
      throw invalid_argument("chern needs --band or --gap");
    }
    const auto flux = flux_of(c->p, c->q);
    json j = echo.object();
    ChernResult r;
    if (band_opt->count() > 0) {
      if (*band < 1 || *band > flux.q()) throw invalid_argument("--band out of range");
      r = band_chern(flux, *band - 1, *band, *mesh, c->threads);
      j["band"] = *band;
    } else {
      r = gap_chern(flux, *gap, *mesh, c->threads);
      j["gap"] = *gap;
    }
    j["chern"] = r.value;
    j["curvature_sum"] = r.curvature_sum;
    j["residue"] = r.residue;
    write_json(j, c->out, out);
  });
}

void label_cmd(CLI::App& app, Registry& reg, std::ostream& out) {
  auto c = std::make_shared<Common>();
  auto r = std::make_shared<long>(0);
  auto mu = std::make_shared<double>(0.0);
  auto mode = std::make_shared<std::string>("tight-binding");
  auto mesh = std::make_shared<int>(32);
  auto* sub = app.add_subcommand("label", "Diophantine gap label by gap index or chemical potential");
  add_flux(sub, *c);
  auto* r_opt = sub->add_option("--r", *r, "gap index")->default_str("");
  auto* mu_opt = sub->add_option("--mu", *mu, "chemical potential")->default_str("");
  r_opt->excludes(mu_opt);
  sub->add_option("--mode", *mode, "tight-binding | split-landau")
      ->check(CLI::IsMember({"tight-binding", "split-landau"}));
  sub->add_option("--mesh", *mesh, "k mesh for gap detection (with --mu)");
  add_threads(sub, *c);
  add_out(sub, c->out, "JSON file");
  reg.add(sub, [c, r, mu, mode, mesh, r_opt, mu_opt, &out](const Echo& echo) {
    if (r_opt->count() == 0 && mu_opt->count() == 0) {
      throw invalid_argument("label needs --r or --mu");
    }
    const auto flux = flux_of(c->p, c->q);
    const DiagramMode m = parse_diagram_mode(*mode);
    const RationalFlux harper = m == DiagramMode::tight_binding ? flux : invert_flux(flux);
    json j = echo.object();
    std::int64_t gap = *r;
    if (mu_opt->count() > 0) {
      if (*mesh < 16) throw invalid_argument("--mesh must be >= 16");
      const auto bands = band_structure(harper, MomentumMesh{*mesh, *mesh}, c->threads);
      if (!diagram_cell(m, flux, bands, *mu)) {
        throw NotInGap("mu=" + number(*mu) + " at flux " + harper.str());
      }
      j["mu"] = *mu;
      gap = -1;
      if (*mu < bands.band_min(0)) gap = 0;
      if (*mu > bands.band_max(bands.bands() - 1)) gap = bands.bands();
      for (const auto& g : band_gaps(bands)) {
        if (*mu > g.e_low && *mu < g.e_high) gap = g.r;
      }
      if (gap == 0 || gap == bands.bands()) {
        j["r"] = gap;
        j["chern"] = 0;
        write_json(j, c->out, out);
        return;
      }
    }
    const GapLabel label =
        m == DiagramMode::tight_binding ? gap_label(flux, gap) : split_landau_label(flux, gap);
    j["r"] = label.r;
    j["t"] = label.t;
    j["s"] = label.s;
    j["chern"] = m == DiagramMode::tight_binding ? label.t : split_landau_conductance(label);
    write_json(j, c->out, out);
  });
}

void butterfly_cmd(CLI::App& app, Registry& reg, std::ostream& out) {
  struct Opts {
    DiagramOptions d;
    std::string mode = "tight-binding";
    int mesh = 32;
    int width = 1024;
    int height = 768;
    std::string out;
    std::string data;
    std::string palette;
  };
  auto o = std::make_shared<Opts>();
  o->d.threads = 0;
  auto* sub = app.add_subcommand("butterfly", "colored phase diagram (PPM, optional CSV)");
  sub->add_option("--qmax", o->d.q_max, "largest flux denominator")->check(CLI::Range(2, 1000));
  sub->add_option("--mu-steps", o->d.mu_steps, "chemical potential samples")->check(CLI::Range(16, 1 << 20));
  sub->add_option("--mode", o->mode, "tight-binding | split-landau")
      ->check(CLI::IsMember({"tight-binding", "split-landau"}));
  sub->add_option("--mu-min", o->d.mu_min, "lower end of the mu axis");
  sub->add_option("--mu-max", o->d.mu_max, "upper end of the mu axis");
  sub->add_option("--flux-min", o->d.flux_min, "lowest flux row (integer)");
  sub->add_option("--flux-max", o->d.flux_max, "highest flux row (integer)");
  sub->add_option("--mesh", o->mesh, "k mesh for gap detection")->check(CLI::Range(16, 4096));
  sub->add_option("--width", o->width, "image width")->check(CLI::Range(16, 1 << 15));
  sub->add_option("--height", o->height, "image height")->check(CLI::Range(16, 1 << 15));
  sub->add_option("--threads", o->d.threads, "worker threads (0: all cores)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--out", o->out, "PPM image")->required();
  sub->add_option("--data", o->data, "CSV of every cell");
  sub->add_option("--palette", o->palette, "CSV of the color table used");
  reg.add(sub, [o, &out](const Echo& echo) {
    DiagramOptions d = o->d;
    d.mode = parse_diagram_mode(o->mode);
    d.mesh = MomentumMesh{o->mesh, o->mesh};
    const PhaseDiagram diagram = compute_diagram(d);
    const ColorMap colors = ColorMap::for_diagram(diagram);
    const std::vector<std::string> comments{echo.line()};
    {
      Sink sink(o->out, out, true);
      write_ppm(sink.get(), render(diagram, colors, o->width, o->height), comments);
      sink.finish();
    }
    if (!o->data.empty()) {
      Sink sink(o->data, out);
      write_diagram_csv(sink.get(), diagram, comments);
      sink.finish();
    }
    if (!o->palette.empty()) {
      Sink sink(o->palette, out);
      sink.get() << "# " << echo.line() << "\n" << palette_csv(colors);
      sink.finish();
    }
  });
}

void monopole_cmd(CLI::App& app, Registry& reg, std::ostream& out) {
  struct Opts {
    int n_polar = 24;
    int n_azimuth = 48;
    std::string band = "ground";
    double latitude_deg = 0.0;
    int winding_steps = 720;
    std::string out = "-";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("monopole", "spin-1/2 band Chern number and transition-function winding");
  sub->add_option("--n-polar", o->n_polar, "polar grid points")->check(CLI::Range(2, 100000));
  sub->add_option("--n-azimuth", o->n_azimuth, "azimuthal grid points")->check(CLI::Range(3, 100000));
  sub->add_option("--band", o->band, "ground | excited")->check(CLI::IsMember({"ground", "excited"}));
  sub->add_option("--latitude-deg", o->latitude_deg, "circle used for the winding");
  sub->add_option("--winding-steps", o->winding_steps, "samples around that circle")
      ->check(CLI::Range(8, 10000000));
  add_out(sub, o->out, "JSON file");
  reg.add(sub, [o, &out](const Echo& echo) {
    const SpinBand band = o->band == "ground" ? SpinBand::ground : SpinBand::excited;
    const auto r = monopole_chern(band, o->n_polar, o->n_azimuth);
    const long w = transition_phase_winding(o->latitude_deg * M_PI / 180.0,
                                            o->winding_steps, band);
    json j = echo.object();
    j["chern"] = r.value;
    j["curvature_sum"] = r.curvature_sum;
    j["residue"] = r.residue;
    j["winding"] = w;
    write_json(j, o->out, out);
  });
}

void holonomy_cmd(CLI::App& app, Registry& reg, std::ostream& out) {
  struct Opts {
    double latitude_deg = 0.0;
    int steps = 100000;
    int cap_polar = 64;
    int cap_azimuth = 128;
    std::string out = "-";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("holonomy", "parallel transport around a circle of latitude");
  sub->add_option("--latitude-deg", o->latitude_deg, "latitude in degrees")->required();
  sub->add_option("--steps", o->steps, "geodesic segments (>= 100)");
  sub->add_option("--cap-polar", o->cap_polar, "cap grid rings")->check(CLI::PositiveNumber);
  sub->add_option("--cap-azimuth", o->cap_azimuth, "cap grid sectors")->check(CLI::Range(3, 1000000));
  add_out(sub, o->out, "JSON file");
  reg.add(sub, [o, &out](const Echo& echo) {
    const double lat = o->latitude_deg * M_PI / 180.0;
    const double h = latitude_holonomy(lat, o->steps);
    double expected = std::fmod(-two_pi * std::sin(lat), two_pi);
    if (expected < 0) expected += two_pi;
    double dev = std::abs(h - expected);
    dev = std::min(dev, two_pi - dev);
    json j = echo.object();
    j["holonomy"] = h;
    j["expected"] = expected;
    j["deviation"] = dev;
    j["cap_curvature_integral"] = cap_curvature_integral(lat, o->cap_polar, o->cap_azimuth);
    write_json(j, o->out, out);
  });
}

void pump_cmd(CLI::App& app, Registry& reg, std::ostream& out) {
  struct Opts {
    double rate = 0.0;
    double theta = 0.0;
    double cycle_fraction = 0.25;
    ResponseOptions r;
    std::string out = "-";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("pump-check", "driven spin-1/2: transported quantity vs adiabatic prediction");
  sub->add_option("--rate", o->rate, "drive rate in flux quanta per unit time")->required()
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--theta", o->theta, "fixed second parameter");
  sub->add_option("--cycle-fraction", o->cycle_fraction, "fraction of a flux quantum swept");
  sub->add_option("--phi-start", o->r.phi_start, "initial flux angle");
  sub->add_option("--tolerance", o->r.tolerance, "local integrator tolerance")
      ->check(CLI::PositiveNumber);
  add_out(sub, o->out, "JSON file");
  reg.add(sub, [o, &out](const Echo& echo) {
    const auto rep = adiabatic_response_check(spin_half_family(), o->theta, o->rate,
                                              o->cycle_fraction, o->r);
    json j = echo.object();
    j["rate"] = rep.rate;
    j["duration"] = rep.duration;
    j["measured"] = rep.measured;
    j["predicted"] = rep.predicted;
    j["relative_error"] = rep.relative_error;
    j["max_norm_drift"] = rep.max_norm_drift;
    j["min_gap"] = rep.min_gap;
    j["steps"] = rep.steps;
    write_json(j, o->out, out);
  });
}

struct IndexOpts {
  int L = 0;
  long p = 1;
  long q = 3;
  double ef = 0.0;
  double disorder = 0.0;
  std::uint64_t seed = 0;
  std::string boundary = "open";
  IndexOptions index;
  int threads = 0;
  std::string out = "-";
};

void add_index_common(CLI::App* sub, IndexOpts& o) {
  sub->add_option("--p", o.p, "flux numerator")->required();
  sub->add_option("--q", o.q, "flux denominator")->required();
  sub->add_option("--ef", o.ef, "Fermi energy")->required();
  sub->add_option("--disorder", o.disorder, "disorder strength W")->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", o.seed, "disorder seed")->required();
  sub->add_option("--boundary", o.boundary, "open | periodic")
      ->check(CLI::IsMember({"open", "periodic"}));
  sub->add_option("--window-radius", o.index.window_radius,
                  "site window of the clean periodic route (0: 0.4 L)");
  sub->add_option("--eig-tol", o.index.eig_tol, "tolerance for eigenvalues at +-1")
      ->check(CLI::PositiveNumber);
  add_out(sub, o.out, "JSON file");
}

json estimate_json(const IndexEstimate& e) {
  return json{{"trace_value", e.trace_value},
              {"rounded", e.rounded},
              {"residue", e.residue},
              {"eigencount", e.eigencount},
              {"tolerance_used", e.tolerance_used},
              {"trace_radius", e.trace_radius},
              {"disk_sites", e.disk_sites},
              {"flags", {{"non_convergent", e.non_convergent}}}};
}

LatticeModel model_of(const IndexOpts& o) {
  LatticeModel m;
  m.L = o.L;
  m.flux = flux_of(o.p, o.q);
  m.disorder = o.disorder;
  m.seed = o.seed;
  m.boundary = o.boundary == "open" ? Boundary::open : Boundary::periodic;
  return m;
}

void index_cmd(CLI::App& app, Registry& reg, std::ostream& out) {
  auto o = std::make_shared<IndexOpts>();
  auto* sub = app.add_subcommand("index", "finite-volume relative index at one size (JSON)");
  sub->add_option("--L", o->L, "linear lattice size")->required()->check(CLI::Range(4, 100000));
  add_index_common(sub, *o);
  sub->add_option("--trace-radius", o->index.trace_radius,
                  "radius of the trace disk (0: 0.3 L)");
  reg.add(sub, [o, &out](const Echo& echo) {
    const auto est = index_estimate(model_of(*o), o->ef, o->index);
    json j = echo.object();
    j.update(estimate_json(est));
    write_json(j, o->out, out);
  });
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      sizes.push_back(v);
    } catch (const std::exception&) {
      throw invalid_argument("--sizes: '" + item + "' is not an integer");
    }
  }
  if (sizes.empty()) throw invalid_argument("--sizes is empty");
  return sizes;
}

void index_scan_cmd(CLI::App& app, Registry& reg, std::ostream& out) {
  auto o = std::make_shared<IndexOpts>();
  auto sizes = std::make_shared<std::string>();
  auto seeds = std::make_shared<int>(1);
  auto* sub = app.add_subcommand("index-scan", "relative index over sizes and seeds (JSON)");
  sub->add_option("--sizes", *sizes, "ascending comma-separated sizes")->required();
  sub->add_option("--seeds", *seeds, "consecutive seeds starting at --seed")
      ->check(CLI::Range(1, 100000));
  add_index_common(sub, *o);
  sub->add_option("--threads", o->threads, "worker threads (0: all cores)")
      ->check(CLI::NonNegativeNumber);
  reg.add(sub, [o, sizes, seeds, &out](const Echo& echo) {
    const auto ls = parse_sizes(*sizes);
    if (!std::is_sorted(ls.begin(), ls.end())) {
      throw invalid_argument("--sizes must be ascending");
    }
    const std::size_t n = ls.size() * static_cast<std::size_t>(*seeds);
    std::vector<IndexEstimate> results(n);
    parallel_for(n, o->threads, [&](std::size_t k) {
      LatticeModel m = model_of(*o);
      m.seed = o->seed + k / ls.size();
      m.L = ls[k % ls.size()];
      results[k] = index_estimate(m, o->ef, o->index);
    });
    json j = echo.object();
    json rows = json::array();
    for (std::size_t k = 0; k < n; ++k) {
      json row{{"L", ls[k % ls.size()]}, {"seed", o->seed + k / ls.size()}};
      row.update(estimate_json(results[k]));
      rows.push_back(row);
    }
    j["results"] = rows;
    write_json(j, o->out, out);
  });
}

// Pulls --config out of the argument list and returns the file's entries as
// --key value pairs placed right after the subcommand, so later command-line
// occurrences win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::vector<std::string> from_file;
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw invalid_argument("--config needs a path");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
      continue;
    }
    for (const auto& [k, v] : read_config_file(path)) {
      from_file.push_back("--" + k);
      from_file.push_back(v);
    }
  }
  std::vector<std::string> out{args.empty() ? "qhall" : args.front()};
  if (rest.empty()) return out;
  out.push_back(rest.front());
  out.insert(out.end(), from_file.begin(), from_file.end());
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_argument("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int number = 0;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw invalid_argument(path + ":" + std::to_string(number) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (key.empty()) {
      throw invalid_argument(path + ":" + std::to_string(number) + ": empty key");
    }
    entries.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return entries;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Topological invariants of the integer quantum Hall effect", "qhall"};
  app.set_version_flag("--version", std::string("qhall ") + version());
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeLast);

  Registry reg;
  spectrum_cmd(app, reg, out);
  gaps_cmd(app, reg, out);
  chern_cmd(app, reg, out);
  label_cmd(app, reg, out);
  butterfly_cmd(app, reg, out);
  monopole_cmd(app, reg, out);
  holonomy_cmd(app, reg, out);
  pump_cmd(app, reg, out);
  index_cmd(app, reg, out);
  index_scan_cmd(app, reg, out);
  for (auto& [sub, handler] : reg.entries) {
    sub->allow_extras(false);
    sub->positionals_at_end(false);
  }

  try {
    std::vector<std::string> expanded = expand_config(args);
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const invalid_argument& e) {
    err << "qhall: " << e.what() << "\n";
    return 2;
  }

  try {
    for (auto& [sub, handler] : reg.entries) {
      if (sub->parsed()) handler(echo_of(*sub));
    }
  } catch (const invalid_argument& e) {
    err << "qhall: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    err << "qhall: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "qhall: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace qhall::cli
