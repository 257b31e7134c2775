#include "slicesim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "slicesim/stepper.hpp"

namespace slicesim {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

double parse_double(const std::string& v, const std::string& key) {
  if (v == "inf") return kInf;
  if (v == "-inf") return -kInf;
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for '" + key + "': " + v);
  }
}

long parse_long(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for '" + key + "': " + v);
  }
}

std::array<double, 2> parse_point(const std::string& v, const std::string& key) {
  auto parts = split(v, ',');
  if (parts.empty() || parts.size() > 2)
    throw ConfigError("config: bad point for '" + key + "': " + v);
  std::array<double, 2> p{0, 0};
  p[0] = parse_double(parts[0], key);
  if (parts.size() == 2) p[1] = parse_double(parts[1], key);
  return p;
}

std::string fmt(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_point(std::array<double, 2> p, int dim) {
  return dim == 2 ? fmt(p[0]) + "," + fmt(p[1]) : fmt(p[0]);
}

}  // namespace

// ---------------------------------------------------------------------------
// builders
// ---------------------------------------------------------------------------

Grid RunConfig::make_grid() const {
  if (grid.dim == 1) return Grid::make_1d(grid.x_lo, grid.x_hi, grid.nx);
  return Grid::make_2d(grid.x_lo, grid.x_hi, grid.nx, grid.y_lo, grid.y_hi, grid.ny);
}

WaveField RunConfig::make_initial() const {
  const Grid g = make_grid();
  if (initial.kind == InitialSpec::Kind::gaussian)
    return make_gaussian(g, initial.center, initial.sigma, initial.k0, units);
  return make_rect_sheet(g, initial.lo, initial.hi, initial.k0, units);
}

Potential RunConfig::make_potential() const {
  switch (potential.kind) {
    case PotentialSpec::Kind::free:
      return Potential::free_space();
    case PotentialSpec::Kind::harmonic: {
      const double k = potential.strength;
      const auto c = potential.center;
      const int dim = grid.dim;
      return Potential::on_grid(make_grid(), [k, c, dim](std::array<double, 2> p) {
        double r2 = (p[0] - c[0]) * (p[0] - c[0]);
        if (dim == 2) r2 += (p[1] - c[1]) * (p[1] - c[1]);
        return 0.5 * k * r2;
      });
    }
    case PotentialSpec::Kind::linear: {
      const double g = potential.strength;
      return Potential::on_grid(make_grid(),
                                [g](std::array<double, 2> p) { return g * p[0]; });
    }
  }
  throw ConfigError("config: unknown potential kind");
}

BodyState BodySpec::make(int dim) const {
  BodyState b;
  b.dim = dim;
  b.axis = 0;
  for (const auto& ps : plates) {
    Plate p;
    p.face = ps.face;
    p.thickness = ps.thickness;
    p.facing = ps.facing;
    p.n_sites = ps.n_sites;
    p.site_origin = ps.site_origin;
    p.eta = ps.eta;
    p.holes = ps.holes;
    b.plates.push_back(p);
  }
  b.trajectory.segments = segments;
  b.granularity = d;
  b.sound_speed = v_s;
  b.skin_width = skin_width;
  b.skin_strength = skin_strength;
  b.skin_power = skin_power;
  b.validate();
  return b;
}

void RunConfig::validate() const {
  const Grid g = make_grid();
  const WaveField f = make_initial();  // initializer guards fire here
  const Potential pot = make_potential();
  StepperConfig sc{stepper.dt, stepper.max_steps};
  validate_stepper(sc, g, pot, units.mass, units.hbar);
  if (!(stepper.t_final >= 0)) throw ConfigError("config: t_final must be >= 0");
  if (bodies.size() > 2) throw ConfigError("config: at most two bodies");
  for (const auto& bs : bodies) {
    const BodyState b = bs.make(grid.dim);
    for (const auto& p : b.plates) {
      if (p.face < g.lo[0] || p.face > g.hi[0])
        throw ConfigError("config: plate face outside the domain");
    }
    if (bin_width == 0 && !(bs.d > 0 && bs.v_s > 0))
      throw ConfigError("config: ledger bin width underivable");
  }
  for (const auto& pr : output.probes) {
    if (pr[0] < g.lo[0] || pr[0] >= g.hi[0])
      throw ConfigError("config: probe outside the domain");
    if (g.dim == 2 && (pr[1] < g.lo[1] || pr[1] >= g.hi[1]))
      throw ConfigError("config: probe outside the domain");
  }
  if (reference != "none" && reference != "flux_integral" && reference != "contact_density")
    throw ConfigError("config: unknown reference kind " + reference);
}

// ---------------------------------------------------------------------------
// parse / serialize
// ---------------------------------------------------------------------------

namespace {

std::vector<Hole> parse_holes(const std::string& v, const std::string& key) {
  std::vector<Hole> holes;
  for (const auto& item : split(v, ';')) {
    if (item.empty()) continue;
    Hole h;
    std::string range = item;
    const auto at = item.find('@');
    if (at != std::string::npos) {
      range = trim(item.substr(0, at));
      const std::string win = trim(item.substr(at + 1));
      const auto dots = win.find("..");
      if (dots == std::string::npos)
        throw ConfigError("config: bad hole window in '" + key + "'");
      h.t_open = parse_double(trim(win.substr(0, dots)), key);
      h.t_close = parse_double(trim(win.substr(dots + 2)), key);
    }
    const auto dots = range.find("..");
    if (dots == std::string::npos)
      throw ConfigError("config: bad hole range in '" + key + "'");
    h.lo = parse_double(trim(range.substr(0, dots)), key);
    h.hi = parse_double(trim(range.substr(dots + 2)), key);
    holes.push_back(h);
  }
  return holes;
}

std::string format_holes(const std::vector<Hole>& holes) {
  std::string out;
  for (const auto& h : holes) {
    if (!out.empty()) out += " ; ";
    out += fmt(h.lo) + ".." + fmt(h.hi);
    if (std::isfinite(h.t_open) || std::isfinite(h.t_close))
      out += "@" + fmt(h.t_open) + ".." + fmt(h.t_close);
  }
  return out;
}

std::vector<TrajectorySegment> parse_trajectory(const std::string& v,
                                                const std::string& key) {
  std::vector<TrajectorySegment> segs;
  for (const auto& item : split(v, ';')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw ConfigError("config: bad trajectory segment in '" + key + "'");
    TrajectorySegment s;
    s.t_start = parse_double(trim(item.substr(0, colon)), key);
    s.velocity = parse_point(trim(item.substr(colon + 1)), key);
    segs.push_back(s);
  }
  if (segs.empty()) segs.push_back({0.0, {0, 0}});
  return segs;
}

std::string format_trajectory(const std::vector<TrajectorySegment>& segs, int dim) {
  std::string out;
  for (const auto& s : segs) {
    if (!out.empty()) out += " ; ";
    out += fmt(s.t_start) + ":" + fmt_point(s.velocity, dim);
  }
  return out;
}

void apply_body_key(BodySpec& b, const std::string& key, const std::string& val,
                    int dim) {
  auto plate_at = [&](std::size_t i) -> PlateSpec& {
    while (b.plates.size() <= i) b.plates.push_back({});
    return b.plates[i];
  };
  // plate-2 keys carry a "2" suffix
  std::string base = key;
  std::size_t pi = 0;
  if (!key.empty() && key.back() == '2' && key != "v_s") {
    base = key.substr(0, key.size() - 1);
    pi = 1;
  }
  if (base == "primitive")
    b.primitive = val;
  else if (base == "face")
    plate_at(pi).face = parse_double(val, key);
  else if (base == "thickness")
    plate_at(pi).thickness = parse_double(val, key);
  else if (base == "facing")
    plate_at(pi).facing = int(parse_long(val, key));
  else if (base == "n_sites")
    plate_at(pi).n_sites = std::size_t(parse_long(val, key));
  else if (base == "site_origin")
    plate_at(pi).site_origin = parse_double(val, key);
  else if (base == "eta")
    plate_at(pi).eta = parse_double(val, key);
  else if (base == "holes")
    plate_at(pi).holes = parse_holes(val, key);
  else if (base == "d")
    b.d = parse_double(val, key);
  else if (base == "v_s")
    b.v_s = parse_double(val, key);
  else if (base == "skin_width")
    b.skin_width = parse_double(val, key);
  else if (base == "skin_strength")
    b.skin_strength = parse_double(val, key);
  else if (base == "skin_power")
    b.skin_power = parse_double(val, key);
  else if (base == "trajectory")
    b.segments = parse_trajectory(val, key);
  else
    throw ConfigError("config: unknown body key '" + key + "'");
  (void)dim;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  cfg.bodies.clear();
  std::istringstream is(text);
  std::string line, section;
  std::map<std::string, BodySpec> body_sections;
  int lineno = 0;
  while (std::getline(is, line)) {
    lineno++;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: bad section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (section == "units") {
      if (key == "hbar")
        cfg.units.hbar = parse_double(val, key);
      else if (key == "mass")
        cfg.units.mass = parse_double(val, key);
      else
        throw ConfigError("config: unknown units key '" + key + "'");
    } else if (section == "grid") {
      if (key == "dim")
        cfg.grid.dim = int(parse_long(val, key));
      else if (key == "x_lo")
        cfg.grid.x_lo = parse_double(val, key);
      else if (key == "x_hi")
        cfg.grid.x_hi = parse_double(val, key);
      else if (key == "nx")
        cfg.grid.nx = std::size_t(parse_long(val, key));
      else if (key == "y_lo")
        cfg.grid.y_lo = parse_double(val, key);
      else if (key == "y_hi")
        cfg.grid.y_hi = parse_double(val, key);
      else if (key == "ny")
        cfg.grid.ny = std::size_t(parse_long(val, key));
      else
        throw ConfigError("config: unknown grid key '" + key + "'");
    } else if (section == "initial") {
      if (key == "type") {
        if (val == "gaussian")
          cfg.initial.kind = InitialSpec::Kind::gaussian;
        else if (val == "sheet")
          cfg.initial.kind = InitialSpec::Kind::sheet;
        else
          throw ConfigError("config: unknown initial type '" + val + "'");
      } else if (key == "center")
        cfg.initial.center = parse_point(val, key);
      else if (key == "sigma")
        cfg.initial.sigma = parse_double(val, key);
      else if (key == "lo")
        cfg.initial.lo = parse_point(val, key);
      else if (key == "hi")
        cfg.initial.hi = parse_point(val, key);
      else if (key == "k0")
        cfg.initial.k0 = parse_point(val, key);
      else
        throw ConfigError("config: unknown initial key '" + key + "'");
    } else if (section == "potential") {
      if (key == "type") {
        if (val == "free")
          cfg.potential.kind = PotentialSpec::Kind::free;
        else if (val == "harmonic")
          cfg.potential.kind = PotentialSpec::Kind::harmonic;
        else if (val == "linear")
          cfg.potential.kind = PotentialSpec::Kind::linear;
        else
          throw ConfigError("config: unknown potential type '" + val + "'");
      } else if (key == "strength")
        cfg.potential.strength = parse_double(val, key);
      else if (key == "center")
        cfg.potential.center = parse_point(val, key);
      else
        throw ConfigError("config: unknown potential key '" + key + "'");
    } else if (section == "stepper") {
      if (key == "dt")
        cfg.stepper.dt = parse_double(val, key);
      else if (key == "t_final")
        cfg.stepper.t_final = parse_double(val, key);
      else if (key == "max_steps")
        cfg.stepper.max_steps = parse_long(val, key);
      else
        throw ConfigError("config: unknown stepper key '" + key + "'");
    } else if (section == "body" || section == "body2") {
      apply_body_key(body_sections[section], key, val, cfg.grid.dim);
    } else if (section == "ledger") {
      if (key == "bin_width")
        cfg.bin_width = parse_double(val, key);
      else
        throw ConfigError("config: unknown ledger key '" + key + "'");
    } else if (section == "output") {
      if (key == "snapshot_cadence")
        cfg.output.snapshot_cadence = parse_long(val, key);
      else if (key == "text_snapshots")
        cfg.output.text_snapshots = (val == "true" || val == "1");
      else if (key == "probes") {
        cfg.output.probes.clear();
        for (const auto& item : split(val, ';'))
          if (!item.empty()) cfg.output.probes.push_back(parse_point(item, key));
      } else
        throw ConfigError("config: unknown output key '" + key + "'");
    } else if (section == "run") {
      if (key == "label")
        cfg.label = val;
      else if (key == "seed")
        cfg.seed = parse_long(val, key);
      else if (key == "tau_p")
        cfg.tau_p = parse_double(val, key);
      else if (key == "tau_e")
        cfg.tau_e = parse_double(val, key);
      else if (key == "k_char")
        cfg.k_char = parse_double(val, key);
      else if (key == "reference")
        cfg.reference = val;
      else
        throw ConfigError("config: unknown run key '" + key + "'");
    } else {
      throw ConfigError("config: unknown section '" + section + "'");
    }
  }
  if (body_sections.count("body")) cfg.bodies.push_back(body_sections["body"]);
  if (body_sections.count("body2")) cfg.bodies.push_back(body_sections["body2"]);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  const int dim = cfg.grid.dim;
  os << "[run]\n";
  os << "label = " << cfg.label << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "tau_p = " << fmt(cfg.tau_p) << "\n";
  os << "tau_e = " << fmt(cfg.tau_e) << "\n";
  os << "k_char = " << fmt(cfg.k_char) << "\n";
  os << "reference = " << cfg.reference << "\n";
  os << "\n[units]\n";
  os << "hbar = " << fmt(cfg.units.hbar) << "\n";
  os << "mass = " << fmt(cfg.units.mass) << "\n";
  os << "\n[grid]\n";
  os << "dim = " << dim << "\n";
  os << "x_lo = " << fmt(cfg.grid.x_lo) << "\n";
  os << "x_hi = " << fmt(cfg.grid.x_hi) << "\n";
  os << "nx = " << cfg.grid.nx << "\n";
  if (dim == 2) {
    os << "y_lo = " << fmt(cfg.grid.y_lo) << "\n";
    os << "y_hi = " << fmt(cfg.grid.y_hi) << "\n";
    os << "ny = " << cfg.grid.ny << "\n";
  }
  os << "\n[initial]\n";
  if (cfg.initial.kind == InitialSpec::Kind::gaussian) {
    os << "type = gaussian\n";
    os << "center = " << fmt_point(cfg.initial.center, dim) << "\n";
    os << "sigma = " << fmt(cfg.initial.sigma) << "\n";
  } else {
    os << "type = sheet\n";
    os << "lo = " << fmt_point(cfg.initial.lo, dim) << "\n";
    os << "hi = " << fmt_point(cfg.initial.hi, dim) << "\n";
  }
  os << "k0 = " << fmt_point(cfg.initial.k0, dim) << "\n";
  os << "\n[potential]\n";
  switch (cfg.potential.kind) {
    case PotentialSpec::Kind::free:
      os << "type = free\n";
      break;
    case PotentialSpec::Kind::harmonic:
      os << "type = harmonic\n";
      os << "strength = " << fmt(cfg.potential.strength) << "\n";
      os << "center = " << fmt_point(cfg.potential.center, dim) << "\n";
      break;
    case PotentialSpec::Kind::linear:
      os << "type = linear\n";
      os << "strength = " << fmt(cfg.potential.strength) << "\n";
      break;
  }
  os << "\n[stepper]\n";
  os << "dt = " << fmt(cfg.stepper.dt) << "\n";
  os << "t_final = " << fmt(cfg.stepper.t_final) << "\n";
  os << "max_steps = " << cfg.stepper.max_steps << "\n";
  for (std::size_t bi = 0; bi < cfg.bodies.size(); bi++) {
    const BodySpec& b = cfg.bodies[bi];
    os << "\n[" << (bi == 0 ? "body" : "body2") << "]\n";
    os << "primitive = " << b.primitive << "\n";
    os << "d = " << fmt(b.d) << "\n";
    os << "v_s = " << fmt(b.v_s) << "\n";
    if (b.skin_width != 0) os << "skin_width = " << fmt(b.skin_width) << "\n";
    if (b.skin_strength != 0) os << "skin_strength = " << fmt(b.skin_strength) << "\n";
    if (b.skin_power != 2.0) os << "skin_power = " << fmt(b.skin_power) << "\n";
    os << "trajectory = " << format_trajectory(b.segments, dim) << "\n";
    for (std::size_t pi = 0; pi < b.plates.size(); pi++) {
      const PlateSpec& p = b.plates[pi];
      const std::string sfx = pi == 0 ? "" : "2";
      os << "face" << sfx << " = " << fmt(p.face) << "\n";
      os << "facing" << sfx << " = " << p.facing << "\n";
      os << "thickness" << sfx << " = " << fmt(p.thickness) << "\n";
      os << "n_sites" << sfx << " = " << p.n_sites << "\n";
      os << "site_origin" << sfx << " = " << fmt(p.site_origin) << "\n";
      os << "eta" << sfx << " = " << fmt(p.eta) << "\n";
      if (!p.holes.empty()) os << "holes" << sfx << " = " << format_holes(p.holes) << "\n";
    }
  }
  os << "\n[ledger]\n";
  os << "bin_width = " << fmt(cfg.bin_width) << "\n";
  os << "\n[output]\n";
  os << "snapshot_cadence = " << cfg.output.snapshot_cadence << "\n";
  os << "text_snapshots = " << (cfg.output.text_snapshots ? "true" : "false") << "\n";
  if (!cfg.output.probes.empty()) {
    os << "probes = ";
    for (std::size_t i = 0; i < cfg.output.probes.size(); i++) {
      if (i) os << " ; ";
      os << fmt_point(cfg.output.probes[i], dim);
    }
    os << "\n";
  }
  return os.str();
}

void save_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("save_config: cannot open " + path);
  os << serialize_config(cfg);
}

bool RunConfig::operator==(const RunConfig& o) const {
  return serialize_config(*this) == serialize_config(o);
}

}  // namespace slicesim
