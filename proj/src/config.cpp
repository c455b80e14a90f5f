#include "hms/config.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hms/errors.hpp"
#include "hms/io.hpp"

namespace hms {

namespace {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct IniEntry {
  std::string key, value;
  int line = 0;
};

using IniSection = std::vector<IniEntry>;

struct IniFile {
  std::string path;
  std::vector<std::pair<std::string, IniSection>> sections; // in file order
};

IniFile parse_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::IoError, "cannot open " + path);
  IniFile ini;
  ini.path = path;
  std::string line;
  int lineno = 0;
  IniSection* cur = nullptr;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        raise(ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ": unclosed section header");
      std::string name = trim(s.substr(1, s.size() - 2));
      if (name.empty())
        raise(ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ": empty section name");
      ini.sections.push_back({name, {}});
      cur = &ini.sections.back().second;
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      raise(ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ": expected key = value");
    if (!cur)
      raise(ErrorKind::ParseError,
            path + ":" + std::to_string(lineno) + ": key outside any [section]");
    IniEntry e{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), lineno};
    if (e.key.empty())
      raise(ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ": empty key");
    cur->push_back(std::move(e));
  }
  return ini;
}

[[noreturn]] void bad_key(const std::string& dotted, const std::string& why) {
  raise(ErrorKind::ValidationError, dotted + ": " + why);
}

std::vector<double> parse_numbers(const std::string& dotted, const std::string& value,
                                  size_t want = 0) {
  std::istringstream ss(value);
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) {
    try {
      size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      bad_key(dotted, "not a number: '" + tok + "'");
    }
  }
  if (want != 0 && out.size() != want)
    bad_key(dotted, "expected " + std::to_string(want) + " numbers, got " +
                        std::to_string(out.size()));
  if (out.empty()) bad_key(dotted, "expected a numeric value");
  return out;
}

double parse_one(const std::string& dotted, const std::string& value) {
  return parse_numbers(dotted, value, 1)[0];
}

int parse_int(const std::string& dotted, const std::string& value) {
  double v = parse_one(dotted, value);
  int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) bad_key(dotted, "expected an integer");
  return i;
}

// layer.<n>.rest -> n, rest ("" when absent)
bool split_indexed(const std::string& key, const std::string& prefix, int& index,
                   std::string& rest) {
  if (key.rfind(prefix + ".", 0) != 0) return false;
  std::string tail = key.substr(prefix.size() + 1);
  size_t dot = tail.find('.');
  std::string num = dot == std::string::npos ? tail : tail.substr(0, dot);
  rest = dot == std::string::npos ? std::string() : tail.substr(dot + 1);
  if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos) return false;
  index = std::stoi(num);
  return true;
}

void read_domain(const IniSection& sec, RunConfig& cfg) {
  std::map<int, LayerRect> rects;
  std::map<int, std::string> mats;
  for (const IniEntry& e : sec) {
    int idx = 0;
    std::string rest;
    if (!split_indexed(e.key, "layer", idx, rest))
      bad_key("domain." + e.key, "unknown key (expected layer.<n>.rect / layer.<n>.material)");
    const std::string dotted = "domain." + e.key;
    if (rest == "rect") {
      auto v = parse_numbers(dotted, e.value, 4);
      rects[idx] = LayerRect{v[0], v[1], v[2], v[3], {}};
    } else if (rest == "material") {
      if (e.value.empty()) bad_key(dotted, "empty material name");
      mats[idx] = e.value;
    } else {
      bad_key(dotted, "unknown layer attribute '" + rest + "'");
    }
  }
  if (rects.empty()) bad_key("domain", "no layers given");
  for (int i = 0; i < static_cast<int>(std::max(rects.size(), mats.size())); ++i) {
    if (!rects.count(i)) bad_key("domain.layer." + std::to_string(i), "missing rect (layers must be numbered 0..n-1)");
    if (!mats.count(i)) bad_key("domain.layer." + std::to_string(i) + ".material", "missing");
    LayerRect r = rects[i];
    r.material = mats[i];
    cfg.layers.push_back(std::move(r));
  }
}

void read_material(const std::string& name, const IniSection& sec, RunConfig& cfg) {
  MaterialSpec spec;
  spec.name = name;
  for (const IniEntry& e : sec) {
    const std::string dotted = "material." + name + "." + e.key;
    if (e.key == "model") {
      if (e.value != "linear" && e.value != "kiessl" && e.value != "kunzel")
        bad_key(dotted, "model must be linear, kiessl or kunzel");
      spec.model = e.value;
    } else if (e.key.rfind("curve.", 0) == 0) {
      spec.curves[e.key.substr(6)] = e.value;
    } else if (e.key.rfind("surface.", 0) == 0) {
      spec.surfaces[e.key.substr(8)] = e.value;
    } else {
      spec.numbers[e.key] = parse_numbers(dotted, e.value);
    }
  }
  if (spec.model.empty()) bad_key("material." + name + ".model", "missing");
  cfg.materials.push_back(std::move(spec));
}

void read_boundary(const std::string& side_name, const IniSection& sec, RunConfig& cfg) {
  auto side = side_from_string(side_name);
  if (!side) bad_key("boundary." + side_name, "side must be west, east, south or north");
  BoundarySpec spec;
  for (const IniEntry& e : sec) {
    const std::string dotted = "boundary." + side_name + "." + e.key;
    if (e.key == "alpha") {
      auto v = parse_numbers(dotted, e.value, 2);
      spec.alpha = {v[0], v[1]};
    } else if (e.key == "climate") {
      if (e.value.empty()) bad_key(dotted, "empty path");
      spec.climate = e.value;
    } else {
      bad_key(dotted, "unknown key (expected alpha / climate)");
    }
  }
  if (spec.climate.empty()) bad_key("boundary." + side_name + ".climate", "missing");
  cfg.boundaries[*side] = std::move(spec);
}

void read_initial(const IniSection& sec, RunConfig& cfg) {
  std::map<int, Vec2> vals;
  for (const IniEntry& e : sec) {
    int idx = 0;
    std::string rest;
    const std::string dotted = "initial." + e.key;
    if (!split_indexed(e.key, "layer", idx, rest) || !rest.empty())
      bad_key(dotted, "unknown key (expected layer.<n>)");
    auto v = parse_numbers(dotted, e.value, 2);
    vals[idx] = {v[0], v[1]};
  }
  for (int i = 0; i < static_cast<int>(vals.size()); ++i) {
    if (!vals.count(i)) bad_key("initial.layer." + std::to_string(i), "missing");
    cfg.initial.push_back(vals[i]);
  }
}

void read_solver(const IniSection& sec, RunConfig& cfg) {
  for (const IniEntry& e : sec) {
    const std::string dotted = "solver." + e.key;
    if (e.key == "strategy") {
      if (e.value == "picard") cfg.strategy = StrategyKind::Picard;
      else if (e.value == "semi-implicit") cfg.strategy = StrategyKind::SemiImplicit;
      else bad_key(dotted, "strategy must be picard or semi-implicit");
    } else if (e.key == "eps_fp") {
      cfg.controls.eps_fp = parse_one(dotted, e.value);
    } else if (e.key == "max_picard") {
      cfg.controls.max_picard = parse_int(dotted, e.value);
    } else if (e.key == "lin_tol") {
      cfg.controls.lin_tol = parse_one(dotted, e.value);
    } else if (e.key == "lin_maxiter") {
      cfg.controls.lin_maxiter = parse_int(dotted, e.value);
    } else {
      bad_key(dotted, "unknown key");
    }
  }
}

void read_output(const IniSection& sec, RunConfig& cfg) {
  for (const IniEntry& e : sec) {
    const std::string dotted = "output." + e.key;
    if (e.key == "dir") {
      cfg.output_dir = e.value;
    } else if (e.key == "snapshot") {
      cfg.snapshots.push_back(parse_one(dotted, e.value));
    } else if (e.key == "probe") {
      auto v = parse_numbers(dotted, e.value, 2);
      cfg.probes.push_back({v[0], v[1]});
    } else {
      bad_key(dotted, "unknown key");
    }
  }
}

void read_check(const IniSection& sec, RunConfig& cfg) {
  for (const IniEntry& e : sec) {
    const std::string dotted = "check." + e.key;
    if (e.key == "theta") {
      auto v = parse_numbers(dotted, e.value, 2);
      cfg.check.theta = {v[0], v[1]};
    } else if (e.key == "m") {
      auto v = parse_numbers(dotted, e.value, 2);
      cfg.check.m = {v[0], v[1]};
    } else if (e.key == "samples") {
      cfg.check.samples = parse_int(dotted, e.value);
    } else {
      bad_key(dotted, "unknown key");
    }
  }
}

void read_scalar_section(const std::string& name, const IniSection& sec, RunConfig& cfg) {
  for (const IniEntry& e : sec) {
    const std::string dotted = name + "." + e.key;
    if (name == "time" && e.key == "h_t") cfg.h_t = parse_one(dotted, e.value);
    else if (name == "time" && e.key == "t_end") cfg.t_end = parse_one(dotted, e.value);
    else if (name == "mesh" && e.key == "h_target") cfg.h_target = parse_one(dotted, e.value);
    else bad_key(dotted, "unknown key");
  }
}

std::string resolve_path(const RunConfig& cfg, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute() || cfg.base_dir.empty()) return path;
  return (std::filesystem::path(cfg.base_dir) / p).string();
}

const std::vector<double>& need_numbers(const MaterialSpec& spec, const std::string& key,
                                        size_t want) {
  auto it = spec.numbers.find(key);
  if (it == spec.numbers.end())
    bad_key("material." + spec.name + "." + key, "missing");
  if (it->second.size() != want)
    bad_key("material." + spec.name + "." + key,
            "expected " + std::to_string(want) + " numbers, got " +
                std::to_string(it->second.size()));
  return it->second;
}

double need_scalar(const MaterialSpec& spec, const std::string& key) {
  return need_numbers(spec, key, 1)[0];
}

MonotoneCurve need_curve(const RunConfig& cfg, const MaterialSpec& spec, const std::string& id) {
  auto it = spec.curves.find(id);
  if (it == spec.curves.end())
    bad_key("material." + spec.name + ".curve." + id, "missing");
  return load_curve_csv(resolve_path(cfg, it->second), spec.name + "." + id);
}

Surface2 need_surface(const RunConfig& cfg, const MaterialSpec& spec, const std::string& id) {
  auto it = spec.surfaces.find(id);
  if (it == spec.surfaces.end())
    bad_key("material." + spec.name + ".surface." + id, "missing");
  return load_surface_csv(resolve_path(cfg, it->second), spec.name + "." + id);
}

Mat2 to_mat2(const std::vector<double>& v) {
  return {{{v[0], v[1]}, {v[2], v[3]}}};
}

MaterialModel build_material(const RunConfig& cfg, const MaterialSpec& spec) {
  MaterialModel model;
  model.name = spec.name;
  if (spec.model == "linear") {
    LinearParams p;
    p.beta = to_mat2(need_numbers(spec, "beta", 4));
    p.kappa = to_mat2(need_numbers(spec, "kappa", 4));
    if (spec.numbers.count("nu")) {
      const auto& v = need_numbers(spec, "nu", 2);
      p.nu = {v[0], v[1]};
    }
    if (spec.numbers.count("fsrc")) {
      const auto& v = need_numbers(spec, "fsrc", 2);
      p.fsrc = {v[0], v[1]};
    }
    model.params = p;
  } else if (spec.model == "kiessl") {
    KiesslParams p;
    p.rho0 = need_scalar(spec, "rho0");
    p.c0 = need_scalar(spec, "c0");
    p.rho_w = need_scalar(spec, "rho_w");
    p.c_w = need_scalar(spec, "c_w");
    p.e = need_scalar(spec, "e");
    p.L_v = need_scalar(spec, "L_v");
    p.f = need_curve(cfg, spec, "f");
    p.g = need_curve(cfg, spec, "g");
    p.rho_ps = need_curve(cfg, spec, "rho_ps");
    p.lambda = need_surface(cfg, spec, "lambda");
    p.D_w = need_surface(cfg, spec, "D_w");
    p.D_phi = need_surface(cfg, spec, "D_phi");
    p.D_theta = need_surface(cfg, spec, "D_theta");
    p.validate();
    model.params = std::move(p);
  } else if (spec.model == "kunzel") {
    KunzelParams p;
    p.rho0 = need_scalar(spec, "rho0");
    p.c0 = need_scalar(spec, "c0");
    p.rho_w = need_scalar(spec, "rho_w");
    p.c_w = need_scalar(spec, "c_w");
    p.L_v = need_scalar(spec, "L_v");
    p.mu = need_scalar(spec, "mu");
    p.h = need_curve(cfg, spec, "h");
    p.p_s = need_curve(cfg, spec, "p_s");
    p.delta = need_curve(cfg, spec, "delta");
    p.lambda = need_surface(cfg, spec, "lambda");
    p.D_phi_hat = need_surface(cfg, spec, "D_phi_hat");
    p.validate();
    model.params = std::move(p);
  } else {
    bad_key("material." + spec.name + ".model", "unknown model '" + spec.model + "'");
  }
  return model;
}

} // namespace

RunConfig load_config(const std::string& path) {
  IniFile ini = parse_ini(path);
  RunConfig cfg;
  cfg.base_dir = std::filesystem::path(path).parent_path().string();
  bool saw_domain = false;
  for (const auto& [name, sec] : ini.sections) {
    if (name == "domain") {
      read_domain(sec, cfg);
      saw_domain = true;
    } else if (name.rfind("material.", 0) == 0) {
      read_material(name.substr(9), sec, cfg);
    } else if (name.rfind("boundary.", 0) == 0) {
      read_boundary(name.substr(9), sec, cfg);
    } else if (name == "initial") {
      read_initial(sec, cfg);
    } else if (name == "time" || name == "mesh") {
      read_scalar_section(name, sec, cfg);
    } else if (name == "solver") {
      read_solver(sec, cfg);
    } else if (name == "output") {
      read_output(sec, cfg);
    } else if (name == "check") {
      read_check(sec, cfg);
    } else {
      bad_key(name, "unknown section");
    }
  }
  if (!saw_domain) bad_key("domain", "missing section");

  // every layer must reference a declared material
  for (size_t i = 0; i < cfg.layers.size(); ++i) {
    const std::string& want = cfg.layers[i].material;
    auto it = std::find_if(cfg.materials.begin(), cfg.materials.end(),
                           [&](const MaterialSpec& m) { return m.name == want; });
    if (it == cfg.materials.end())
      bad_key("domain.layer." + std::to_string(i) + ".material",
              "no [material." + want + "] section");
  }
  if (!cfg.initial.empty() && cfg.initial.size() != cfg.layers.size())
    bad_key("initial", "state count does not match the layer count");
  if (!(cfg.h_t > 0) || !(cfg.t_end > 0)) bad_key("time", "h_t and t_end must be positive");
  if (!(cfg.h_target > 0)) bad_key("mesh.h_target", "must be positive");
  if (cfg.check.samples < 2) bad_key("check.samples", "need at least 2 per axis");
  return cfg;
}

void dump_config(const std::string& path, const RunConfig& cfg) {
  std::ofstream out(path);
  if (!out) raise(ErrorKind::IoError, "cannot write " + path);
  auto nums = [&](const std::vector<double>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt_g17(v[i]);
    return s;
  };
  out << "[domain]\n";
  for (size_t i = 0; i < cfg.layers.size(); ++i) {
    const LayerRect& r = cfg.layers[i];
    out << "layer." << i << ".rect = " << nums({r.x0, r.y0, r.x1, r.y1}) << "\n";
    out << "layer." << i << ".material = " << r.material << "\n";
  }
  for (const MaterialSpec& m : cfg.materials) {
    out << "\n[material." << m.name << "]\n";
    out << "model = " << m.model << "\n";
    for (const auto& [k, v] : m.numbers) out << k << " = " << nums(v) << "\n";
    for (const auto& [k, v] : m.curves) out << "curve." << k << " = " << v << "\n";
    for (const auto& [k, v] : m.surfaces) out << "surface." << k << " = " << v << "\n";
  }
  if (!cfg.initial.empty()) {
    out << "\n[initial]\n";
    for (size_t i = 0; i < cfg.initial.size(); ++i)
      out << "layer." << i << " = " << nums({cfg.initial[i][0], cfg.initial[i][1]}) << "\n";
  }
  for (const auto& [side, spec] : cfg.boundaries) {
    out << "\n[boundary." << to_string(side) << "]\n";
    out << "alpha = " << nums({spec.alpha[0], spec.alpha[1]}) << "\n";
    out << "climate = " << spec.climate << "\n";
  }
  out << "\n[mesh]\nh_target = " << fmt_g17(cfg.h_target) << "\n";
  out << "\n[time]\nh_t = " << fmt_g17(cfg.h_t) << "\nt_end = " << fmt_g17(cfg.t_end) << "\n";
  out << "\n[solver]\n";
  out << "strategy = " << (cfg.strategy == StrategyKind::Picard ? "picard" : "semi-implicit")
      << "\n";
  out << "eps_fp = " << fmt_g17(cfg.controls.eps_fp) << "\n";
  out << "max_picard = " << cfg.controls.max_picard << "\n";
  out << "lin_tol = " << fmt_g17(cfg.controls.lin_tol) << "\n";
  out << "lin_maxiter = " << cfg.controls.lin_maxiter << "\n";
  out << "\n[output]\n";
  out << "dir = " << cfg.output_dir << "\n";
  for (double s : cfg.snapshots) out << "snapshot = " << fmt_g17(s) << "\n";
  for (const Point& p : cfg.probes) out << "probe = " << nums({p.x, p.y}) << "\n";
  out << "\n[check]\n";
  out << "theta = " << nums({cfg.check.theta[0], cfg.check.theta[1]}) << "\n";
  out << "m = " << nums({cfg.check.m[0], cfg.check.m[1]}) << "\n";
  out << "samples = " << cfg.check.samples << "\n";
  if (!out) raise(ErrorKind::IoError, "short write to " + path);
}

std::vector<MaterialModel> build_materials(const RunConfig& cfg) {
  std::vector<MaterialModel> models;
  models.reserve(cfg.materials.size());
  for (const MaterialSpec& spec : cfg.materials) models.push_back(build_material(cfg, spec));
  return models;
}

RunSetup make_setup(const RunConfig& cfg) {
  RunSetup setup;
  setup.domain = build_domain(cfg.layers);
  std::vector<MaterialModel> by_spec = build_materials(cfg);
  setup.materials.reserve(cfg.layers.size());
  for (const LayerRect& r : cfg.layers) {
    auto it = std::find_if(by_spec.begin(), by_spec.end(),
                           [&](const MaterialModel& m) { return m.name == r.material; });
    if (it == by_spec.end())
      bad_key("domain.layer.material", "no [material." + r.material + "] section");
    setup.materials.push_back(*it);
  }
  if (cfg.initial.empty())
    bad_key("initial", "missing section");
  setup.initial = cfg.initial;
  for (const auto& [side, spec] : cfg.boundaries) {
    BoundaryDrive d;
    d.alpha = spec.alpha;
    d.sigma = load_climate_csv(resolve_path(cfg, spec.climate));
    setup.drives.by_side[side] = std::move(d);
  }
  setup.h_target = cfg.h_target;
  setup.h_t = cfg.h_t;
  setup.t_end = cfg.t_end;
  setup.strategy = cfg.strategy;
  setup.controls = cfg.controls;
  setup.snapshot_times = cfg.snapshots;
  setup.probes = cfg.probes;
  return setup;
}

} // namespace hms
