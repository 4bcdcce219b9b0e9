#include "nvist/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include "nvist/errors.hpp"

namespace nvist {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size()) throw ConfigError("bad number for " + key + ": '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  int x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size()) throw ConfigError("bad integer for " + key + ": '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean for " + key + ": '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"xgrid.L", [](RunConfig& c, const std::string& v) { c.L = to_double("L", v); }},
      {"xgrid.n", [](RunConfig& c, const std::string& v) { c.n = to_int("n", v); }},
      {"kgrid.k_max", [](RunConfig& c, const std::string& v) { c.k_max = to_double("k_max", v); }},
      {"kgrid.m", [](RunConfig& c, const std::string& v) { c.m = to_int("m", v); }},
      {"kgrid.k_min_cells", [](RunConfig& c, const std::string& v) { c.k_min_cells = to_int("k_min_cells", v); }},
      {"kgrid.ray_k_lo", [](RunConfig& c, const std::string& v) { c.ray.k_lo = to_double("ray_k_lo", v); }},
      {"kgrid.ray_k_hi", [](RunConfig& c, const std::string& v) { c.ray.k_hi = to_double("ray_k_hi", v); }},
      {"kgrid.ray_count", [](RunConfig& c, const std::string& v) { c.ray.count = to_int("ray_count", v); }},
      {"kgrid.ray_angle", [](RunConfig& c, const std::string& v) { c.ray.angle = to_double("ray_angle", v); }},
      {"potential.family",
       [](RunConfig& c, const std::string& v) { c.potential.family = potential_family_from_string(v); }},
      {"potential.beta", [](RunConfig& c, const std::string& v) { c.potential.beta = to_double("beta", v); }},
      {"potential.center_x1",
       [](RunConfig& c, const std::string& v) { c.potential.center.real(to_double("center_x1", v)); }},
      {"potential.center_x2",
       [](RunConfig& c, const std::string& v) { c.potential.center.imag(to_double("center_x2", v)); }},
      {"potential.radius", [](RunConfig& c, const std::string& v) { c.potential.radius = to_double("radius", v); }},
      {"potential.epsilon", [](RunConfig& c, const std::string& v) { c.potential.epsilon = to_double("epsilon", v); }},
      {"tolerances.cgo_tol", [](RunConfig& c, const std::string& v) { c.tol.cgo_tol = to_double("cgo_tol", v); }},
      {"tolerances.dbar_tol", [](RunConfig& c, const std::string& v) { c.tol.dbar_tol = to_double("dbar_tol", v); }},
      {"tolerances.tol_eig", [](RunConfig& c, const std::string& v) { c.tol.tol_eig = to_double("tol_eig", v); }},
      {"tolerances.reality_tol",
       [](RunConfig& c, const std::string& v) { c.tol.reality_tol = to_double("reality_tol", v); }},
      {"tolerances.sym_tol", [](RunConfig& c, const std::string& v) { c.tol.sym_tol = to_double("sym_tol", v); }},
      {"run.tau", [](RunConfig& c, const std::string& v) { c.tau_schedule = to_list("tau", v); }},
      {"run.dtau", [](RunConfig& c, const std::string& v) { c.dtau = to_double("dtau", v); }},
      {"run.subk_model", [](RunConfig& c, const std::string& v) { c.subk_model = to_bool("subk_model", v); }},
      {"run.workers", [](RunConfig& c, const std::string& v) { c.workers = to_int("workers", v); }},
      {"run.recon_n", [](RunConfig& c, const std::string& v) { c.recon_n = to_int("recon_n", v); }},
      {"run.recon_extend", [](RunConfig& c, const std::string& v) { c.recon_extend = to_int("recon_extend", v); }},
      {"run.allow_supercritical",
       [](RunConfig& c, const std::string& v) { c.allow_supercritical = to_bool("allow_supercritical", v); }},
      {"run.output_dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
  };
  return table;
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  static const std::vector<std::string> sections = {"xgrid", "kgrid", "potential", "tolerances", "run"};
  RunConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    line = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (std::find(sections.begin(), sections.end(), section) == sections.end())
        throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside any section");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    const auto it = setters().find(section + "." + key);
    if (it == setters().end()) throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
    try {
      it->second(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    } catch (const std::exception& e) {
      throw ConfigError(where + e.what());
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_config(in);
}

void validate(const RunConfig& c) {
  make_grid(c.L, c.n);
  make_kgrid(c.k_max, c.m, c.k_min_cells, c.ray);
  const Tolerances& t = c.tol;
  for (double v : {t.cgo_tol, t.dbar_tol, t.tol_eig, t.reality_tol, t.sym_tol})
    if (!(v > 0.0)) throw ConfigError("tolerances must be positive");
  if (c.tau_schedule.empty()) throw ConfigError("tau schedule is empty");
  if (!std::is_sorted(c.tau_schedule.begin(), c.tau_schedule.end())) throw ConfigError("tau schedule must be sorted");
  if (!(c.dtau > 0.0)) throw ConfigError("dtau must be positive");
  if (c.workers < 1) throw ConfigError("workers must be at least 1");
  if (c.recon_n < 16 || !is_power_of_two(c.recon_n)) throw ConfigError("recon_n must be a power of two >= 16");
  if (!is_power_of_two(c.recon_extend)) throw ConfigError("recon_extend must be a power of two");
  if (c.potential.beta <= -1.0) throw ConfigError("conductivity amplitude beta must exceed -1");
  if (!(c.potential.radius > 0.0)) throw ConfigError("bump radius must be positive");
}

std::string to_ini(const RunConfig& c) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "[xgrid]\nL = " << c.L << "\nn = " << c.n << "\n\n";
  os << "[kgrid]\nk_max = " << c.k_max << "\nm = " << c.m << "\nk_min_cells = " << c.k_min_cells
     << "\nray_k_lo = " << c.ray.k_lo << "\nray_k_hi = " << c.ray.k_hi << "\nray_count = " << c.ray.count
     << "\nray_angle = " << c.ray.angle << "\n\n";
  os << "[potential]\nfamily = " << to_string(c.potential.family) << "\nbeta = " << c.potential.beta
     << "\ncenter_x1 = " << c.potential.center.real() << "\ncenter_x2 = " << c.potential.center.imag()
     << "\nradius = " << c.potential.radius << "\nepsilon = " << c.potential.epsilon << "\n\n";
  os << "[tolerances]\ncgo_tol = " << c.tol.cgo_tol << "\ndbar_tol = " << c.tol.dbar_tol
     << "\ntol_eig = " << c.tol.tol_eig << "\nreality_tol = " << c.tol.reality_tol << "\nsym_tol = " << c.tol.sym_tol
     << "\n\n";
  os << "[run]\ntau = ";
  for (std::size_t i = 0; i < c.tau_schedule.size(); ++i) os << (i ? ", " : "") << c.tau_schedule[i];
  os << "\ndtau = " << c.dtau << "\nsubk_model = " << (c.subk_model ? "true" : "false") << "\nworkers = " << c.workers
     << "\nrecon_n = " << c.recon_n
     << "\nrecon_extend = " << c.recon_extend << "\nallow_supercritical = " << (c.allow_supercritical ? "true" : "false")
     << "\noutput_dir = " << c.output_dir << "\n";
  return os.str();
}

KGrid kgrid_of(const RunConfig& c) { return make_kgrid(c.k_max, c.m, c.k_min_cells, c.ray); }
Grid2D xgrid_of(const RunConfig& c) { return make_grid(c.L, c.n); }

}  // namespace nvist
