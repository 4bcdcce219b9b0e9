#include "nvist/io.hpp"

#include <bit>
#include <fstream>
#include <iomanip>
#include <json.hpp>

#include "nvist/errors.hpp"

namespace nvist {

static_assert(std::endian::native == std::endian::little, "binary bundles assume a little-endian host");

using nlohmann::json;

namespace {

fs::path with_suffix(const fs::path& stem, const char* suffix) { return fs::path(stem.string() + suffix); }

void write_json(const json& j, const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << std::setw(2) << j << '\n';
}

json read_json(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw ConfigError("cannot read " + p.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError("malformed " + p.string() + ": " + e.what());
  }
}

template <class Array>
void write_raw(const Array& a, const fs::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os.write(reinterpret_cast<const char*>(a.data()), static_cast<std::streamsize>(a.size() * sizeof(*a.data())));
}

template <class Array>
void read_raw(Array& a, const fs::path& p) {
  std::ifstream is(p, std::ios::binary | std::ios::ate);
  if (!is) throw ConfigError("cannot read " + p.string());
  const auto bytes = static_cast<std::size_t>(is.tellg());
  if (bytes != a.size() * sizeof(*a.data())) throw ConfigError("size mismatch in " + p.string());
  is.seekg(0);
  is.read(reinterpret_cast<char*>(a.data()), static_cast<std::streamsize>(bytes));
}

json grid_header(const Grid2D& g) {
  return {{"n", g.n}, {"L", g.L}, {"kind", to_string(g.kind)}, {"dtype", "c128"}};
}

Grid2D grid_from_header(const json& j) {
  if (j.value("dtype", "") != "c128") throw ConfigError("unsupported dtype");
  const double L = j.at("L").get<double>();
  const int n = j.at("n").get<int>();
  const GridKind kind = grid_kind_from_string(j.at("kind").get<std::string>());
  // k-grids only need an even size; make_kgrid checks them
  return kind == GridKind::k ? make_kgrid(L, n).grid() : make_grid(L, n, kind);
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }
Complex complex_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

void write_field(const Field& f, const fs::path& stem) {
  write_json(grid_header(f.grid), with_suffix(stem, ".json"));
  write_raw(f.values, with_suffix(stem, ".bin"));
}

Field read_field(const fs::path& stem) {
  Field f(grid_from_header(read_json(with_suffix(stem, ".json"))));
  read_raw(f.values, with_suffix(stem, ".bin"));
  return f;
}

void write_scattering(const ScatteringData& sd, const fs::path& stem) {
  json j = grid_header(sd.kgrid.grid());
  j["tau"] = sd.tau;
  j["k_min_cells"] = sd.kgrid.k_min_cells;
  j["ray_spec"] = {{"k_lo", sd.kgrid.ray.k_lo},
                   {"k_hi", sd.kgrid.ray.k_hi},
                   {"count", sd.kgrid.ray.count},
                   {"angle", sd.kgrid.ray.angle}};
  json ray = json::array();
  for (const RaySample& r : sd.ray)
    ray.push_back({{"k", complex_json(r.k)},
                   {"t", complex_json(r.t)},
                   {"exceptional", r.exceptional},
                   {"mu_sup_dev", r.mu_sup_dev},
                   {"iterations", r.iterations}});
  j["ray"] = ray;
  json rings = json::array();
  for (const ExceptionalRing& r : sd.rings) rings.push_back({{"radius", r.radius}, {"mu_sup_dev", r.mu_sup_dev}});
  j["rings"] = rings;
  j["max_iterations"] = sd.max_iterations;
  write_json(j, with_suffix(stem, ".json"));
  write_raw(sd.t, with_suffix(stem, ".bin"));
  write_raw(sd.mask, with_suffix(stem, ".mask.bin"));
}

ScatteringData read_scattering(const fs::path& stem) {
  const json j = read_json(with_suffix(stem, ".json"));
  const Grid2D g = grid_from_header(j);
  if (g.kind != GridKind::k) throw ConfigError("scattering bundle must have kind \"k\"");
  RaySpec ray;
  if (j.contains("ray_spec")) {
    const json& r = j["ray_spec"];
    ray = RaySpec{r.at("k_lo").get<double>(), r.at("k_hi").get<double>(), r.at("count").get<int>(),
                  r.at("angle").get<double>()};
  }
  ScatteringData sd = empty_scattering_data(make_kgrid(g.L, g.n, j.value("k_min_cells", 2), ray));
  sd.tau = j.value("tau", 0.0);
  read_raw(sd.t, with_suffix(stem, ".bin"));
  read_raw(sd.mask, with_suffix(stem, ".mask.bin"));
  sd.ray.clear();
  for (const json& r : j.value("ray", json::array()))
    sd.ray.push_back({complex_from(r.at("k")), complex_from(r.at("t")), r.at("exceptional").get<bool>(),
                      r.at("mu_sup_dev").get<double>(), r.at("iterations").get<int>()});
  for (const json& r : j.value("rings", json::array()))
    sd.rings.push_back({r.at("radius").get<double>(), r.at("mu_sup_dev").get<double>()});
  sd.max_iterations = j.value("max_iterations", 0);
  refresh_s(sd);
  return sd;
}

void write_field_csv_row(const Field& f, int col, const fs::path& path) {
  if (col < 0 || col >= f.grid.n) throw ConfigError("csv slice index out of range");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << std::setprecision(17) << "x1,x2,re,im\n";
  for (int i = 0; i < f.grid.n; ++i) {
    const Complex x = f.grid.point(i, col);
    const Complex v = f.values(i, col);
    os << x.real() << ',' << x.imag() << ',' << v.real() << ',' << v.imag() << '\n';
  }
}

void write_scattering_csv(const ScatteringData& sd, const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << std::setprecision(17) << "k1,k2,re_t,im_t,masked\n";
  for (int a = 0; a < sd.kgrid.m; ++a)
    for (int b = 0; b < sd.kgrid.m; ++b) {
      const Complex k = sd.kgrid.point(a, b);
      const Complex t = sd.t(a, b);
      os << k.real() << ',' << k.imag() << ',' << t.real() << ',' << t.imag() << ',' << int(sd.mask(a, b)) << '\n';
    }
}

}  // namespace nvist
