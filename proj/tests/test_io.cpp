#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "nvist/errors.hpp"
#include "nvist/io.hpp"
#include "nvist/potentials.hpp"

using namespace nvist;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "nvist_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string s; std::getline(in, s);) out.push_back(s);
  return out;
}

ScatteringData sample_data() {
  ScatteringData sd = empty_scattering_data(make_kgrid(3.0, 48, 3, RaySpec{1e-3, 1e-1, 5, 0.2}));
  sd.ray.clear();
  for (int a = 0; a < sd.kgrid.m; ++a)
    for (int b = 0; b < sd.kgrid.m; ++b)
      if (sd.mask(a, b) == kData) sd.t(a, b) = std::exp(-std::norm(sd.kgrid.point(a, b))) * Complex(1.0, 0.1 * a);
  sd.mask(5, 7) = kExceptional;
  sd.t(5, 7) = 0.0;
  refresh_s(sd);
  sd.tau = 0.05;
  sd.ray.push_back({Complex(0.01, 0.002), Complex(-0.3, 0.01), false, 0.02, 4});
  sd.ray.push_back({Complex(0.1, 0.02), Complex(-0.5, 0.0), true, 3.5, 300});
  sd.rings.push_back({0.07, 4.2});
  sd.max_iterations = 11;
  return sd;
}

}  // namespace

TEST_CASE("field bundle round-trips bit for bit") {
  const Grid2D g = make_grid(4.0, 32);
  Field f = conductivity_potential(g, PotentialSpec{});
  f.values(3, 4) = Complex(1.0 / 3.0, -2e-300);
  const fs::path stem = scratch("field");
  write_field(f, stem);
  const Field r = read_field(stem);
  CHECK(r.grid == g);
  CHECK((r.values == f.values).all());
  const auto header = nlohmann::json::parse(std::ifstream(stem.string() + ".json"));
  CHECK(header["dtype"] == "c128");
  CHECK(header["kind"] == "x");
  CHECK(fs::file_size(stem.string() + ".bin") == 32u * 32u * 16u);
}

TEST_CASE("scattering bundle keeps t, mask, tau and the ray") {
  const ScatteringData sd = sample_data();
  const fs::path stem = scratch("scattering");
  write_scattering(sd, stem);
  const ScatteringData r = read_scattering(stem);
  CHECK(r.kgrid.m == 48);
  CHECK(r.kgrid.k_max == 3.0);
  CHECK(r.kgrid.k_min_cells == 3);
  CHECK(r.kgrid.ray.count == 5);
  CHECK(r.tau == 0.05);
  CHECK((r.t == sd.t).all());
  CHECK((r.s == sd.s).all());
  CHECK((r.mask == sd.mask).all());
  REQUIRE(r.ray.size() == 2);
  CHECK(r.ray[1].exceptional);
  CHECK(r.ray[1].k == sd.ray[1].k);
  CHECK(r.ray[0].t == sd.ray[0].t);
  CHECK(r.ray[0].iterations == 4);
  REQUIRE(r.rings.size() == 1);
  CHECK(r.rings[0].radius == 0.07);
  CHECK(r.max_iterations == 11);
  CHECK(r.exceptional_count() == sd.exceptional_count());
}

TEST_CASE("damaged bundles are rejected") {
  const Grid2D g = make_grid(2.0, 16);
  const fs::path stem = scratch("damaged");
  write_field(Field(g), stem);
  fs::resize_file(stem.string() + ".bin", 100);
  CHECK_THROWS_AS(read_field(stem), ConfigError);
  CHECK_THROWS_AS(read_field(scratch("missing")), ConfigError);
  std::ofstream(stem.string() + ".json") << "{\"n\": 16, \"L\": 2, \"kind\": \"x\", \"dtype\": \"f32\"}";
  CHECK_THROWS_AS(read_field(stem), ConfigError);
  std::ofstream(stem.string() + ".json") << "{not json";
  CHECK_THROWS_AS(read_field(stem), ConfigError);
  write_field(Field(g), stem);
  CHECK_THROWS_AS(read_scattering(stem), ConfigError);
}

TEST_CASE("csv exports") {
  const Grid2D g = make_grid(2.0, 16);
  Field f(g);
  f.values(4, 9) = Complex(0.5, -0.25);
  const fs::path p = scratch("row.csv");
  write_field_csv_row(f, 9, p);
  const auto rows = lines(p);
  REQUIRE(rows.size() == 17);
  CHECK(rows[0] == "x1,x2,re,im");
  CHECK(rows[5] == "-1,0.25,0.5,-0.25");
  CHECK_THROWS_AS(write_field_csv_row(f, 16, p), ConfigError);

  const ScatteringData sd = sample_data();
  const fs::path q = scratch("t.csv");
  write_scattering_csv(sd, q);
  const auto trows = lines(q);
  REQUIRE(trows.size() == 48u * 48u + 1);
  CHECK(trows[0] == "k1,k2,re_t,im_t,masked");
  CHECK(trows[1 + 5 * 48 + 7].substr(trows[1 + 5 * 48 + 7].size() - 2) == ",2");
}
