#include <doctest.h>

#include "nvist/errors.hpp"
#include "nvist/fft.hpp"
#include "nvist/grid.hpp"

using namespace nvist;

TEST_CASE("make_grid spacing") {
  CHECK(make_grid(4.0, 128).h() == doctest::Approx(0.0625));
  CHECK(make_grid(6.0, 256).h() == doctest::Approx(0.046875));
  const Grid2D g = make_grid(4.0, 128);
  CHECK(g.h() * g.n == doctest::Approx(2.0 * g.L));
}

TEST_CASE("make_grid rejects bad input") {
  CHECK_THROWS_AS(make_grid(4.0, 100), ConfigError);
  CHECK_THROWS_AS(make_grid(4.0, 8), ConfigError);
  CHECK_THROWS_AS(make_grid(0.0, 64), ConfigError);
  CHECK_THROWS_AS(make_grid(-1.0, 64), ConfigError);
}

TEST_CASE("sample coordinates and frequencies") {
  const Grid2D g = make_grid(4.0, 16);
  CHECK(g.point(0, 0) == Complex(-4.0, -4.0));
  CHECK(g.point(3, 5) == Complex(-4.0 + 3 * 0.5, -4.0 + 5 * 0.5));
  CHECK(g.frequency(1) == doctest::Approx(M_PI / 4.0));
  CHECK(g.frequency(8) == doctest::Approx(-8 * M_PI / 4.0));
  CHECK(g.frequency(15) == doctest::Approx(-M_PI / 4.0));
}

TEST_CASE("fft roundtrip preserves values") {
  const Grid2D g = make_grid(3.0, 64);
  Field f = Field::sample(g, [](Complex z) { return std::exp(-std::norm(z)) * (1.0 + z); });
  ComplexArray a = f.values;
  fft2(a);
  ifft2(a);
  CHECK((a - f.values).abs().maxCoeff() <= 1e-12 * f.sup());
}

TEST_CASE("fft matches the direct sum convention") {
  ComplexArray a(4, 6);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 6; ++j) a(i, j) = Complex(i + 0.5 * j, i * j - 1.0);
  ComplexArray b = a;
  fft2(b);
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 6; ++q) {
      Complex s = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 6; ++j)
          s += a(i, j) * std::polar(1.0, -2 * M_PI * (double(p * i) / 4 + double(q * j) / 6));
      CHECK(std::abs(s - b(p, q)) < 1e-12);
    }
}

TEST_CASE("fft_friendly_size") {
  CHECK(fft_friendly_size(7) == 8);
  CHECK(fft_friendly_size(185) == 192);
  CHECK(fft_friendly_size(256) == 256);
  CHECK(fft_friendly_size(97) == 100);
}

TEST_CASE("embed and crop") {
  const Grid2D g = make_grid(2.0, 16);
  const Field f = Field::sample(g, [](Complex x) { return x * x + 1.0; });
  const Field w = embed(f, 4);
  CHECK(w.grid.L == 8.0);
  CHECK(w.grid.n == 64);
  CHECK(w.grid.h() == g.h());
  CHECK(w.grid.point(24, 24) == g.point(0, 0));
  CHECK(w.values.abs().sum() == doctest::Approx(f.values.abs().sum()));
  CHECK((crop(w, g).values == f.values).all());
  CHECK((embed(f, 1).values == f.values).all());
  CHECK_THROWS_AS(embed(f, 3), ConfigError);
  CHECK_THROWS_AS(crop(w, make_grid(2.0, 32)), ConfigError);
  CHECK_THROWS_AS(crop(f, w.grid), ConfigError);
}
