#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "helmprec/grid.hpp"

using namespace helmprec;

namespace {

ComplexField random_field(const Grid2D& g, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  ComplexField f(g);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = {d(rng), d(rng)};
  return f;
}

}  // namespace

TEST_CASE("make_grid spacing and coordinates") {
  const Grid2D g = make_grid(4, 1.0);
  CHECK(g.spacing() == 0.25);
  CHECK(g.x1(0) == -0.5);
  CHECK(g.x2(0) == -0.5);
  CHECK(make_grid(480, 1.0).spacing() == doctest::Approx(1.0 / 480).epsilon(1e-15));
  CHECK_THROWS_AS(make_grid(5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8, 0.0), std::invalid_argument);
}

TEST_CASE("wavenumbers in FFT ordering") {
  const auto w = wavenumbers(make_grid(4, 1.0));
  const double tp = 2.0 * std::numbers::pi;
  REQUIRE(w.xi1.size() == 4);
  CHECK(w.xi1[0] == 0.0);
  CHECK(w.xi1[1] == doctest::Approx(tp));
  CHECK(w.xi1[2] == doctest::Approx(-2 * tp));
  CHECK(w.xi1[3] == doctest::Approx(-tp));

  const auto u = wavenumbers(make_grid(4, tp));
  CHECK(u.xi1[1] == doctest::Approx(1.0));
  CHECK(u.xi1[2] == doctest::Approx(-2.0));
  CHECK(u.xi1[3] == doctest::Approx(-1.0));

  const Grid2D g8 = make_grid(8, 1.0);
  const auto w8 = wavenumbers(g8);
  CHECK(w8.xiSq[g8.index(4, 4)] == doctest::Approx(2 * std::pow(tp * 4, 2)));
}

TEST_CASE("wavenumber symmetry is exact") {
  for (int n : {4, 6, 16, 30}) {
    const Grid2D g = make_grid(n, 1.3);
    const auto w = wavenumbers(g);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(w.xiSq[g.index((n - i) % n, (n - j) % n)] == w.xiSq[g.index(i, j)]);
  }
}

TEST_CASE("fft2 of constant and pure mode") {
  const Grid2D g = make_grid(16, 1.0);
  const ComplexField one(g, Complex(1.0, 0.0));
  const ComplexField c = fft2(one);
  CHECK(std::abs(c(0, 0) - Complex(256.0, 0.0)) < 1e-12);
  double rest = 0;
  for (std::size_t k = 1; k < c.size(); ++k) rest = std::max(rest, std::abs(c[k]));
  CHECK(rest < 1e-12);

  ComplexField mode(g);
  const int k1 = 3, k2 = 13;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      mode(i, j) = std::exp(Complex(0, 2 * std::numbers::pi * (k1 * g.x1(i) + k2 * g.x2(j))));
  const ComplexField m = fft2(mode);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      if (i == k1 && j == k2)
        CHECK(std::abs(m(i, j)) == doctest::Approx(256.0));
      else
        CHECK(std::abs(m(i, j)) < 1e-10);
    }
}

TEST_CASE("fft round trip over random fields") {
  std::mt19937_64 rng(7);
  const Grid2D g = make_grid(32, 1.0);
  for (int t = 0; t < 100; ++t) {
    const ComplexField v = random_field(g, rng);
    const ComplexField r = ifft2(fft2(v));
    CHECK(max_abs(r - v) <= 1e-13 * max_abs(v));
  }
}

TEST_CASE("Parseval ratio depends only on N") {
  std::mt19937_64 rng(11);
  for (int n : {8, 24, 64}) {
    const Grid2D g = make_grid(n, 1.0);
    for (int t = 0; t < 5; ++t) {
      const ComplexField v = random_field(g, rng);
      CHECK(norm2(fft2(v)) / norm2(v) == doctest::Approx(n).epsilon(1e-12));
    }
  }
}

TEST_CASE("fft linearity") {
  std::mt19937_64 rng(3);
  const Grid2D g = make_grid(12, 1.0);
  const ComplexField u = random_field(g, rng), v = random_field(g, rng);
  const Complex a(0.3, -1.2), b(2.0, 0.5);
  const ComplexField lhs = fft2(a * u + b * v);
  const ComplexField rhs = a * fft2(u) + b * fft2(v);
  CHECK(max_abs(lhs - rhs) <= 1e-12 * max_abs(lhs));
}

TEST_CASE("grid mismatch is rejected") {
  const ComplexField u(make_grid(8, 1.0)), v(make_grid(10, 1.0));
  CHECK_THROWS_AS(u - v, std::invalid_argument);
  CHECK_THROWS_AS(dot(u, v), std::invalid_argument);
}

TEST_CASE("HPF1 round trip is bit exact") {
  std::mt19937_64 rng(5);
  const Grid2D g = make_grid(6, 0.75);
  const ComplexField v = random_field(g, rng);
  std::stringstream buf;
  write_hpf1(buf, v);
  const std::string bytes = buf.str();
  CHECK(bytes.rfind("HPF1 N=6 L=0.75\n", 0) == 0);
  CHECK(bytes.size() == std::string("HPF1 N=6 L=0.75\n").size() + 36 * 16);
  const ComplexField r = read_hpf1(buf);
  CHECK(r.grid() == g);
  for (std::size_t k = 0; k < v.size(); ++k) CHECK(r[k] == v[k]);
}
