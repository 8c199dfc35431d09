#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "helmprec/operators.hpp"

using namespace helmprec;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexField random_field(const Grid2D& g, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  ComplexField f(g);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = {d(rng), d(rng)};
  return f;
}

ComplexField mode(const Grid2D& g, int k1, int k2) {
  ComplexField f(g);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      f(i, j) = std::exp(Complex(0, 2 * kPi * (k1 * g.x1(i) + k2 * g.x2(j)) / g.side()));
  return f;
}

}  // namespace

TEST_CASE("FD operator on a constant field") {
  const Grid2D g = make_grid(32, 1.0);
  const auto p = make_params(10.0, make_circular_inclusion(g, 1.0, 3.0, 0.02, 0.05, 7.5));
  const ComplexField u(g, Complex(1.0, 0.0));
  const ComplexField r = apply_helmholtz_fd(p, u);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(r[k] - Complex(100.0, 75.0)) < 1e-9);
}

TEST_CASE("FD operator diagonalised by Fourier modes") {
  const Grid2D g = make_grid(16, 1.0);
  const auto p = make_params(4 * kPi, make_constant_medium(g, 1.3, 20.0));
  for (int k1 = 0; k1 < 16; ++k1)
    for (int k2 = 0; k2 < 16; ++k2) {
      const ComplexField e = mode(g, k1, k2);
      const ComplexField r = apply_helmholtz_fd(p, e);
      const Complex lam = fd_symbol(p, k1, k2);
      CHECK(max_abs(r - lam * e) <= 1e-12 * std::abs(lam));
    }
}

TEST_CASE("FD closed form values") {
  const Grid2D g = make_grid(16, 1.0);
  const auto p = make_params(2 * kPi, make_constant_medium(g, 1.0, 1e-300));
  const double expected = 4 * kPi * kPi - 4.0 * 256.0 * std::pow(std::sin(kPi / 16), 2);
  const ComplexField e = mode(g, 1, 0);
  const ComplexField r = apply_helmholtz_fd(p, e);
  CHECK(max_abs(r - Complex(expected, 0) * e) <= 1e-12 * std::abs(expected));
  CHECK(fd_symbol(p, 1, 0).real() == doctest::Approx(expected).epsilon(1e-13));

  const auto q = make_params(3.0, make_constant_medium(g, 2.0, 5.0));
  CHECK(fd_symbol(q, 0, 0) == Complex(9.0, 15.0));
  const Complex nyq = fd_symbol(q, 8, 0);
  CHECK(nyq.real() == doctest::Approx(9.0 - 4.0 * 4.0 * 256.0));
  CHECK(nyq.imag() == doctest::Approx(15.0));
  CHECK_THROWS_AS(fd_symbol(make_params(3.0, make_circular_inclusion(g, 1.0, 1.0, 0.02)), 0, 0),
                  std::invalid_argument);
}

TEST_CASE("FD operator linearity") {
  std::mt19937_64 rng(21);
  const Grid2D g = make_grid(24, 1.0);
  const auto p = make_params(8 * kPi, make_phantom(g), true);
  const ComplexField u = random_field(g, rng), v = random_field(g, rng);
  const Complex a(0.7, -0.2), b(-1.1, 2.3);
  const HelmholtzOperator op(p);
  const ComplexField lhs = op(a * u + b * v);
  const ComplexField rhs = a * op(u) + b * op(v);
  CHECK(max_abs(lhs - rhs) <= 1e-12 * max_abs(lhs));
}

TEST_CASE("FD operator rejects a foreign grid") {
  const auto p = make_params(1.0, make_constant_medium(make_grid(8, 1.0), 1.0, 1.0));
  CHECK_THROWS_AS(apply_helmholtz_fd(p, ComplexField(make_grid(10, 1.0))), std::invalid_argument);
}

TEST_CASE("layer operator uses gamma squared") {
  const Grid2D g = make_grid(8, 1.0);
  MediaModel m = make_constant_medium(g, 1.0, 20.0);
  m.zeta[g.index(3, 3)] = 0.1;
  const auto p = make_params(5.0, m, true);
  ComplexField d(g);
  d(3, 3) = 1.0;
  const ComplexField r = apply_helmholtz_fd(p, d);
  const Complex gamma(1.0, -0.1);
  const double inv = 1.0 / (g.spacing() * g.spacing());
  CHECK(std::abs(r(3, 3) - (-4.0 * gamma * gamma * inv + Complex(25.0, 100.0))) < 1e-9);
  CHECK(std::abs(r(3, 4) - 1.0 * inv) < 1e-9);
}

TEST_CASE("spectral operator") {
  const Grid2D g = make_grid(16, 1.0);
  const auto p = make_params(5.0, make_constant_medium(g, 1.5, 2.0));
  const ComplexField one(g, Complex(1.0, 0.0));
  CHECK(max_abs(apply_helmholtz_spectral(p, one) - Complex(25.0, 10.0) * one) < 1e-10);
  const ComplexField e = mode(g, 3, -5);
  const double xiSq = std::pow(2 * kPi * 3, 2) + std::pow(2 * kPi * 5, 2);
  const Complex lam = Complex(25.0, 10.0) - 2.25 * xiSq;
  CHECK(max_abs(apply_helmholtz_spectral(p, e) - lam * e) <= 1e-12 * std::abs(lam));
}

TEST_CASE("spectral versus FD is second order") {
  double prev = 0;
  for (int n : {16, 32, 64, 128}) {
    const Grid2D g = make_grid(n, 1.0);
    const auto p = make_params(2 * kPi, make_constant_medium(g, 1.0, 20.0));
    const ComplexField e = mode(g, 2, 1);
    const ComplexField fd = apply_helmholtz_fd(p, e);
    const ComplexField sp = apply_helmholtz_spectral(p, e);
    const double err = max_abs(fd - sp) / max_abs(sp);
    if (prev > 0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("plane wave source") {
  const Grid2D g = make_grid(16, 1.0);
  const ComplexField f = plane_wave_source(g, 4 * kPi, 1.0);
  CHECK(std::abs(f(8, 3) - Complex(1.0, 0.0)) < 1e-15);
  for (std::size_t k = 0; k < f.size(); ++k) CHECK(std::abs(f[k]) == doctest::Approx(1.0));
  const ComplexField c = fft2(f);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      if (i == 2 && j == 0)
        CHECK(std::abs(c(i, j)) == doctest::Approx(256.0));
      else
        CHECK(std::abs(c(i, j)) < 1e-10);
    }
}

TEST_CASE("Gaussian beam") {
  const Grid2D g = make_grid(200, 1.0);
  GaussianBeamParams beam;
  beam.omega = 400 * kPi;
  CHECK(beam.rayleigh_range() == doctest::Approx(0.0628318530718).epsilon(1e-10));
  const Complex k = beam.wavenumber();
  CHECK(k.real() > 0);
  CHECK(std::abs(k * k - std::pow(beam.omega / beam.c_o, 2) * Complex(1.0, beam.a_o / beam.omega)) <
        1e-6 * std::norm(k));
  const ComplexField u = gaussian_beam(g, beam);
  CHECK(std::abs(u(100, 160) - Complex(1.0, 0.0)) < 1e-12);
  for (int j : {20, 100, 160, 190}) {
    for (int i = 100; i < 199; ++i) CHECK(std::abs(u(i + 1, j)) <= std::abs(u(i, j)));
    for (int i = 100; i > 0; --i) CHECK(std::abs(u(i - 1, j)) <= std::abs(u(i, j)));
  }
}

TEST_CASE("Gaussian beam stays bounded below the focus") {
  const Grid2D g = make_grid(240, 1.0);
  GaussianBeamParams beam;
  beam.omega = 40 * kPi;
  const ComplexField u = gaussian_beam(g, beam);
  double below = 0;
  for (int i = 0; i < 240; ++i)
    for (int j = 0; j < 240; ++j)
      if (g.x2(j) <= beam.focus2) below = std::max(below, std::abs(u(i, j)));
  CHECK(below <= 1.0 + 1e-12);

  beam.literalCurvature = true;
  const ComplexField lit = gaussian_beam(g, beam);
  CHECK(std::abs(lit(100, 120) - u(100, 120)) > 0.0);
  CHECK(max_abs(lit) > 1e3);
}

TEST_CASE("scattering source") {
  const Grid2D g = make_grid(8, 1.0);
  MediaModel m = make_constant_medium(g, 1.0, 20.9);
  m.c[5] = 6.71;
  m.a[5] = 258.0;
  m.refresh_range();
  const double w = 400 * kPi;
  const ComplexField uinc(g, Complex(1.0, 0.0));
  const ComplexField f = scattering_source(m, w, uinc);
  const Complex expected = -(w * w * (1 - 6.71 * 6.71) * Complex(1.0, 20.9 / w) + Complex(0, w * (258 - 20.9)));
  CHECK(std::abs(f[5] - expected) <= 1e-12 * std::abs(expected));
  for (std::size_t k = 0; k < g.size(); ++k)
    if (k != 5) CHECK(std::abs(f[k]) <= 1e-12);
  const ComplexField f2 = scattering_source(m, w, Complex(2.0, -1.0) * uinc);
  CHECK(std::abs(f2[5] - Complex(2.0, -1.0) * f[5]) <= 1e-12 * std::abs(f2[5]));
}

TEST_CASE("params validation and ppw") {
  const Grid2D g = make_grid(24, 1.0);
  const auto p = make_params(8 * kPi, make_constant_medium(g, 1.0, 20.0));
  CHECK(p.ppw() == doctest::Approx(6.0));
  CHECK_THROWS_AS(make_params(-1.0, make_constant_medium(g, 1.0, 20.0)), std::invalid_argument);
}
