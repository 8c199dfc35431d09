#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "helmprec/errors.hpp"
#include "helmprec/operators.hpp"
#include "helmprec/symbol_interp.hpp"

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

MediaModel two_speed_medium(const Grid2D& g, double c_o, double lo, double hi) {
  MediaModel m = make_constant_medium(g, c_o, 20.0);
  m.c[0] = lo;
  m.c[1] = hi;
  m.refresh_range();
  return m;
}

}  // namespace

TEST_CASE("principal symbol") {
  CHECK(principal_symbol(1.0, 0.0, 1.0, 0.0) == Complex(1.0, 0.0));
  const double w = 80 * kPi;
  const Complex res = principal_symbol(1.0, 20.0, w, w * w);
  CHECK(std::abs(res - Complex(0.0, -1.0 / (1600 * kPi))) < 1e-18);
  const double w2 = 400 * kPi;
  const Complex c(1.0, -0.05);
  const Complex q = principal_symbol(c, 20.9, w2, w2 * w2);
  const Complex den = w2 * w2 - c * c * w2 * w2 + Complex(0.0, w2 * 20.9);
  CHECK(std::abs(q * den - 1.0) < 1e-14);
  CHECK_THROWS_AS(principal_symbol(1.0, 0.0, 1.0, 1.0), SingularSymbol);
}

TEST_CASE("build_basis node sets") {
  const Grid2D g = make_grid(64, 1.0);
  const InterpBasis b = build_basis(make_circular_inclusion(g, 1.0, 4.0, 1.0 / 800.0), 5, 0);
  REQUIRE(b.size() == 5);
  for (int m = 0; m < 5; ++m) CHECK(b.nodes[m] == doctest::Approx(1.0 + m).epsilon(1e-9));
  CHECK(b.step == doctest::Approx(1.0).epsilon(1e-9));
  REQUIRE(b.backgroundIndex.has_value());
  CHECK(*b.backgroundIndex == 0);

  const InterpBasis one = build_basis(make_constant_medium(g, 1.0, 20.0), 1, 0);
  CHECK(one.size() == 1);
  CHECK(basis_weights(one, 1.0).sum() == 1.0);

  const InterpBasis ins = build_basis(two_speed_medium(g, 1.3, 1.0, 2.0), 2, 0);
  REQUIRE(ins.size() == 3);
  CHECK(ins.nodes[0] == 1.0);
  CHECK(ins.nodes[1] == 1.3);
  CHECK(ins.nodes[2] == 2.0);
  CHECK(*ins.backgroundIndex == 1);

  CHECK_THROWS_AS(build_basis(two_speed_medium(g, 1.0, 1.0, 2.0), 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(make_phantom(make_grid(64, 1.0)), 4, 0), std::invalid_argument);
}

TEST_CASE("layer nodes") {
  const MediaModel ph = make_phantom(make_grid(64, 1.0));
  const InterpBasis b = build_basis(ph, 4, 3);
  REQUIRE(b.layerNodes.size() == 4);
  CHECK(b.layerNodes.front() == 0.0);
  CHECK(b.layerNodes.back() == ph.zeta.max());
  CHECK(b.layer_size() == 3);
  for (std::size_t l = 1; l < b.layerNodes.size(); ++l) CHECK(b.layerNodes[l] > b.layerNodes[l - 1]);
  CHECK(default_layer_nodes(1) == 1);
  CHECK(default_layer_nodes(4) == 2);
  CHECK(default_layer_nodes(5) == 3);
}

TEST_CASE("hat weights") {
  const std::vector<double> nodes{1.0, 2.0, 3.0};
  const SparseWeights at = hat_weights(nodes, 2.0);
  REQUIRE(at.count == 1);
  CHECK(at.pairs[0].index == 1);
  CHECK(at.pairs[0].weight == 1.0);

  const SparseWeights mid = hat_weights(nodes, 2.5);
  REQUIRE(mid.count == 2);
  CHECK(mid.pairs[0].weight == 0.5);
  CHECK(mid.pairs[1].weight == 0.5);

  const SparseWeights q = hat_weights(nodes, 1.25);
  REQUIRE(q.count == 2);
  CHECK(q.pairs[0].index == 0);
  CHECK(q.pairs[0].weight == 0.75);
  CHECK(q.pairs[1].index == 1);
  CHECK(q.pairs[1].weight == 0.25);

  CHECK(hat_weights(nodes, 3.0 + 5e-13).sum() == 1.0);
  CHECK_THROWS_AS(hat_weights(nodes, 3.1), std::invalid_argument);
  CHECK_THROWS_AS(hat_weights(nodes, 0.9), std::invalid_argument);
}

TEST_CASE("partition of unity") {
  const Grid2D g = make_grid(32, 1.0);
  const InterpBasis b = build_basis(two_speed_medium(g, 1.0, 1.0, 5.0), 7, 0);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(1.0, 5.0);
  for (int t = 0; t < 1000; ++t) {
    const SparseWeights w = basis_weights(b, u(rng));
    CHECK(std::abs(w.sum() - 1.0) <= 1e-14);
    for (const auto& p : w.view()) {
      CHECK(p.weight >= 0.0);
      CHECK(p.weight <= 1.0);
    }
  }
}

TEST_CASE("node exactness") {
  const Grid2D g = make_grid(32, 1.0);
  const auto xi = wavenumbers(g).xiSq;
  for (int m : {3, 5, 9}) {
    SymbolErrorSetup s;
    s.omega = 40 * kPi;
    const auto nodes = equidistant_nodes(s.cMin, s.cMax, m);
    CHECK(interp_symbol_error(s, m, xi, nodes) == 0.0);
  }
  // plan side: every grid point sits on a node
  MediaModel med = make_constant_medium(g, 1.0, 20.0);
  for (std::size_t k = 0; k < g.size(); ++k) med.c[k] = 1.0 + static_cast<double>(k % 3);
  med.refresh_range();
  const PrecondPlan plan = build_plan(g, med, 10.0, 3, 0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto w = plan.weights_at(k);
    REQUIRE(w.size() == 1);
    CHECK(w[0].second == 1.0);
    CHECK(plan.table_speed(w[0].first) == Complex(med.c[k], 0.0));
  }
  for (std::size_t t = 0; t < plan.table_count(); ++t)
    for (std::size_t k = 0; k < g.size(); ++k)
      CHECK(plan.table(t)[k] == principal_symbol(plan.table_speed(t), 20.0, 10.0, wavenumbers(g).xiSq[k]));
}

TEST_CASE("plan structure") {
  const Grid2D g = make_grid(16, 1.0);
  const PrecondPlan single = build_plan(g, make_constant_medium(g, 1.0, 20.0), 40 * kPi, 1, 0);
  CHECK(single.table_count() == 1);
  CHECK(single.weight_field(0).min() == 1.0);
  CHECK(single.weight_field(0).max() == 1.0);
  CHECK(single.stored_entries() == g.size());

  const PrecondPlan inc = build_plan(g, make_circular_inclusion(g, 1.0, 4.0, 0.02), 8 * kPi, 4, 0);
  CHECK(inc.table_count() == 4);
  CHECK(inc.stored_entries() == 4 * g.size());

  const MediaModel ph = make_phantom(make_grid(64, 1.0));
  const PrecondPlan lay = build_plan(ph.grid, ph, 40 * kPi, 4, 3);
  CHECK(lay.real_table_count() == lay.basis().size());
  CHECK(lay.table_count() == lay.basis().size() + 3);
  CHECK(lay.stored_entries() == lay.table_count() * ph.grid.size());
  for (std::size_t t = lay.real_table_count(); t < lay.table_count(); ++t) {
    CHECK(lay.table_damping(t) == ph.a_o);
    CHECK(lay.table_speed(t).real() == ph.c_o);
    CHECK(lay.table_speed(t).imag() < 0.0);
  }
  for (std::size_t k = 0; k < ph.grid.size(); ++k) {
    double total = 0, layer = 0;
    for (const auto& [t, w] : lay.weights_at(k)) {
      total += w;
      if (t >= lay.real_table_count()) layer += w;
    }
    CHECK(std::abs(total - 1.0) <= 1e-14);
    if (ph.zeta[k] == 0.0) CHECK(layer == 0.0);
  }
}

TEST_CASE("single node plan inverts the spectral operator") {
  const Grid2D g = make_grid(64, 1.0);
  const MediaModel med = make_constant_medium(g, 1.0, 20.0);
  const double w = 40 * kPi;
  const auto p = make_params(w, med);
  const PrecondPlan plan = build_plan(g, med, w, 1, 0);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const ComplexField u = random_field(g, rng);
    CHECK(max_abs(apply_precond(plan, apply_helmholtz_spectral(p, u)) - u) <= 1e-12 * max_abs(u));
  }
  const ComplexField zero(g);
  CHECK(max_abs(apply_precond(plan, zero)) == 0.0);
  CHECK_THROWS_AS(apply_precond(plan, ComplexField(make_grid(8, 1.0))), std::invalid_argument);
}

TEST_CASE("Q1 P diagonalisation and clustering") {
  const Grid2D g = make_grid(16, 1.0);
  const auto xi = wavenumbers(g);
  for (double w : {4 * kPi, 8 * kPi}) {
    const MediaModel med = make_constant_medium(g, 1.0, 20.0);
    const auto p = make_params(w, med);
    CHECK(p.ppw() >= 4.0 - 1e-12);
    const PrecondPlan plan = build_plan(g, med, w, 1, 0);
    for (int k1 = 0; k1 < 16; ++k1)
      for (int k2 = 0; k2 < 16; ++k2) {
        const Complex base(w * w, w * 20.0);
        const Complex rho = fd_symbol(p, k1, k2) / (base - xi.xiSq[g.index(k1, k2)]);
        const ComplexField e = mode(g, k1, k2);
        const ComplexField r = apply_precond(plan, apply_helmholtz_fd(p, e));
        CHECK(max_abs(r - rho * e) <= 1e-12 * std::abs(rho));
        CHECK(std::abs(rho) >= 0.3);
        CHECK(std::abs(rho) <= 1.5);
      }
  }
}

TEST_CASE("apply_precond linearity") {
  const Grid2D g = make_grid(32, 1.0);
  const MediaModel ph = make_phantom(make_grid(32, 1.0));
  const PrecondPlan plan = build_plan(g, ph, 8 * kPi, 4, 2);
  std::mt19937_64 rng(8);
  const ComplexField u = random_field(g, rng), v = random_field(g, rng);
  const Complex a(1.5, 0.5), b(-0.25, 3.0);
  const ComplexField lhs = apply_precond(plan, a * u + b * v);
  const ComplexField rhs = a * apply_precond(plan, u) + b * apply_precond(plan, v);
  CHECK(max_abs(lhs - rhs) <= 1e-12 * max_abs(lhs));
}

TEST_CASE("interpolation error converges quadratically when the symbol is smooth in c") {
  SymbolErrorSetup s;
  s.omega = 40 * kPi;
  s.damping = 2000.0;
  const auto xi = wavenumbers(make_grid(64, 1.0)).xiSq;
  const double e5 = interp_symbol_error(s, 5, xi);
  const double e9 = interp_symbol_error(s, 9, xi);
  const double e17 = interp_symbol_error(s, 17, xi);
  CHECK(e5 / e9 >= 3.0);
  CHECK(e5 / e9 <= 5.0);
  CHECK(e9 / e17 >= 3.0);
  CHECK(e9 / e17 <= 5.0);
}

TEST_CASE("interpolation error falls below 1e-6 for large M") {
  SymbolErrorSetup s;
  s.omega = 40 * kPi;
  const auto xi = wavenumbers(make_grid(64, 1.0)).xiSq;
  CHECK(interp_symbol_error(s, 2049, xi) < 1e-6);
}
