#include "helmprec/symbol_interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "helmprec/errors.hpp"
#include "helmprec/parallel.hpp"

namespace helmprec {

namespace {

constexpr double kClampSlack = 1e-12;

}  // namespace

Complex principal_symbol(Complex cval, double aval, double omega, double xiSq) {
  const Complex denom = Complex(omega * omega, omega * aval) - cval * cval * xiSq;
  if (std::abs(denom) < 1e-300) {
    throw SingularSymbol("principal_symbol: vanishing denominator at c = (" +
                         format_double(cval.real()) + ", " + format_double(cval.imag()) +
                         "), |xi|^2 = " + format_double(xiSq));
  }
  return 1.0 / denom;
}

double SparseWeights::sum() const {
  double s = 0.0;
  for (const auto& p : view()) s += p.weight;
  return s;
}

SparseWeights hat_weights(std::span<const double> nodes, double value) {
  if (nodes.empty()) throw std::invalid_argument("basis_weights: empty node set");
  const double lo = nodes.front();
  const double hi = nodes.back();
  if (value < lo - kClampSlack || value > hi + kClampSlack) {
    throw std::invalid_argument("basis_weights: value " + format_double(value) + " outside [" +
                                format_double(lo) + ", " + format_double(hi) + "]");
  }
  value = std::clamp(value, lo, hi);
  SparseWeights w;
  auto upper = std::upper_bound(nodes.begin(), nodes.end(), value);
  const std::size_t right = static_cast<std::size_t>(upper - nodes.begin());
  // value >= lo, so right >= 1; the left node is the last one <= value.
  const std::size_t left = right - 1;
  if (nodes[left] == value || right == nodes.size()) {
    w.pairs[0] = {left, 1.0};
    w.count = 1;
    return w;
  }
  const double span = nodes[right] - nodes[left];
  const double t = (value - nodes[left]) / span;
  w.pairs[0] = {left, (nodes[right] - value) / span};
  w.pairs[1] = {right, t};
  w.count = 2;
  return w;
}

int default_layer_nodes(int m) { return std::max(1, (m + 1) / 2); }

std::vector<double> equidistant_nodes(double cMin, double cMax, int m) {
  if (m < 1) throw std::invalid_argument("build_basis: M must be >= 1");
  if (m == 1) return {cMin};
  std::vector<double> nodes(static_cast<std::size_t>(m));
  const double step = (cMax - cMin) / (m - 1);
  for (int i = 0; i < m; ++i) nodes[i] = cMin + i * step;
  nodes.back() = cMax;
  return nodes;
}

InterpBasis build_basis(const MediaModel& media, int m, int mTilde) {
  InterpBasis basis;
  if (media.cMin == media.cMax) {
    if (m < 1) throw std::invalid_argument("build_basis: M must be >= 1");
    basis.nodes = {media.cMin};
  } else {
    if (m < 2) {
      throw std::invalid_argument("build_basis: M >= 2 required for a variable speed range, got M = " +
                                  std::to_string(m));
    }
    basis.nodes = equidistant_nodes(media.cMin, media.cMax, m);
    basis.step = (media.cMax - media.cMin) / (m - 1);
  }

  const double c_o = media.c_o;
  if (c_o >= media.cMin - kClampSlack && c_o <= media.cMax + kClampSlack) {
    auto near = std::find_if(basis.nodes.begin(), basis.nodes.end(),
                             [&](double c) { return std::abs(c - c_o) <= kClampSlack; });
    if (near == basis.nodes.end()) {
      near = basis.nodes.insert(std::upper_bound(basis.nodes.begin(), basis.nodes.end(), c_o), c_o);
    }
    basis.backgroundIndex = static_cast<std::size_t>(near - basis.nodes.begin());
  }

  const double zetaMax = media.zeta.max();
  if (zetaMax > 0.0) {
    if (mTilde < 1) {
      throw std::invalid_argument("build_basis: Mtilde >= 1 required when an absorbing layer is present");
    }
    if (!basis.backgroundIndex) {
      throw std::invalid_argument("build_basis: c_o must lie in [cMin, cMax] when a layer is present");
    }
    basis.layerNodes.resize(static_cast<std::size_t>(mTilde) + 1);
    for (int l = 0; l <= mTilde; ++l) basis.layerNodes[l] = zetaMax * l / mTilde;
    basis.layerNodes.back() = zetaMax;
  } else {
    basis.layerNodes = {0.0};
  }
  return basis;
}

SparseWeights basis_weights(const InterpBasis& basis, double cval) {
  return hat_weights(basis.nodes, cval);
}

SparseWeights layer_weights(const InterpBasis& basis, double zeta) {
  return hat_weights(basis.layerNodes, zeta);
}

void PrecondPlan::add_table(Complex speed, double damping, RealField weights) {
  const WavenumberGrid xi = wavenumbers(grid_);
  ComplexBuffer table(grid_.size());
  for (std::size_t k = 0; k < table.size(); ++k) {
    table[k] = principal_symbol(speed, damping, omega_, xi.xiSq[k]);
  }
  const auto w = weights.values();
  active_.push_back(std::any_of(w.begin(), w.end(), [](double x) { return x != 0.0; }));
  tables_.push_back(std::move(table));
  weights_.push_back(std::move(weights));
  speeds_.push_back(speed);
  dampings_.push_back(damping);
}

std::vector<std::pair<std::size_t, double>> PrecondPlan::weights_at(std::size_t point) const {
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t t = 0; t < weights_.size(); ++t) {
    const double w = weights_[t][point];
    if (w != 0.0) out.emplace_back(t, w);
  }
  return out;
}

std::size_t PrecondPlan::stored_entries() const { return tables_.size() * grid_.size(); }

ComplexField PrecondPlan::apply(const ComplexField& v) const {
  require_same_grid(grid_, v.grid(), "apply_precond");
  const int n = grid_.n();
  const std::size_t rows = static_cast<std::size_t>(n);
  const std::size_t cols = static_cast<std::size_t>(n);
  const double invCount = 1.0 / static_cast<double>(grid_.size());

  ComplexField spectrum(grid_);
  fft2_raw(n, v.data(), spectrum.data());

  ComplexField out(grid_, Complex(0.0, 0.0));
  ComplexField product(grid_);
  ComplexField spatial(grid_);
  for (std::size_t t = 0; t < tables_.size(); ++t) {
    if (!active_[t]) continue;
    const Complex* table = tables_[t].data();
    parallel_for(rows, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin * cols; k < end * cols; ++k) product[k] = spectrum[k] * table[k];
    });
    ifft2_raw_unscaled(n, product.data(), spatial.data());
    const RealField& weight = weights_[t];
    parallel_for(rows, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin * cols; k < end * cols; ++k) {
        out[k] += (weight[k] * invCount) * spatial[k];
      }
    });
  }
  return out;
}

PrecondPlan build_plan(const Grid2D& grid, const MediaModel& media, double omega, int m,
                       int mTilde) {
  require_same_grid(grid, media.grid, "build_plan");
  if (!(omega > 0.0)) throw std::invalid_argument("build_plan: omega must be positive");
  // Validates the layer constraint (c == c_o on supp zeta).
  (void)complexify_speed(media);

  PrecondPlan plan(grid, omega);
  plan.basis_ = build_basis(media, m, mTilde);
  const InterpBasis& basis = plan.basis_;
  const std::size_t points = grid.size();

  std::vector<SparseWeights> speedW(points);
  std::vector<SparseWeights> layerW(points);
  for (std::size_t k = 0; k < points; ++k) {
    speedW[k] = basis_weights(basis, media.c[k]);
    layerW[k] = layer_weights(basis, media.zeta[k]);
  }
  auto weight_of = [](const SparseWeights& w, std::size_t index) {
    for (const auto& p : w.view()) {
      if (p.index == index) return p.weight;
    }
    return 0.0;
  };

  for (std::size_t mIdx = 0; mIdx < basis.size(); ++mIdx) {
    RealField weights(grid);
    for (std::size_t k = 0; k < points; ++k) {
      weights[k] = weight_of(speedW[k], mIdx) * weight_of(layerW[k], 0);
    }
    const double c = basis.nodes[mIdx];
    plan.add_table(Complex(c, 0.0), damping_at(media, c), std::move(weights));
  }
  for (std::size_t l = 1; l < basis.layerNodes.size(); ++l) {
    RealField weights(grid);
    for (std::size_t k = 0; k < points; ++k) {
      weights[k] = weight_of(speedW[k], *basis.backgroundIndex) * weight_of(layerW[k], l);
    }
    const Complex gamma = media.c_o * Complex(1.0, -basis.layerNodes[l]);
    plan.add_table(gamma, media.a_o, std::move(weights));
  }
  return plan;
}

PrecondPlan build_single_node_plan(const MediaModel& media, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("build_plan: omega must be positive");
  PrecondPlan plan(media.grid, omega);
  plan.basis_.nodes = {media.c_o};
  plan.basis_.backgroundIndex = 0;
  plan.basis_.layerNodes = {0.0};
  plan.add_table(Complex(media.c_o, 0.0), media.a_o, RealField(media.grid, 1.0));
  return plan;
}

ComplexField apply_precond(const PrecondPlan& plan, const ComplexField& v) { return plan.apply(v); }

double interp_symbol_error(const SymbolErrorSetup& setup, int m, std::span<const double> xiSq,
                           std::span<const double> cSamples) {
  const std::vector<double> nodes = equidistant_nodes(setup.cMin, setup.cMax, m);
  std::vector<SparseWeights> weights;
  weights.reserve(cSamples.size());
  for (double c : cSamples) weights.push_back(hat_weights(nodes, c));

  double worst = 0.0;
  std::vector<Complex> nodal(nodes.size());
  for (double x : xiSq) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      nodal[i] = principal_symbol(nodes[i], setup.damping, setup.omega, x);
    }
    for (std::size_t s = 0; s < cSamples.size(); ++s) {
      Complex interp{0.0, 0.0};
      for (const auto& p : weights[s].view()) interp += p.weight * nodal[p.index];
      const Complex exact = principal_symbol(cSamples[s], setup.damping, setup.omega, x);
      worst = std::max(worst, std::abs(exact - interp));
    }
  }
  return worst;
}

double interp_symbol_error(const SymbolErrorSetup& setup, int m, std::span<const double> xiSq,
                           int samples) {
  if (samples < 1000) throw std::invalid_argument("interp_symbol_error: need at least 1000 speed samples");
  std::vector<double> cs(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    cs[s] = setup.cMin + (setup.cMax - setup.cMin) * s / (samples - 1);
  }
  cs.back() = setup.cMax;
  return interp_symbol_error(setup, m, xiSq, cs);
}

}  // namespace helmprec
