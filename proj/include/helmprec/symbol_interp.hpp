#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "helmprec/grid.hpp"
#include "helmprec/media.hpp"

namespace helmprec {

/// q_{-2}(c, xi) = 1 / (omega^2 + i omega a - c^2 |xi|^2), complex c allowed.
/// Throws SingularSymbol when the denominator modulus drops below 1e-300.
Complex principal_symbol(Complex cval, double aval, double omega, double xiSq);

struct WeightPair {
  std::size_t index = 0;
  double weight = 0.0;
};

/// At most two non-zero hat-function weights.
struct SparseWeights {
  std::array<WeightPair, 2> pairs{};
  std::size_t count = 0;

  std::span<const WeightPair> view() const { return {pairs.data(), count}; }
  double sum() const;
};

/// Piecewise-linear hat weights for `value` on the strictly increasing
/// `nodes`. Values within 1e-12 outside the node range are clamped, anything
/// further out throws std::invalid_argument. A node hit returns one pair.
SparseWeights hat_weights(std::span<const double> nodes, double value);

/// Interpolation nodes in wave speed (real branch) and in layer strength
/// zeta (absorbing-layer branch).
struct InterpBasis {
  std::vector<double> nodes;                   ///< cMin ... cMax, increasing
  std::optional<std::size_t> backgroundIndex;  ///< nodes[*backgroundIndex] == c_o
  std::vector<double> layerNodes;              ///< 0 ... zetaMax, increasing
  double step = 0.0;                           ///< equidistant spacing before c_o insertion

  std::size_t size() const { return nodes.size(); }
  std::size_t layer_size() const { return layerNodes.empty() ? 0 : layerNodes.size() - 1; }
};

/// Default number of layer nodes: max(1, ceil(M / 2)).
int default_layer_nodes(int m);

/// Equidistant nodes over [cMin, cMax] with c_o inserted when it misses the
/// equidistant set, plus Mtilde + 1 equidistant layer nodes over [0, zetaMax].
///  - M >= 2 is required when cMin < cMax; M = 1 only for constant speed
///    (any M collapses to one node then).
///  - Mtilde >= 1 is required when the medium has a layer; without a layer
///    the layer branch is just {0}.
InterpBasis build_basis(const MediaModel& media, int m, int mTilde);

SparseWeights basis_weights(const InterpBasis& basis, double cval);

/// Weights of the layer basis at layer strength zeta >= 0.
SparseWeights layer_weights(const InterpBasis& basis, double zeta);

/// Precomputed interpolated preconditioner: one symbol table per speed node
/// (damping from the media law) and per non-zero layer node (background
/// damping, complex speed c_o (1 - i zeta_m)), together with the spatial
/// weight field of every table.
///
/// Table t < size() belongs to speed node t; table size() + l - 1 belongs to
/// layer node l (l = 1..layer_size()).
class PrecondPlan {
 public:
  const InterpBasis& basis() const { return basis_; }
  const Grid2D& grid() const { return grid_; }
  double omega() const { return omega_; }

  std::size_t table_count() const { return tables_.size(); }
  std::size_t real_table_count() const { return basis_.size(); }
  std::span<const Complex> table(std::size_t t) const { return tables_.at(t); }
  const RealField& weight_field(std::size_t t) const { return weights_.at(t); }
  bool table_active(std::size_t t) const { return active_.at(t); }
  Complex table_speed(std::size_t t) const { return speeds_.at(t); }
  double table_damping(std::size_t t) const { return dampings_.at(t); }

  /// Non-zero (table, weight) pairs at a flat grid index.
  std::vector<std::pair<std::size_t, double>> weights_at(std::size_t point) const;

  /// Number of stored complex symbol entries, (M + Mtilde) N^2.
  std::size_t stored_entries() const;

  ComplexField apply(const ComplexField& v) const;

 private:
  friend PrecondPlan build_plan(const Grid2D&, const MediaModel&, double, int, int);
  friend PrecondPlan build_single_node_plan(const MediaModel&, double);

  PrecondPlan(const Grid2D& grid, double omega) : grid_(grid), omega_(omega) {}
  void add_table(Complex speed, double damping, RealField weights);

  Grid2D grid_;
  double omega_;
  InterpBasis basis_;
  std::vector<ComplexBuffer> tables_;
  std::vector<RealField> weights_;
  std::vector<bool> active_;
  std::vector<Complex> speeds_;
  std::vector<double> dampings_;
};

PrecondPlan build_plan(const Grid2D& grid, const MediaModel& media, double omega, int m,
                       int mTilde);

/// Single table at the background (c_o, a_o) with unit weight everywhere:
/// the one-node preconditioner, for any medium.
PrecondPlan build_single_node_plan(const MediaModel& media, double omega);

ComplexField apply_precond(const PrecondPlan& plan, const ComplexField& v);

struct SymbolErrorSetup {
  double cMin = 1.0;
  double cMax = 5.0;
  double damping = 20.0;
  double omega = 1.0;
};

/// Equidistant speed nodes used by the error study (no c_o insertion).
std::vector<double> equidistant_nodes(double cMin, double cMax, int m);

/// sup over cSamples x xiSq of |q(c, xi) - sum_m phi_m(c) q(c_m, xi)|.
double interp_symbol_error(const SymbolErrorSetup& setup, int m, std::span<const double> xiSq,
                           std::span<const double> cSamples);

/// Same, over `samples` equidistant speeds in [cMin, cMax] (at least 1000).
double interp_symbol_error(const SymbolErrorSetup& setup, int m, std::span<const double> xiSq,
                           int samples = 1001);

}  // namespace helmprec
