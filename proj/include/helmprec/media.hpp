#pragma once

#include <utility>
#include <vector>

#include "helmprec/grid.hpp"

namespace helmprec {

/// Piecewise damping law a = a(c): tissue (speed, damping) pairs plus a
/// fallback constant. Between two bracketing entries the damping is
/// interpolated linearly in speed.
struct DampingMap {
  std::vector<std::pair<double, double>> entries;  ///< sorted by speed
  double fallback = 20.0;
};

/// Wave speed, damping and absorbing-layer profile on a grid.
///
/// Invariants maintained by the builders below:
///  - 0 < cMin <= c <= cMax, with cMin / cMax the actual field extrema;
///  - a > 0 and zeta >= 0 everywhere;
///  - c == c_o wherever zeta > 0.
struct MediaModel {
  Grid2D grid;
  RealField c;
  RealField a;
  RealField zeta;
  double c_o = 1.0;
  double a_o = 20.0;
  double cMin = 1.0;
  double cMax = 1.0;
  DampingMap dampingMap;

  bool has_layer() const { return zeta.max() > 0.0; }
  bool is_constant() const { return cMin == cMax && a.min() == a.max() && !has_layer(); }

  /// Recompute cMin / cMax from the speed field.
  void refresh_range();
};

/// Logistic step 1 / (1 + exp(-s / eta)), evaluated without overflow.
double smooth_heaviside(double s, double eta);

/// Homogeneous medium (c_o, a_o) without a layer.
MediaModel make_constant_medium(const Grid2D& grid, double c_o, double a_o);

/// c(x) = c_o + delta * H_eta(radius - |x|). Damping is set to the
/// constant `damping` (also the damping map fallback); zeta is zero.
MediaModel make_circular_inclusion(const Grid2D& grid, double c_o, double delta, double eta,
                                   double radius = 0.05, double damping = 20.0);

/// Replace the damping field with a constant and make it the fallback law.
void set_constant_damping(MediaModel& media, double damping);

struct ZetaProfile {
  double onset = 0.375;
  double slope = 0.4;
};

/// Absorbing-layer profile: 0 for r < onset, slope * (r - onset) beyond.
/// Only defined for the unit box (L = 1).
RealField make_zeta(const Grid2D& grid, ZetaProfile profile = {});

/// gamma(x) = c(x) (1 - i zeta(x)). Throws InvalidMedia if zeta > 0 at a
/// point where c differs from c_o by more than 1e-12.
ComplexField complexify_speed(const MediaModel& media);

struct PhantomTissues {
  double c_o = 1.0, a_o = 20.9;
  double c_skull = 6.71, a_skull = 258.0;
  double c_brain = 4.55, a_brain = 10.7;
  double innerRadius = 0.15;  ///< brain / skull interface
  double outerRadius = 0.19;  ///< skull / background interface
  double eta = 1.0 / 800.0;
};

/// Synthetic concentric head phantom: brain disk inside a skull annulus in
/// a background medium, logistic-smoothed interfaces, absorbing layer from
/// make_zeta. Requires L = 1.
MediaModel make_phantom(const Grid2D& grid, PhantomTissues tissues = {}, ZetaProfile layer = {});

/// Damping law lookup used for interpolation nodes. Throws
/// std::invalid_argument if speed lies outside [cMin, cMax].
double damping_at(const MediaModel& media, double speed);

}  // namespace helmprec
