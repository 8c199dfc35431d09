#pragma once

#include <functional>
#include <memory>

#include "helmprec/grid.hpp"
#include "helmprec/media.hpp"

namespace helmprec {

/// A matrix-free linear map on grid fields.
using LinearMap = std::function<ComplexField(const ComplexField&)>;

struct HelmholtzParams {
  double omega = 0.0;
  std::shared_ptr<const MediaModel> media;
  bool useLayer = false;

  /// Points per wavelength 2 pi c_o N / (L omega).
  double ppw() const;
  void validate() const;
};

HelmholtzParams make_params(double omega, MediaModel media, bool useLayer = false);

/// Five-point periodic finite-difference Helmholtz operator
///   (P u)_ij = s_ij^2 (Lap_h u)_ij + (omega^2 + i omega a_ij) u_ij
/// with s = gamma inside the absorbing layer when useLayer, else s = c.
/// Coefficients are cached at construction.
class HelmholtzOperator {
 public:
  explicit HelmholtzOperator(const HelmholtzParams& params);

  ComplexField apply(const ComplexField& u) const;
  ComplexField operator()(const ComplexField& u) const { return apply(u); }

  const Grid2D& grid() const { return grid_; }

 private:
  Grid2D grid_;
  ComplexField stencilCoeff_;  // s^2 / h^2
  ComplexField diagonal_;      // omega^2 + i omega a
};

ComplexField apply_helmholtz_fd(const HelmholtzParams& params, const ComplexField& u);

/// Eigenvalue of the constant-coefficient FD operator on Fourier mode
/// (k1, k2): omega^2 + i omega a_o - c_o^2 (4/h^2)(sin^2(pi k1/N) + sin^2(pi k2/N)).
Complex fd_symbol(const HelmholtzParams& params, int k1, int k2);

/// Continuous-symbol operator IFFT[(omega^2 + i omega a_o - c_o^2 |xi|^2) FFT(u)]
/// on a homogeneous medium.
ComplexField apply_helmholtz_spectral(const HelmholtzParams& params, const ComplexField& u);

/// f = exp(i (omega / c_o) x1).
ComplexField plane_wave_source(const Grid2D& grid, double omega, double c_o);

struct GaussianBeamParams {
  double omega = 0.0;
  double c_o = 1.0;
  double a_o = 20.9;
  double focus1 = 0.0;
  double focus2 = 0.3;
  double waist = 0.01;
  /// Evaluate the curvature at x2 instead of at the offset x2 - focus2
  /// used for the width. Away from the focus the literal form lets the
  /// damped phase grow like exp(Im k * kappa * dx^2 / 2).
  bool literalCurvature = false;

  double rayleigh_range() const { return omega * waist * waist / (2.0 * c_o); }
  /// (omega / c_o) sqrt(1 + i a_o / omega), principal branch.
  Complex wavenumber() const;
};

/// Downward-travelling Gaussian beam; equals 1 at the focus.
ComplexField gaussian_beam(const Grid2D& grid, const GaussianBeamParams& beam);

/// Scattering right-hand side
///   f = -(omega^2 (c_o^2 - c^2) / c_o^2 (1 + i a_o / omega) + i omega (a - a_o)) u_inc
/// using the real speed c.
ComplexField scattering_source(const MediaModel& media, double omega, const ComplexField& u_inc);

}  // namespace helmprec
