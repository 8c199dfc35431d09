#include "helmprec/operators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "helmprec/parallel.hpp"

namespace helmprec {

namespace {

constexpr double kPi = std::numbers::pi;

void require_constant_media(const HelmholtzParams& params, const char* op) {
  params.validate();
  const MediaModel& m = *params.media;
  const bool layerActive = params.useLayer && m.has_layer();
  if (m.cMin != m.cMax || m.a.min() != m.a.max() || layerActive) {
    throw std::invalid_argument(std::string(op) + ": requires a homogeneous medium");
  }
}

}  // namespace

double HelmholtzParams::ppw() const {
  validate();
  const Grid2D& g = media->grid;
  return 2.0 * kPi * media->c_o * g.n() / (g.side() * omega);
}

void HelmholtzParams::validate() const {
  if (!(omega > 0.0)) throw std::invalid_argument("HelmholtzParams: omega must be positive");
  if (!media) throw std::invalid_argument("HelmholtzParams: media not set");
}

HelmholtzParams make_params(double omega, MediaModel media, bool useLayer) {
  HelmholtzParams p{omega, std::make_shared<const MediaModel>(std::move(media)), useLayer};
  p.validate();
  return p;
}

HelmholtzOperator::HelmholtzOperator(const HelmholtzParams& params)
    : grid_(params.media ? params.media->grid : Grid2D(4, 1.0)),
      stencilCoeff_(grid_),
      diagonal_(grid_) {
  params.validate();
  const MediaModel& m = *params.media;
  const double invH2 = 1.0 / (grid_.spacing() * grid_.spacing());
  const double w = params.omega;
  const ComplexField gamma = params.useLayer ? complexify_speed(m) : ComplexField(grid_);
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    const Complex s = params.useLayer ? gamma[k] : Complex(m.c[k], 0.0);
    stencilCoeff_[k] = s * s * invH2;
    diagonal_[k] = Complex(w * w, w * m.a[k]);
  }
}

ComplexField HelmholtzOperator::apply(const ComplexField& u) const {
  require_same_grid(grid_, u.grid(), "apply_helmholtz_fd");
  const int n = grid_.n();
  ComplexField out(grid_);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
    for (int i = static_cast<int>(begin); i < static_cast<int>(end); ++i) {
      const int ip = (i + 1) % n;
      const int im = (i + n - 1) % n;
      for (int j = 0; j < n; ++j) {
        const int jp = (j + 1) % n;
        const int jm = (j + n - 1) % n;
        const std::size_t k = grid_.index(i, j);
        const Complex lap = u(ip, j) + u(im, j) + u(i, jp) + u(i, jm) - 4.0 * u[k];
        out[k] = stencilCoeff_[k] * lap + diagonal_[k] * u[k];
      }
    }
  });
  return out;
}

ComplexField apply_helmholtz_fd(const HelmholtzParams& params, const ComplexField& u) {
  return HelmholtzOperator(params).apply(u);
}

Complex fd_symbol(const HelmholtzParams& params, int k1, int k2) {
  require_constant_media(params, "fd_symbol");
  const MediaModel& m = *params.media;
  const Grid2D& g = m.grid;
  const double h = g.spacing();
  const double s1 = std::sin(kPi * k1 / g.n());
  const double s2 = std::sin(kPi * k2 / g.n());
  const double w = params.omega;
  const double c = m.c[0];
  return Complex(w * w - c * c * (4.0 / (h * h)) * (s1 * s1 + s2 * s2), w * m.a[0]);
}

ComplexField apply_helmholtz_spectral(const HelmholtzParams& params, const ComplexField& u) {
  require_constant_media(params, "apply_helmholtz_spectral");
  const MediaModel& m = *params.media;
  require_same_grid(m.grid, u.grid(), "apply_helmholtz_spectral");
  const WavenumberGrid xi = wavenumbers(m.grid);
  const double w = params.omega;
  const double c2 = m.c[0] * m.c[0];
  const Complex base(w * w, w * m.a[0]);
  ComplexField spec = fft2(u);
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= base - c2 * xi.xiSq[k];
  return ifft2(spec);
}

ComplexField plane_wave_source(const Grid2D& grid, double omega, double c_o) {
  ComplexField f(grid);
  const double kw = omega / c_o;
  for (int i = 0; i < grid.n(); ++i) {
    const Complex v = std::polar(1.0, kw * grid.x1(i));
    for (int j = 0; j < grid.n(); ++j) f(i, j) = v;
  }
  return f;
}

Complex GaussianBeamParams::wavenumber() const {
  return (omega / c_o) * std::sqrt(Complex(1.0, a_o / omega));
}

ComplexField gaussian_beam(const Grid2D& grid, const GaussianBeamParams& beam) {
  if (!(beam.waist > 0.0)) throw std::invalid_argument("gaussian_beam: waist must be positive");
  if (!(beam.omega > 0.0)) throw std::invalid_argument("gaussian_beam: omega must be positive");
  const double xr = beam.rayleigh_range();
  const Complex k = beam.wavenumber();
  auto width = [&](double y) { return beam.waist * std::sqrt(1.0 + (y / xr) * (y / xr)); };
  auto curvature = [&](double y) { return y / (y * y + xr * xr); };
  ComplexField u(grid);
  for (int i = 0; i < grid.n(); ++i) {
    const double dx = grid.x1(i) - beam.focus1;
    for (int j = 0; j < grid.n(); ++j) {
      const double x2 = grid.x2(j);
      const double dy = x2 - beam.focus2;
      const double wy = width(dy);
      const double envelope = beam.waist / wy * std::exp(-(dx / wy) * (dx / wy));
      const Complex phase = std::exp(Complex(0.0, -1.0) * k * (dy + 0.5 * curvature(beam.literalCurvature ? x2 : dy) * dx * dx));
      u(i, j) = envelope * phase;
    }
  }
  return u;
}

ComplexField scattering_source(const MediaModel& media, double omega, const ComplexField& u_inc) {
  require_same_grid(media.grid, u_inc.grid(), "scattering_source");
  ComplexField f(media.grid);
  const double c2o = media.c_o * media.c_o;
  const Complex attenuation(1.0, media.a_o / omega);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double c = media.c[k];
    const Complex contrast = omega * omega * (c2o - c * c) / c2o * attenuation +
                             Complex(0.0, omega * (media.a[k] - media.a_o));
    f[k] = -contrast * u_inc[k];
  }
  return f;
}

}  // namespace helmprec
