#include "helmprec/media.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "helmprec/errors.hpp"

namespace helmprec {

namespace {

constexpr double kRangeSlack = 1e-12;

template <typename F>
RealField sample(const Grid2D& grid, F&& fn) {
  RealField out(grid);
  for (int i = 0; i < grid.n(); ++i) {
    for (int j = 0; j < grid.n(); ++j) out(i, j) = fn(grid.x1(i), grid.x2(j));
  }
  return out;
}

void require_unit_box(const Grid2D& grid, const char* op) {
  if (grid.side() != 1.0) {
    throw std::invalid_argument(std::string(op) + ": profile is defined for L = 1 only, got L = " +
                                format_double(grid.side()));
  }
}

}  // namespace

void MediaModel::refresh_range() {
  cMin = c.min();
  cMax = c.max();
}

double smooth_heaviside(double s, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("smooth_heaviside: eta must be positive");
  const double t = s / eta;
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

MediaModel make_constant_medium(const Grid2D& grid, double c_o, double a_o) {
  if (!(c_o > 0.0) || !(a_o > 0.0)) {
    throw std::invalid_argument("make_constant_medium: c_o and a_o must be positive");
  }
  MediaModel m{grid, RealField(grid, c_o), RealField(grid, a_o), RealField(grid, 0.0),
               c_o,  a_o,                  c_o,                  c_o,
               DampingMap{{}, a_o}};
  return m;
}

MediaModel make_circular_inclusion(const Grid2D& grid, double c_o, double delta, double eta,
                                   double radius, double damping) {
  if (!(c_o > 0.0) || !(c_o + delta > 0.0)) {
    throw std::invalid_argument("make_circular_inclusion: speeds c_o and c_o + delta must be positive");
  }
  if (!(eta > 0.0)) throw std::invalid_argument("make_circular_inclusion: eta must be positive");
  if (!(damping > 0.0)) throw std::invalid_argument("make_circular_inclusion: damping must be positive");
  MediaModel m = make_constant_medium(grid, c_o, damping);
  if (delta != 0.0) {
    m.c = sample(grid, [&](double x1, double x2) {
      return c_o + delta * smooth_heaviside(radius - std::hypot(x1, x2), eta);
    });
  }
  m.refresh_range();
  return m;
}

void set_constant_damping(MediaModel& media, double damping) {
  if (!(damping > 0.0)) throw std::invalid_argument("set_constant_damping: damping must be positive");
  media.a = RealField(media.grid, damping);
  media.a_o = damping;
  media.dampingMap = DampingMap{{}, damping};
}

RealField make_zeta(const Grid2D& grid, ZetaProfile profile) {
  require_unit_box(grid, "make_zeta");
  return sample(grid, [&](double x1, double x2) {
    const double r = std::hypot(x1, x2);
    return r < profile.onset ? 0.0 : profile.slope * (r - profile.onset);
  });
}

ComplexField complexify_speed(const MediaModel& media) {
  ComplexField gamma(media.grid);
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    const double z = media.zeta[k];
    if (z > 0.0 && std::abs(media.c[k] - media.c_o) > 1e-12) {
      throw InvalidMedia("complexify_speed: zeta > 0 where c = " + format_double(media.c[k]) +
                         " differs from c_o = " + format_double(media.c_o));
    }
    gamma[k] = media.c[k] * Complex(1.0, -z);
  }
  return gamma;
}

MediaModel make_phantom(const Grid2D& grid, PhantomTissues t, ZetaProfile layer) {
  require_unit_box(grid, "make_phantom");
  MediaModel m = make_constant_medium(grid, t.c_o, t.a_o);
  m.zeta = make_zeta(grid, layer);
  for (int i = 0; i < grid.n(); ++i) {
    for (int j = 0; j < grid.n(); ++j) {
      const double r = std::hypot(grid.x1(i), grid.x2(j));
      const double skull =
          smooth_heaviside(r - t.innerRadius, t.eta) * smooth_heaviside(t.outerRadius - r, t.eta);
      const double brain = smooth_heaviside(t.innerRadius - r, t.eta);
      double c = t.c_o + (t.c_skull - t.c_o) * skull + (t.c_brain - t.c_o) * brain;
      double a = t.a_o + (t.a_skull - t.a_o) * skull + (t.a_brain - t.a_o) * brain;
      if (m.zeta(i, j) > 0.0) {
        c = t.c_o;
        a = t.a_o;
      }
      m.c(i, j) = c;
      m.a(i, j) = a;
    }
  }
  m.dampingMap = DampingMap{{{t.c_o, t.a_o}, {t.c_brain, t.a_brain}, {t.c_skull, t.a_skull}}, t.a_o};
  std::sort(m.dampingMap.entries.begin(), m.dampingMap.entries.end());
  m.refresh_range();
  return m;
}

double damping_at(const MediaModel& media, double speed) {
  // Tissue speeds of the law itself stay valid when smoothing keeps the
  // sampled field just short of them.
  double lo = media.cMin, hi = media.cMax;
  if (!media.dampingMap.entries.empty()) {
    lo = std::min(lo, media.dampingMap.entries.front().first);
    hi = std::max(hi, media.dampingMap.entries.back().first);
  }
  if (speed < lo - kRangeSlack || speed > hi + kRangeSlack) {
    throw std::invalid_argument("damping_at: speed " + format_double(speed) + " outside [" +
                                format_double(lo) + ", " + format_double(hi) + "]");
  }
  const auto& entries = media.dampingMap.entries;
  for (const auto& [c, a] : entries) {
    if (std::abs(c - speed) <= 1e-9) return a;
  }
  auto upper = std::upper_bound(entries.begin(), entries.end(), speed,
                                [](double s, const auto& e) { return s < e.first; });
  if (upper == entries.begin() || upper == entries.end()) return media.dampingMap.fallback;
  const auto& [c1, a1] = *(upper - 1);
  const auto& [c2, a2] = *upper;
  return a1 + (a2 - a1) * (speed - c1) / (c2 - c1);
}

}  // namespace helmprec
