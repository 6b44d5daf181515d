#include "qtop/gauge.hpp"

#include <cmath>
#include <string>

namespace qtop {

namespace {

constexpr double kPi = KGrid::kPi;

// Corrected steps whose magnitude lands above this fraction of the Nyquist
// bound period/2 are treated as aliasing.
constexpr double kUnwrapGuard = 0.9;

double unwrap_step(double prev, double raw, double period) {
  return raw + period * std::round((prev - raw) / period);
}

// Per-axis view of a DVector: x, y, z with the plane's two slots filled.
struct Axes {
  double x = 0.0, y = 0.0, z = 0.0;
};

Axes to_axes(const DVector& d) {
  switch (d.plane) {
    case Plane::XZ: return {d.a, 0.0, d.b};
    case Plane::YZ: return {0.0, d.a, d.b};
    case Plane::XY: return {d.a, d.b, 0.0};
  }
  return {};
}

// Maps the model into `plane` when its component off that plane vanishes;
// identity when planes already agree.
DVector recast(const DVector& d, Plane target) {
  if (d.plane == target) return d;
  const Axes v = to_axes(d);
  double a = 0.0, b = 0.0, off = 0.0;
  switch (target) {
    case Plane::XZ: a = v.x; b = v.z; off = v.y; break;
    case Plane::YZ: a = v.y; b = v.z; off = v.x; break;
    case Plane::XY: a = v.x; b = v.y; off = v.z; break;
  }
  if (std::abs(off) > 1e-12) {
    throw PlaneMismatchError("cannot recast " + plane_name(d.plane) + " model into " +
                             plane_name(target) + ": off-plane component " + std::to_string(off));
  }
  return DVector{a, b, target};
}

}  // namespace

double theta_branch_raw(const Vec2c& v, Plane plane) {
  const complexd cross = v[1] * std::conj(v[0]);
  double s2;
  switch (plane) {
    case Plane::XZ: s2 = 2.0 * cross.real(); break;
    case Plane::YZ: s2 = 2.0 * cross.imag(); break;
    case Plane::XY:
      // theta is fixed by magnitudes alone in the xy plane
      return std::atan2(std::abs(v[1]), std::abs(v[0]));
  }
  const double c2 = std::norm(v[0]) - std::norm(v[1]);
  double theta = 0.5 * std::atan2(s2, c2);
  if (theta <= -0.5 * kPi) theta += kPi;
  return theta;
}

double phase_branch_raw(const Vec2c& v) {
  double half = 0.5 * std::arg(v[1] * std::conj(v[0]));
  if (half <= -0.5 * kPi) half += kPi;
  if (half > 0.5 * kPi) half -= kPi;
  return half;
}

std::vector<double> unwrap_sequence(std::span<const double> raw, double period) {
  std::vector<double> out;
  out.reserve(raw.size());
  if (raw.empty()) return out;
  out.push_back(raw[0]);
  const double guard = kUnwrapGuard * 0.5 * period;
  for (std::size_t j = 1; j < raw.size(); ++j) {
    const double next = unwrap_step(out.back(), raw[j], period);
    if (std::abs(next - out.back()) > guard) {
      throw UnwrapFailureError("step " + std::to_string(std::abs(next - out.back())) +
                               " at sample " + std::to_string(j) +
                               " too close to the aliasing limit; refine the grid");
    }
    out.push_back(next);
  }
  return out;
}

AngleProfile angle_profile_in_plane(const ModelSpec& spec, const KGrid& grid, Plane plane) {
  grid.validate_harmonic(spec.harmonic());
  const auto kind = (plane == Plane::XY) ? AngleKind::PhaseBranch : AngleKind::ThetaBranch;

  std::vector<BandPair> bands;
  std::vector<double> raw;
  bands.reserve(grid.size());
  raw.reserve(grid.size());
  for (double k : grid.samples()) {
    const DVector d = recast(spec.d_vector(k), plane);
    bands.push_back(eigensystem(d));
    raw.push_back(kind == AngleKind::ThetaBranch ? theta_branch_raw(bands.back().v_minus, plane)
                                                 : phase_branch_raw(bands.back().v_minus));
  }

  std::vector<double> angle = unwrap_sequence(raw, kPi);
  // periodic closure: unwrap the first raw sample once more against the end
  const double closure = unwrap_step(angle.back(), raw.front(), kPi);
  const double guard = kUnwrapGuard * 0.5 * kPi;
  if (std::abs(closure - angle.back()) > guard) {
    throw UnwrapFailureError("seam step too close to the aliasing limit; refine the grid");
  }
  const double closed_total = closure - angle.front();

  double aux;
  if (kind == AngleKind::PhaseBranch) {
    aux = 0.25 * kPi;  // theta pinned at pi/4
  } else {
    aux = (plane == Plane::XZ) ? 0.0 : 0.25 * kPi;  // constant rho/2 per plane
  }
  return AngleProfile{grid, plane, kind, std::move(angle), aux, closed_total, std::move(bands)};
}

AngleProfile angle_profile(const ModelSpec& spec, const KGrid& grid) {
  return angle_profile_in_plane(spec, grid, spec.plane());
}

AngleProfile angle_profile_refined(const ModelSpec& spec, int n_start) {
  for (int n = std::max(n_start, KGrid::kMinSize); n <= (1 << 20); n *= 2) {
    try {
      return angle_profile(spec, KGrid(n));
    } catch (const UnwrapFailureError&) {
      if (2 * n > (1 << 20)) throw;
    }
  }
  throw UnwrapFailureError("no admissible grid up to 2^20 samples");
}

WindingResult winding_number(const AngleProfile& profile) {
  // Sign convention chosen so topological QWZ1D and SSH report nu = +n.
  const double sign = profile.kind == AngleKind::ThetaBranch ? -1.0 : 1.0;
  const double w_raw = sign * profile.closed_total / kPi;
  const double rounded = std::round(w_raw);
  const double residual = std::abs(w_raw - rounded);
  if (!std::isfinite(w_raw) || residual > 0.01) {
    throw NonIntegerWindingError("winding " + std::to_string(w_raw) +
                                 " has residual above 0.01: gapless model, coarse grid or "
                                 "invalid gauge");
  }
  return WindingResult{static_cast<int>(rounded), residual};
}

}  // namespace qtop
