#include "qtop/overlap.hpp"

#include <cmath>
#include <string>

namespace qtop {

namespace {

constexpr double kPi = KGrid::kPi;

bool fits_plane(const ModelSpec& spec, const KGrid& grid, Plane target) {
  if (spec.plane() == target) return true;
  for (double k : grid.samples()) {
    const DVector d = spec.d_vector(k);
    double off = 0.0;
    const double x = d.plane == Plane::XZ || d.plane == Plane::XY ? d.a : 0.0;
    const double y = d.plane == Plane::YZ ? d.a : (d.plane == Plane::XY ? d.b : 0.0);
    const double z = d.plane == Plane::XY ? 0.0 : d.b;
    switch (target) {
      case Plane::XZ: off = y; break;
      case Plane::YZ: off = x; break;
      case Plane::XY: off = z; break;
    }
    if (std::abs(off) > 1e-12) return false;
  }
  return true;
}

complexd inner(const Vec2c& bra, const Vec2c& ket) {
  return std::conj(bra[0]) * ket[0] + std::conj(bra[1]) * ket[1];
}

void validate_delta_continuity(const std::vector<double>& delta) {
  for (std::size_t j = 1; j < delta.size(); ++j) {
    if (!(std::abs(delta[j] - delta[j - 1]) < 0.5 * kPi)) {
      throw UnwrapFailureError("overlap phase step at sample " + std::to_string(j) +
                               " breaks the continuity certificate; refine the grid");
    }
  }
}

struct ProfilePair {
  AngleProfile i, f;
  bool cross_plane;
};

ProfilePair paired_profiles(const ModelSpec& spec_i, const ModelSpec& spec_f, const KGrid& grid,
                            bool allow_cross_plane) {
  const auto common = common_plane(spec_i, spec_f, grid);
  if (common) {
    return {angle_profile_in_plane(spec_i, grid, *common),
            angle_profile_in_plane(spec_f, grid, *common), false};
  }
  if (!allow_cross_plane) {
    throw PlaneMismatchError("quench pair " + plane_name(spec_i.plane()) + " -> " +
                             plane_name(spec_f.plane()) +
                             " is outside the two-Pauli same-plane class; the CP theorem does "
                             "not apply (use --allow-cross-plane to compute anyway)");
  }
  return {angle_profile(spec_i, grid), angle_profile(spec_f, grid), true};
}

}  // namespace

std::optional<Plane> common_plane(const ModelSpec& spec_i, const ModelSpec& spec_f,
                                  const KGrid& grid) {
  if (spec_i.plane() == spec_f.plane()) return spec_i.plane();
  if (fits_plane(spec_i, grid, spec_f.plane())) return spec_f.plane();
  if (fits_plane(spec_f, grid, spec_i.plane())) return spec_i.plane();
  return std::nullopt;
}

OverlapProfile overlap_direct(const ModelSpec& spec_i, const ModelSpec& spec_f, const KGrid& grid,
                              bool allow_cross_plane) {
  auto [prof_i, prof_f, crossed] = paired_profiles(spec_i, spec_f, grid, allow_cross_plane);

  const int n = grid.size();
  std::vector<double> cps(n), cms(n), delta(n);
  for (int j = 0; j < n; ++j) {
    cps[j] = std::norm(inner(prof_f.bands[j].v_plus, prof_i.bands[j].v_minus));
    cms[j] = std::norm(inner(prof_f.bands[j].v_minus, prof_i.bands[j].v_minus));
    delta[j] = prof_i.angle[j] - prof_f.angle[j];
  }
  validate_delta_continuity(delta);

  return OverlapProfile{grid,
                        prof_i.plane,
                        prof_i.kind,
                        std::move(cps),
                        std::move(cms),
                        std::move(delta),
                        prof_i.closed_total - prof_f.closed_total,
                        OverlapMethod::DirectInnerProduct,
                        crossed};
}

OverlapProfile overlap_closed_form(const ModelSpec& spec_i, const ModelSpec& spec_f,
                                   const KGrid& grid) {
  auto [prof_i, prof_f, crossed] = paired_profiles(spec_i, spec_f, grid, false);

  const int n = grid.size();
  std::vector<double> cps(n), cms(n), delta(n);
  for (int j = 0; j < n; ++j) {
    const bool theta_i = prof_i.kind == AngleKind::ThetaBranch;
    const bool theta_f = prof_f.kind == AngleKind::ThetaBranch;
    const double th_i = theta_i ? prof_i.angle[j] : prof_i.aux_const;
    const double th_f = theta_f ? prof_f.angle[j] : prof_f.aux_const;
    const double rho_i = theta_i ? prof_i.aux_const : prof_i.angle[j];
    const double rho_f = theta_f ? prof_f.aux_const : prof_f.angle[j];
    const double s = std::sin(th_f - th_i);
    const double sp = std::sin(rho_i - rho_f);
    cps[j] = s * s + std::sin(2.0 * th_f) * std::sin(2.0 * th_i) * sp * sp;
    cms[j] = 1.0 - cps[j];
    delta[j] = prof_i.angle[j] - prof_f.angle[j];
  }
  validate_delta_continuity(delta);

  return OverlapProfile{grid,
                        prof_i.plane,
                        prof_i.kind,
                        std::move(cps),
                        std::move(cms),
                        std::move(delta),
                        prof_i.closed_total - prof_f.closed_total,
                        OverlapMethod::ClosedForm,
                        crossed};
}

double symmetry_check(const OverlapProfile& profile) {
  double worst = 0.0;
  const int n = profile.grid.size();
  for (int j = 0; j < n / 2; ++j) {
    worst = std::max(worst,
                     std::abs(profile.c_plus_sq[j] - profile.c_plus_sq[profile.grid.mirror(j)]));
  }
  return worst;
}

OverlapProfile overlap_direct_refined(const ModelSpec& spec_i, const ModelSpec& spec_f,
                                      int n_start, bool allow_cross_plane) {
  for (int n = std::max(n_start, KGrid::kMinSize); n <= (1 << 20); n *= 2) {
    try {
      return overlap_direct(spec_i, spec_f, KGrid(n), allow_cross_plane);
    } catch (const UnwrapFailureError&) {
      if (2 * n > (1 << 20)) throw;
    }
  }
  throw UnwrapFailureError("no admissible grid up to 2^20 samples");
}

}  // namespace qtop
