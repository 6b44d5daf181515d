#pragma once

#include <optional>

#include "qtop/gauge.hpp"

namespace qtop {

enum class OverlapMethod { ClosedForm, DirectInnerProduct };

/// Projection of the pre-quench lower band onto the post-quench bands.
struct OverlapProfile {
  KGrid grid;
  Plane plane;
  AngleKind kind;
  std::vector<double> c_plus_sq;
  std::vector<double> c_minus_sq;
  std::vector<double> delta_angle;  // unwrapped angle_i - angle_f
  double delta_total;               // over a full period, seam included
  OverlapMethod provenance;
  bool cross_plane = false;
};

/// Common plane of a quench pair: equal planes match directly; otherwise a
/// spec whose component off the shared axis vanishes identically on the grid
/// is recast into the other plane. Empty when irreconcilable.
std::optional<Plane> common_plane(const ModelSpec& spec_i, const ModelSpec& spec_f,
                                  const KGrid& grid);

/// |<psi_f^+-|psi_i^->|^2 from numerically diagonalized eigenvectors.
/// Throws PlaneMismatch for irreducible cross-plane pairs unless
/// allow_cross_plane is set (no CP-theorem guarantee then).
OverlapProfile overlap_direct(const ModelSpec& spec_i, const ModelSpec& spec_f,
                              const KGrid& grid, bool allow_cross_plane = false);

/// Angle-difference form: sin^2(theta_f - theta_i) plus the relative-phase
/// term; specializes to sin^2(delta theta) for z-containing planes and to
/// sin^2(delta phi / 2) for xy pairs.
OverlapProfile overlap_closed_form(const ModelSpec& spec_i, const ModelSpec& spec_f,
                                   const KGrid& grid);

/// max_j |c_plus_sq(k_j) - c_plus_sq(-k_j)|.
double symmetry_check(const OverlapProfile& profile);

/// Pair computed on a grid doubled until the unwrap succeeds (up to 2^20).
OverlapProfile overlap_direct_refined(const ModelSpec& spec_i, const ModelSpec& spec_f,
                                      int n_start, bool allow_cross_plane = false);

}  // namespace qtop
