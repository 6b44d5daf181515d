#pragma once

#include <span>
#include <vector>

#include "qtop/grid.hpp"
#include "qtop/model.hpp"

namespace qtop {

/// Which angle carries the winding.
/// ThetaBranch: plane contains z; the track is the lower-band mixing angle
/// theta_-(k) and the relative phase alpha-beta is a constant.
/// PhaseBranch: plane xy; theta is pinned at pi/4 and the track is half the
/// relative phase between the eigenvector components.
enum class AngleKind { ThetaBranch, PhaseBranch };

/// Branch-continuous gauge angles over the Brillouin zone.
struct AngleProfile {
  KGrid grid;
  Plane plane;
  AngleKind kind;
  std::vector<double> angle;    // unwrapped winding track, one sample per k_j
  double aux_const;             // the other track: rho/2 for ThetaBranch, theta for PhaseBranch
  double closed_total;          // change of `angle` over a full period, seam included
  std::vector<BandPair> bands;  // raw eigen-data per sample
};

/// Lower-band mixing angle mod pi in (-pi/2, pi/2], extracted phase-blind
/// from eigenvector component magnitudes and their relative phase.
double theta_branch_raw(const Vec2c& v, Plane plane);

/// Half relative phase mod pi in (-pi/2, pi/2] for xy-plane eigenvectors.
double phase_branch_raw(const Vec2c& v);

/// Adds integer multiples of `period` so consecutive samples differ by less
/// than period/2. Throws UnwrapFailure when a corrected step comes too close
/// to the aliasing limit (grid too coarse).
std::vector<double> unwrap_sequence(std::span<const double> raw, double period);

AngleProfile angle_profile(const ModelSpec& spec, const KGrid& grid);

/// Same, with the model recast into `plane` (requires the off-axis component
/// of the recast model to vanish identically; used after plane reduction).
AngleProfile angle_profile_in_plane(const ModelSpec& spec, const KGrid& grid, Plane plane);

/// Doubles the grid (up to 2^20) until the unwrap succeeds.
AngleProfile angle_profile_refined(const ModelSpec& spec, int n_start);

struct WindingResult {
  int winding = 0;
  double residual = 0.0;
};

/// Integer winding from the closed-loop angle change. The sign convention is
/// fixed so that topological QWZ1D and SSH phases report nu = +n.
/// Throws NonIntegerWinding when the residual exceeds 0.01.
WindingResult winding_number(const AngleProfile& profile);

}  // namespace qtop
