#pragma once

#include <cstdint>

#include "qtop/cp_count.hpp"

namespace qtop {

/// Raman-lattice parameters of the effective Hamiltonian
/// H(k) = 2 t_so sin(ka) sigma_y + (delta/2 - 2 t_s cos(ka)) sigma_z.
struct ColdAtomSpec {
  double delta = 0.0;  // two-photon detuning; m = delta/2 in natural units
  double t_s = 1.0;
  double t_so = 1.0;
  double a = 1.0;  // lattice constant; momenta are reported in units of 1/a
  int n = 1;
};

/// Spin-resolved momentum densities from repeated projective measurements.
struct DensityProfile {
  KGrid grid;  // samples are q*a, dimensionless
  double a = 1.0;
  std::vector<int> n_up;
  std::vector<int> n_down;
  int shots = 0;
  std::uint64_t seed = 0;
};

/// The yz-plane Bloch model realized by the lattice; unitarily equivalent to
/// the xz QWZ form with t_so' = 2 t_so.
ModelSpec effective_model(const ColdAtomSpec& spec);

/// nu = n if |delta/2| < 2 t_s else 0; throws CriticalPoint on the boundary.
int coldatom_topological_number(const ColdAtomSpec& spec);

/// The fully polarized |down> preparation, modeled as the deep trivial limit
/// delta/2 = 1e6 t_s.
ColdAtomSpec prepared_down(const ColdAtomSpec& base);

/// Per-point binomial draws with success probability |c_+(q)|^2, using a
/// counter-based stream keyed on (seed, grid index) so evaluation order does
/// not matter.
DensityProfile synthesize_densities(const ModelSpec& spec_i, const ModelSpec& spec_f,
                                    const KGrid& grid, int shots, std::uint64_t seed);

/// Same sampler on a precomputed probability profile (sweep harness path).
DensityProfile synthesize_from_probabilities(std::span<const double> p, const KGrid& grid,
                                             int shots, std::uint64_t seed);

/// c_+^2 estimate n_up / (n_up + n_down) per point.
std::vector<double> infer_overlap(const DensityProfile& densities);

/// Full pipeline: densities -> estimates -> peak counting -> inferred
/// candidates. Noisy data carries no exact count; the report's agreement
/// field stays unset.
CPReport end_to_end(const ModelSpec& spec_i, const ModelSpec& spec_f, const KGrid& grid,
                    int shots, std::uint64_t seed, const PeakThresholds& thresholds = {});
CPReport end_to_end(const ColdAtomSpec& spec_i, const ColdAtomSpec& spec_f, const KGrid& grid,
                    int shots, std::uint64_t seed, const PeakThresholds& thresholds = {});

}  // namespace qtop
