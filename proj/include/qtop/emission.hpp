#pragma once

#include <span>
#include <utility>
#include <vector>

#include "qtop/cp_count.hpp"

namespace qtop {

/// Spontaneous-emission data. The omega-domain carries two intensities:
/// intensity_density is the mass-binned spectral density (its bin sum times
/// the bin width reproduces the integrated k-domain intensity exactly), and
/// intensity_line is the superposed line intensity I(omega) = 2 I(k1(omega))
/// evaluated at bin centers, which is what the inversion consumes.
struct EmissionSpectrum {
  // k-domain samples over the full grid
  std::vector<double> k;
  std::vector<double> omega_k;
  std::vector<double> dipole;       // r_-+(k)
  std::vector<double> intensity_k;  // omega^4 r^2 |c_+|^4
  std::vector<double> c_plus_4_k;

  // omega-domain bins
  double omega_min = 0.0;
  double omega_max = 0.0;
  double bin_width = 0.0;
  std::vector<double> omega_centers;
  std::vector<double> intensity_density;
  std::vector<double> intensity_line;
  std::vector<double> k1_roots;
  std::vector<double> recovered_c4;  // filled by invert_spectrum

  bool monotonic_certificate = false;
};

/// Interband dipole matrix element of the final QWZ Hamiltonian,
/// r_-+ = [2n d_x d_z t_so cos(nk) - 4n d_x^2 t_s sin(nk)] / (omega^2 d_x).
/// Even in k; identically zero for n = 0.
double dipole_element(const ModelSpec& spec_f, double k);

/// I(k) = omega^4 r_-+^2 |c_+(k)|^4 with the global emission constant at 1.
double intensity_k(const ModelSpec& spec_i, const ModelSpec& spec_f, double k);

/// Forward model: k-domain rows plus omega-domain binning over
/// [omega_min, omega_max] of the final model. Requires a final QWZ spec with
/// omega(k) strictly increasing on the positive half zone, otherwise throws
/// MultiMinimum.
EmissionSpectrum spectrum(const ModelSpec& spec_i, const ModelSpec& spec_f, const KGrid& grid,
                          int n_bins = 512);

/// Recovers |c_+(omega)|^4 per bin: solves omega(k1) = omega_center on
/// [0, pi] by bisection, divides the line intensity by the emission kernel
/// 2 omega^4 r_-+^2 and normalizes the result to peak 1.
std::vector<double> invert_spectrum(const EmissionSpectrum& sp, const ModelSpec& spec_f);

/// Hysteresis transition count over the omega-ordered samples. Each complete
/// peak contributes two transitions; a peak truncated at a domain edge
/// contributes one, so the count equals the initial topological number when
/// the final state is trivial.
int count_cp_spectrum(std::span<const double> recovered, const PeakThresholds& thresholds = {});

/// [min, max] of the gap frequency, including the analytic extrema at the
/// sin(nk) = 0 momenta that the offset grid never samples.
std::pair<double, double> omega_range(const ModelSpec& spec, const KGrid& grid);

inline constexpr int kDefaultBins = 512;
inline constexpr double kBisectTol = 1e-10;
inline constexpr double kDeadBinRelFloor = 1e-9;  // bins below this fraction of peak intensity

}  // namespace qtop
