#include "qtop/emission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qtop {

namespace {

constexpr double kPi = KGrid::kPi;

complexd inner(const Vec2c& bra, const Vec2c& ket) {
  return std::conj(bra[0]) * ket[0] + std::conj(bra[1]) * ket[1];
}

double c_plus_sq_point(const ModelSpec& spec_i, const ModelSpec& spec_f, double k) {
  const BandPair bi = eigensystem(spec_i.d_vector(k));
  const BandPair bf = eigensystem(spec_f.d_vector(k));
  return std::norm(inner(bf.v_plus, bi.v_minus));
}

double omega_of(const ModelSpec& spec, double k) { return gap_frequency(spec.d_vector(k)); }

void require_qwz_final(const ModelSpec& spec_f) {
  if (spec_f.family() != Family::Qwz1d) {
    throw ValidationError("the emission scheme needs a QWZ1D final Hamiltonian");
  }
}

double bisect_k1(const ModelSpec& spec_f, double target) {
  double a = 0.0, b = kPi;
  const double fa = omega_of(spec_f, a) - target;
  const double fb = omega_of(spec_f, b) - target;
  if (fa > 0.0 || fb < 0.0) {
    throw RootFindFailureError("omega = " + std::to_string(target) +
                               " outside the final-state gap range");
  }
  while (b - a > kBisectTol) {
    const double mid = 0.5 * (a + b);
    if (omega_of(spec_f, mid) - target <= 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double dipole_element(const ModelSpec& spec_f, double k) {
  require_qwz_final(spec_f);
  const int n = spec_f.harmonic();
  if (n == 0) return 0.0;  // every term carries a factor n
  const DVector d = qwz_d_vector(spec_f, k);
  const double dx = d.a, dz = d.b;
  if (std::abs(dx) < kSingularDxFloor) {
    throw SingularKError("dipole element undefined where d_x vanishes (k = " +
                         std::to_string(k) + ")");
  }
  const double w = gap_frequency(d);
  const double t_s = spec_f.qwz_t_s(), t_so = spec_f.qwz_t_so();
  const double nk = n * k;
  const double numerator =
      2.0 * n * dx * dz * t_so * std::cos(nk) - 4.0 * n * dx * dx * t_s * std::sin(nk);
  // Dividing by the signed d_x keeps r even in k; the |d_x| variant differs
  // only by the gauge sign sgn(d_x).
  return numerator / (w * w * dx);
}

double intensity_k(const ModelSpec& spec_i, const ModelSpec& spec_f, double k) {
  require_qwz_final(spec_f);
  const double w = omega_of(spec_f, k);
  const double r = dipole_element(spec_f, k);
  const double c2 = c_plus_sq_point(spec_i, spec_f, k);
  return w * w * w * w * r * r * c2 * c2;
}

std::pair<double, double> omega_range(const ModelSpec& spec, const KGrid& grid) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  auto take = [&](double w) {
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  };
  for (double k : grid.samples()) take(omega_of(spec, k));
  const int n = spec.harmonic();
  if (n >= 1 && spec.family() != Family::Generic) {
    // analytic extrema sit where sin(nk) = 0, never on the offset grid
    for (int j = 0; j <= n; ++j) take(omega_of(spec, j * kPi / n));
  } else if (n == 0 && spec.family() != Family::Generic) {
    take(omega_of(spec, 0.0));
  }
  return {lo, hi};
}

EmissionSpectrum spectrum(const ModelSpec& spec_i, const ModelSpec& spec_f, const KGrid& grid,
                          int n_bins) {
  require_qwz_final(spec_f);
  if (n_bins < 2) throw ValidationError("n_bins must be >= 2");
  grid.validate_harmonic(spec_f.harmonic());

  const OverlapProfile overlap = overlap_direct(spec_i, spec_f, grid);

  EmissionSpectrum sp;
  const int n = grid.size();
  sp.k = grid.samples();
  sp.omega_k.resize(n);
  sp.dipole.resize(n);
  sp.intensity_k.resize(n);
  sp.c_plus_4_k.resize(n);
  for (int j = 0; j < n; ++j) {
    sp.omega_k[j] = omega_of(spec_f, sp.k[j]);
    sp.dipole[j] = dipole_element(spec_f, sp.k[j]);
    const double c2 = overlap.c_plus_sq[j];
    sp.c_plus_4_k[j] = c2 * c2;
    const double w = sp.omega_k[j];
    sp.intensity_k[j] = w * w * w * w * sp.dipole[j] * sp.dipole[j] * sp.c_plus_4_k[j];
  }

  // Monotonicity certificate on the positive half zone, endpoints included.
  const double w0 = omega_of(spec_f, 0.0);
  const double wpi = omega_of(spec_f, kPi);
  bool monotone = w0 < sp.omega_k[grid.half_begin()] && sp.omega_k[n - 1] < wpi;
  for (int j = grid.half_begin() + 1; monotone && j < n; ++j) {
    monotone = sp.omega_k[j] > sp.omega_k[j - 1];
  }
  if (!monotone) {
    throw MultiMinimumError(
        "omega(k) is not single-minimum on the half zone; the spectral inversion is ambiguous");
  }
  sp.monotonic_certificate = true;
  sp.omega_min = w0;
  sp.omega_max = wpi;
  sp.bin_width = (wpi - w0) / n_bins;

  sp.omega_centers.resize(n_bins);
  sp.intensity_density.assign(n_bins, 0.0);
  sp.intensity_line.resize(n_bins);
  sp.k1_roots.resize(n_bins);
  for (int b = 0; b < n_bins; ++b) {
    sp.omega_centers[b] = w0 + (b + 0.5) * sp.bin_width;
  }

  // Mass binning: superpose the +-k roots (the overlap is even in k for the
  // symmetric class, so the half-zone mass is doubled) and divide by the bin
  // width. Bin sums then reproduce the integrated k-domain intensity exactly.
  for (int j = grid.half_begin(); j < n; ++j) {
    int b = static_cast<int>((sp.omega_k[j] - w0) / sp.bin_width);
    b = std::clamp(b, 0, n_bins - 1);
    sp.intensity_density[b] += 2.0 * sp.intensity_k[j] * grid.spacing() / sp.bin_width;
  }

  // Line intensity I(omega) = I(k1) + I(-k1) at bin centers.
  for (int b = 0; b < n_bins; ++b) {
    sp.k1_roots[b] = bisect_k1(spec_f, sp.omega_centers[b]);
    sp.intensity_line[b] = 2.0 * intensity_k(spec_i, spec_f, sp.k1_roots[b]);
  }
  return sp;
}

std::vector<double> invert_spectrum(const EmissionSpectrum& sp, const ModelSpec& spec_f) {
  require_qwz_final(spec_f);
  if (!sp.monotonic_certificate) {
    throw MultiMinimumError("spectrum lacks the monotonicity certificate; cannot invert");
  }
  const std::size_t n_bins = sp.omega_centers.size();
  std::vector<double> recovered(n_bins, 0.0);
  for (std::size_t b = 0; b < n_bins; ++b) {
    const double k1 = bisect_k1(spec_f, sp.omega_centers[b]);
    const double w = omega_of(spec_f, k1);
    const double r = dipole_element(spec_f, k1);
    const double kernel = 2.0 * w * w * w * w * r * r;
    recovered[b] = kernel > 0.0 ? sp.intensity_line[b] / kernel : 0.0;
  }
  const double peak = *std::max_element(recovered.begin(), recovered.end());
  if (peak > 0.0) {
    for (double& v : recovered) v /= peak;
  }
  return recovered;
}

int count_cp_spectrum(std::span<const double> recovered, const PeakThresholds& thresholds) {
  const double hi = 1.0 - thresholds.eps_hi;
  const double lo = thresholds.eps_lo;
  int transitions = 0;
  int state = -1;  // -1 undecided, 0 low, 1 high
  for (double s : recovered) {
    int zone = -1;
    if (s <= lo) zone = 0;
    if (s >= hi) zone = 1;
    if (zone < 0) continue;
    if (state >= 0 && zone != state) ++transitions;
    state = zone;
  }
  return transitions;
}

}  // namespace qtop
