#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "qtop/errors.hpp"

namespace qtop {

using complexd = std::complex<double>;
using Vec2c = std::array<complexd, 2>;

/// Which two Pauli components are nonzero. Component order is (a, b):
/// xz -> (d_x, d_z), yz -> (d_y, d_z), xy -> (d_x, d_y).
enum class Plane { XZ, YZ, XY };

std::string plane_name(Plane p);
Plane plane_from_name(const std::string& name);

enum class Family { Qwz1d, Ssh, Generic };

/// Two nonzero d-vector components at one momentum.
struct DVector {
  double a = 0.0;
  double b = 0.0;
  Plane plane = Plane::XZ;
};

/// Eigenpair of H = d_a sigma_a + d_b sigma_b. Energies satisfy
/// e_plus = -e_minus; eigenvectors are unit norm with the first component of
/// magnitude > 1e-8 rotated to be real and positive (raw gauge).
struct BandPair {
  double e_plus = 0.0;
  double e_minus = 0.0;
  Vec2c v_plus{};
  Vec2c v_minus{};
};

// Numeric guards shared across the library.
inline constexpr double kGapFloor = 1e-14;        // on d_a^2 + d_b^2
inline constexpr double kGaugeFloor = 1e-8;       // component magnitude used for phase fixing
inline constexpr double kCriticalRelTol = 1e-9;   // phase-boundary detection
inline constexpr double kSingularDxFloor = 1e-12; // dipole-element safeguard

/// A parametrized two-band Bloch Hamiltonian, 2pi-periodic in k.
class ModelSpec {
 public:
  static ModelSpec qwz1d(double m, double t_s, double t_so, int n);
  static ModelSpec ssh(double t1, double t2, int n);
  static ModelSpec generic(Plane plane, std::function<std::array<double, 2>(double)> d);
  /// Tabulated samples over one period, k strictly increasing, linearly
  /// interpolated with periodic continuation.
  static ModelSpec generic_table(Plane plane, std::vector<double> k, std::vector<double> d_a,
                                 std::vector<double> d_b);
  /// Reads the CSV schema `k,d_a,d_b,plane`.
  static ModelSpec from_csv(const std::string& path);

  Family family() const { return family_; }
  Plane plane() const { return plane_; }
  int harmonic() const { return n_; }  // 0 for generic models

  DVector d_vector(double k) const;

  // Family parameters (only meaningful for the matching family).
  double qwz_m() const { return p0_; }
  double qwz_t_s() const { return p1_; }
  double qwz_t_so() const { return p2_; }
  double ssh_t1() const { return p0_; }
  double ssh_t2() const { return p1_; }

  std::string describe() const;

 private:
  ModelSpec() = default;

  Family family_ = Family::Qwz1d;
  Plane plane_ = Plane::XZ;
  int n_ = 0;
  double p0_ = 0.0, p1_ = 0.0, p2_ = 0.0;
  std::function<std::array<double, 2>(double)> callback_;
  std::vector<double> tab_k_, tab_a_, tab_b_;
};

/// d_x = t_so sin(nk), d_z = m - 2 t_s cos(nk), plane xz.
DVector qwz_d_vector(const ModelSpec& spec, double k);

/// d_x = t1 + t2 cos(nk), d_y = t2 sin(nk), plane xy.
DVector ssh_d_vector(const ModelSpec& spec, double k);

/// Closed-form spectrum and eigenvectors of the 2x2 Bloch Hamiltonian.
/// Throws GaplessPoint when d_a^2 + d_b^2 < kGapFloor.
BandPair eigensystem(const DVector& d);

/// Band gap omega = E_+ - E_- = 2 sqrt(d_a^2 + d_b^2), natural units.
double gap_frequency(const DVector& d);

/// QWZ1D: nu = n if |m| < 2 t_s else 0. SSH: nu = n if t1 < t2 else 0.
/// Throws CriticalPoint at a phase boundary, Unsupported for generic models.
int analytic_topological_number(const ModelSpec& spec);

}  // namespace qtop
