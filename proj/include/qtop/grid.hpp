#pragma once

#include <vector>

namespace qtop {

/// Uniform momentum grid over (-pi, pi] with half-step offset:
/// k_j = -pi + (j + 1/2) * 2pi/N. The offset keeps samples away from the
/// sin(nk) = 0 momenta where the mixing-angle parametrization degenerates.
class KGrid {
 public:
  explicit KGrid(int n);

  int size() const { return n_; }
  double spacing() const { return dk_; }
  double k(int j) const { return -kPi + (j + 0.5) * dk_; }
  const std::vector<double>& samples() const { return samples_; }

  /// Index of the sample at -k(j).
  int mirror(int j) const { return n_ - 1 - j; }

  /// First index with k > 0; [half_begin(), size()) is the positive half.
  int half_begin() const { return n_ / 2; }

  /// Verifies no sample hits sin(nk) = 0 for harmonic n >= 1.
  void validate_harmonic(int n) const;

  static constexpr int kMinSize = 64;
  static constexpr double kPi = 3.141592653589793238462643383279502884;

 private:
  int n_;
  double dk_;
  std::vector<double> samples_;
};

}  // namespace qtop
