#include "qtop/grid.hpp"

#include <numeric>
#include <string>

#include "qtop/errors.hpp"

namespace qtop {

KGrid::KGrid(int n) : n_(n), dk_(2.0 * kPi / n) {
  if (n < kMinSize) {
    throw ValidationError("grid size " + std::to_string(n) + " below the minimum " +
                          std::to_string(kMinSize));
  }
  if (n % 2 != 0) {
    throw ValidationError("grid size must be even so the +-k halves mirror exactly");
  }
  samples_.reserve(n_);
  for (int j = 0; j < n_; ++j) samples_.push_back(k(j));
}

void KGrid::validate_harmonic(int n) const {
  if (n <= 0) return;
  // A sample hits sin(nk) = 0 iff N divides n(2j+1) for some j, i.e. iff
  // N / gcd(N, n) is odd.
  const int g = std::gcd(n_, n);
  if ((n_ / g) % 2 == 1) {
    throw ValidationError("grid size " + std::to_string(n_) + " aliases harmonic n=" +
                          std::to_string(n) + " onto a sin(nk) = 0 sample; use a power-of-two N");
  }
}

}  // namespace qtop
