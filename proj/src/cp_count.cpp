#include "qtop/cp_count.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qtop {

namespace {

constexpr double kPi = KGrid::kPi;

}  // namespace

CPReport count_cp_exact(const OverlapProfile& profile) {
  const double w = std::abs(profile.delta_total) / kPi;
  const double rounded = std::round(w);
  const double residual = std::abs(w - rounded);
  if (!std::isfinite(w) || residual >= 0.01) {
    throw NonIntegerWindingError("overlap phase winding " + std::to_string(w) +
                                 " is not an integer multiple of pi");
  }
  CPReport report;
  report.exact_count = static_cast<int>(rounded);
  report.exact_residual = residual;
  return report;
}

CPReport count_cp_peaks(std::span<const double> samples, const PeakThresholds& thresholds,
                        std::span<const double> axis, bool periodic) {
  CPReport report;
  const std::size_t n = samples.size();
  if (n == 0) return report;
  const double hi = 1.0 - thresholds.eps_hi;
  const double lo = thresholds.eps_lo;

  auto location = [&](std::size_t j) {
    return axis.size() == n ? axis[j] : static_cast<double>(j);
  };

  // Anchor the walk at a low sample; without one there is no low->high->low
  // pattern to register.
  std::size_t anchor = n;
  for (std::size_t j = 0; j < n; ++j) {
    if (samples[j] <= lo) {
      anchor = j;
      break;
    }
  }
  if (anchor == n) return report;

  // One full cycle from low anchor back to it. Between consecutive low
  // visits, classify every interior local maximum.
  const std::size_t len = periodic ? n + 1 : n - anchor;
  bool segment_has_high = false;
  std::vector<FalseCpFlag> segment_suspects;
  double prev = samples[anchor];
  double climb_max = prev;
  std::size_t climb_argmax = anchor;
  bool climbing = false;

  auto close_local_max = [&]() {
    if (!climbing) return;
    if (climb_max >= hi) {
      segment_has_high = true;
    } else if (climb_max >= thresholds.suspect_low) {
      segment_suspects.push_back({location(climb_argmax), climb_max});
    }
    climbing = false;
  };

  for (std::size_t step = 1; step < len; ++step) {
    const std::size_t j = (anchor + step) % n;
    const double s = samples[j];
    if (s > prev) {
      if (!climbing || s > climb_max) {
        climbing = true;
        climb_max = s;
        climb_argmax = j;
      }
    } else if (s < prev) {
      close_local_max();
    }
    if (s <= lo) {
      close_local_max();
      if (segment_has_high) ++report.peak_count;
      for (auto& f : segment_suspects) report.false_cp_flags.push_back(f);
      segment_suspects.clear();
      segment_has_high = false;
    }
    prev = s;
  }
  if (!periodic) {
    // trailing partial segment: maxima are still worth flagging, but an
    // excursion without a closing low is not a complete peak
    close_local_max();
    for (auto& f : segment_suspects) report.false_cp_flags.push_back(f);
  }
  return report;
}

CPReport analyze_profile(const OverlapProfile& profile, const PeakThresholds& thresholds) {
  CPReport exact = count_cp_exact(profile);
  CPReport peaks = count_cp_peaks(profile.c_plus_sq, thresholds, profile.grid.samples(), true);
  peaks.exact_count = exact.exact_count;
  peaks.exact_residual = exact.exact_residual;
  peaks.method_agreement =
      peaks.peak_count == *exact.exact_count && peaks.false_cp_flags.empty();
  return peaks;
}

std::vector<int> infer_initial(const CPReport& report, int nu_final, bool family_nonneg) {
  const int dn = report.exact_count ? *report.exact_count : report.peak_count;
  std::vector<int> candidates{nu_final + dn, nu_final - dn};
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  if (family_nonneg) {
    std::erase_if(candidates, [](int c) { return c < 0; });
  }
  return candidates;
}

}  // namespace qtop
