#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qtop/overlap.hpp"

namespace qtop {

struct PeakThresholds {
  double eps_hi = 0.02;      // a peak must reach >= 1 - eps_hi
  double eps_lo = 0.02;      // a low must fall to <= eps_lo
  double suspect_low = 0.5;  // maxima in [suspect_low, 1 - eps_hi) are flagged
};

struct FalseCpFlag {
  double location = 0.0;  // k (or omega) of the suspect maximum
  double height = 0.0;
};

struct CPReport {
  std::optional<int> exact_count;        // phase-winding count, noise-free data only
  std::optional<double> exact_residual;
  int peak_count = 0;                    // hysteresis counter
  std::vector<FalseCpFlag> false_cp_flags;
  std::optional<bool> method_agreement;  // peak == exact with no flags
  std::vector<int> inferred_initial_candidates;
};

/// Complete-peak count from the total winding of the unwrapped overlap phase:
/// round(|delta_total| / pi). Equals |n_i - n_f| for same-plane pairs.
/// Throws NonIntegerWinding when the residual reaches 0.01.
CPReport count_cp_exact(const OverlapProfile& profile);

/// Measurement-style counter: a CP is a low -> high -> low excursion of the
/// (periodic, unless stated otherwise) sample sequence. Local maxima that stay
/// in [suspect_low, 1 - eps_hi) between two lows are flagged, not counted.
CPReport count_cp_peaks(std::span<const double> samples, const PeakThresholds& thresholds = {},
                        std::span<const double> axis = {}, bool periodic = true);

/// Both counters plus the agreement verdict.
CPReport analyze_profile(const OverlapProfile& profile, const PeakThresholds& thresholds = {});

/// {nu_final + dn, nu_final - dn}, negatives dropped when the family
/// constrains n >= 0. dn is the exact count when available, else peak_count.
std::vector<int> infer_initial(const CPReport& report, int nu_final, bool family_nonneg = true);

}  // namespace qtop
