#include "qtop/coldatom.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace qtop {

namespace {

// Counter-based per-point generator: a splitmix64 stream whose state is a
// hash of (seed, point index), so draws are independent of evaluation order.
struct SplitMix64 {
  using result_type = std::uint64_t;
  std::uint64_t s;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }
  result_type operator()() {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void validate(const ColdAtomSpec& spec) {
  if (!(spec.t_s > 0.0) || !(spec.t_so > 0.0)) {
    throw ValidationError("cold-atom spec requires t_s > 0 and t_so > 0");
  }
  if (!(spec.a > 0.0)) throw ValidationError("lattice constant a must be positive");
  if (spec.n < 0) throw ValidationError("harmonic index n must be >= 0");
}

int nu_final_of(const ModelSpec& spec_f, const KGrid& grid) {
  if (spec_f.family() == Family::Generic) {
    return winding_number(angle_profile(spec_f, grid)).winding;
  }
  return analytic_topological_number(spec_f);
}

CPReport pipeline(const ModelSpec& spec_i, const ModelSpec& spec_f, const KGrid& grid, int shots,
                  std::uint64_t seed, const PeakThresholds& thresholds, int nu_final) {
  const DensityProfile densities = synthesize_densities(spec_i, spec_f, grid, shots, seed);
  const std::vector<double> estimate = infer_overlap(densities);
  CPReport report = count_cp_peaks(estimate, thresholds, grid.samples(), true);
  report.inferred_initial_candidates = infer_initial(report, nu_final, true);
  return report;
}

}  // namespace

ModelSpec effective_model(const ColdAtomSpec& spec) {
  validate(spec);
  const double m = 0.5 * spec.delta;
  const double t_s = spec.t_s, t_so = spec.t_so;
  const int n = spec.n;
  return ModelSpec::generic(Plane::YZ, [m, t_s, t_so, n](double x) {
    return std::array<double, 2>{2.0 * t_so * std::sin(n * x), m - 2.0 * t_s * std::cos(n * x)};
  });
}

int coldatom_topological_number(const ColdAtomSpec& spec) {
  validate(spec);
  const double lhs = std::abs(0.5 * spec.delta);
  const double rhs = 2.0 * spec.t_s;
  const double scale = std::max({lhs, rhs, 1.0});
  if (std::abs(lhs - rhs) <= kCriticalRelTol * scale) {
    throw CriticalPointError("cold-atom spec at the phase boundary |delta/2| = 2 t_s");
  }
  return lhs < rhs ? spec.n : 0;
}

ColdAtomSpec prepared_down(const ColdAtomSpec& base) {
  ColdAtomSpec down = base;
  down.delta = 2.0e6 * base.t_s;
  return down;
}

DensityProfile synthesize_from_probabilities(std::span<const double> p, const KGrid& grid,
                                             int shots, std::uint64_t seed) {
  if (shots < 1) throw ValidationError("shots must be >= 1");
  if (static_cast<int>(p.size()) != grid.size()) {
    throw ValidationError("probability profile does not match the grid");
  }
  DensityProfile out{grid, 1.0, {}, {}, shots, seed};
  out.n_up.resize(p.size());
  out.n_down.resize(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    double pj = std::clamp(p[j], 0.0, 1.0);
    // probabilities beyond double resolution are exact outcomes
    if (pj < 1e-15) pj = 0.0;
    if (pj > 1.0 - 1e-15) pj = 1.0;
    int up;
    if (pj == 0.0) {
      up = 0;
    } else if (pj == 1.0) {
      up = shots;
    } else {
      SplitMix64 eng{mix(seed, j)};
      up = std::binomial_distribution<int>(shots, pj)(eng);
    }
    out.n_up[j] = up;
    out.n_down[j] = shots - up;
  }
  return out;
}

DensityProfile synthesize_densities(const ModelSpec& spec_i, const ModelSpec& spec_f,
                                    const KGrid& grid, int shots, std::uint64_t seed) {
  const OverlapProfile overlap = overlap_direct(spec_i, spec_f, grid);
  return synthesize_from_probabilities(overlap.c_plus_sq, grid, shots, seed);
}

std::vector<double> infer_overlap(const DensityProfile& densities) {
  if (densities.shots < 1) {
    throw ZeroShotsError("density profile has no measurement shots");
  }
  std::vector<double> estimate(densities.n_up.size());
  for (std::size_t j = 0; j < estimate.size(); ++j) {
    const int total = densities.n_up[j] + densities.n_down[j];
    if (total < 1) throw ZeroShotsError("no shots at grid point " + std::to_string(j));
    estimate[j] = static_cast<double>(densities.n_up[j]) / total;
  }
  return estimate;
}

CPReport end_to_end(const ModelSpec& spec_i, const ModelSpec& spec_f, const KGrid& grid,
                    int shots, std::uint64_t seed, const PeakThresholds& thresholds) {
  return pipeline(spec_i, spec_f, grid, shots, seed, thresholds, nu_final_of(spec_f, grid));
}

CPReport end_to_end(const ColdAtomSpec& spec_i, const ColdAtomSpec& spec_f, const KGrid& grid,
                    int shots, std::uint64_t seed, const PeakThresholds& thresholds) {
  return pipeline(effective_model(spec_i), effective_model(spec_f), grid, shots, seed, thresholds,
                  coldatom_topological_number(spec_f));
}

}  // namespace qtop
