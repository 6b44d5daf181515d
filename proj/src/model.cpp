#include "qtop/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qtop/grid.hpp"

namespace qtop {

std::string plane_name(Plane p) {
  switch (p) {
    case Plane::XZ: return "xz";
    case Plane::YZ: return "yz";
    case Plane::XY: return "xy";
  }
  return "xz";
}

Plane plane_from_name(const std::string& name) {
  if (name == "xz") return Plane::XZ;
  if (name == "yz") return Plane::YZ;
  if (name == "xy") return Plane::XY;
  throw ValidationError("unknown plane tag '" + name + "' (expected xz, yz or xy)");
}

ModelSpec ModelSpec::qwz1d(double m, double t_s, double t_so, int n) {
  if (!(t_s > 0.0) || !(t_so > 0.0)) {
    throw ValidationError("QWZ1D requires t_s > 0 and t_so > 0");
  }
  if (n < 0) throw ValidationError("QWZ1D harmonic index n must be >= 0");
  if (!std::isfinite(m)) throw ValidationError("QWZ1D mass m must be finite");
  ModelSpec s;
  s.family_ = Family::Qwz1d;
  s.plane_ = Plane::XZ;
  s.n_ = n;
  s.p0_ = m;
  s.p1_ = t_s;
  s.p2_ = t_so;
  return s;
}

ModelSpec ModelSpec::ssh(double t1, double t2, int n) {
  if (t1 < 0.0 || !(t2 > 0.0)) {
    throw ValidationError("SSH requires t1 >= 0 and t2 > 0");
  }
  if (n < 0) throw ValidationError("SSH harmonic index n must be >= 0");
  ModelSpec s;
  s.family_ = Family::Ssh;
  s.plane_ = Plane::XY;
  s.n_ = n;
  s.p0_ = t1;
  s.p1_ = t2;
  return s;
}

ModelSpec ModelSpec::generic(Plane plane, std::function<std::array<double, 2>(double)> d) {
  if (!d) throw ValidationError("generic model requires a d-vector callback");
  ModelSpec s;
  s.family_ = Family::Generic;
  s.plane_ = plane;
  s.callback_ = std::move(d);
  return s;
}

ModelSpec ModelSpec::generic_table(Plane plane, std::vector<double> k, std::vector<double> d_a,
                                   std::vector<double> d_b) {
  const double two_pi = 2.0 * KGrid::kPi;
  if (k.size() < 2 || k.size() != d_a.size() || k.size() != d_b.size()) {
    throw ValidationError("tabulated model needs >= 2 rows of equal length");
  }
  for (std::size_t i = 1; i < k.size(); ++i) {
    if (!(k[i] > k[i - 1])) throw ValidationError("tabulated k must be strictly increasing");
  }
  if (k.back() - k.front() >= two_pi) {
    throw ValidationError("tabulated k must cover at most one open period (span < 2pi)");
  }
  ModelSpec s;
  s.family_ = Family::Generic;
  s.plane_ = plane;
  s.tab_k_ = std::move(k);
  s.tab_a_ = std::move(d_a);
  s.tab_b_ = std::move(d_b);
  return s;
}

ModelSpec ModelSpec::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open d-vector file " + path);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty d-vector file " + path);
  // strip optional BOM / whitespace
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  std::string expected = "k,d_a,d_b,plane";
  if (line != expected) {
    throw ValidationError("d-vector file header must be '" + expected + "', got '" + line + "'");
  }
  std::vector<double> k, a, b;
  std::string plane_tag;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::array<double, 3> vals{};
    for (int c = 0; c < 3; ++c) {
      if (!std::getline(ss, cell, ',')) {
        throw ValidationError("d-vector file row " + std::to_string(row) + " is short");
      }
      try {
        vals[c] = std::stod(cell);
      } catch (const std::exception&) {
        throw ValidationError("d-vector file row " + std::to_string(row) +
                              ": cannot parse '" + cell + "'");
      }
    }
    if (!std::getline(ss, cell, ',')) {
      throw ValidationError("d-vector file row " + std::to_string(row) + " lacks the plane tag");
    }
    if (plane_tag.empty()) {
      plane_tag = cell;
    } else if (plane_tag != cell) {
      throw ValidationError("d-vector file mixes plane tags ('" + plane_tag + "' vs '" + cell +
                            "')");
    }
    k.push_back(vals[0]);
    a.push_back(vals[1]);
    b.push_back(vals[2]);
  }
  if (plane_tag.empty()) throw ValidationError("d-vector file has no data rows");
  return generic_table(plane_from_name(plane_tag), std::move(k), std::move(a), std::move(b));
}

DVector ModelSpec::d_vector(double k) const {
  switch (family_) {
    case Family::Qwz1d:
      return qwz_d_vector(*this, k);
    case Family::Ssh:
      return ssh_d_vector(*this, k);
    case Family::Generic:
      break;
  }
  if (callback_) {
    auto d = callback_(k);
    return DVector{d[0], d[1], plane_};
  }
  // periodic linear interpolation of the table
  const double two_pi = 2.0 * KGrid::kPi;
  const double k0 = tab_k_.front();
  double x = std::fmod(k - k0, two_pi);
  if (x < 0.0) x += two_pi;
  x += k0;  // x in [k0, k0 + 2pi)
  auto it = std::upper_bound(tab_k_.begin(), tab_k_.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - tab_k_.begin());
  double xl, xr, al, ar, bl, br;
  if (hi == 0 || hi >= tab_k_.size()) {
    // wrap segment between the last sample and the first + 2pi
    xl = tab_k_.back();
    xr = tab_k_.front() + two_pi;
    al = tab_a_.back();
    ar = tab_a_.front();
    bl = tab_b_.back();
    br = tab_b_.front();
    if (hi == 0) x += two_pi;
  } else {
    xl = tab_k_[hi - 1];
    xr = tab_k_[hi];
    al = tab_a_[hi - 1];
    ar = tab_a_[hi];
    bl = tab_b_[hi - 1];
    br = tab_b_[hi];
  }
  const double t = (x - xl) / (xr - xl);
  return DVector{al + t * (ar - al), bl + t * (br - bl), plane_};
}

std::string ModelSpec::describe() const {
  std::ostringstream ss;
  switch (family_) {
    case Family::Qwz1d:
      ss << "qwz1d(m=" << p0_ << ", t_s=" << p1_ << ", t_so=" << p2_ << ", n=" << n_ << ")";
      break;
    case Family::Ssh:
      ss << "ssh(t1=" << p0_ << ", t2=" << p1_ << ", n=" << n_ << ")";
      break;
    case Family::Generic:
      ss << "generic(" << plane_name(plane_) << (callback_ ? ", callback" : ", table") << ")";
      break;
  }
  return ss.str();
}

DVector qwz_d_vector(const ModelSpec& spec, double k) {
  if (spec.family() != Family::Qwz1d) throw ValidationError("qwz_d_vector needs a QWZ1D spec");
  const double nk = spec.harmonic() * k;
  return DVector{spec.qwz_t_so() * std::sin(nk), spec.qwz_m() - 2.0 * spec.qwz_t_s() * std::cos(nk),
                 Plane::XZ};
}

DVector ssh_d_vector(const ModelSpec& spec, double k) {
  if (spec.family() != Family::Ssh) throw ValidationError("ssh_d_vector needs an SSH spec");
  const double nk = spec.harmonic() * k;
  return DVector{spec.ssh_t1() + spec.ssh_t2() * std::cos(nk), spec.ssh_t2() * std::sin(nk),
                 Plane::XY};
}

namespace {

// Hermitian matrix entries for H = d_a sigma_a + d_b sigma_b.
struct H2 {
  double h11;
  complexd h12;
};

H2 hamiltonian_entries(const DVector& d) {
  switch (d.plane) {
    case Plane::XZ: return {d.b, complexd{d.a, 0.0}};
    case Plane::YZ: return {d.b, complexd{0.0, -d.a}};
    case Plane::XY: return {0.0, complexd{d.a, -d.b}};
  }
  return {d.b, complexd{d.a, 0.0}};
}

void gauge_fix(Vec2c& v) {
  const complexd lead = std::abs(v[0]) > kGaugeFloor ? v[0] : v[1];
  const double mag = std::abs(lead);
  if (mag == 0.0) return;
  const complexd phase = std::conj(lead) / mag;
  v[0] *= phase;
  v[1] *= phase;
}

void normalize(Vec2c& v) {
  const double nrm = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  v[0] /= nrm;
  v[1] /= nrm;
}

}  // namespace

BandPair eigensystem(const DVector& d) {
  const double e2 = d.a * d.a + d.b * d.b;
  if (e2 < kGapFloor) {
    throw GaplessPointError("d_a^2 + d_b^2 = " + std::to_string(e2) +
                            " below the gap floor; protocol undefined here");
  }
  const double e = std::sqrt(e2);
  const auto [h11, h12] = hamiltonian_entries(d);

  // Branch-stable eigenvector of +E, orthogonal complement for -E.
  Vec2c vp;
  if (h11 >= 0.0) {
    vp = {complexd{e + h11, 0.0}, std::conj(h12)};
  } else {
    vp = {h12, complexd{e - h11, 0.0}};
  }
  normalize(vp);
  Vec2c vm = {-std::conj(vp[1]), std::conj(vp[0])};
  gauge_fix(vp);
  gauge_fix(vm);

  return BandPair{e, -e, vp, vm};
}

double gap_frequency(const DVector& d) {
  const double e2 = d.a * d.a + d.b * d.b;
  if (e2 < kGapFloor) {
    throw GaplessPointError("gap frequency undefined: model gapless at this k");
  }
  return 2.0 * std::sqrt(e2);
}

int analytic_topological_number(const ModelSpec& spec) {
  switch (spec.family()) {
    case Family::Qwz1d: {
      const double lhs = std::abs(spec.qwz_m());
      const double rhs = 2.0 * spec.qwz_t_s();
      const double scale = std::max({lhs, rhs, 1.0});
      if (std::abs(lhs - rhs) <= kCriticalRelTol * scale) {
        throw CriticalPointError("QWZ1D at the phase boundary |m| = 2 t_s");
      }
      return lhs < rhs ? spec.harmonic() : 0;
    }
    case Family::Ssh: {
      const double t1 = spec.ssh_t1(), t2 = spec.ssh_t2();
      const double scale = std::max({t1, t2, 1.0});
      if (std::abs(t1 - t2) <= kCriticalRelTol * scale) {
        throw CriticalPointError("SSH at the phase boundary t1 = t2");
      }
      return t1 < t2 ? spec.harmonic() : 0;
    }
    case Family::Generic:
      throw UnsupportedError(
          "no closed-form classification for generic d-vectors; use the numerical winding");
  }
  return 0;
}

}  // namespace qtop
