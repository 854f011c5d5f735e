#include "isostokes/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace iso {

namespace {

bool distinct(cd x, cd y, double tol) { return std::abs(x - y) > tol * (1.0 + std::abs(x) + std::abs(y)); }

void push_rays(std::vector<StokesRay>& out, double base, int a, int b, bool unfolding, double lo, double hi) {
  const double two_pi = 2 * kPi;
  long long n0 = static_cast<long long>(std::ceil((lo - base) / two_pi)) - 1;
  long long n1 = static_cast<long long>(std::floor((hi - base) / two_pi)) + 1;
  for (long long N = n0; N <= n1; ++N) {
    double d = base + two_pi * static_cast<double>(N);
    if (d > lo && d <= hi) out.push_back(StokesRay{d, a, b, unfolding});
  }
}

void sort_rays(std::vector<StokesRay>& r) {
  std::sort(r.begin(), r.end(), [](const StokesRay& x, const StokesRay& y) {
    if (x.direction != y.direction) return x.direction < y.direction;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
}

void check_window(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
    throw input_error("InvalidWindow", "angular window must be finite and non-empty");
}

}  // namespace

std::vector<StokesRay> stokes_directions_of(const std::vector<cd>& u, double lo, double hi, double tol) {
  check_window(lo, hi);
  std::vector<StokesRay> out;
  const int n = static_cast<int>(u.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b || !distinct(u[std::size_t(a)], u[std::size_t(b)], tol)) continue;
      push_rays(out, 1.5 * kPi - arg_p(u[std::size_t(a)] - u[std::size_t(b)]), a, b, false, lo, hi);
    }
  sort_rays(out);
  return out;
}

std::vector<StokesRay> stokes_directions(const SystemCoefficients& sys, const std::vector<cd>& t, double lo,
                                         double hi, const std::vector<std::pair<int, int>>& pairs, double tol) {
  check_window(lo, hi);
  auto u = sys.u(t);
  std::vector<std::pair<int, int>> todo = pairs;
  const bool explicit_pairs = !pairs.empty();
  if (!explicit_pairs)
    for (int a = 0; a < sys.n; ++a)
      for (int b = 0; b < sys.n; ++b)
        if (a != b) todo.emplace_back(a, b);
  std::vector<StokesRay> out;
  for (auto [a, b] : todo) {
    if (a < 0 || b < 0 || a >= sys.n || b >= sys.n || a == b)
      throw input_error("DimensionMismatch", "invalid eigenvalue pair");
    if (!distinct(u[std::size_t(a)], u[std::size_t(b)], tol)) {
      if (explicit_pairs)
        throw input_error("CoalescentPair", "u_" + std::to_string(a + 1) + " = u_" + std::to_string(b + 1) +
                                                " at this t: no Stokes ray");
      continue;
    }
    push_rays(out, 1.5 * kPi - arg_p(u[std::size_t(a)] - u[std::size_t(b)]), a, b, sys.same_block(a, b), lo, hi);
  }
  sort_rays(out);
  return out;
}

double StokesFan::tau_at(int nu) const {
  if (mu == 0) throw input_error("NoRays", "the fan has no Stokes rays");
  int q = nu >= 0 ? nu / mu : -((-nu + mu - 1) / mu);
  int r = nu - q * mu;
  return tau_basic[static_cast<std::size_t>(r)] + kPi * q;
}

StokesFan build_fan(const SystemCoefficients& sys, double eta, double tol) {
  std::vector<cd> lam;
  for (const auto& x : sys.u0) lam.push_back(x.c);
  StokesFan f;
  f.eta = eta;
  f.tau = 1.5 * kPi - eta;
  std::vector<double> dirs;
  for (std::size_t j = 0; j < lam.size(); ++j)
    for (std::size_t k = 0; k < lam.size(); ++k) {
      if (j == k || !distinct(lam[j], lam[k], tol)) continue;
      double a = arg_p(lam[j] - lam[k]);
      // representative in (eta - 2pi, eta]
      double d = a + 2 * kPi * std::ceil((eta - 2 * kPi - a) / (2 * kPi));
      while (d <= eta - 2 * kPi) d += 2 * kPi;
      while (d > eta) d -= 2 * kPi;
      if (std::abs(d - eta) <= tol || std::abs(d - (eta - 2 * kPi)) <= tol)
        throw input_error("NotAdmissible", "eta hits the ray of pair (" + std::to_string(j + 1) + "," +
                                               std::to_string(k + 1) + ")");
      dirs.push_back(d);
    }
  std::sort(dirs.begin(), dirs.end(), std::greater<>());
  for (double d : dirs)
    if (f.eta_basic.empty() || f.eta_basic.back() - d > tol) f.eta_basic.push_back(d);
  for (double e : f.eta_basic) f.tau_basic.push_back(1.5 * kPi - e);
  f.mu = static_cast<int>(f.eta_basic.size()) / 2;
  return f;
}

double Sector::bisector() const {
  if (std::isfinite(right) && std::isfinite(left)) return 0.5 * (right + left);
  return anchor;
}

Sector Sector::intersect(const Sector& o) const {
  Sector s;
  s.right = std::max(right, o.right);
  s.left = std::min(left, o.left);
  s.kind = SectorKind::Custom;
  s.anchor = 0.5 * (anchor + o.anchor);
  if (!(s.left > s.right)) throw numeric_error("EmptySector", "sectors do not overlap");
  return s;
}

Sector fan_sector(const StokesFan& fan, int nu) {
  Sector s;
  s.kind = SectorKind::S;
  if (fan.mu == 0) return s;
  s.right = fan.tau_at(nu) - kPi;
  s.left = fan.tau_at(nu + 1);
  s.anchor = s.bisector();
  return s;
}

namespace {
Sector widen(const std::vector<StokesRay>& rays, double lo_edge, double hi_edge, double tol, SectorKind kind) {
  Sector s;
  s.kind = kind;
  s.anchor = 0.5 * (lo_edge + hi_edge);
  for (const auto& r : rays) {
    if (std::abs(r.direction - lo_edge) <= tol || std::abs(r.direction - hi_edge) <= tol)
      throw input_error("OnCrossingLocus", "a Stokes ray points along the admissible direction");
    if (r.direction < lo_edge) s.right = std::max(s.right, r.direction);
    if (r.direction > hi_edge) s.left = std::min(s.left, r.direction);
  }
  return s;
}
}  // namespace

Sector sector_from_rays(const std::vector<cd>& u, double tau_tilde, int k, double tol) {
  double lo = tau_tilde - kPi + k * kPi, hi = tau_tilde + k * kPi;
  auto rays = stokes_directions_of(u, lo - 2 * kPi, hi + 2 * kPi, tol);
  return widen(rays, lo, hi, tol, SectorKind::S_t);
}

SectorPair build_sector(const SystemCoefficients& sys, const std::vector<cd>& t, double tau_tilde, int k, double tol) {
  double lo = tau_tilde - kPi + k * kPi, hi = tau_tilde + k * kPi;
  auto rays = stokes_directions(sys, t, lo - 2 * kPi, hi + 2 * kPi, {}, tol);
  std::vector<StokesRay> fixed;
  for (const auto& r : rays)
    if (!r.unfolding) fixed.push_back(r);
  SectorPair p;
  p.tau_tilde = tau_tilde;
  p.k = k;
  p.S = widen(rays, lo, hi, tol, SectorKind::S_t);
  p.S_hat = widen(fixed, lo, hi, tol, SectorKind::S_hat_t);
  return p;
}

Dominance dominance(const std::vector<cd>& u, int a, int b, double theta, double tol) {
  cd d = u.at(std::size_t(a)) - u.at(std::size_t(b));
  double v = (d * std::polar(1.0, theta)).real();
  if (std::abs(v) <= tol * (1.0 + std::abs(d)))
    throw input_error("OnStokesRay", "direction lies on a Stokes ray of the pair");
  return v > 0 ? Dominance::Dominant : Dominance::Subdominant;
}

bool on_crossing_locus(const std::vector<cd>& u, double tau_tilde, double tol) {
  auto rays = stokes_directions_of(u, tau_tilde - 2 * kPi, tau_tilde + 2 * kPi, tol);
  for (const auto& r : rays) {
    double x = std::remainder(r.direction - tau_tilde, kPi);
    if (std::abs(x) <= tol) return true;
  }
  return false;
}

}  // namespace iso
