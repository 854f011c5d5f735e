#include "isostokes/cells.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace iso {

std::string CellSignature::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (i) s += ",";
    s += signs[i] > 0 ? "+" : "-";
  }
  return s + ")";
}

double wall_form(const std::vector<cd>& u, int a, int b, double tau_tilde) {
  cd d = u.at(std::size_t(a)) - u.at(std::size_t(b));
  double eta_t = 1.5 * kPi - tau_tilde;
  double c = std::cos(eta_t);
  if (std::abs(c) < 1e-12) return d.real();
  return d.imag() - std::tan(eta_t) * d.real();
}

std::vector<std::pair<int, int>> unfolding_pairs(const SystemCoefficients& sys) {
  std::vector<std::pair<int, int>> p;
  for (int a = 0; a < sys.n; ++a)
    for (int b = a + 1; b < sys.n; ++b)
      if (sys.same_block(a, b)) p.emplace_back(a, b);
  return p;
}

namespace {

double t_scale(const std::vector<cd>& t) {
  double s = 0;
  for (auto x : t) s = std::max(s, std::abs(x));
  return s;
}

std::string pair_name(int a, int b) { return "(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")"; }

}  // namespace

CellSignature cell_signature(const SystemCoefficients& sys, const std::vector<cd>& t, double tau_tilde, double tol) {
  auto u = sys.u(t);
  CellSignature s;
  s.tau_tilde = tau_tilde;
  s.pairs = unfolding_pairs(sys);
  double scale = 1.0 + t_scale(t);
  std::vector<std::string> hits;
  for (auto [a, b] : s.pairs) {
    if (std::abs(u[std::size_t(a)] - u[std::size_t(b)]) <= tol * scale)
      throw input_error("OnWall", "pair " + pair_name(a, b) + " coalesces at this t");
    double L = wall_form(u, a, b, tau_tilde);
    if (std::abs(L) <= tol * scale) hits.push_back(pair_name(a, b));
    s.signs.push_back(L > 0 ? 1 : -1);
  }
  if (hits.size() == 1) throw input_error("OnWall", "L vanishes for pair " + hits.front());
  if (hits.size() > 1) {
    std::string all;
    for (auto& h : hits) all += h;
    throw input_error("MultiWall", "several forms vanish: " + all);
  }
  return s;
}

std::vector<CrossingEvent> detect_crossings(const SystemCoefficients& sys,
                                            const std::vector<std::vector<cd>>& waypoints, double tau_tilde,
                                            double tol, bool include_fixed_pairs) {
  if (waypoints.empty()) throw input_error("ConfigInvalid", "path has no waypoints");
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < sys.n; ++a)
    for (int b = a + 1; b < sys.n; ++b)
      if (sys.same_block(a, b) || include_fixed_pairs) pairs.emplace_back(a, b);

  auto check_endpoint = [&](const std::vector<cd>& t) {
    auto u = sys.u(t);
    double scale = 1.0 + t_scale(t);
    for (auto [a, b] : pairs) {
      bool moving = false;
      // a pair frozen along the whole path is not a wall
      for (const auto& w : waypoints)
        if (std::abs(wall_form(sys.u(w), a, b, tau_tilde) - wall_form(u, a, b, tau_tilde)) > tol * scale) moving = true;
      if (moving && std::abs(wall_form(u, a, b, tau_tilde)) <= tol * scale)
        throw input_error("EndpointOnWall", "path endpoint lies on the wall of pair " + pair_name(a, b));
    }
  };
  check_endpoint(waypoints.front());
  check_endpoint(waypoints.back());

  std::vector<CrossingEvent> ev;
  const int nseg = static_cast<int>(waypoints.size()) - 1;
  for (int s = 0; s < nseg; ++s) {
    const auto& p = waypoints[std::size_t(s)];
    const auto& q = waypoints[std::size_t(s + 1)];
    auto up = sys.u(p), uq = sys.u(q);
    double scale = 1.0 + std::max(t_scale(p), t_scale(q));
    for (auto [a, b] : pairs) {
      // L is real-affine in t, hence linear along the segment
      double L0 = wall_form(up, a, b, tau_tilde), L1 = wall_form(uq, a, b, tau_tilde);
      bool z0 = std::abs(L0) <= tol * scale, z1 = std::abs(L1) <= tol * scale;
      if (z0 && z1) continue;  // segment runs inside the wall
      if (z1) continue;        // counted on the next segment, if it leaves
      double xs;
      int from, to;
      if (z0) {
        if (s == 0) continue;
        // re-entering from a waypoint on the wall: compare with previous segment side
        double Lprev = wall_form(sys.u(waypoints[std::size_t(s - 1)]), a, b, tau_tilde);
        if ((Lprev > 0) == (L1 > 0)) continue;
        xs = 0;
        from = Lprev > 0 ? 1 : -1;
        to = L1 > 0 ? 1 : -1;
      } else {
        if ((L0 > 0) == (L1 > 0)) continue;
        xs = L0 / (L0 - L1);
        from = L0 > 0 ? 1 : -1;
        to = -from;
      }
      std::vector<cd> tx(p.size());
      for (std::size_t j = 0; j < p.size(); ++j) tx[j] = p[j] + xs * (q[j] - p[j]);
      auto ux = sys.u(tx);
      CrossingEvent e;
      e.x = (s + xs) / nseg;
      e.a = a;
      e.b = b;
      e.from_sign = from;
      e.to_sign = to;
      if (!sys.same_block(a, b))
        e.wall = WallKind::FixedPairCrossing;
      else if (std::abs(ux[std::size_t(a)] - ux[std::size_t(b)]) <= 1e3 * tol * scale)
        e.wall = WallKind::Delta;
      else
        e.wall = WallKind::Crossing;
      ev.push_back(e);
    }
  }
  std::stable_sort(ev.begin(), ev.end(), [](const CrossingEvent& x, const CrossingEvent& y) { return x.x < y.x; });
  return ev;
}

namespace {

struct Line {
  double al, be, ga;  // al*x + be*y + ga
  int a, b;
};

CellSignature signature_over(const SystemCoefficients& sys, const std::vector<std::pair<int, int>>& pairs,
                             const std::vector<cd>& t, double tau_tilde, double tol, bool& ok) {
  auto u = sys.u(t);
  CellSignature s;
  s.tau_tilde = tau_tilde;
  s.pairs = pairs;
  ok = true;
  for (auto [a, b] : pairs) {
    double L = wall_form(u, a, b, tau_tilde);
    if (std::abs(L) <= tol * (1.0 + t_scale(t))) ok = false;
    s.signs.push_back(L > 0 ? 1 : -1);
  }
  return s;
}

}  // namespace

CellEnumeration enumerate_cells(const SystemCoefficients& sys, double tau_tilde, double epsilon0, CellScope scope,
                                int samples, unsigned long long seed) {
  if (!(epsilon0 > 0)) throw input_error("ConfigInvalid", "epsilon0 must be positive");
  const int m = sys.arity();
  std::vector<std::pair<int, int>> pairs;
  const double tol = 1e-12;
  // keep only pairs whose wall form actually varies with t
  for (int a = 0; a < sys.n; ++a)
    for (int b = a + 1; b < sys.n; ++b) {
      if (scope == CellScope::Local && !sys.same_block(a, b)) continue;
      bool varies = false;
      auto u0 = sys.u(std::vector<cd>(std::size_t(m), 0.0));
      double L0 = wall_form(u0, a, b, tau_tilde);
      for (int j = 0; j < m && !varies; ++j)
        for (cd dir : {cd(1, 0), cd(0, 1)}) {
          std::vector<cd> t(std::size_t(m), 0.0);
          t[std::size_t(j)] = dir;
          if (std::abs(wall_form(sys.u(t), a, b, tau_tilde) - L0) > tol) varies = true;
        }
      if (varies) pairs.emplace_back(a, b);
    }

  CellEnumeration out;
  std::map<std::vector<int>, std::pair<CellSignature, std::vector<cd>>> found;
  auto record = [&](const std::vector<cd>& t) {
    bool ok = false;
    auto s = signature_over(sys, pairs, t, tau_tilde, tol, ok);
    if (!ok) return false;
    found.emplace(s.signs, std::make_pair(s, t));
    return true;
  };

  if (m == 1) {
    out.exact = true;
    std::vector<Line> lines;
    double far = 0;
    for (auto [a, b] : pairs) {
      double g = wall_form(sys.u({0.0}), a, b, tau_tilde);
      double al = wall_form(sys.u({1.0}), a, b, tau_tilde) - g;
      double be = wall_form(sys.u({cd(0, 1)}), a, b, tau_tilde) - g;
      double nrm = std::hypot(al, be);
      Line ln{al / nrm, be / nrm, g / nrm, a, b};
      bool dup = false;
      for (const auto& o : lines)
        if ((std::abs(o.al - ln.al) + std::abs(o.be - ln.be) + std::abs(o.ga - ln.ga) < 1e-12) ||
            (std::abs(o.al + ln.al) + std::abs(o.be + ln.be) + std::abs(o.ga + ln.ga) < 1e-12))
          dup = true;
      if (!dup) lines.push_back(ln);
      far = std::max(far, std::abs(ln.ga));
    }
    // global scope: a disc large enough to hold every vertex
    double R = epsilon0;
    if (scope == CellScope::Global) {
      R = 2 * far + 1;
      for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
          double D = lines[i].al * lines[j].be - lines[i].be * lines[j].al;
          if (std::abs(D) < 1e-14) continue;
          double x = (-lines[i].ga * lines[j].be + lines[j].ga * lines[i].be) / D;
          double y = (-lines[i].al * lines[j].ga + lines[j].al * lines[i].ga) / D;
          R = std::max(R, 2 * std::hypot(x, y) + 1);
        }
    }
    record({cd(0.37 * R * 0.5, 0.11 * R * 0.5)});
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const Line& L = lines[i];
      if (std::abs(L.ga) >= R) continue;  // misses the disc
      // point of the line closest to the origin, and its direction
      double px = -L.ga * L.al, py = -L.ga * L.be;
      double dx = -L.be, dy = L.al;
      double half = std::sqrt(R * R - L.ga * L.ga);
      std::vector<double> cuts{-half, half};
      for (std::size_t j = 0; j < lines.size(); ++j) {
        if (j == i) continue;
        const Line& M = lines[j];
        double den = M.al * dx + M.be * dy;
        if (std::abs(den) < 1e-14) continue;
        double s = -(M.al * px + M.be * py + M.ga) / den;
        if (s > -half && s < half) cuts.push_back(s);
      }
      std::sort(cuts.begin(), cuts.end());
      // concurrent walls give repeated cuts
      cuts.erase(std::unique(cuts.begin(), cuts.end(), [R](double x, double y) { return y - x < 1e-12 * R; }),
                 cuts.end());
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        double s = 0.5 * (cuts[k] + cuts[k + 1]);
        double mx = px + s * dx, my = py + s * dy;
        double room = R - std::hypot(mx, my);
        for (std::size_t j = 0; j < lines.size(); ++j)
          if (j != i) room = std::min(room, std::abs(lines[j].al * mx + lines[j].be * my + lines[j].ga));
        double delta = 0.5 * room;
        if (!(delta > 1e-10 * R)) throw numeric_error("ResolutionTooCoarse", "probe would straddle several walls");
        for (double sg : {-1.0, 1.0}) {
          if (!record({cd(mx + sg * delta * L.al, my + sg * delta * L.be)}))
            throw numeric_error("ResolutionTooCoarse", "probe landed on a wall");
        }
      }
    }
  } else {
    out.exact = m == 0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double R = epsilon0;
    if (scope == CellScope::Global) {
      double s = 1;
      for (const auto& x : sys.u0) s = std::max(s, std::abs(x.c));
      R = std::max(epsilon0, 10 * s);
    }
    for (int k = 0; k < samples; ++k) {
      std::vector<cd> t(static_cast<std::size_t>(m));
      for (auto& x : t) x = std::polar(R * std::sqrt(U(rng)), 2 * kPi * U(rng));
      record(t);
    }
    out.samples = samples;
  }
  for (auto& [signs, st] : found) {
    out.signatures.push_back(st.first);
    out.representatives.push_back(st.second);
  }
  out.count = static_cast<int>(out.signatures.size());
  return out;
}

RadiusBound radius_bound(const SystemCoefficients& sys, double tau_tilde) {
  RadiusBound r;
  r.unbounded = true;
  r.value = std::numeric_limits<double>::infinity();
  double eta_t = 1.5 * kPi - tau_tilde;
  cd rot = std::polar(1.0, -eta_t);
  const int m = sys.arity();
  for (int j = 0; j < sys.n; ++j)
    for (int k = j + 1; k < sys.n; ++k) {
      if (sys.same_block(j, k)) continue;
      double spread = 0;
      for (int c = 0; c < m; ++c)
        spread += std::abs(sys.tmap[std::size_t(j)][std::size_t(c)].c - sys.tmap[std::size_t(k)][std::size_t(c)].c);
      double dist = std::abs(((sys.u0[std::size_t(k)].c - sys.u0[std::size_t(j)].c) * rot).imag());
      r.unbounded = false;
      if (dist <= 1e-14) r.not_admissible = true;
      if (spread == 0) continue;
      r.value = std::min(r.value, dist / spread);
    }
  if (r.not_admissible) r.value = 0;
  return r;
}

}  // namespace iso
