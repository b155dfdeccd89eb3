// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "wmp/anchors.hpp"
#include "wmp/bisect.hpp"
#include "wmp/branch.hpp"
#include "wmp/errors.hpp"
#include "wmp/interval.hpp"
#include "wmp/map.hpp"
#include "wmp/return_structure.hpp"

namespace wmp {

/// One measured Koebe-space claim.
struct GeometryCheck {
  /// "prop35.1", "prop35.2", "lemma37" or "lemma38".
  std::string check;
  bool applicable = false;
  /// Why the check did not apply or could not be measured.
  std::string reason;
  std::optional<Real> delta;
  /// Components measured (HIGH extension check), otherwise 1.
  int samples = 0;
  bool pass = false;
};

/// Precision (multiple of 64, at least the map's) at which f^n is reliable
/// along the critical orbit.
inline int precision_for_steps(const UnimodalMap& map, const CriticalOrbit& orb, int n) {
  double e = 0.0;
  if (n > 0) {
    std::size_t i = static_cast<std::size_t>(std::min(n, orb.length()) - 1);
    e = orb.expansion_log2[i];
  }
  int need = static_cast<int>(std::ceil(e)) + 2 * kPrecisionGuardBits;
  return std::max(map.bits(), (need + 63) / 64 * 64);
}

namespace detail {

inline std::vector<Side> forward_sides(const UnimodalMap& map, Real y, int n) {
  std::vector<Side> sides;
  sides.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    sides.push_back(map.side(y));
    if (j + 1 < n) y = map.eval(y);
  }
  return sides;
}

inline void finish(GeometryCheck& g, const Real& delta_min) {
  g.pass = g.applicable && g.delta && *g.delta >= delta_min;
}

}  // namespace detail

/// Extension space at an anchor. HIGH: for the first `components` branches of the
/// transfer map into U_x = V_psi(x), in order of entry time, the image of the
/// maximal monotone extension holds a delta-scaled neighborhood of U_x.
/// LOW with |V| <= (1 + rho)|U|: the image of the maximal extension
/// of f^(m-1) around S_x holds a delta-scaled neighborhood of [R_x(U_x), c].
inline GeometryCheck verify_prop35(const UnimodalMap& hp, const CriticalOrbit& orb,
                                   const AnchorPoint& a, const Real& rho, const Real& delta_min,
                                   int components, int max_time) {
  const CentralDomain& cd = a.cd;
  const Real& tol = hp.tol();
  if (a.kind == Case::High) {
    GeometryCheck g{"prop35.1", true, "", std::nullopt, 0, false};
    EntryTree tree = enumerate_entry_tree(hp, cd.psi, max_time, Real(0, hp.bits()),
                                          static_cast<std::size_t>(components) + 1);
    std::vector<Component> comps;
    for (auto& c : tree.transfer) {
      if (c.time > 0) comps.push_back(c);
    }
    std::sort(comps.begin(), comps.end(), [](const Component& p, const Component& q) {
      if (p.time != q.time) return p.time < q.time;
      return p.interval.lo() < q.interval.lo();
    });
    if (comps.size() > static_cast<std::size_t>(components)) {
      comps.erase(comps.begin() + components, comps.end());
    }
    for (const auto& comp : comps) {
      auto sides = detail::forward_sides(hp, comp.interval.mid(), comp.time);
      Interval image = branch_image(hp, orb, sides);
      try {
        Real d = scaled_factor(image, cd.U, tol).delta;
        if (!g.delta || d < *g.delta) g.delta = d;
      } catch (const NotNested&) {
        g.delta = Real(hp.bits());
        g.reason = "extension image does not contain U_x";
      }
      ++g.samples;
    }
    if (g.samples == 0) {
      g.applicable = false;
      g.reason = "no transfer components within max_time";
    }
    detail::finish(g, delta_min);
    return g;
  }
  GeometryCheck g{"prop35.2", false, "", std::nullopt, 0, false};
  if (a.ratio > 1 + rho) {
    g.reason = "PreconditionNotMet: |V|/|U| = " + a.ratio.to_string(6) + " > 1 + rho";
    return g;
  }
  g.applicable = true;
  g.samples = 1;
  std::vector<Side> sides;
  for (int j = 1; j < cd.central_time; ++j) sides.push_back(hp.side(orb[j]));
  Interval image = branch_image(hp, orb, sides);
  Interval ru = cd.central_image(orb);
  Interval target = Interval::hull(min(ru.lo(), hp.critical_point()),
                                   max(ru.hi(), hp.critical_point()));
  try {
    g.delta = scaled_factor(image, target, tol).delta;
  } catch (const NotNested&) {
    g.delta = Real(hp.bits());
    g.reason = "extension image does not contain [R_x(U_x), c]";
  }
  detail::finish(g, delta_min);
  return g;
}

/// LOW-case space: if c is not in R_x(U_x) and R_x(c) lies in V_x - U_x, then V_x
/// holds a delta-scaled neighborhood of U_x.
inline GeometryCheck verify_lemma37(const UnimodalMap& hp, const CriticalOrbit& orb,
                                    const AnchorPoint& a, const Real& delta_min) {
  GeometryCheck g{"lemma37", false, "", std::nullopt, 0, false};
  const CentralDomain& cd = a.cd;
  if (a.kind != Case::Low) {
    g.reason = "PreconditionNotMet: c lies in R_x(U_x)";
    return g;
  }
  const Real& cm = orb[cd.central_time];
  if (cd.U.contains(cm)) {
    g.reason = "PreconditionNotMet: R_x(c) lies in U_x";
    return g;
  }
  g.applicable = true;
  g.samples = 1;
  g.delta = scaled_factor(cd.V, cd.U, hp.tol()).delta;
  detail::finish(g, delta_min);
  return g;
}

/// Central periodic point: a fixed point p of the central branch with V_p inside R_x(V_p).
struct PeriodicPoint {
  /// "ok", "NoPeriodicPoint", "RenormalizationSuspected" or a precondition.
  std::string status;
  std::optional<Real> p;
  std::optional<CentralDomain> cd;
  GeometryCheck check;
};

inline PeriodicPoint central_periodic_point(const UnimodalMap& hp, const CriticalOrbit& orb,
                                           const AnchorPoint& a, const Real& rho,
                                           const Real& delta_min) {
  PeriodicPoint out{"", std::nullopt, std::nullopt, {"lemma38", false, "", std::nullopt, 0, false}};
  const CentralDomain& cd = a.cd;
  if (a.kind != Case::High) {
    out.status = out.check.reason = "PreconditionNotMet: LOW case";
    return out;
  }
  if (a.ratio > 1 + rho) {
    out.status = out.check.reason =
        "PreconditionNotMet: |V|/|U| = " + a.ratio.to_string(6) + " > 1 + rho";
    return out;
  }
  const int m = cd.central_time;
  UnimodalMap map = hp.at_precision(std::min(hp.bits(), precision_for_steps(hp, orb, m)));
  const Real& c = map.critical_point();
  auto F = [&](const Real& y) {
    Real z = y;
    for (int j = 0; j < m; ++j) z = map.eval(z);
    return z - y;
  };
  Real width = Real::pow2(-(map.bits() - 32), map.bits());
  std::vector<Real> roots;
  std::string pattern;
  for (const auto& [lo, hi] : {std::pair{cd.U.lo(), c}, std::pair{c, cd.U.hi()}}) {
    Real flo = F(lo);
    Real fhi = F(hi);
    pattern += (flo.sign() < 0 ? '-' : '+');
    pattern += (fhi.sign() < 0 ? '-' : '+');
    if (flo.sign() * fhi.sign() < 0) roots.push_back(bisect(F, lo, hi, width));
  }
  if (roots.empty()) {
    out.status = out.check.reason = "NoPeriodicPoint (signs " + pattern + ")";
    return out;
  }
  for (const Real& p : roots) {
    // V_p is inside R_x(V_p) = hull(c_m, p) iff c_m is beyond tau(p).
    const Real& cm = orb[m];
    bool inside = p < c ? cm >= map.tau(p) : cm <= map.tau(p);
    if (!inside) continue;
    out.p = p;
    out.cd = central_domain(hp, orb, p);
    out.status = "ok";
    out.check.applicable = true;
    out.check.samples = 1;
    out.check.delta = scaled_factor(out.cd->V, out.cd->U, hp.tol()).delta;
    detail::finish(out.check, delta_min);
    return out;
  }
  out.status = out.check.reason = "RenormalizationSuspected";
  return out;
}

/// Central-branch constants at a nice point: distortion of T_x = f^n on f(U_x) and
/// the supremum of |Df^(n+1)| over U_x.
struct Cor36 {
  Real K_branch;
  Real A_sup;
  int grid = 0;
};

inline Cor36 verify_cor36(const UnimodalMap& hp, const CriticalOrbit& orb, const CentralDomain& cd,
                          int grid) {
  if (grid < 2) throw DomainError("A_sup grid must have at least 2 cells");
  const int n = cd.central_time - 1;
  UnimodalMap map = hp.at_precision(std::min(hp.bits(), precision_for_steps(hp, orb, n + 1)));
  Cor36 out{Real(1, map.bits()), Real(map.bits()), grid};
  if (n > 0) {
    Interval fu(cd.S.lo(), map.height());
    auto est = distortion_estimate(map, fu, n, grid);
    out.K_branch = est.K;
    out.grid = est.grid;
  }
  Real width = cd.U.length();
  for (int k = 0; k <= grid; ++k) {
    Real y = cd.U.lo() + width * k / grid;
    Real d = abs(deriv_iter(map, y, n + 1));
    if (d > out.A_sup) out.A_sup = d;
  }
  return out;
}

/// Overlapping pairs among M, f(M), ..., f^n(M) with M = f(U_x) and n the
/// time of S_x. The orbit of M is pairwise disjoint for a nice x.
inline int lemma24_violations(const UnimodalMap& hp, const CriticalOrbit& orb,
                              const CentralDomain& cd) {
  const int n = cd.central_time - 1;
  std::vector<Interval> images;
  images.reserve(static_cast<std::size_t>(n) + 1);
  Real z = cd.S.lo();
  for (int j = 0; j <= n; ++j) {
    images.push_back(Interval::hull(z, orb[j + 1]));
    if (j < n) z = hp.eval(z);
  }
  std::sort(images.begin(), images.end(),
            [](const Interval& p, const Interval& q) { return p.lo() < q.lo(); });
  int bad = 0;
  const Real& tol = hp.tol();
  for (std::size_t i = 1; i < images.size(); ++i) {
    for (std::size_t j = i; j-- > 0;) {
      if (images[i].lo() < images[j].hi() - tol) {
        ++bad;
      } else if (j + 1 == i) {
        break;
      }
    }
  }
  return bad;
}

/// One transfer range (U_n, V_n) of the sequence.
struct TransferRange {
  int n = 0;
  Real y;
  /// "x(n)" or "p".
  std::string source;
  Case kind = Case::Low;
  Interval U;
  Interval V;
  Real delta;
  Real V_length;
  Real dist_to_c;
};

struct TransferRangeSeq {
  std::vector<TransferRange> ranges;
  /// Anchors left out, with the reason.
  std::vector<AnchorSkip> dropped;
  std::string reason;
};

/// LOW: y(n) = x(n). HIGH with |V| >= (1 + rho)|U|: y(n) = x(n). Otherwise
/// y(n) is the central periodic point. Ranges failing delta_min or not
/// shrinking are dropped so the sequence is strictly nested in size.
inline TransferRangeSeq transfer_range_sequence(const UnimodalMap& hp,
                                                const std::vector<AnchorPoint>& anchors,
                                                const std::vector<PeriodicPoint>& periodic,
                                                const Real& rho, const Real& delta_min) {
  TransferRangeSeq seq;
  if (anchors.empty()) {
    seq.reason = "no anchors";
    return seq;
  }
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const AnchorPoint& a = anchors[i];
    const CentralDomain* cd = &a.cd;
    Real y = a.x;
    std::string source = "x(n)";
    if (a.kind == Case::High && a.ratio < 1 + rho) {
      const PeriodicPoint& pp = periodic.at(i);
      if (!pp.p) {
        seq.dropped.push_back({a.n, pp.status});
        continue;
      }
      y = *pp.p;
      cd = &*pp.cd;
      source = "p";
    }
    Real delta = scaled_factor(cd->V, cd->U, hp.tol()).delta;
    Real len = cd->V.length();
    if (delta < delta_min) {
      seq.dropped.push_back({a.n, "delta " + delta.to_string(6) + " below delta_min"});
      continue;
    }
    if (!seq.ranges.empty() && !(len < seq.ranges.back().V_length)) {
      seq.dropped.push_back({a.n, "|V| does not shrink"});
      continue;
    }
    Real dist = hp.dist_to_c(y);
    seq.ranges.push_back(
        TransferRange{a.n, std::move(y), source, a.kind, cd->U, cd->V, delta, len, dist});
  }
  return seq;
}

}  // namespace wmp
