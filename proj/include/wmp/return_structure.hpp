// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <vector>

#include "wmp/errors.hpp"
#include "wmp/interval.hpp"
#include "wmp/map.hpp"
#include "wmp/nice.hpp"

namespace wmp {

/// Bits of headroom kept between the accumulated expansion of the critical
/// orbit and the working precision.
inline constexpr int kPrecisionGuardBits = 96;

/// The critical orbit c_0 = c, c_1 = f(c), ..., c_N with its expansion.
struct CriticalOrbit {
  std::vector<Real> points;
  /// expansion_log2[j] = log2 |Df^j(c_1)|, j = 0..N-1.
  std::vector<double> expansion_log2;
  /// Largest j for which c_j is trusted at the working precision.
  int reliable_steps = 0;

  int length() const { return static_cast<int>(points.size()) - 1; }
  const Real& operator[](int j) const { return points[static_cast<std::size_t>(j)]; }
};

/// Computes c_0..c_N. c_j is reliable while log2 |Df^(j-1)(c_1)| stays below
/// precision_bits - kPrecisionGuardBits.
inline CriticalOrbit critical_orbit(const UnimodalMap& map, int n) {
  if (n < 1) throw DomainError("critical orbit length must be positive");
  CriticalOrbit orb;
  orb.points = map.orbit(map.critical_point(), n);
  orb.expansion_log2.reserve(static_cast<std::size_t>(n));
  const double budget = map.bits() - kPrecisionGuardBits;
  double acc = 0.0;
  orb.expansion_log2.push_back(0.0);
  orb.reliable_steps = 1;
  bool trusted = true;
  for (int j = 1; j < n; ++j) {
    Real d = abs(map.deriv(orb[j]));
    acc += d.is_zero() ? -INFINITY : std::log2(d.to_double());
    orb.expansion_log2.push_back(acc);
    if (trusted && acc <= budget) {
      orb.reliable_steps = j + 1;
    } else {
      trusted = false;
    }
  }
  return orb;
}

/// The central return domain of a nice point x.
struct CentralDomain {
  Real x;
  Interval V;
  /// Component of f^-m(V) containing c.
  Interval U;
  /// Left endpoint of U; U = V_psi.
  Real psi;
  /// First return time m of c to V, so R_x|U = f^m.
  int central_time = 0;
  /// Component of the first-entry domain containing c_1 with T_x|S = f^(m-1).
  Interval S;
  /// Sign of Df^(m-1) on S.
  int orientation = 1;
  /// Endpoint of V that f^m sends the boundary of U to.
  Real boundary_image;

  /// R_x(U) = f^m(U), the interval between c_m and the boundary image.
  Interval central_image(const CriticalOrbit& orb) const {
    return Interval::hull(orb[central_time], boundary_image);
  }
};

/// Central domain of x found by pulling V_x back along the critical itinerary.
inline CentralDomain central_domain(const UnimodalMap& map, const CriticalOrbit& orb,
                                    const Real& x) {
  if (map.side(x) == Side::Critical) throw DomainError("central domain of the critical point");
  Interval V = window(map, x);
  int m = 0;
  for (int j = 1; j <= orb.length(); ++j) {
    if (map.in_window(orb[j], x)) {
      m = j;
      break;
    }
  }
  if (m == 0) throw NoReturn(orb.length());
  if (m > orb.reliable_steps) {
    throw PrecisionExhausted("central return time " + std::to_string(m) +
                             " is beyond the reliable critical horizon " +
                             std::to_string(orb.reliable_steps));
  }
  Real lo = V.lo();
  Real hi = V.hi();
  int orientation = 1;
  const Real& a = map.height();
  for (int k = m - 2; k >= 0; --k) {
    Side s = map.side(orb[k + 1]);
    if (hi > a) hi = a;
    Real nlo = map.inverse(lo, s);
    Real nhi = map.inverse(hi, s);
    if (s == Side::Right) {
      std::swap(nlo, nhi);
      orientation = -orientation;
    }
    lo = std::move(nlo);
    hi = std::move(nhi);
  }
  const Real& tol = map.tol();
  if (!(hi - lo > tol)) throw PrecisionExhausted("pulled-back interval S is below eq_tolerance");
  Interval S = Interval::open(lo, hi);
  if (!S.contains_strictly(orb[1], tol / (1L << 20))) {
    throw PrecisionExhausted("critical value not inside the pulled-back interval S");
  }
  Real psi = map.inverse(S.lo(), Side::Left);
  Interval U = Interval::open(psi, map.tau(psi));
  if (!(map.dist_to_c(psi) < map.dist_to_c(x))) {
    throw NotNice("central domain is not inside V_x");
  }
  Real boundary = orientation > 0 ? V.lo() : V.hi();
  return CentralDomain{x, V, U, psi, m, S, orientation, boundary};
}

/// Convenience overload computing the critical orbit to `horizon`.
inline CentralDomain central_domain(const UnimodalMap& map, const Real& x, int horizon) {
  return central_domain(map, critical_orbit(map, horizon), x);
}

/// One branch of a first-entry or first-return map.
struct Component {
  Interval interval;
  int time = 0;
};

struct ReturnStructure {
  Real x;
  Interval V;
  std::vector<Component> components;
  /// Central domain; absent when c does not return to V within max_time.
  std::optional<Interval> U;
  std::optional<Real> psi;
  int central_time = 0;
  /// Fraction of |V| covered by the enumerated components.
  Real coverage;
  bool truncated = false;
};

struct TransferStructure {
  Real x;
  Interval V;
  std::vector<Component> components;
  /// Component containing f(c), entry time central_time - 1.
  std::optional<Component> S;
  /// Fraction of [0, 1] covered by the enumerated components.
  Real coverage;
  bool truncated = false;
};

/// First-entry and first-return branches of V_x found by exact pullback.
struct EntryTree {
  Interval V;
  std::vector<Component> transfer;
  std::vector<Component> returns;
  std::optional<Component> S;
  std::optional<Component> central;
  bool truncated = false;
};

/// Enumerates the first-entry tree of the open window V_x.
///
/// For nice x, every component J of entry time k maps onto V, and each
/// preimage of J under a monotone branch of f is either inside V (a return
/// branch of time k+1) or disjoint from it (an entry branch of time k+1). A
/// component containing f(c) has a single preimage around c: the central
/// return domain. Branches narrower than `min_width` or slower than
/// `max_time` are dropped and count as uncovered.
inline EntryTree enumerate_entry_tree(const UnimodalMap& map, const Real& x, int max_time,
                                      const Real& min_width, std::size_t max_nodes = 4'000'000) {
  if (max_time < 0) throw DomainError("max_time must be non-negative");
  const Real& a = map.height();
  const Real& tol = map.tol();
  EntryTree tree{window(map, x), {}, {}, {}, {}, false};
  const Interval& V = tree.V;

  std::deque<Component> queue;
  if (V.length() >= min_width) queue.push_back({V, 0});
  std::size_t nodes = 0;
  auto place = [&](Interval P, int time) {
    if (V.contains(P, tol)) {
      if (P.length() >= min_width) tree.returns.push_back({std::move(P), time});
    } else if (V.disjoint(P, tol)) {
      if (P.length() >= min_width) queue.push_back({std::move(P), time});
    } else {
      throw NotNice("an entry branch straddles the boundary of V_x");
    }
  };
  while (!queue.empty()) {
    if (++nodes > max_nodes) {
      tree.truncated = true;
      break;
    }
    Component node = std::move(queue.front());
    queue.pop_front();
    const Interval& J = node.interval;
    int next = node.time + 1;
    bool contains_a = J.lo() < a - tol && J.hi() > a + tol;
    if (contains_a) tree.S = node;
    if (next <= max_time && J.lo() < a - tol) {
      if (contains_a) {
        Real psi = map.inverse(J.lo(), Side::Left);
        Interval P = Interval::open(psi, map.tau(psi));
        if (!V.contains(P, tol)) throw NotNice("central branch leaves V_x");
        tree.central = Component{P, next};
        if (P.length() >= min_width) tree.returns.push_back({std::move(P), next});
      } else {
        const Real& top = J.hi() < a ? J.hi() : a;
        place(Interval::open(map.inverse(J.lo(), Side::Left), map.inverse(top, Side::Left)), next);
        place(Interval::open(map.inverse(top, Side::Right), map.inverse(J.lo(), Side::Right)),
              next);
      }
    }
    tree.transfer.push_back(std::move(node));
  }
  auto by_position = [](const Component& p, const Component& q) {
    return p.interval.lo() < q.interval.lo();
  };
  std::sort(tree.transfer.begin(), tree.transfer.end(), by_position);
  std::sort(tree.returns.begin(), tree.returns.end(), by_position);
  return tree;
}

inline Real total_length(const std::vector<Component>& comps, int bits) {
  Real sum(bits);
  for (const auto& comp : comps) sum += comp.interval.length();
  return sum;
}

/// First-return branches of V_x with return time <= max_time.
///
/// The central branch is taken from the entry tree when its S component is
/// wide enough to be enumerated, and from the critical itinerary otherwise.
inline ReturnStructure return_components(const UnimodalMap& map, const Real& x, int max_time,
                                         const Real& min_width) {
  if (max_time < 1) throw DomainError("max_time must be positive");
  EntryTree tree = enumerate_entry_tree(map, x, max_time, min_width);
  Real coverage = total_length(tree.returns, map.bits()) / tree.V.length();
  ReturnStructure rs{x, tree.V, std::move(tree.returns), {}, {}, 0, std::move(coverage),
                     tree.truncated};
  if (tree.central) {
    rs.psi = tree.central->interval.lo();
    rs.U = tree.central->interval;
    rs.central_time = tree.central->time;
  } else {
    try {
      CentralDomain cd = central_domain(map, critical_orbit(map, max_time), x);
      rs.psi = cd.psi;
      rs.U = cd.U;
      rs.central_time = cd.central_time;
    } catch (const NoReturn&) {
    } catch (const PrecisionExhausted&) {
    }
  }
  return rs;
}

/// First-entry branches into V_x over [0, 1] with entry time <= max_time.
inline TransferStructure transfer_components(const UnimodalMap& map, const Real& x, int max_time,
                                             const Real& min_width) {
  if (max_time < 0) throw DomainError("max_time must be non-negative");
  EntryTree tree = enumerate_entry_tree(map, x, max_time, min_width);
  Real coverage = total_length(tree.transfer, map.bits());
  return TransferStructure{x, tree.V, std::move(tree.transfer), tree.S, std::move(coverage),
                           tree.truncated};
}

/// Least k >= start with f^k(y) in the open interval V, if k <= horizon.
/// `start` is 0 for first entry and 1 for first return.
inline std::optional<int> first_entry_time(const UnimodalMap& map, const Real& y,
                                           const Interval& V, int horizon, int start = 0) {
  if (horizon < 0) throw DomainError("horizon must be non-negative");
  Real z = y;
  for (int k = 0; k <= horizon; ++k) {
    if (k >= start && z > V.lo() && z < V.hi()) return k;
    if (k < horizon) z = map.eval(z);
  }
  return std::nullopt;
}

/// A first-entry branch located from a sample point, with its itinerary.
struct EntryBranch {
  Component component;
  std::vector<Side> sides;
};

/// The first-entry branch through y: the interval mapped onto V by f^t, where
/// t is the entry time of y.
///
/// The interval is rebuilt by pulling V back along the itinerary of y, and
/// every intermediate image is checked to lie outside V. The result is a true
/// entry branch even when the forward orbit of y has lost precision.
inline std::optional<EntryBranch> entry_branch(const UnimodalMap& map, const Real& y,
                                               const Interval& V, int horizon) {
  auto t = first_entry_time(map, y, V, horizon);
  if (!t) return std::nullopt;
  if (*t == 0) return EntryBranch{Component{V, 0}, {}};
  std::vector<Side> sides;
  sides.reserve(static_cast<std::size_t>(*t));
  Real z = y;
  for (int k = 0; k < *t; ++k) {
    sides.push_back(map.side(z));
    z = map.eval(z);
  }
  const Real& a = map.height();
  const Real& tol = map.tol();
  Real lo = V.lo();
  Real hi = V.hi();
  for (int k = *t - 1; k >= 0; --k) {
    Side s = sides[static_cast<std::size_t>(k)];
    if (s == Side::Critical) throw CriticalOnOrbit(k);
    if (hi > a) hi = a;
    if (!(hi - lo > tol)) throw PrecisionExhausted("entry branch below eq_tolerance");
    Real nlo = map.inverse(lo, s);
    Real nhi = map.inverse(hi, s);
    if (s == Side::Right) std::swap(nlo, nhi);
    lo = std::move(nlo);
    hi = std::move(nhi);
    if (!(hi <= V.lo() + tol || lo >= V.hi() - tol)) {
      throw PrecisionExhausted("itinerary of the sample enters V early");
    }
  }
  if (!(hi - lo > tol)) throw PrecisionExhausted("entry branch below eq_tolerance");
  return EntryBranch{Component{Interval::open(lo, hi), *t}, std::move(sides)};
}

inline std::optional<Component> transfer_component_at(const UnimodalMap& map, const Real& y,
                                                      const Interval& V, int horizon) {
  auto br = entry_branch(map, y, V, horizon);
  if (!br) return std::nullopt;
  return br->component;
}

/// f^n(T) for the maximal monotone branch T of f^n with the given itinerary.
///
/// The endpoints of f^j(T) are always 0 or critical values c_k with k <= j,
/// so they are tracked as indices and read from the critical orbit, which may
/// be held at a higher precision than the map.
inline Interval branch_image(const UnimodalMap& map, const CriticalOrbit& orb,
                             const std::vector<Side>& sides) {
  constexpr int kZero = -1;
  constexpr int kOne = -2;
  const int n = static_cast<int>(sides.size());
  if (n > orb.reliable_steps) {
    throw PrecisionExhausted("branch of length " + std::to_string(n) +
                             " exceeds the reliable critical horizon");
  }
  const int bits = orb[0].precision();
  Real zero(bits);
  Real one(1, bits);
  auto value = [&](int idx) -> const Real& {
    if (idx == kZero) return zero;
    if (idx == kOne) return one;
    return orb[idx];
  };
  const Real& c = orb[0];
  const Real& tol = map.tol();
  int lo = kZero;
  int hi = kOne;
  auto forward = [](int idx) { return idx >= 0 ? idx + 1 : kZero; };
  for (int j = 0; j < n; ++j) {
    Side s = sides[static_cast<std::size_t>(j)];
    if (s == Side::Critical) throw CriticalOnOrbit(j);
    if (value(lo) < c - tol && value(hi) > c + tol) {
      if (s == Side::Left) {
        hi = 0;
      } else {
        lo = 0;
      }
    }
    lo = forward(lo);
    hi = forward(hi);
    if (s == Side::Right) std::swap(lo, hi);
  }
  return Interval(value(lo), value(hi));
}

}  // namespace wmp
