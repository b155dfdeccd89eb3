// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wmp/bisect.hpp"
#include "wmp/errors.hpp"
#include "wmp/interval.hpp"
#include "wmp/map.hpp"

namespace wmp {

enum class NiceKind { Certified, UpTo, NotNice };

/// Niceness of x: its forward orbit never enters the open window V_x.
struct NiceVerdict {
  NiceKind kind = NiceKind::UpTo;
  /// Certified: iterate landing on a repelling fixed point outside V_x.
  /// UpTo: the horizon checked. NotNice: first iterate inside V_x.
  int depth = 0;

  bool nice() const { return kind != NiceKind::NotNice; }
  bool certified() const { return kind == NiceKind::Certified; }
};

/// The open window V_x between x and tau(x).
inline Interval window(const UnimodalMap& map, const Real& x) {
  if (map.side(x) == Side::Critical) throw DomainError("window of the critical point is empty");
  return Interval::hull(x, map.tau(x), true);
}

/// The orientation-reversing fixed point p0 in (c, 1).
inline Real reversing_fixed_point(const UnimodalMap& map) {
  const int bits = map.bits();
  if (map.height() <= Real(1, bits) / 2) {
    throw NoFixedPoint("no fixed point in (c, 1) for height a <= 1/2");
  }
  if (map.alpha() == 2) return 1 - 1 / (4 * map.height());
  Real width = Real::pow2(-(bits - 32), bits);
  return bisect([&](const Real& p) { return map.eval(p) - p; }, map.critical_point(),
                Real(1, bits), width);
}

namespace detail {

/// Repelling fixed points a landing orbit can certify against.
inline std::vector<Real> certifying_fixed_points(const UnimodalMap& map) {
  std::vector<Real> out;
  Real zero(map.bits());
  if (abs(map.deriv(zero)) > 1) out.push_back(zero);
  if (map.height() > Real(1, map.bits()) / 2) {
    Real p = reversing_fixed_point(map);
    if (abs(map.deriv(p)) > 1) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace detail

/// Checks f^i(x) outside the open window V_x for i = 1..horizon, certifying
/// niceness when the orbit lands on a repelling fixed point outside V_x.
inline NiceVerdict is_nice(const UnimodalMap& map, const Real& x, int horizon) {
  if (horizon < 1) throw DomainError("niceness horizon must be positive");
  if (map.side(x) == Side::Critical) throw DomainError("niceness undefined at the critical point");
  const auto fixed = detail::certifying_fixed_points(map);
  auto landed = [&](const Real& y) {
    return std::any_of(fixed.begin(), fixed.end(), [&](const Real& p) {
      return abs(y - p) <= map.tol() && !map.in_window(p, x);
    });
  };
  if (landed(x)) return {NiceKind::Certified, 0};
  Real y = x;
  for (int i = 1; i <= horizon; ++i) {
    y = map.eval(y);
    if (map.in_window(y, x)) return {NiceKind::NotNice, i};
    if (landed(y)) return {NiceKind::Certified, i};
  }
  return {NiceKind::UpTo, horizon};
}

/// A certified-nice preimage of p0 with the depth k at which f^k lands on p0.
struct NiceCandidate {
  Real point;
  int depth = 0;
  /// Inverse branches taken from p0, in order of application.
  std::string word;
};

/// Pulls p0 back along `word`, reproducing a candidate at the map's precision.
inline Real preimage_from_word(const UnimodalMap& map, std::string_view word) {
  Real z = reversing_fixed_point(map);
  for (char ch : word) z = map.inverse(z, ch == 'L' ? Side::Left : Side::Right);
  return z;
}

namespace detail {

inline void sort_unique(std::vector<NiceCandidate>& v, const Real& tol) {
  std::sort(v.begin(), v.end(), [](const NiceCandidate& a, const NiceCandidate& b) {
    if (a.point == b.point) return a.depth < b.depth;
    return a.point < b.point;
  });
  std::vector<NiceCandidate> out;
  for (auto& c : v) {
    if (!out.empty() && abs(out.back().point - c.point) <= tol) {
      if (c.depth < out.back().depth) {
        out.back().depth = c.depth;
        out.back().word = std::move(c.word);
      }
      continue;
    }
    out.push_back(std::move(c));
  }
  v = std::move(out);
}

}  // namespace detail

/// All nice preimages f^-k(p0), k <= depth, sorted ascending.
///
/// The forward orbit of a node in the preimage tree is its chain of ancestors,
/// so niceness is decided exactly from the smallest ancestor distance to c.
inline std::vector<NiceCandidate> nice_candidates(const UnimodalMap& map, int depth) {
  if (depth < 0) throw DomainError("candidate depth must be non-negative");
  const Real& a = map.height();
  const Real& tol = map.tol();
  Real p0 = reversing_fixed_point(map);

  struct Node {
    Real z;
    Real min_dist;  // smallest |w - c| over strict forward iterates w
    int depth;
    std::string word;
  };
  std::vector<NiceCandidate> out;
  out.push_back({p0, 0, ""});
  std::vector<Node> frontier;
  if (depth >= 1) frontier.push_back({map.tau(p0), map.dist_to_c(p0), 1, "L"});
  while (!frontier.empty()) {
    std::vector<Node> next;
    for (auto& node : frontier) {
      Real d = map.dist_to_c(node.z);
      if (d > tol && d <= node.min_dist + tol) out.push_back({node.z, node.depth, node.word});
      if (node.depth < depth && node.z < a - tol) {
        Real md = min(node.min_dist, d);
        next.push_back({map.inverse(node.z, Side::Left), md, node.depth + 1, node.word + 'L'});
        next.push_back({map.inverse(node.z, Side::Right), md, node.depth + 1, node.word + 'R'});
      }
    }
    frontier = std::move(next);
  }
  detail::sort_unique(out, tol);
  return out;
}

/// Result of a bounded local search for nice preimages of p0.
struct LocalSearch {
  std::vector<NiceCandidate> found;
  /// Deepest level searched completely.
  int depth_reached = 0;
  bool budget_exhausted = false;
  std::size_t pieces = 0;
};

enum class SearchMode {
  /// Every nice preimage found.
  All,
  /// Only the largest nice preimage found at each level.
  Largest,
};

/// Nice preimages of p0 inside the left-side interval (lo, hi], hi <= c,
/// up to `max_depth`.
///
/// Any nice z in the interval has all forward iterates outside the open window
/// V_hi, so the forward images of the interval are searched with that window
/// removed. Each remaining piece maps monotonically; a piece containing p0 at
/// level k yields one preimage by pulling p0 back along the piece's ancestry.
/// Pieces of a level are kept in the order of their domains in (lo, hi], so
/// the largest preimage of a level is found by scanning from the end.
inline LocalSearch nice_preimages_in(const UnimodalMap& map, const Real& lo, const Real& hi,
                                     int max_depth, std::size_t budget,
                                     SearchMode mode = SearchMode::All) {
  const Real& c = map.critical_point();
  const Real& tol = map.tol();
  if (!(lo < hi) || hi > c + tol) throw DomainError("search interval must lie left of c");
  Real p0 = reversing_fixed_point(map);
  Real r = map.dist_to_c(hi);
  Real gap_lo = c - r;
  Real gap_hi = c + r;

  struct Piece {
    Real lo, hi;
    std::int32_t parent;
    Side side;
    // Sign of the derivative of the level map on the piece's domain.
    std::int8_t orientation;
  };
  std::vector<std::vector<Piece>> levels;
  levels.push_back({Piece{lo, hi, -1, Side::Critical, 1}});
  LocalSearch result;
  result.pieces = 1;

  // Returns true when a nice preimage was recorded.
  auto try_piece = [&](int k, std::size_t i) {
    const Piece& pc = levels[static_cast<std::size_t>(k)][i];
    if (p0 < pc.lo - tol || p0 > pc.hi + tol) return false;
    Real z = p0;
    Real min_dist = map.dist_to_c(p0);
    std::string word;
    std::int32_t idx = static_cast<std::int32_t>(i);
    for (int lev = k; lev > 0; --lev) {
      const Piece& cur = levels[static_cast<std::size_t>(lev)][static_cast<std::size_t>(idx)];
      z = map.inverse(z, cur.side);
      word += symbol(cur.side);
      if (lev > 1) min_dist = min(min_dist, map.dist_to_c(z));
      idx = cur.parent;
    }
    if (!(z > lo && z <= hi + tol)) return false;
    Real d = map.dist_to_c(z);
    if (!(d > tol) || (k > 0 && d > min_dist + tol)) return false;
    result.found.push_back({std::move(z), k, std::move(word)});
    return true;
  };
  auto harvest = [&](int k) {
    const auto& level = levels[static_cast<std::size_t>(k)];
    if (mode == SearchMode::All) {
      for (std::size_t i = 0; i < level.size(); ++i) try_piece(k, i);
      return;
    }
    for (std::size_t i = level.size(); i-- > 0;) {
      if (try_piece(k, i)) return;
    }
  };

  harvest(0);
  for (int k = 1; k <= max_depth; ++k) {
    std::vector<Piece> next;
    const auto& prev = levels.back();
    for (std::size_t i = 0; i < prev.size(); ++i) {
      const Piece& pc = prev[i];
      auto emit = [&](const Real& plo, const Real& phi, Side s) {
        if (!(phi - plo > tol)) return;
        Real ilo = map.eval(plo);
        Real ihi = map.eval(phi);
        std::int8_t o = pc.orientation;
        if (s == Side::Right) {
          std::swap(ilo, ihi);
          o = static_cast<std::int8_t>(-o);
        }
        next.push_back(Piece{std::move(ilo), std::move(ihi), static_cast<std::int32_t>(i), s, o});
      };
      if (k == 1) {
        emit(pc.lo, pc.hi, Side::Left);
        continue;
      }
      bool has_left = pc.lo < gap_lo;
      bool has_right = pc.hi > gap_hi;
      // Children in domain order: the left part of the image comes first
      // exactly when the piece's level map is increasing.
      if (pc.orientation > 0) {
        if (has_left) emit(pc.lo, min(pc.hi, gap_lo), Side::Left);
        if (has_right) emit(max(pc.lo, gap_hi), pc.hi, Side::Right);
      } else {
        if (has_right) emit(max(pc.lo, gap_hi), pc.hi, Side::Right);
        if (has_left) emit(pc.lo, min(pc.hi, gap_lo), Side::Left);
      }
    }
    if (result.pieces + next.size() > budget) {
      result.budget_exhausted = true;
      break;
    }
    result.pieces += next.size();
    levels.push_back(std::move(next));
    result.depth_reached = k;
    harvest(k);
  }
  detail::sort_unique(result.found, tol);
  return result;
}

}  // namespace wmp
