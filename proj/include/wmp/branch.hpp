// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "wmp/errors.hpp"
#include "wmp/interval.hpp"
#include "wmp/map.hpp"

namespace wmp {

/// Symbolic coding of x, f(x), ..., f^(n-1)(x); stops after the first 'C'.
inline std::string itinerary(const UnimodalMap& map, const Real& x, int n) {
  if (n < 1) throw DomainError("itinerary length must be positive");
  std::string word;
  Real y = x;
  for (int k = 0; k < n; ++k) {
    Side s = map.side(y);
    word += symbol(s);
    if (s == Side::Critical) break;
    if (k + 1 < n) y = map.eval(y);
  }
  return word;
}

/// A maximal interval of monotonicity of f^n.
struct Branch {
  Interval domain;
  int n = 0;
  std::string itinerary;
  /// Sign of Df^n on the interior of the domain.
  int orientation = 1;
};

/// A monotone branch of f^n around a core interval, with both images.
struct MonotoneExtension {
  Interval core;
  Interval ext;
  int n = 0;
  Interval image;
  Interval core_image;
};

namespace detail {

/// Pulls z back through the inverse branches recorded in `sides` (last first).
inline Real pull_back(const UnimodalMap& map, Real z, const std::vector<Side>& sides) {
  for (auto it = sides.rbegin(); it != sides.rend(); ++it) z = map.inverse(z, *it);
  return z;
}

struct Sweep {
  Real dom_lo, dom_hi;
  Real img_lo, img_hi;
  int orientation = 1;
  std::string word;
};

/// Forward sweep for the maximal monotone branch of f^n containing x.
///
/// Keeps the image J_j = f^j(T_j) of the current domain. Whenever c lies
/// strictly inside J_j the image is cut at c on the side of f^j(x); when
/// `track_domain` is set the cut is pulled back to the domain through the
/// inverse branches of the itinerary so far.
inline Sweep sweep(const UnimodalMap& map, const Real& x, int n, bool track_domain) {
  if (n < 0) throw DomainError("iterate count must be non-negative");
  const int bits = map.bits();
  const Real& c = map.critical_point();
  const Real& tol = map.tol();
  Sweep st{Real(0, bits), Real(1, bits), Real(0, bits), Real(1, bits), 1, {}};
  std::vector<Side> sides;
  if (track_domain) sides.reserve(static_cast<std::size_t>(n));
  Real y = x;
  for (int j = 0; j < n; ++j) {
    Side s = map.side(y);
    if (s == Side::Critical) throw CriticalOnOrbit(j);
    if (st.img_lo < c - tol && st.img_hi > c + tol) {
      std::optional<Real> cut;
      if (track_domain) cut = pull_back(map, c, sides);
      // Domain endpoint paired with the image endpoint being replaced.
      bool replaces_hi = (s == Side::Left);
      if (replaces_hi) {
        st.img_hi = c;
      } else {
        st.img_lo = c;
      }
      if (cut) {
        bool domain_hi = (st.orientation > 0) == replaces_hi;
        (domain_hi ? st.dom_hi : st.dom_lo) = std::move(*cut);
      }
    }
    Real lo = map.eval(st.img_lo);
    Real hi = map.eval(st.img_hi);
    if (s == Side::Left) {
      st.img_lo = std::move(lo);
      st.img_hi = std::move(hi);
    } else {
      st.img_lo = std::move(hi);
      st.img_hi = std::move(lo);
      st.orientation = -st.orientation;
    }
    st.word += symbol(s);
    if (track_domain) sides.push_back(s);
    y = map.eval(y);
  }
  return st;
}

}  // namespace detail

/// Maximal interval around x on which f^n is monotone.
inline Branch monotone_branch_at(const UnimodalMap& map, const Real& x, int n) {
  auto st = detail::sweep(map, x, n, true);
  return Branch{Interval(std::move(st.dom_lo), std::move(st.dom_hi)), n, std::move(st.word),
                st.orientation};
}

/// Image f^n(T) of the maximal monotone branch T around x, without locating T.
/// Costs O(n) evaluations instead of the O(n^2) pullbacks of the full branch.
inline Interval monotone_image(const UnimodalMap& map, const Real& x, int n) {
  auto st = detail::sweep(map, x, n, false);
  return Interval(std::move(st.img_lo), std::move(st.img_hi));
}

/// Throws NotMonotoneOnCore unless no f^j(I), j < n, contains c in its interior.
inline void require_monotone(const UnimodalMap& map, const Interval& core, int n) {
  const Real& c = map.critical_point();
  const Real& tol = map.tol();
  Real lo = core.lo();
  Real hi = core.hi();
  for (int j = 0; j < n; ++j) {
    const Real& small = lo < hi ? lo : hi;
    const Real& large = lo < hi ? hi : lo;
    if (small < c - tol && large > c + tol) {
      throw NotMonotoneOnCore("f^" + std::to_string(n) + " folds the core at iterate " +
                              std::to_string(j));
    }
    lo = map.eval(lo);
    hi = map.eval(hi);
  }
}

/// Maximal monotone extension of f^n around the core interval.
inline MonotoneExtension monotone_extension(const UnimodalMap& map, const Interval& core, int n) {
  const int bits = map.bits();
  if (n == 0) {
    Interval unit(Real(0, bits), Real(1, bits));
    return MonotoneExtension{core, unit, 0, unit, core};
  }
  require_monotone(map, core, n);
  Branch br = [&] {
    try {
      return monotone_branch_at(map, core.mid(), n);
    } catch (const CriticalOnOrbit& e) {
      throw NotMonotoneOnCore(e.what());
    }
  }();
  if (!br.domain.contains(core, map.tol())) {
    throw NotMonotoneOnCore("core is not contained in a single monotone branch");
  }
  Real lo = core.lo();
  Real hi = core.hi();
  for (int j = 0; j < n; ++j) {
    lo = map.eval(lo);
    hi = map.eval(hi);
  }
  Real img_lo = br.domain.lo();
  Real img_hi = br.domain.hi();
  for (int j = 0; j < n; ++j) {
    img_lo = map.eval(img_lo);
    img_hi = map.eval(img_hi);
  }
  return MonotoneExtension{core, br.domain, n, Interval::hull(img_lo, img_hi),
                           Interval::hull(lo, hi)};
}

/// Df^n(x) by the chain rule.
inline Real deriv_iter(const UnimodalMap& map, const Real& x, int n) {
  if (n < 0) throw DomainError("iterate count must be non-negative");
  Real prod(1, map.bits());
  Real y = x;
  for (int j = 0; j < n; ++j) {
    prod *= map.deriv(y);
    if (prod.is_zero()) break;
    if (j + 1 < n) y = map.eval(y);
  }
  return prod;
}

struct DistortionEstimate {
  /// max |Df^n| / min |Df^n| over the final grid; +inf if Df^n vanishes.
  Real K;
  /// Number of grid cells at convergence.
  int grid = 0;
};

/// Estimates the distortion of f^n on I on a uniform grid, doubling the grid
/// until successive estimates differ by less than 1%.
inline DistortionEstimate distortion_estimate(const UnimodalMap& map, const Interval& interval,
                                              int n, int grid, int max_grid = 1 << 13) {
  const int bits = map.bits();
  if (grid < 2) throw DomainError("distortion grid must have at least 2 cells");
  if (interval.length() < map.tol()) throw DegenerateInterval("interval below eq_tolerance");
  if (n == 0) return {Real(1, bits), grid};
  require_monotone(map, interval, n);

  Real width = interval.length();
  Real lo_val(bits), hi_val(bits);
  bool first = true;
  auto absorb = [&](const Real& y) {
    Real d = abs(deriv_iter(map, y, n));
    if (first) {
      lo_val = d;
      hi_val = d;
      first = false;
    } else {
      if (d < lo_val) lo_val = d;
      if (d > hi_val) hi_val = d;
    }
  };
  auto ratio = [&] {
    if (lo_val.is_zero()) {
      Real inf(bits);
      mpfr_set_inf(inf.get(), 1);
      return inf;
    }
    return hi_val / lo_val;
  };
  int cells = grid;
  for (int k = 0; k <= cells; ++k) absorb(interval.lo() + width * k / cells);
  Real K = ratio();
  while (cells < max_grid) {
    // Midpoints of the current cells refine the grid to twice the resolution.
    for (int k = 0; k < cells; ++k) absorb(interval.lo() + width * (2 * k + 1) / (2 * cells));
    cells *= 2;
    Real next = ratio();
    bool settled = !next.is_finite() || abs(next - K) < K * 0.01;
    K = std::move(next);
    if (settled) break;
  }
  return {std::move(K), cells};
}

/// Koebe space of I inside T: both components of T - I have length >= delta |I|.
struct ScaledFactor {
  Real delta;
  bool satisfies(const Real& wanted) const { return delta >= wanted; }
};

/// delta = min(|left gap|, |right gap|) / |I| for I inside T.
inline ScaledFactor scaled_factor(const Interval& outer, const Interval& inner, const Real& tol) {
  if (!outer.contains(inner, tol)) throw NotNested("inner interval is not contained in outer");
  Real left = inner.lo() - outer.lo();
  Real right = outer.hi() - inner.hi();
  Real gap = min(left, right);
  if (gap.sign() < 0) gap = Real(gap.precision());
  return {gap / inner.length()};
}

/// Distortion bound ((1 + delta) / delta)^2 for a monotone branch with negative
/// Schwarzian whose image holds a delta-scaled neighborhood of the core image.
inline Real koebe_bound(const Real& delta) {
  if (delta.sign() <= 0) throw DomainError("Koebe bound needs delta > 0");
  Real r = (1 + delta) / delta;
  return r * r;
}

}  // namespace wmp
