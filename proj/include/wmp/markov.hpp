// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wmp/branch.hpp"
#include "wmp/errors.hpp"
#include "wmp/interval.hpp"
#include "wmp/map.hpp"
#include "wmp/parallel.hpp"
#include "wmp/return_structure.hpp"
#include "wmp/rng.hpp"

namespace wmp {

/// A point y of the set D with its window V_y.
struct DPoint {
  int n = 0;
  Real y;
  Interval V;
};

/// One sample-window pair of the weak-Markov check.
struct MarkovSample {
  std::size_t window = 0;
  Real s;
  /// Entry time, -1 when the sample failed before entering.
  int t = -1;
  std::optional<Real> delta;
  std::optional<Real> K;
  bool koebe_ok = false;
  bool success = false;
  std::string reason;
};

struct WeakMarkovWindow {
  int n = 0;
  Real V_length;
  int samples = 0;
  int successes = 0;
  std::optional<Real> min_delta;
  std::optional<Real> max_K;
};

struct WeakMarkovReport {
  std::vector<WeakMarkovWindow> windows;
  std::vector<MarkovSample> samples;
  int pairs = 0;
  int successes = 0;
  /// Pairs for which (delta, K) was measured.
  int measured = 0;
  int koebe_violations = 0;
  std::optional<Real> min_delta;
  std::optional<Real> max_K;
  std::map<std::string, int> failures;

  double success_fraction() const {
    return pairs == 0 ? 0.0 : static_cast<double>(successes) / pairs;
  }
};

struct WeakMarkovOptions {
  int samples = 1000;
  int horizon = 10000;
  int grid = 4;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

namespace detail {

/// The window rounded to the working precision of `map`, or kept as is if it
/// is too narrow to survive rounding.
inline Interval working_window(const UnimodalMap& map, const Interval& V) {
  Real lo = V.lo();
  Real hi = V.hi();
  lo.set_precision(map.bits());
  hi.set_precision(map.bits());
  if (hi - lo > map.tol() * Real::pow2(64, map.bits())) return Interval::open(lo, hi);
  return V;
}

inline MarkovSample markov_sample(const UnimodalMap& map, const CriticalOrbit& orb,
                                  const Interval& V, std::size_t w, Real s,
                                  const WeakMarkovOptions& opt, const Real& delta_min) {
  MarkovSample out{w, std::move(s), -1, std::nullopt, std::nullopt, false, false, ""};
  try {
    auto br = entry_branch(map, out.s, V, opt.horizon);
    if (!br) {
      out.reason = "NoEntry";
      return out;
    }
    const int t = br->component.time;
    out.t = t;
    const int bits = map.bits();
    Interval image = t == 0 ? Interval(Real(0, bits), Real(1, bits))
                            : branch_image(map, orb, br->sides);
    out.delta = scaled_factor(image, V, map.tol()).delta;
    out.K = t == 0 ? Real(1, bits) : distortion_estimate(map, br->component.interval, t, opt.grid).K;
    if (out.delta->sign() > 0) {
      out.koebe_ok = *out.K <= koebe_bound(*out.delta) * (1 + 1e-6);
    }
    out.success = out.koebe_ok && *out.delta >= delta_min;
    if (!out.success) out.reason = out.koebe_ok ? "delta below delta_min" : "Koebe bound exceeded";
  } catch (const PrecisionExhausted&) {
    out.reason = "PrecisionExhausted";
  } catch (const CriticalOnOrbit&) {
    out.reason = "CriticalOnOrbit";
  } catch (const NotNested&) {
    out.reason = "NotNested";
  }
  return out;
}

}  // namespace detail

/// For samples s in [0, 1] and y in D: the first-entry branch I of s into V_y
/// with time t, the delta-space of V_y inside the image of the maximal
/// monotone extension of f^t, and the distortion of f^t on I against the
/// Koebe bound for that delta.
inline WeakMarkovReport verify_weak_markov(const UnimodalMap& map, const CriticalOrbit& orb,
                                           const std::vector<DPoint>& D,
                                           const WeakMarkovOptions& opt, const Real& delta_min) {
  if (opt.horizon < 0) throw DomainError("horizon must be non-negative");
  WeakMarkovReport rep;
  const std::size_t per = static_cast<std::size_t>(std::max(opt.samples, 0));
  std::vector<Interval> windows;
  for (const auto& d : D) windows.push_back(detail::working_window(map, d.V));
  // Sample points are drawn up front so results do not depend on scheduling.
  std::vector<Real> points;
  points.reserve(per * D.size());
  for (std::size_t w = 0; w < D.size(); ++w) {
    auto gen = make_stream(opt.seed, 0x100 + w);
    for (std::size_t i = 0; i < per; ++i) points.push_back(Real(unit_double(gen), map.bits()));
  }
  rep.samples = parallel_map(points.size(), opt.threads, [&](std::size_t k) {
    std::size_t w = k / per;
    return detail::markov_sample(map, orb, windows[w], w, points[k], opt, delta_min);
  });
  for (std::size_t w = 0; w < D.size(); ++w) {
    rep.windows.push_back({D[w].n, D[w].V.length(), 0, 0, std::nullopt, std::nullopt});
  }
  auto lower = [](std::optional<Real>& acc, const Real& v) {
    if (!acc || v < *acc) acc = v;
  };
  auto upper = [](std::optional<Real>& acc, const Real& v) {
    if (!acc || v > *acc) acc = v;
  };
  for (const auto& smp : rep.samples) {
    auto& win = rep.windows[smp.window];
    ++rep.pairs;
    ++win.samples;
    if (smp.delta && smp.K) {
      ++rep.measured;
      if (!smp.koebe_ok) ++rep.koebe_violations;
      lower(rep.min_delta, *smp.delta);
      upper(rep.max_K, *smp.K);
      lower(win.min_delta, *smp.delta);
      upper(win.max_K, *smp.K);
    }
    if (smp.success) {
      ++rep.successes;
      ++win.successes;
    } else {
      ++rep.failures[smp.reason];
    }
  }
  return rep;
}

/// Membership predicate for the density experiment.
using Membership = std::function<bool(const UnimodalMap&, const Real&)>;

/// Every point belongs.
inline Membership full_set() {
  return [](const UnimodalMap&, const Real&) { return true; };
}

/// No point belongs.
inline Membership empty_set() {
  return [](const UnimodalMap&, const Real&) { return false; };
}

/// Points whose orbit enters the open window W within `horizon` steps. A
/// finite-horizon surrogate for an invariant set of positive measure.
inline Membership enters_window(Interval W, int horizon) {
  return [W = std::move(W), horizon](const UnimodalMap& map, const Real& x) {
    return first_entry_time(map, x, W, horizon).has_value();
  };
}

struct DensityRow {
  int n = 0;
  Real V_length;
  int samples = 0;
  int hits = 0;
  double ratio = 0.0;
  /// sqrt(r (1 - r) / N).
  double std_error = 0.0;
};

/// Monte Carlo estimate of |X intersect V_y| / |V_y| per window, one seeded
/// stream per window. Points of narrow windows are drawn at a precision that
/// resolves the window.
inline std::vector<DensityRow> density_experiment(const UnimodalMap& map, const Membership& member,
                                                  const std::vector<DPoint>& D, int samples,
                                                  std::uint64_t seed, unsigned threads) {
  if (samples < 1) throw DomainError("samples per window must be positive");
  return parallel_map(D.size(), threads, [&](std::size_t w) {
    const Interval& V = D[w].V;
    double scale = -std::log2(std::max(V.length().to_double(), 1e-300));
    if (!std::isfinite(scale)) scale = 4096;
    int bits = std::max(map.bits(), (static_cast<int>(scale) + 128 + 63) / 64 * 64);
    UnimodalMap m = map.at_precision(bits);
    Real lo = V.lo();
    Real hi = V.hi();
    lo.set_precision(bits);
    hi.set_precision(bits);
    auto gen = make_stream(seed, 0x200 + w);
    int hits = 0;
    for (int i = 0; i < samples; ++i) {
      Real x = uniform_in(gen, lo, hi);
      if (member(m, x)) ++hits;
    }
    double r = static_cast<double>(hits) / samples;
    return DensityRow{D[w].n, V.length(), samples, hits, r, std::sqrt(r * (1 - r) / samples)};
  });
}

}  // namespace wmp
