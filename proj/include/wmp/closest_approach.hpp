// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "wmp/errors.hpp"
#include "wmp/interval.hpp"
#include "wmp/map.hpp"
#include "wmp/nice.hpp"
#include "wmp/return_structure.hpp"

namespace wmp {

enum class Termination { HorizonReached, NonRecurrent };

inline const char* to_string(Termination t) {
  return t == Termination::HorizonReached ? "HorizonReached" : "NonRecurrent";
}

struct ClosestApproachRow {
  int n = 0;
  int q = 0;
  Real c_q;
  Real dist;
  /// V_{c_q}; absent if c_q = c.
  std::optional<Interval> V;
};

/// The closest-approach times of the critical orbit: q(1) = 1 and q(n+1) is
/// the first t with c_t in the open window V_{c_q(n)}.
struct ClosestApproachTable {
  std::vector<ClosestApproachRow> rows;
  Termination termination = Termination::HorizonReached;
  int max_steps = 0;
  /// Precision the critical orbit was computed at.
  int precision_bits = 0;
  CriticalOrbit orbit;
};

/// Smallest precision (a multiple of 64, at least `floor_bits`) at which the
/// critical orbit of `map` is reliable for `steps` iterates.
inline int orbit_precision(const UnimodalMap& map, int steps, int floor_bits) {
  int bits = std::max(floor_bits, map.bits());
  for (int attempt = 0; attempt < 16; ++attempt) {
    UnimodalMap m = map.at_precision(bits);
    CriticalOrbit orb = critical_orbit(m, steps);
    if (orb.reliable_steps >= steps) return bits;
    // Extrapolate the measured expansion rate, with 25% margin.
    int r = std::max(orb.reliable_steps, 1);
    double rate = std::max(orb.expansion_log2[static_cast<std::size_t>(r - 1)] / r, 0.05);
    int need = static_cast<int>(std::ceil(1.25 * rate * steps)) + kPrecisionGuardBits;
    need = std::max(need, 2 * bits);
    bits = (need + 63) / 64 * 64;
  }
  throw PrecisionExhausted("critical orbit of length " + std::to_string(steps) +
                           " needs more precision than available");
}

/// Scans c_1..c_max_steps once, raising the precision until every step is
/// reliable.
inline ClosestApproachTable closest_approach(const UnimodalMap& map, int max_steps) {
  if (max_steps < 1) throw DomainError("max_steps must be positive");
  ClosestApproachTable table;
  table.max_steps = max_steps;
  table.precision_bits = orbit_precision(map, max_steps, map.bits());
  UnimodalMap hp = map.at_precision(table.precision_bits);
  table.orbit = critical_orbit(hp, max_steps);
  const CriticalOrbit& orb = table.orbit;
  const Real& c = hp.critical_point();
  const Real& tol = hp.tol();

  auto push = [&](int t) {
    ClosestApproachRow row;
    row.n = static_cast<int>(table.rows.size()) + 1;
    row.q = t;
    row.c_q = orb[t];
    row.dist = hp.dist_to_c(orb[t]);
    if (hp.side(orb[t]) != Side::Critical) row.V = window(hp, orb[t]);
    table.rows.push_back(std::move(row));
  };
  push(1);
  for (int t = 2; t <= max_steps; ++t) {
    if (orb[t] == c) break;
    if (hp.dist_to_c(orb[t]) < table.rows.back().dist - tol) push(t);
  }
  if (table.rows.size() == 1) table.termination = Termination::NonRecurrent;
  return table;
}

/// Independent exhaustive rescan: returns the indices n whose q(n+1) is not
/// the least t >= 1 with c_t in V_{c_q(n)}, or whose distance fails to drop.
inline std::vector<int> q_table_violations(const UnimodalMap& map,
                                           const ClosestApproachTable& table) {
  UnimodalMap hp = map.at_precision(table.precision_bits);
  const CriticalOrbit& orb = table.orbit;
  std::vector<int> bad;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    int least = 0;
    for (int t = 1; t <= table.max_steps; ++t) {
      if (hp.in_window(orb[t], row.c_q)) {
        least = t;
        break;
      }
    }
    bool last = i + 1 == table.rows.size();
    int expected = last ? 0 : table.rows[i + 1].q;
    if (least != expected) bad.push_back(row.n);
    if (!last && !(table.rows[i + 1].dist < row.dist)) bad.push_back(row.n);
  }
  return bad;
}

}  // namespace wmp
