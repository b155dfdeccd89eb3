// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "wmp/branch.hpp"
#include "wmp/errors.hpp"
#include "wmp/map.hpp"

namespace wmp {

struct AttractorSuspect {
  int period = 0;
  /// |Df^period| at the end of the orbit.
  Real multiplier;
  Real point;
};

/// An attracting cycle of an S-unimodal map attracts c, so it is enough to
/// look at the tail of the critical orbit: a cycle of period <= max_period
/// closed to 2^-64 with multiplier below 1 is reported.
inline std::optional<AttractorSuspect> detect_periodic_attractor(const UnimodalMap& map, int steps,
                                                                 int max_period = 64) {
  if (steps < 2 * max_period) throw DomainError("attractor check needs steps >= 2 max_period");
  auto orb = map.orbit(map.critical_point(), steps);
  const Real& last = orb.back();
  Real close = Real::pow2(-64, map.bits());
  for (int p = 1; p <= max_period; ++p) {
    if (abs(last - orb[orb.size() - 1 - static_cast<std::size_t>(p)]) > close) continue;
    Real mult = abs(deriv_iter(map, last, p));
    if (mult < 1) return AttractorSuspect{p, std::move(mult), last};
  }
  return std::nullopt;
}

}  // namespace wmp
