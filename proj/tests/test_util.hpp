// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gtest/gtest.h>

#include <cstdint>
#include <random>
#include <string>

#include "wmp/map.hpp"

namespace wmp::testing {

inline UnimodalMap quadratic(const std::string& a, int bits = 256) {
  return UnimodalMap::from_decimal("2", a, bits);
}

/// |x - expected| <= 2^-exponent.
inline ::testing::AssertionResult near_pow2(const Real& x, const Real& expected, int exponent) {
  Real err = abs(x - expected);
  if (err <= Real::pow2(-exponent, x.precision())) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure()
         << x.to_string(40) << " differs from " << expected.to_string(40) << " by "
         << err.to_string(6) << " > 2^-" << exponent;
}

inline ::testing::AssertionResult near(const Real& x, const std::string& expected, double tol) {
  Real e(expected, x.precision());
  Real err = abs(x - e);
  if (err.to_double() <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << x.to_string(30) << " vs " << expected << " (err "
                                       << err.to_string(6) << ")";
}

/// Uniform point in [lo, hi] from a seeded generator.
inline Real uniform(std::mt19937_64& gen, double lo, double hi, int bits = 256) {
  double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return Real(lo, bits) + Real(u, bits) * Real(hi - lo, bits);
}

}  // namespace wmp::testing
