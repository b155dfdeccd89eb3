// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "wmp/errors.hpp"

namespace wmp {

/// Bisection on [lower, upper] for a function that changes sign there.
/// Stops once the bracket is no wider than `width` and returns its midpoint.
template <typename Argument, typename Function>
Argument bisect(Function f, Argument lower, Argument upper, const Argument& width) {
  auto f_lower = f(lower);
  auto f_upper = f(upper);
  if (f_lower.sign() == 0) return lower;
  if (f_upper.sign() == 0) return upper;
  if (f_lower.sign() == f_upper.sign()) throw DomainError("bisect: no sign change on bracket");
  while (upper - lower > width) {
    Argument middle = (lower + upper) / 2;
    // The bracket has collapsed to adjacent representable values.
    if (middle == lower || middle == upper) break;
    auto f_middle = f(middle);
    if (f_middle.sign() == 0) return middle;
    if (f_middle.sign() == f_lower.sign()) {
      lower = std::move(middle);
    } else {
      upper = std::move(middle);
    }
  }
  return (lower + upper) / 2;
}

}  // namespace wmp
