// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "wmp/errors.hpp"
#include "wmp/real.hpp"

namespace wmp {

/// A nondegenerate interval [lo, hi] with per-endpoint openness flags.
class Interval {
 public:
  Interval(Real lo, Real hi, bool lo_open = false, bool hi_open = false)
      : lo_(std::move(lo)), hi_(std::move(hi)), lo_open_(lo_open), hi_open_(hi_open) {
    if (!(lo_ < hi_)) {
      throw DegenerateInterval("interval endpoints out of order: [" + lo_.to_string(12) + ", " +
                               hi_.to_string(12) + "]");
    }
  }

  /// Interval spanned by two points in either order.
  static Interval hull(const Real& p, const Real& q, bool open = false) {
    return p < q ? Interval(p, q, open, open) : Interval(q, p, open, open);
  }
  static Interval open(Real lo, Real hi) { return Interval(std::move(lo), std::move(hi), true, true); }

  const Real& lo() const { return lo_; }
  const Real& hi() const { return hi_; }
  bool lo_open() const { return lo_open_; }
  bool hi_open() const { return hi_open_; }
  Real length() const { return hi_ - lo_; }
  Real mid() const { return (lo_ + hi_) / 2; }

  /// Membership honoring the openness flags.
  bool contains(const Real& x) const {
    bool above = lo_open_ ? x > lo_ : x >= lo_;
    bool below = hi_open_ ? x < hi_ : x <= hi_;
    return above && below;
  }
  /// Membership by more than `tol` from both endpoints.
  bool contains_strictly(const Real& x, const Real& tol) const {
    return x > lo_ + tol && x < hi_ - tol;
  }
  /// Closure containment of `inner`, allowing a slack of `tol` at each end.
  bool contains(const Interval& inner, const Real& tol) const {
    return inner.lo_ >= lo_ - tol && inner.hi_ <= hi_ + tol;
  }
  /// True when the closures are disjoint or touch within `tol`.
  bool disjoint(const Interval& other, const Real& tol) const {
    return other.hi_ <= lo_ + tol || other.lo_ >= hi_ - tol;
  }

 private:
  Real lo_;
  Real hi_;
  bool lo_open_ = false;
  bool hi_open_ = false;
};

}  // namespace wmp
