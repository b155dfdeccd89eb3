// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "wmp/errors.hpp"
#include "wmp/real.hpp"

namespace wmp {

/// Precision policy shared by every computation on one map.
struct NumericContext {
  int precision_bits = 256;
  /// Two points closer than this are treated as equal.
  Real eq_tolerance = Real::pow2(-192, 256);
  int horizon_default = 1000;

  /// Context at `bits` with the default tolerance 2^-(bits-64).
  static NumericContext with_precision(int bits, int horizon = 1000) {
    if (bits < 64) throw DomainError("precision_bits must be >= 64");
    if (horizon < 1) throw DomainError("horizon_default must be positive");
    NumericContext ctx;
    ctx.precision_bits = bits;
    ctx.eq_tolerance = Real::pow2(-(bits - 64), bits);
    ctx.horizon_default = horizon;
    return ctx;
  }

  /// Throws unless the tolerance is at least 2^(-bits+16).
  void validate() const {
    if (precision_bits < 64) throw DomainError("precision_bits must be >= 64");
    if (eq_tolerance <= 0 || eq_tolerance < Real::pow2(-(precision_bits - 16), precision_bits)) {
      throw DomainError("eq_tolerance finer than arithmetic noise");
    }
    if (horizon_default < 1) throw DomainError("horizon_default must be positive");
  }
};

/// Position of a point relative to the critical point.
enum class Side { Left, Critical, Right };

inline char symbol(Side s) {
  switch (s) {
    case Side::Left:
      return 'L';
    case Side::Right:
      return 'R';
    default:
      return 'C';
  }
}

/// The symmetric unimodal family f(x) = a (1 - |2x - 1|^alpha) on [0, 1].
///
/// The critical point is c = 1/2 with order alpha, f(c) = a and
/// f(0) = f(1) = 0. The family is symmetric about c, so the involution
/// tau(x) = 1 - x satisfies f(tau(x)) = f(x).
class UnimodalMap {
 public:
  UnimodalMap(Real alpha, Real height, NumericContext ctx)
      : ctx_(std::move(ctx)),
        alpha_(std::move(alpha)),
        a_(std::move(height)),
        c_(Real(1, ctx_.precision_bits) / 2) {
    ctx_.validate();
    const auto bits = ctx_.precision_bits;
    alpha_.set_precision(bits);
    a_.set_precision(bits);
    init();
  }

  /// Convenience constructor from decimal literals. The literals are kept so
  /// the map can be rebuilt exactly at another precision.
  static UnimodalMap from_decimal(const std::string& alpha, const std::string& height,
                                  int bits = 256) {
    UnimodalMap m(Real(alpha, bits), Real(height, bits), NumericContext::with_precision(bits));
    m.alpha_text_ = alpha;
    m.a_text_ = height;
    return m;
  }

  /// The same map at another working precision, with the default tolerance
  /// for that precision. Parameters given as decimals are re-parsed; binary
  /// parameters are widened exactly.
  UnimodalMap at_precision(int bits) const {
    if (bits == this->bits()) return *this;
    NumericContext ctx = NumericContext::with_precision(bits, ctx_.horizon_default);
    if (!alpha_text_.empty()) {
      UnimodalMap m(Real(alpha_text_, bits), Real(a_text_, bits), std::move(ctx));
      m.alpha_text_ = alpha_text_;
      m.a_text_ = a_text_;
      return m;
    }
    return UnimodalMap(alpha_, a_, std::move(ctx));
  }

 private:
  void init() {
    if (alpha_ < 2) throw DomainError("critical order alpha must be >= 2");
    if (a_ <= 0 || a_ > 1) throw DomainError("height a must lie in (0, 1]");
    quadratic_ = (alpha_ == 2);
    integral_alpha_ = alpha_.is_integer() && alpha_ <= 64;
  }

 public:

  const NumericContext& context() const { return ctx_; }
  int bits() const { return ctx_.precision_bits; }
  const Real& tol() const { return ctx_.eq_tolerance; }
  const Real& alpha() const { return alpha_; }
  const Real& height() const { return a_; }
  const Real& critical_point() const { return c_; }
  /// sup |Df| over [0, 1], attained at the endpoints: 2 a alpha.
  Real sup_deriv() const { return 2 * a_ * alpha_; }

  Real point(const std::string& decimal) const { return Real(decimal, bits()); }
  Real point(double value) const { return Real(value, bits()); }

  Real eval(const Real& x) const {
    check_domain(x);
    if (quadratic_) return 4 * a_ * x * (1 - x);
    return a_ * (1 - power(abs(2 * x - 1)));
  }

  /// Df(x) = -2 a alpha sgn(2x-1) |2x-1|^(alpha-1); exactly zero at c.
  Real deriv(const Real& x) const {
    check_domain(x);
    Real t = 2 * x - 1;
    if (quadratic_) return -4 * a_ * t;
    if (t.is_zero()) return Real(bits());
    Real mag = 2 * a_ * alpha_ * power_minus(abs(t), 1);
    return t.sign() > 0 ? -mag : mag;
  }

  /// D^2 f(x) = -4 a alpha (alpha-1) |2x-1|^(alpha-2).
  Real second_deriv(const Real& x) const {
    check_domain(x);
    Real t = abs(2 * x - 1);
    if (quadratic_) return -8 * a_;
    return -4 * a_ * alpha_ * (alpha_ - 1) * power_minus(t, 2);
  }

  /// D^3 f(x) = -8 a alpha (alpha-1)(alpha-2) sgn(2x-1) |2x-1|^(alpha-3).
  Real third_deriv(const Real& x) const {
    check_domain(x);
    Real t = 2 * x - 1;
    if (quadratic_) return Real(bits());
    Real mag = 8 * a_ * alpha_ * (alpha_ - 1) * (alpha_ - 2) * power_minus(abs(t), 3);
    return t.sign() > 0 ? -mag : mag;
  }

  /// Schwarzian derivative f'''/f' - 3/2 (f''/f')^2, undefined at c.
  Real schwarzian(const Real& x) const {
    Real d1 = deriv(x);
    if (d1.is_zero()) throw DomainError("Schwarzian undefined at the critical point");
    Real r2 = second_deriv(x) / d1;
    return third_deriv(x) / d1 - 3 * r2 * r2 / 2;
  }

  /// The symmetric partner 1 - x.
  Real tau(const Real& x) const {
    check_domain(x);
    return 1 - x;
  }

  Side side(const Real& x) const {
    Real d = x - c_;
    if (abs(d) <= tol()) return Side::Critical;
    return d.sign() < 0 ? Side::Left : Side::Right;
  }

  /// Preimage of y under the monotone branch of f on the given side of c.
  Real inverse(const Real& y, Side s) const {
    if (y < -tol() || y > a_ + tol()) throw DomainError("no preimage: value outside [0, a]");
    Real u = 1 - y / a_;
    if (u.sign() < 0) u = Real(bits());
    Real r = quadratic_ ? sqrt(u) : root(u);
    r = r / 2;
    if (s == Side::Left) return c_ - r;
    if (s == Side::Right) return c_ + r;
    return c_;
  }

  /// (x, f(x), ..., f^n(x)).
  std::vector<Real> orbit(const Real& x, int n) const {
    if (n < 0) throw DomainError("orbit length must be non-negative");
    std::vector<Real> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    out.push_back(x);
    for (int k = 0; k < n; ++k) out.push_back(eval(out.back()));
    return out;
  }

  /// Distance |x - c|.
  Real dist_to_c(const Real& x) const { return abs(x - c_); }

  /// True when y lies in the open window V_x = (min(x, tau x), max(x, tau x))
  /// by more than the tolerance.
  bool in_window(const Real& y, const Real& x) const {
    return dist_to_c(y) < dist_to_c(x) - tol();
  }

 private:
  void check_domain(const Real& x) const {
    if (x < -tol() || x > 1 + tol()) throw DomainError("point outside [0, 1]");
  }
  Real power(const Real& t) const {
    if (integral_alpha_) return pow(t, static_cast<unsigned long>(alpha_.to_double()));
    return pow(t, alpha_);
  }
  Real power_minus(const Real& t, long k) const {
    if (integral_alpha_ && alpha_.to_double() >= static_cast<double>(k)) {
      return pow(t, static_cast<unsigned long>(alpha_.to_double()) - static_cast<unsigned long>(k));
    }
    return pow(t, alpha_ - k);
  }
  Real root(const Real& u) const {
    if (integral_alpha_) return rootn(u, static_cast<unsigned long>(alpha_.to_double()));
    return pow(u, 1 / alpha_);
  }

  NumericContext ctx_;
  Real alpha_;
  Real a_;
  Real c_;
  std::string alpha_text_;
  std::string a_text_;
  bool quadratic_ = false;
  bool integral_alpha_ = false;
};

/// Outcome of the sampled S-unimodality check.
struct AdmissibilityReport {
  int samples = 0;
  Real max_schwarzian;
  /// First sample with non-negative Schwarzian, if any.
  std::optional<Real> schwarzian_positive_at;
  bool unimodal = true;
  bool passed = false;
};

/// Samples the Schwarzian derivative and the sign of Df on a midpoint grid.
inline AdmissibilityReport admissibility_check(const UnimodalMap& map, int sample_count) {
  if (sample_count < 3) throw DomainError("admissibility_check needs at least 3 samples");
  AdmissibilityReport rep;
  rep.samples = sample_count;
  bool have_max = false;
  for (int i = 0; i < sample_count; ++i) {
    Real x = (2 * Real(i, map.bits()) + 1) / (2 * sample_count);
    Side s = map.side(x);
    if (s == Side::Critical) continue;
    Real d = map.deriv(x);
    if ((s == Side::Left && d.sign() <= 0) || (s == Side::Right && d.sign() >= 0)) {
      rep.unimodal = false;
    }
    Real sf = map.schwarzian(x);
    if (!have_max || sf > rep.max_schwarzian) {
      rep.max_schwarzian = sf;
      have_max = true;
    }
    if (sf.sign() >= 0 && !rep.schwarzian_positive_at) rep.schwarzian_positive_at = x;
  }
  rep.passed = have_max && rep.max_schwarzian.sign() < 0 && rep.unimodal;
  return rep;
}

/// Bits of working precision consumed by an orbit of length n, estimated from
/// the worst-case expansion sup|Df|.
inline double precision_cost_bits(const UnimodalMap& map, int n) {
  return n * std::log2(map.sup_deriv().to_double());
}

}  // namespace wmp
