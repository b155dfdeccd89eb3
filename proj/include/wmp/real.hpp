// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

#include "wmp/errors.hpp"

namespace wmp {

/// Arbitrary-precision real backed by an MPFR value.
///
/// Every value carries its own precision. Binary operations round to the
/// larger of the operand precisions, so a computation seeded with values of
/// one precision stays at that precision. All rounding is to nearest.
class Real {
 public:
  static constexpr mpfr_prec_t kDefaultBits = 256;

  Real() : Real(kDefaultBits) {}
  explicit Real(mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
  }
  template <std::integral I>
  Real(I value, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_si(v_, static_cast<long>(value), MPFR_RNDN);
  }
  Real(double value, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_d(v_, value, MPFR_RNDN);
  }
  /// Parses a decimal literal ("0.975", "1e-8") at the given precision.
  Real(std::string_view decimal, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    std::string s(decimal);
    if (s.empty() || mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0) {
      mpfr_clear(v_);
      throw DomainError("not a decimal number: '" + s + "'");
    }
  }

  Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  Real(Real&& other) noexcept {
    v_[0] = other.v_[0];
    other.v_[0]._mpfr_d = nullptr;
  }
  Real& operator=(const Real& other) {
    if (this != &other) {
      if (v_[0]._mpfr_d == nullptr) {
        mpfr_init2(v_, mpfr_get_prec(other.v_));
      } else if (mpfr_get_prec(v_) != mpfr_get_prec(other.v_)) {
        mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      }
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& other) noexcept {
    std::swap(v_[0], other.v_[0]);
    return *this;
  }
  ~Real() {
    if (v_[0]._mpfr_d != nullptr) mpfr_clear(v_);
  }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  /// Rounds to `bits`; widening is exact.
  void set_precision(mpfr_prec_t bits) {
    if (bits != precision()) mpfr_prec_round(v_, bits, MPFR_RNDN);
  }
  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  /// 2^exponent at the given precision (exact).
  static Real pow2(long exponent, mpfr_prec_t bits) {
    Real r(1L, bits);
    mpfr_mul_2si(r.v_, r.v_, exponent, MPFR_RNDN);
    return r;
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }

  /// Scientific notation with `digits` significant decimal digits. The output
  /// is a pure function of the stored bits, so it is reproducible.
  std::string to_string(int digits) const {
    if (mpfr_zero_p(v_)) return "0";
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    int n = mpfr_snprintf(nullptr, 0, "%.*Re", digits - 1, v_);
    std::string out(static_cast<std::size_t>(n) + 1, '\0');
    mpfr_snprintf(out.data(), out.size(), "%.*Re", digits - 1, v_);
    out.resize(static_cast<std::size_t>(n));
    return out;
  }

  Real operator-() const {
    Real r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  Real& operator+=(const Real& o) { return assign_op(o, mpfr_add); }
  Real& operator-=(const Real& o) { return assign_op(o, mpfr_sub); }
  Real& operator*=(const Real& o) { return assign_op(o, mpfr_mul); }
  Real& operator/=(const Real& o) { return assign_op(o, mpfr_div); }

  friend Real operator+(const Real& a, const Real& b) { return binary(a, b, mpfr_add); }
  friend Real operator-(const Real& a, const Real& b) { return binary(a, b, mpfr_sub); }
  friend Real operator*(const Real& a, const Real& b) { return binary(a, b, mpfr_mul); }
  friend Real operator/(const Real& a, const Real& b) { return binary(a, b, mpfr_div); }

  template <std::integral I>
  friend Real operator+(const Real& a, I b) {
    Real r(a.precision());
    mpfr_add_si(r.v_, a.v_, static_cast<long>(b), MPFR_RNDN);
    return r;
  }
  template <std::integral I>
  friend Real operator+(I a, const Real& b) { return b + a; }
  template <std::integral I>
  friend Real operator-(const Real& a, I b) {
    Real r(a.precision());
    mpfr_sub_si(r.v_, a.v_, static_cast<long>(b), MPFR_RNDN);
    return r;
  }
  template <std::integral I>
  friend Real operator-(I a, const Real& b) {
    Real r(b.precision());
    mpfr_si_sub(r.v_, static_cast<long>(a), b.v_, MPFR_RNDN);
    return r;
  }
  template <std::integral I>
  friend Real operator*(const Real& a, I b) {
    Real r(a.precision());
    mpfr_mul_si(r.v_, a.v_, static_cast<long>(b), MPFR_RNDN);
    return r;
  }
  template <std::integral I>
  friend Real operator*(I a, const Real& b) { return b * a; }
  template <std::integral I>
  friend Real operator/(const Real& a, I b) {
    Real r(a.precision());
    mpfr_div_si(r.v_, a.v_, static_cast<long>(b), MPFR_RNDN);
    return r;
  }
  template <std::integral I>
  friend Real operator/(I a, const Real& b) {
    Real r(b.precision());
    mpfr_si_div(r.v_, static_cast<long>(a), b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator*(const Real& a, double b) {
    Real r(a.precision());
    mpfr_mul_d(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend Real operator*(double a, const Real& b) { return b * a; }

  friend int compare(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) {
    return mpfr_greaterequal_p(a.v_, b.v_) != 0;
  }
  template <std::integral I>
  friend int compare(const Real& a, I b) { return mpfr_cmp_si(a.v_, static_cast<long>(b)); }
  template <std::floating_point F>
  friend int compare(const Real& a, F b) { return mpfr_cmp_d(a.v_, static_cast<double>(b)); }
  template <class S> requires std::is_arithmetic_v<S>
  friend bool operator<(const Real& a, S b) { return compare(a, b) < 0; }
  template <class S> requires std::is_arithmetic_v<S>
  friend bool operator<=(const Real& a, S b) { return compare(a, b) <= 0; }
  template <class S> requires std::is_arithmetic_v<S>
  friend bool operator>(const Real& a, S b) { return compare(a, b) > 0; }
  template <class S> requires std::is_arithmetic_v<S>
  friend bool operator>=(const Real& a, S b) { return compare(a, b) >= 0; }
  template <class S> requires std::is_arithmetic_v<S>
  friend bool operator==(const Real& a, S b) { return compare(a, b) == 0; }

  friend Real abs(const Real& a) {
    Real r(a.precision());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real sqrt(const Real& a) {
    Real r(a.precision());
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real pow(const Real& a, const Real& b) { return binary(a, b, mpfr_pow); }
  friend Real pow(const Real& a, unsigned long n) {
    Real r(a.precision());
    mpfr_pow_ui(r.v_, a.v_, n, MPFR_RNDN);
    return r;
  }
  friend Real rootn(const Real& a, unsigned long n) {
    Real r(a.precision());
    mpfr_rootn_ui(r.v_, a.v_, n, MPFR_RNDN);
    return r;
  }
  friend Real log2(const Real& a) {
    Real r(a.precision());
    mpfr_log2(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real sin(const Real& a) {
    Real r(a.precision());
    mpfr_sin(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  static Real pi(mpfr_prec_t bits) {
    Real r(bits);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  friend const Real& min(const Real& a, const Real& b) { return b < a ? b : a; }
  friend const Real& max(const Real& a, const Real& b) { return a < b ? b : a; }

  /// True when the value is an integer (used to pick exact power routines).
  bool is_integer() const { return mpfr_integer_p(v_) != 0; }

  friend std::ostream& operator<<(std::ostream& os, const Real& r) {
    return os << r.to_string(20);
  }

 private:
  using BinaryFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

  static Real binary(const Real& a, const Real& b, BinaryFn fn) {
    Real r(std::max(a.precision(), b.precision()));
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  Real& assign_op(const Real& o, BinaryFn fn) {
    if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
    fn(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }

  mpfr_t v_;
};

}  // namespace wmp
