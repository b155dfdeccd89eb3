// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace wmp {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateInterval : public Error {
 public:
  using Error::Error;
};

/// The orbit of the query point hits the critical point at iterate `step`.
class CriticalOnOrbit : public Error {
 public:
  explicit CriticalOnOrbit(int step)
      : Error("critical point on orbit at iterate " + std::to_string(step)), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

class NotMonotoneOnCore : public Error {
 public:
  using Error::Error;
};

class NotNested : public Error {
 public:
  using Error::Error;
};

class NoFixedPoint : public Error {
 public:
  using Error::Error;
};

/// The critical orbit does not enter the window within `horizon` iterates.
class NoReturn : public Error {
 public:
  explicit NoReturn(int horizon)
      : Error("critical orbit does not return within " + std::to_string(horizon) + " iterates"),
        horizon_(horizon) {}
  int horizon() const { return horizon_; }

 private:
  int horizon_;
};

/// The working precision cannot resolve the requested structure.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

/// A point assumed nice has an orbit entering its own window.
class NotNice : public Error {
 public:
  using Error::Error;
};

class PeriodicAttractorSuspected : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A figure was requested for a table with no rows.
class EmptyTable : public Error {
 public:
  using Error::Error;
};

}  // namespace wmp
