// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace degenwave {

// Base for everything thrown by the library. CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A coefficient evaluated to a non-positive value where positivity is required.
struct NonPositiveCoefficient : Error {
  using Error::Error;
};

// b/a failed its integrability (tail Cauchy) test near the degeneracy point.
struct NonIntegrableDrift : Error {
  using Error::Error;
};

// A user-supplied coefficient callback failed to evaluate.
struct EvaluationFailure : Error {
  using Error::Error;
};

// First-element weighted mass integral diverged for a function not vanishing at 0.
struct SingularMass : Error {
  using Error::Error;
};

struct AssemblyFailure : Error {
  using Error::Error;
};

struct BadGrading : Error {
  using Error::Error;
};

struct EigenFailure : Error {
  using Error::Error;
};

struct FactorizationFailure : Error {
  using Error::Error;
};

struct SolveFailure : Error {
  using Error::Error;
};

struct NonFiniteState : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// A required coefficient hypothesis does not hold; carries the report-field name.
struct HypothesisViolation : Error {
  HypothesisViolation(std::string field, const std::string& what)
      : Error(what), failed_field(std::move(field)) {}
  std::string failed_field;
};

struct BadDelta : Error {
  using Error::Error;
};

struct InsufficientSnapshots : Error {
  using Error::Error;
};

struct DegenerateFit : Error {
  using Error::Error;
};

// Scenario configuration problems (unknown key, bad value, missing file).
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace degenwave
