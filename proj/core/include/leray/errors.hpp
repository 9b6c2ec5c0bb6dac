#pragma once

#include <stdexcept>
#include <string>

namespace leray {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid or self-intersecting boundary input.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Point or parameter outside the curvilinear chart collar.
class ChartDomainError : public Error {
 public:
  using Error::Error;
};

// Triangulation failure or invariant violation.
class MeshError : public Error {
 public:
  using Error::Error;
};

// Invalid scalar parameter (negative friction, bad flux, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Quadrature/eigen-iteration breakdown.
class NumericsError : public Error {
 public:
  using Error::Error;
};

// Point outside the flow domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Degenerate element or inconsistent finite element data.
class AssemblyError : public Error {
 public:
  using Error::Error;
};

// Linear system solve failed to reach the requested tolerance.
class LinearSolveError : public Error {
 public:
  using Error::Error;
};

// Nonlinear iteration failed to converge after continuation.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Run-configuration syntax or validation failure.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Post-processing request outside its preconditions.
class AnalysisError : public Error {
 public:
  using Error::Error;
};

// Decay fit attempted on data entirely below the floor.
class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

}  // namespace leray
