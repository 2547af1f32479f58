#pragma once

#include <stdexcept>
#include <string>

namespace qdho {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Parameters give an imaginary oscillation frequency (omega <= gamma/2).
struct OverdampedUnsupported : Error {
  using Error::Error;
};

/// The time-scaling function u2(t) vanished; the map x -> x/u2 is singular.
struct CausticCrossed : Error {
  using Error::Error;
};

/// Requested time lies outside the domain of a time reparameterization.
struct TimeOutOfRange : Error {
  using Error::Error;
};

/// Wavefunction amplitude at the grid edge grew beyond tolerance.
struct BoundaryLeak : Error {
  using Error::Error;
};

/// Linear map is singular for these parameters (needs gamma > 0 and Omega > 0).
struct DegenerateParams : Error {
  using Error::Error;
};

/// Evaluation requested at or across the z = 0 singular point.
struct OriginSingular : Error {
  using Error::Error;
};

/// Path evaluation crossed a branch singularity.
struct BranchSingularity : Error {
  using Error::Error;
};

/// State does not satisfy the constraint relations within tolerance.
struct OffConstraintSurface : Error {
  using Error::Error;
};

/// Operator cannot be applied in this representation (e.g. d/dt on a fixed-time grid).
struct UnsupportedOperator : Error {
  using Error::Error;
};

/// A bracket table fails the Jacobi identity or a requested solve is infeasible.
struct InconsistentTable : Error {
  using Error::Error;
};

/// Bad or missing run-configuration field.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace qdho
