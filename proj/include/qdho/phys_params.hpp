#pragma once

#include <cmath>
#include <string>

#include "qdho/errors.hpp"

namespace qdho {

/// Mass, Planck constant, damping rate gamma and bare frequency omega.
/// The shifted frequency Omega = sqrt(omega^2 - gamma^2/4) is real only in
/// the underdamped regime omega > gamma/2, which most of this library
/// assumes.
struct PhysParams {
  double m = 1.0;
  double hbar = 1.0;
  double gamma = 0.2;
  double omega = 1.0;

  void validate() const {
    if (!(m > 0.0)) throw ConfigError("m must be positive");
    if (!(hbar > 0.0)) throw ConfigError("hbar must be positive");
    if (!(gamma >= 0.0)) throw ConfigError("gamma must be non-negative");
    if (!(omega >= 0.0)) throw ConfigError("omega must be non-negative");
  }

  bool underdamped() const { return omega > gamma / 2.0; }

  void require_underdamped() const {
    validate();
    if (!underdamped())
      throw OverdampedUnsupported(
          "omega <= gamma/2: Omega imaginary (overdamped regime unsupported)");
  }

  /// Shifted frequency; only meaningful in the underdamped regime.
  double Omega() const {
    require_underdamped();
    return std::sqrt(omega * omega - gamma * gamma / 4.0);
  }
};

}  // namespace qdho
