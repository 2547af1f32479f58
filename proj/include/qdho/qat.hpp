#pragma once

// The point transformation between the damped oscillator and the free
// particle: a Gaussian solving the free equation, its image solving the
// damped equation exactly, and the forward/inverse grid transforms
//
//   phi~(kappa, tau) = sqrt(u2) exp(-(i/2)(m/hbar)(u2'/(W u2)) x^2) phi(x, t)
//
// with kappa = x/u2, tau = u1/u2 and W(t) = e^{-gamma t}.

#include <cmath>
#include <complex>

#include "qdho/classical.hpp"
#include "qdho/errors.hpp"
#include "qdho/grid_state.hpp"
#include "qdho/phys_params.hpp"

namespace qdho {

/// Normalized Gaussian packet solving i hbar psi_tau = -(hbar^2/2m) psi_kk,
/// centred at kappa0 with mean momentum p0 and initial width sigma0.
struct FreeGaussian {
  PhysParams params;
  double sigma0 = 1.0;
  double kappa0 = 0.0;
  double p0 = 0.0;

  /// The packet is entire in kappa, so it extends to complex arguments;
  /// point transformations with complex scale factors need that.
  cplx eval(cplx kappa, double tau) const {
    const double hbar = params.hbar, m = params.m;
    const cplx spread(1.0, hbar * tau / (2.0 * m * sigma0 * sigma0));
    const double centre = kappa0 + p0 * tau / m;
    const cplx gauss = std::exp(-(kappa - centre) * (kappa - centre) /
                                (4.0 * sigma0 * sigma0 * spread));
    const cplx phase =
        std::exp(cplx(0.0, p0 / hbar) * (kappa - p0 * tau / (2.0 * m)));
    return std::pow(2.0 * M_PI * sigma0 * sigma0, -0.25) / std::sqrt(spread) *
           gauss * phase;
  }

  cplx eval(double kappa, double tau) const { return eval(cplx(kappa), tau); }
};

namespace detail {

/// Phase factor exp(-(i/2)(m/hbar)(u2'/(W u2)) x^2) of the forward transform.
/// Entire in x, so complex arguments are allowed.
inline cplx transform_phase(const ClassicalBasis& b, cplx x, double t) {
  const PhysParams& p = b.params;
  const double u2 = b.u2_at(t);
  const double du2 = b.du2.eval(t).real();
  const double W = std::exp(-p.gamma * t);
  return std::exp(cplx(0.0, -0.5 * (p.m / p.hbar) * du2 / (W * u2)) * x * x);
}

inline cplx transform_phase(const ClassicalBasis& b, double x, double t) {
  return transform_phase(b, cplx(x), t);
}

}  // namespace detail

/// Exact damped-equation solution: the inverse-transform image of the free
/// Gaussian.  Valid while u2(t) > 0.  Extends to complex x (the solution is
/// entire), which composed coordinate maps with complex scales rely on.
inline cplx ck_gaussian(const ClassicalBasis& b, const FreeGaussian& g,
                        cplx x, double t) {
  const double u2 = b.u2_at(t);
  if (!(u2 > 0.0))
    throw CausticCrossed("u2(t) <= 0 at t = " + std::to_string(t));
  const double tau = b.u1_at(t) / u2;
  return g.eval(x / u2, tau) / std::sqrt(u2) /
         detail::transform_phase(b, x, t);
}

inline cplx ck_gaussian(const ClassicalBasis& b, const FreeGaussian& g,
                        double x, double t) {
  return ck_gaussian(b, g, cplx(x), t);
}

/// Damped-side state -> free-side state on the scaled grid kappa = x/u2.
/// The stored time becomes tau.
inline GridState qat_forward(const ClassicalBasis& b, const GridState& s) {
  const double t = s.time;
  const double u2 = b.u2_at(t);
  if (!(u2 > 0.0))
    throw CausticCrossed("u2(t) <= 0 at t = " + std::to_string(t));

  GridState out;
  out.grid = {s.grid.xmin / u2, s.grid.xmax / u2, s.grid.n};
  out.time = b.u1_at(t) / u2;
  out.values.resize(s.values.size());
  const double root = std::sqrt(u2);
  for (int i = 0; i < s.grid.n; ++i) {
    const double x = s.grid.point(i);
    out.values[size_t(i)] =
        root * detail::transform_phase(b, x, t) * s.values[size_t(i)];
  }
  return out;
}

/// Free-side state at tau(t) -> damped-side state at t on x = kappa * u2.
inline GridState qat_inverse(const ClassicalBasis& b, const GridState& free_s,
                             double t) {
  const double u2 = b.u2_at(t);
  if (!(u2 > 0.0))
    throw CausticCrossed("u2(t) <= 0 at t = " + std::to_string(t));

  GridState out;
  out.grid = {free_s.grid.xmin * u2, free_s.grid.xmax * u2, free_s.grid.n};
  out.time = t;
  out.values.resize(free_s.values.size());
  const double root = std::sqrt(u2);
  for (int i = 0; i < out.grid.n; ++i) {
    const double x = out.grid.point(i);
    out.values[size_t(i)] =
        free_s.values[size_t(i)] / root / detail::transform_phase(b, x, t);
  }
  return out;
}

}  // namespace qdho
