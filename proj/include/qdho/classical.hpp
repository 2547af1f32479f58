#pragma once

// Classical layer of the damped oscillator  x'' + gamma x' + omega^2 x = 0:
// the two-parameter solution basis
//
//   u1 = (1/Omega) e^{-gamma t/2} sin(Omega t)        u1(0)=0, u1'(0)=1
//   u2 = e^{-gamma t/2} (cos + (gamma/2 Omega) sin)   u2(0)=1, u2'(0)=0
//
// whose Wronskian is e^{-gamma t}, and the point transformation
// (x, t) -> (kappa, tau) = (x/u2, u1/u2) that turns damped-oscillator
// dynamics into free-particle dynamics.

#include <cmath>
#include <utility>
#include <vector>

#include "qdho/exp_poly.hpp"
#include "qdho/phys_params.hpp"

namespace qdho {

struct ClassicalBasis {
  PhysParams params;
  ExpPoly u1, u2;    // solution basis
  ExpPoly du1, du2;  // their time derivatives
  ExpPoly wronskian; // du1*u2 - u1*du2, canonically e^{-gamma t}

  double u2_at(double t) const { return u2.eval(t).real(); }
  double u1_at(double t) const { return u1.eval(t).real(); }
};

inline ClassicalBasis build_basis(const PhysParams& p) {
  p.require_underdamped();
  const double W = p.Omega(), g = p.gamma;
  ClassicalBasis b;
  b.params = p;
  b.u1 = (1.0 / W) * ExpPoly::exp_sin(-g / 2.0, W);
  b.u2 = ExpPoly::exp_cos(-g / 2.0, W) +
         (g / (2.0 * W)) * ExpPoly::exp_sin(-g / 2.0, W);
  b.du1 = b.u1.derivative();
  b.du2 = b.u2.derivative();
  b.wronskian = b.du1 * b.u2 - b.u1 * b.du2;
  return b;
}

struct Trajectory {
  std::vector<double> times;
  std::vector<double> positions;
  std::vector<double> momenta;  // canonical momentum m e^{gamma t} x'(t)
};

/// Closed-form trajectory with x(0) = x0, x'(0) = v0.
inline Trajectory classical_trajectory(const ClassicalBasis& b, double x0,
                                       double v0,
                                       const std::vector<double>& times) {
  Trajectory tr;
  tr.times = times;
  for (double t : times) {
    double x = x0 * b.u2.eval(t).real() + v0 * b.u1.eval(t).real();
    double v = x0 * b.du2.eval(t).real() + v0 * b.du1.eval(t).real();
    tr.positions.push_back(x);
    tr.momenta.push_back(b.params.m * std::exp(b.params.gamma * t) * v);
  }
  return tr;
}

/// Interval (t_minus, t_plus) around t = 0 on which u2 > 0, located by
/// bisection to 1e-12.  The point map below is valid only inside it.
inline std::pair<double, double> u2_domain(const ClassicalBasis& b) {
  const double W = b.params.Omega();
  auto bisect_zero = [&b](double lo, double hi) {
    // sign change between the endpoints, in either order
    for (int i = 0; i < 200 && std::abs(hi - lo) > 1e-13; ++i) {
      double mid = 0.5 * (lo + hi);
      if (b.u2_at(lo) * b.u2_at(mid) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double step = 0.05 * 2.0 * M_PI / W;
  double hi = step;
  while (b.u2_at(hi) > 0.0) hi += step;
  double lo = -step;
  while (b.u2_at(lo) > 0.0) lo -= step;
  return {bisect_zero(lo + step, lo), bisect_zero(hi - step, hi)};
}

struct FreePoint {
  double kappa;
  double tau;
};

/// (x, t) -> (kappa, tau) = (x/u2, u1/u2); requires u2(t) > 0.
inline FreePoint arnold_map(const ClassicalBasis& b, double x, double t) {
  double u2 = b.u2_at(t);
  if (!(u2 > 0.0))
    throw CausticCrossed("u2(t) <= 0 at t = " + std::to_string(t));
  return {x / u2, b.u1_at(t) / u2};
}

/// tau(t) = u1/u2, strictly increasing on the u2 > 0 interval.
inline double tau_of_t(const ClassicalBasis& b, double t) {
  double u2 = b.u2_at(t);
  if (!(u2 > 0.0))
    throw CausticCrossed("u2(t) <= 0 at t = " + std::to_string(t));
  return b.u1_at(t) / u2;
}

/// Inverse of tau(t) by bisection to 1e-12.
inline double t_of_tau(const ClassicalBasis& b, double tau) {
  auto [tmin, tmax] = u2_domain(b);
  // tau -> +-inf at the domain edges, so a bracket always exists strictly
  // inside; shrink from the edges until the signs differ.
  double lo = tmin, hi = tmax;
  for (int i = 0; i < 60; ++i) {
    double margin = (hi - lo) * 1e-3;
    lo += margin;
    hi -= margin;
    if (tau_of_t(b, lo) < tau && tau_of_t(b, hi) > tau) break;
  }
  if (!(tau_of_t(b, lo) <= tau && tau <= tau_of_t(b, hi)))
    throw TimeOutOfRange("tau not bracketed inside the u2 > 0 domain");
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    double mid = 0.5 * (lo + hi);
    if (tau_of_t(b, mid) < tau)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qdho
