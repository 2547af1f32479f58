#pragma once

// Reduction of the two-coordinate dual system back to the damped oscillator.
// Pieces: the constraint pair (only the position constraint is imposed), the
// operators that preserve the constrained subspace, the phase factor and
// variable change that strip the auxiliary coordinate, and the (f, g, kappa,
// tau) transformation turning the reduced equation into the damped-oscillator
// equation.  Everything is verified by finite-difference residuals.
//
// Branch structure: tau = (1/W) arctan(A g^2 / (W^2 mu^2)) with A a nonzero
// real constant.  tau'(0) = 0, so t > 0 and t < 0 are disconnected branches;
// sign(tau) = sign(A).  All maps are evaluable where sin(Wt) != 0 and
// mu(t) != 0; a guard band excludes the blowup of the cot/csc factors.
//
// The quadratic-phase coefficient f(t) is pinned by requiring the cross term
// in the transformed equation to cancel; an alternative grouped display of f
// is kept (f_display) and the verification report records that it does not
// close the equation, while the form used here does.

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdho/bateman.hpp"
#include "qdho/errors.hpp"
#include "qdho/phys_params.hpp"
#include "qdho/qat.hpp"
#include "qdho/report.hpp"
#include "qdho/weyl_op.hpp"

namespace qdho {

// ---------------------------------------------------------------------------
// Constraint operators

struct ConstraintSet {
  PhysParams params;
  WeylOp C1;     // y - (w^2/W^2) x - (gamma / 2 m W^2) p_x
  WeylOp C2;     // p_y - p_x - (m gamma / 2) x
  WeylOp good1;  // p_x + (2 m w^2 / gamma) x   (commutes with C1)
  WeylOp good2;  // p_y - (2 m W^2 / gamma) x   (commutes with C1)
};

inline ConstraintSet build_constraints(const PhysParams& p) {
  p.require_underdamped();
  const double W = p.Omega();
  const cplx mih(0.0, -p.hbar);
  const WeylOp x = WeylOp::x(), y = WeylOp::y();
  const WeylOp px = mih * WeylOp::dx(), py = mih * WeylOp::dy();

  ConstraintSet c;
  c.params = p;
  c.C1 = y - cplx(p.omega * p.omega / (W * W)) * x -
         cplx(p.gamma / (2.0 * p.m * W * W)) * px;
  c.C2 = py - px - cplx(p.m * p.gamma / 2.0) * x;
  c.good1 = px + cplx(2.0 * p.m * p.omega * p.omega / p.gamma) * x;
  c.good2 = py - cplx(2.0 * p.m * W * W / p.gamma) * x;
  return c;
}

// ---------------------------------------------------------------------------
// Classical counterparts.  States are (x, y, p_x, p_y); the t = 0 relations
// extend to combinations conserved by the exact flow when the time-dependent
// weights below are used.

/// y - (w^2/W^2) e^{gamma t} x - (gamma / 2 m W^2) p_x, conserved (== 0 on
/// the surface) along the classical flow.
inline double constraint1_classical(const PhysParams& p,
                                    const Eigen::Vector4d& s, double t) {
  const double W = p.Omega();
  return s[1] -
         (p.omega * p.omega / (W * W)) * std::exp(p.gamma * t) * s[0] -
         (p.gamma / (2.0 * p.m * W * W)) * s[2];
}

/// p_y - e^{-gamma t} p_x - (m gamma / 2) x, conserved along the flow.  The
/// decaying exponent is what the flow preserves; see
/// constraint2_growing_exponent for the non-conserved variant.
inline double constraint2_classical(const PhysParams& p,
                                    const Eigen::Vector4d& s, double t) {
  return s[3] - std::exp(-p.gamma * t) * s[2] - 0.5 * p.m * p.gamma * s[0];
}

/// Same relation with e^{+gamma t} on the momentum: NOT preserved by the
/// flow (violations grow to order one).  Kept so the check can record that
/// only the decaying exponent gives a constant of the motion.
inline double constraint2_growing_exponent(const PhysParams& p,
                                           const Eigen::Vector4d& s,
                                           double t) {
  return s[3] - std::exp(p.gamma * t) * s[2] - 0.5 * p.m * p.gamma * s[0];
}

/// Point of the constraint surface with the given (x0, p_x0):
/// y0 = (w^2/W^2) x0 + (gamma / 2 m W^2) p_x0,  p_y0 = p_x0 + (m gamma/2) x0.
inline Eigen::Vector4d constrained_initial_state(const PhysParams& p,
                                                 double x0, double px0) {
  const double W = p.Omega();
  Eigen::Vector4d s;
  s[0] = x0;
  s[1] = (p.omega * p.omega / (W * W)) * x0 +
         (p.gamma / (2.0 * p.m * W * W)) * px0;
  s[2] = px0;
  s[3] = px0 + 0.5 * p.m * p.gamma * x0;
  return s;
}

/// Flows s0 with the exact classical flow and checks that both constraint
/// combinations stay at their initial values (zero on the surface), that the
/// growing-exponent variant is not conserved, and that the evolved values
/// match the closed-form rotation of the initial pair.
inline Report classical_constraint_check(const PhysParams& p,
                                         const Eigen::Vector4d& s0,
                                         double t_max = 5.0, int nsteps = 250,
                                         double tol = 1e-8) {
  p.require_underdamped();
  const double W = p.Omega();
  Report rep("classical constraint preservation");

  const double c10 = constraint1_classical(p, s0, 0.0);
  const double c20 = constraint2_classical(p, s0, 0.0);
  const double scale0 = std::max(1.0, s0.lpNorm<Eigen::Infinity>());
  rep.add("initial point on constraint surface",
          std::max(std::abs(c10), std::abs(c20)), tol * scale0);

  double v1 = 0.0, v2 = 0.0, vgrow = 0.0, closed1 = 0.0, closed2 = 0.0;
  for (int i = 0; i <= nsteps; ++i) {
    const double t = t_max * double(i) / nsteps;
    const Eigen::Vector4d s = bateman_flow_matrix(p, t) * s0;
    const double c1 = constraint1_classical(p, s, t);
    const double c2 = constraint2_classical(p, s, t);
    v1 = std::max(v1, std::abs(c1));
    v2 = std::max(v2, std::abs(c2));
    vgrow = std::max(vgrow, std::abs(constraint2_growing_exponent(p, s, t)));

    // Closed-form evolution of the pair: each combination rotates into the
    // other with exponential weights.
    const double co = std::cos(W * t), si = std::sin(W * t);
    const double eh = std::exp(0.5 * p.gamma * t);
    const double c1t =
        eh * (co * c10 + si * ((0.5 * p.gamma / W) * c10 -
                               (p.omega * p.omega / (p.m * W * W * W)) * c20));
    const double c2t = (1.0 / eh) * (co * c20 + si * (p.m * W * c10 -
                                                      (0.5 * p.gamma / W) * c20));
    closed1 = std::max(closed1, std::abs(c1 - c1t));
    closed2 = std::max(closed2, std::abs(c2 - c2t));
  }

  rep.add("position relation preserved along flow", v1, tol * scale0);
  rep.add("momentum relation preserved along flow", v2, tol * scale0);
  const bool trivial = s0.lpNorm<Eigen::Infinity>() < 1e-12;
  rep.add_flag(
      "growing-exponent momentum variant is not conserved",
      trivial || vgrow > 1e-3,
      trivial ? "zero point: trivially conserved"
              : "max violation " + std::to_string(vgrow));
  rep.add("evolved values match closed-form rotation",
          std::max(closed1, closed2),
          1e-9 * std::max({1.0, std::abs(c10), std::abs(c20)}));
  return rep;
}

// ---------------------------------------------------------------------------
// Operator-level checks around the constraint choice.

/// Verifies in the operator engine that both distinguished operators commute
/// with the imposed constraint exactly, that the two constraints close on a
/// nonzero central element (the obstruction to imposing both), and that the
/// dual-system Hamiltonian does not commute with the constraint (its bracket
/// leaves the span of the constraints by an x-term), so time invariance is
/// lost in the reduction.
inline Report good_operator_check(const PhysParams& p) {
  const ConstraintSet c = build_constraints(p);
  const BatemanOps ops = build_bateman_ops(p);
  const double W = p.Omega();
  Report rep("constraint-preserving operators");

  const double s1 = std::max(1.0, c.good1.max_amp() * c.C1.max_amp());
  rep.add("[p_x + (2 m w^2/gamma) x, C1] = 0",
          commutator(c.good1, c.C1).max_amp(), 1e-14 * s1);
  const double s2 = std::max(1.0, c.good2.max_amp() * c.C1.max_amp());
  rep.add("[p_y - (2 m W^2/gamma) x, C1] = 0",
          commutator(c.good2, c.C1).max_amp(), 1e-14 * s2);

  // [C1, C2] = 2 i hbar: the pair is canonically conjugate, which is why
  // only one constraint can be imposed.
  const WeylOp central = cplx(0.0, 2.0 * p.hbar) * WeylOp::identity();
  rep.add("[C1, C2] = 2 i hbar (nonzero central element)",
          WeylOp::deviation(commutator(c.C1, c.C2), central),
          1e-14 * std::max(1.0, 2.0 * p.hbar));

  const WeylOp hc = commutator(ops.HB, c.C1);
  rep.add_flag("[H_B, C1] != 0 (H_B is not constraint-preserving)",
               hc.max_amp() > 1e-6 * std::max(1.0, ops.HB.max_amp()));
  // Identity: [H_B, C1] = -i hbar (gamma C1 - (w^2/m W^2) C2
  //                                + (gamma w^2 / W^2) x).
  const WeylOp combo =
      cplx(0.0, -p.hbar) *
      (cplx(p.gamma) * c.C1 -
       cplx(p.omega * p.omega / (p.m * W * W)) * c.C2 +
       cplx(p.gamma * p.omega * p.omega / (W * W)) * WeylOp::x());
  rep.add("[H_B, C1] closes on constraints plus an x-term",
          WeylOp::deviation(hc, combo), 1e-13 * std::max(1.0, hc.max_amp()));
  rep.add_flag("x-term coefficient nonzero (bracket leaves constraint span)",
               p.gamma * p.omega * p.omega / (W * W) > 1e-12);
  return rep;
}

// ---------------------------------------------------------------------------
// Reduction maps

struct ReductionMaps {
  PhysParams params;
  double A = 1.0;  // nonzero branch constant; sign(tau) = sign(A)

  double sin_guard = 1e-3;  // |sin(W t)| must exceed this
  double mu_guard = 1e-3;   // |mu(t)| must exceed this

  void guard(double t) const {
    const double W = params.Omega();
    if (std::abs(std::sin(W * t)) <= sin_guard)
      throw BranchSingularity("sin(W t) inside guard band at t = " +
                              std::to_string(t));
    if (std::abs(mu_raw(t)) <= mu_guard)
      throw BranchSingularity("mu(t) inside guard band at t = " +
                              std::to_string(t));
  }

  double mu(double t) const {
    guard(t);
    return mu_raw(t);
  }
  // gamma csc^2(W t)
  double mu_prime(double t) const {
    guard(t);
    const double s = std::sin(params.Omega() * t);
    return params.gamma / (s * s);
  }

  /// Coefficient of y in x' = x + xshift(t) y.
  double xshift(double t) const {
    const PhysParams& p = params;
    const double W = p.Omega();
    return (W * W / (2.0 * p.omega * p.omega)) * std::exp(-p.gamma * t) *
           mu(t);
  }
  double xprime(double x, double y, double t) const {
    return x + xshift(t) * y;
  }

  /// Phase exponent of the constrained-subspace wavefunctions,
  /// phi(x, y, t) = e^{i theta} psi(x', t), collapsed form:
  /// (m W / hbar) cot(W t) x y - (m gamma W^2 e^{-gamma t} csc^2(W t) /
  /// 4 hbar w^2) y^2.
  double theta(double x, double y, double t) const {
    guard(t);
    const PhysParams& p = params;
    const double W = p.Omega();
    const double s = std::sin(W * t), c = std::cos(W * t);
    return (p.m * W / p.hbar) * (c / s) * x * y -
           (p.m * p.gamma * W * W * std::exp(-p.gamma * t) /
            (4.0 * p.hbar * p.omega * p.omega * s * s)) *
               y * y;
  }

  /// Same phase in the grouped form
  /// e^{-gamma t} m W y csc^2(W t) [gamma W y cos(2Wt)
  ///   + 2 (w^2 e^{gamma t} x' - W^2 y) sin(2Wt)] / (4 hbar w^2),
  /// with x' inside; identical to theta() (checked in the report).
  double theta_display(double x, double y, double t) const {
    guard(t);
    const PhysParams& p = params;
    const double W = p.Omega();
    const double s = std::sin(W * t);
    const double xp = xprime(x, y, t);
    return std::exp(-p.gamma * t) * p.m * W * y / (s * s) *
           (p.gamma * W * y * std::cos(2.0 * W * t) +
            2.0 * (p.omega * p.omega * std::exp(p.gamma * t) * xp - W * W * y) *
                std::sin(2.0 * W * t)) /
           (4.0 * p.hbar * p.omega * p.omega);
  }

  /// The grouped form with x in place of x'.  Does NOT lift reduced
  /// solutions to solutions of the two-coordinate equation; kept so the
  /// verification can record the failure.
  double theta_xvariant(double x, double y, double t) const {
    guard(t);
    const PhysParams& p = params;
    const double W = p.Omega();
    const double s = std::sin(W * t);
    return std::exp(-p.gamma * t) * p.m * W * y / (s * s) *
           (p.gamma * W * y * std::cos(2.0 * W * t) +
            2.0 * (p.omega * p.omega * std::exp(p.gamma * t) * x - W * W * y) *
                std::sin(2.0 * W * t)) /
           (4.0 * p.hbar * p.omega * p.omega);
  }

  // --- the time reparametrization ------------------------------------------

  double tau(double t) const {
    guard(t);
    return std::atan(arctan_arg(t)) / params.Omega();
  }
  double tau_prime(double t) const {
    guard(t);
    const PhysParams& p = params;
    const double W = p.Omega();
    const double s = std::sin(W * t);
    const double m = mu_raw(t), u = arctan_arg(t);
    return -2.0 * A * p.gamma * p.gamma * p.gamma /
           (s * s * W * W * W * m * m * m * (1.0 + u * u));
  }
  double tau_pprime(double t) const {
    guard(t);
    const PhysParams& p = params;
    const double W = p.Omega();
    const double s = std::sin(W * t), c = std::cos(W * t);
    const double m = mu_raw(t), u = arctan_arg(t), tp = tau_prime(t);
    // logarithmic derivative of tau': csc^2 term, mu^-3 term, (1+u^2)^-1 term
    return tp * (-2.0 * W * c / s - 3.0 * p.gamma / (s * s * m) -
                 2.0 * u * W * tp);
  }

  // --- scaling maps ----------------------------------------------------------

  /// kappa = h(t) x'.  h = (w/W) e^{gamma (t - tau)/2} sqrt(tau'/mu); the
  /// square root is principal, so h is purely imaginary on branches where
  /// tau'/mu < 0.  The target equation is entire in kappa, so a constant
  /// imaginary scale is harmless.
  cplx h(double t) const {
    const PhysParams& p = params;
    const double W = p.Omega();
    const double ratio = tau_prime(t) / mu(t);
    return (p.omega / W) * std::exp(0.5 * p.gamma * (t - tau(t))) *
           std::sqrt(cplx(ratio, 0.0));
  }

  /// h'/h, real on each branch window (the phase of h is locally constant).
  double dlog_h(double t) const {
    const double tp = tau_prime(t);
    return 0.5 * (params.gamma * (1.0 - tp) + tau_pprime(t) / tp -
                  mu_prime(t) / mu(t));
  }

  /// Coefficient of the drift term in the reduced equation:
  /// rho = W cot(W t) - gamma/2.
  double drift_coeff(double t) const {
    guard(t);
    const double W = params.Omega();
    return W * std::cos(W * t) / std::sin(W * t) - 0.5 * params.gamma;
  }

  /// Quadratic-phase coefficient, pinned by cancelling the x' chi_kappa
  /// cross term:  f = e^{gamma t} (h'/h + rho) / (2 W mu).
  double f(double t) const {
    const double W = params.Omega();
    return std::exp(params.gamma * t) * (dlog_h(t) + drift_coeff(t)) /
           (2.0 * W * mu(t));
  }

  /// Alternative grouped display of f.  Disagrees with f(); the report
  /// records that it does not close the reduced equation.
  double f_display(double t) const {
    guard(t);
    const PhysParams& p = params;
    const double W = p.Omega();
    const double m = mu_raw(t), tp = tau_prime(t), tpp = tau_pprime(t);
    const double bracket =
        (-p.gamma * (2.0 + std::cos(2.0 * W * t)) +
         2.0 * W * std::sin(2.0 * W * t)) *
            tp -
        p.gamma * m * tp * tp + m * tpp;
    return -std::exp(p.gamma * t) / (4.0 * W * m * m * tp) * bracket;
  }

  /// Amplitude factor g = e^{-gamma tau/4} (-tau' / (W sin^2(Wt) mu))^{1/4},
  /// principal quarter power (a constant pi/4 phase on branches where the
  /// base is negative; constant phases drop out of the equation).
  cplx g(double t) const {
    const PhysParams& p = params;
    const double W = p.Omega();
    const double s = std::sin(W * t);
    const double base = -tau_prime(t) / (W * s * s * mu(t));
    return std::exp(-0.25 * p.gamma * tau(t)) *
           std::pow(cplx(base, 0.0), 0.25);
  }

  cplx kappa(double xp, double t) const { return h(t) * xp; }

 private:
  double mu_raw(double t) const {
    const double W = params.Omega();
    return 2.0 - (params.gamma / W) * std::cos(W * t) / std::sin(W * t);
  }
  double arctan_arg(double t) const {
    const double g = params.gamma, W = params.Omega();
    const double m = mu_raw(t);
    return A * (g * g / (W * W)) / (m * m);
  }
};

inline ReductionMaps build_reduction_maps(const PhysParams& p,
                                          double A = 1.0) {
  p.require_underdamped();
  if (A == 0.0) throw ConfigError("branch constant A must be nonzero");
  ReductionMaps maps;
  maps.params = p;
  maps.A = A;
  return maps;
}

// ---------------------------------------------------------------------------
// Wavefunction reduction

/// Measured spread of e^{-i theta} phi over probe points of the line
/// x' = const (several y values), i.e. the residual y-dependence after the
/// phase strip.  Zero (to rounding) exactly on the constrained subspace.
template <class Phi>
double reduction_y_spread(Phi&& phi, const ReductionMaps& maps, double t,
                          double xp, double y_half = 0.3, int n_probe = 5) {
  const double shift = maps.xshift(t);
  cplx ref = 0.0;
  double spread = 0.0, scale = 0.0;
  for (int j = 0; j < n_probe; ++j) {
    const double y = -y_half + 2.0 * y_half * double(j) / (n_probe - 1);
    const double x = xp - shift * y;
    const cplx val =
        std::exp(cplx(0.0, -maps.theta(x, y, t))) * phi(x, y);
    scale = std::max(scale, std::abs(val));
    if (j == 0)
      ref = val;
    else
      spread = std::max(spread, std::abs(val - ref));
  }
  return scale > 0.0 ? spread / scale : 0.0;
}

/// Strips the phase factor and the auxiliary coordinate from a function on
/// the constrained subspace: returns psi(x') with
/// phi(x, y, t) = e^{i theta(x,y,t)} psi(x'(x,y,t)).  Every evaluation
/// probes several y values and throws OffConstraintSurface if the stripped
/// values disagree beyond tol.
inline std::function<cplx(double)> reduce_wavefunction(
    std::function<cplx(double, double)> phi, const ReductionMaps& maps,
    double t, double tol = 1e-8) {
  maps.guard(t);
  auto section = [phi, maps, t, tol](double xp) {
    const double spread = reduction_y_spread(phi, maps, t, xp);
    if (spread > tol)
      throw OffConstraintSurface(
          "residual y-dependence " + std::to_string(spread) +
          " after phase strip at x' = " + std::to_string(xp));
    return std::exp(cplx(0.0, -maps.theta(xp, 0.0, t))) * phi(xp, 0.0);
  };
  // Fail fast on functions that are visibly off the subspace.
  for (double xp : {-0.7, 0.3, 1.0}) section(xp);
  return section;
}

// ---------------------------------------------------------------------------
// The transformed solution and the finite-difference verification

/// psi(x', t) = e^{-i (m w^2 / hbar W) x'^2 f(t)} g(t) chi(kappa, tau) with
/// chi the exact damped-oscillator Gaussian built from `seed`.
inline cplx reduced_solution(const ReductionMaps& maps,
                             const ClassicalBasis& basis,
                             const FreeGaussian& seed, double xp, double t) {
  const PhysParams& p = maps.params;
  const double W = p.Omega();
  const cplx phase = std::exp(cplx(0.0, -(p.m * p.omega * p.omega /
                                          (p.hbar * W)) *
                                           xp * xp * maps.f(t)));
  return phase * maps.g(t) * ck_gaussian(basis, seed, maps.kappa(xp, t),
                                         maps.tau(t));
}

/// The lift back to two coordinates, phi = e^{i theta} psi(x').
/// variant: 0 = collapsed theta, 1 = grouped display, 2 = x-variant.
inline cplx lifted_solution(const ReductionMaps& maps,
                            const ClassicalBasis& basis,
                            const FreeGaussian& seed, double x, double y,
                            double t, int variant = 0) {
  const double th = variant == 0   ? maps.theta(x, y, t)
                    : variant == 1 ? maps.theta_display(x, y, t)
                                   : maps.theta_xvariant(x, y, t);
  return std::exp(cplx(0.0, th)) *
         reduced_solution(maps, basis, seed, maps.xprime(x, y, t), t);
}

namespace detail {

// Fourth-order central stencils.
template <class F>
cplx fd1(F&& fn, double x, double h) {
  return (-fn(x + 2 * h) + 8.0 * fn(x + h) - 8.0 * fn(x - h) + fn(x - 2 * h)) /
         (12.0 * h);
}
template <class F>
cplx fd2(F&& fn, double x, double h) {
  return (-fn(x + 2 * h) + 16.0 * fn(x + h) - 30.0 * fn(x) +
          16.0 * fn(x - h) - fn(x - 2 * h)) /
         (12.0 * h * h);
}

}  // namespace detail

/// Residual of the reduced equation
///   i hbar psi_t = -(W^2 hbar^2 / 2 m w^2) e^{-gamma t} mu psi_x'x'
///                  - i hbar (W cot(Wt) - gamma/2) x' psi_x'
///                  - i hbar W cot(Wt) psi
/// at one point, |lhs - rhs| together with |lhs| + |rhs| for normalization.
/// printed_drift swaps in the drift coefficient (1/2) W mu of the grouped
/// display (whose scalar term i hbar (W^2/gamma)(mu - 2) equals the cot form
/// identically); the report records that this variant does not close.
inline std::pair<double, double> reduced_equation_residual(
    const ReductionMaps& maps, const ClassicalBasis& basis,
    const FreeGaussian& seed, double xp, double t, bool printed_drift = false,
    double dt_fd = 8e-4, double dx_fd = 1e-3) {
  const PhysParams& p = maps.params;
  const double W = p.Omega();
  auto in_t = [&](double tt) {
    return reduced_solution(maps, basis, seed, xp, tt);
  };
  auto in_x = [&](double xx) {
    return reduced_solution(maps, basis, seed, xx, t);
  };
  const cplx psi = in_t(t);
  const cplx psi_t = detail::fd1(in_t, t, dt_fd);
  const cplx psi_x = detail::fd1(in_x, xp, dx_fd);
  const cplx psi_xx = detail::fd2(in_x, xp, dx_fd);

  const double mu = maps.mu(t);
  const double cot = std::cos(W * t) / std::sin(W * t);
  const double drift = printed_drift ? 0.5 * W * mu : maps.drift_coeff(t);
  const cplx ih(0.0, p.hbar);

  const cplx lhs = ih * psi_t;
  const cplx rhs = -(W * W * p.hbar * p.hbar / (2.0 * p.m * p.omega * p.omega)) *
                       std::exp(-p.gamma * t) * mu * psi_xx -
                   ih * drift * xp * psi_x - ih * W * cot * psi;
  return {std::abs(lhs - rhs), std::abs(lhs) + std::abs(rhs)};
}

/// Residual of the two-coordinate equation
///   i hbar phi_t = -(hbar^2/m) phi_xy - i hbar (gamma/2)(y phi_y - x phi_x)
///                  + m W^2 x y phi
/// for the lifted solution, with the phase variant as in lifted_solution.
inline std::pair<double, double> lifted_equation_residual(
    const ReductionMaps& maps, const ClassicalBasis& basis,
    const FreeGaussian& seed, double x, double y, double t, int variant = 0,
    double dt_fd = 8e-4, double dxy_fd = 1e-3) {
  const PhysParams& p = maps.params;
  const double W = p.Omega();
  auto phi = [&](double xx, double yy, double tt) {
    return lifted_solution(maps, basis, seed, xx, yy, tt, variant);
  };
  const cplx v = phi(x, y, t);
  const cplx phi_t =
      detail::fd1([&](double tt) { return phi(x, y, tt); }, t, dt_fd);
  const cplx phi_x =
      detail::fd1([&](double xx) { return phi(xx, y, t); }, x, dxy_fd);
  const cplx phi_y =
      detail::fd1([&](double yy) { return phi(x, yy, t); }, y, dxy_fd);
  const cplx phi_xy = detail::fd1(
      [&](double yy) {
        return detail::fd1([&](double xx) { return phi(xx, yy, t); }, x,
                           dxy_fd);
      },
      y, dxy_fd);

  const cplx ih(0.0, p.hbar);
  const cplx lhs = ih * phi_t;
  const cplx rhs = -(p.hbar * p.hbar / p.m) * phi_xy -
                   ih * (p.gamma / 2.0) * (y * phi_y - x * phi_x) +
                   p.m * W * W * x * y * v;
  return {std::abs(lhs - rhs), std::abs(lhs) + std::abs(rhs)};
}

/// Row of the branch map t <-> tau emitted by the CLI.
struct BranchPoint {
  double t, tau, tau_prime;
};

inline std::vector<BranchPoint> branch_map(const ReductionMaps& maps,
                                           double t_lo, double t_hi, int n) {
  std::vector<BranchPoint> rows;
  rows.reserve(size_t(n));
  for (int i = 0; i < n; ++i) {
    const double t = t_lo + (t_hi - t_lo) * double(i) / (n - 1);
    rows.push_back({t, maps.tau(t), maps.tau_prime(t)});
  }
  return rows;
}

/// Full verification that the reduction lands on the damped-oscillator
/// equation: branch invariants, residuals of the reduced and lifted
/// equations (with the failing display variants recorded), the phase-display
/// identity, and the descent of the two constraint-preserving operators to a
/// nondegenerate pair acting on the reduced line.
inline Report verify_reduction_to_ck(const ReductionMaps& maps,
                                     const FreeGaussian& seed,
                                     double t_lo = 0.3, double t_hi = 1.2) {
  const PhysParams& p = maps.params;
  const double W = p.Omega();
  const ClassicalBasis basis = build_basis(p);
  Report rep("reduction to the damped oscillator (A = " +
             std::to_string(maps.A) + ")");

  // Branch invariants.  tau' ~ 2 A W t near the origin, so the time map is
  // singular there and t > 0 / t < 0 are disconnected.
  {
    const double sgn = maps.A > 0 ? 1.0 : -1.0;
    const double t0 = 1.5e-3 * sgn;
    const double asym = 2.0 * maps.A * W * t0;
    rep.add("tau'(t) -> 0 linearly at the origin",
            std::abs(maps.tau_prime(t0) - asym), 0.1 * std::abs(asym),
            "linear rate 2 A W t, first correction ~ 6 W^2 t / gamma");
    bool sign_ok = true, monotone = true;
    const double sweep_lo = sgn > 0 ? t_lo : -t_hi;
    const double sweep_hi = sgn > 0 ? t_hi : -t_lo;
    double prev_tp = 0.0;
    for (int i = 0; i <= 60; ++i) {
      const double t = sweep_lo + (sweep_hi - sweep_lo) * i / 60.0;
      const double tauv = maps.tau(t), tp = maps.tau_prime(t);
      if (tauv * maps.A <= 0.0) sign_ok = false;
      if (i > 0 && tp * prev_tp <= 0.0) monotone = false;
      prev_tp = tp;
    }
    rep.add_flag("sign(tau) = sign(A) across the window", sign_ok);
    rep.add_flag("tau monotone between singularities (tau' single-signed)",
                 monotone);
  }

  // Phase-display identity: the grouped form with x' inside equals the
  // collapsed form.
  {
    double dev = 0.0;
    for (double t : {0.35, 0.62, 0.9, 1.15})
      for (double x : {-0.8, 0.4, 1.1})
        for (double y : {-0.6, 0.25, 0.7})
          dev = std::max(dev, std::abs(maps.theta(x, y, t) -
                                       maps.theta_display(x, y, t)));
    rep.add("grouped phase display equals collapsed phase", dev, 1e-10);
  }

  // Residual of the reduced equation over the window.
  const std::vector<double> ts = {t_lo + 0.05, 0.55, 0.75, 0.95, t_hi - 0.05};
  const std::vector<double> xps = {-1.2, -0.8, -0.4, 0.0, 0.4, 0.8, 1.2};
  auto window_t = [&](double t) { return maps.A > 0 ? t : -t; };
  {
    double worst = 0.0, worst_printed = 0.0;
    for (double t : ts) {
      for (double xp : xps) {
        auto [num, den] =
            reduced_equation_residual(maps, basis, seed, xp, window_t(t));
        worst = std::max(worst, num / std::max(den, 1e-12));
        auto [num2, den2] = reduced_equation_residual(maps, basis, seed, xp,
                                                      window_t(t), true);
        worst_printed = std::max(worst_printed, num2 / std::max(den2, 1e-12));
      }
    }
    rep.add("reduced equation residual (finite differences)", worst, 1e-5);
    rep.add_flag(
        "grouped-display drift coefficient fails the residual test",
        worst_printed > 1e-3,
        "cot-weighted drift closes; (1/2) W mu drift residual " +
            std::to_string(worst_printed));
  }

  // The alternative grouped display of f disagrees with the coefficient
  // that closes the equation.
  {
    double gap = 0.0;
    for (double t : ts)
      gap = std::max(gap, std::abs(maps.f(window_t(t)) -
                                   maps.f_display(window_t(t))));
    rep.add_flag("grouped display of f disagrees with the closing form",
                 gap > 1e-3, "max |f - f_display| = " + std::to_string(gap));
  }

  // The lift solves the two-coordinate equation with the collapsed/grouped
  // phase; the x-variant fails.
  {
    double worst = 0.0, worst_x = 0.0;
    for (double t : {0.45, 0.7, 1.0})
      for (double x : {-0.6, 0.0, 0.6})
        for (double y : {-0.5, -0.2, 0.3}) {
          auto [num, den] = lifted_equation_residual(maps, basis, seed, x, y,
                                                     window_t(t), 0);
          worst = std::max(worst, num / std::max(den, 1e-12));
          auto [numx, denx] = lifted_equation_residual(maps, basis, seed, x, y,
                                                       window_t(t), 2);
          worst_x = std::max(worst_x, numx / std::max(denx, 1e-12));
        }
    rep.add("lifted solution solves the two-coordinate equation", worst, 1e-5);
    rep.add_flag("x-variant of the phase fails the lift",
                 worst_x > 1e-4,
                 "x' inside the display is the working reading; x-variant "
                 "residual " +
                     std::to_string(worst_x));
  }

  // Descent of the constraint-preserving operators: applied on the y = 0
  // section they act as
  //   L1 = p_x' + (2 m w^2/gamma) x'
  //   L2 = xshift(t) p_x' - (m W^2 mu / gamma) x'
  // i.e. their action commutes with the reduction map.
  {
    const double dfd = 1e-3;
    double worst = 0.0, det_dev = 0.0, det_min = 1e300;
    for (double traw : {0.45, 0.8, 1.1}) {
      const double t = window_t(traw);
      const double shift = maps.xshift(t), mu = maps.mu(t);
      for (double x : {-0.8, -0.3, 0.5, 1.0}) {
        auto phix = [&](double xx) {
          return lifted_solution(maps, basis, seed, xx, 0.0, t);
        };
        auto phiy = [&](double yy) {
          return lifted_solution(maps, basis, seed, x, yy, t);
        };
        auto psif = [&](double xx) {
          return reduced_solution(maps, basis, seed, xx, t);
        };
        const cplx mih(0.0, -p.hbar);
        const cplx psi = psif(x), dpsi = detail::fd1(psif, x, dfd);
        const cplx g1_phi = mih * detail::fd1(phix, x, dfd) +
                            (2.0 * p.m * p.omega * p.omega / p.gamma) * x *
                                phix(x);
        const cplx l1_psi =
            mih * dpsi + (2.0 * p.m * p.omega * p.omega / p.gamma) * x * psi;
        const cplx g2_phi = mih * detail::fd1(phiy, 0.0, dfd) -
                            (2.0 * p.m * W * W / p.gamma) * x * phix(x);
        const cplx l2_psi =
            shift * mih * dpsi - (p.m * W * W * mu / p.gamma) * x * psi;
        const double scale =
            std::max({std::abs(g1_phi), std::abs(l1_psi), std::abs(g2_phi),
                      std::abs(l2_psi), 1e-9});
        worst = std::max({worst, std::abs(g1_phi - l1_psi) / scale,
                          std::abs(g2_phi - l2_psi) / scale});
      }
      // Nondegeneracy of the descended pair in (p_x', x'):
      // det [[1, 2 m w^2/gamma], [shift, -m W^2 mu/gamma]]
      //   = -(m W^2 mu / gamma)(1 + e^{-gamma t}).
      const double det =
          -(p.m * W * W * mu / p.gamma) - (2.0 * p.m * p.omega * p.omega /
                                           p.gamma) *
                                              shift;
      const double closed =
          -(p.m * W * W * mu / p.gamma) * (1.0 + std::exp(-p.gamma * t));
      det_dev = std::max(det_dev, std::abs(det - closed));
      det_min = std::min(det_min, std::abs(det));
    }
    rep.add("operator action commutes with the reduction map", worst, 1e-6);
    rep.add("descended pair determinant matches closed form", det_dev, 1e-10);
    rep.add_flag("descended pair nondegenerate on the window", det_min > 0.1);
  }

  return rep;
}

}  // namespace qdho
