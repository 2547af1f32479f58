#pragma once

// The two-dimensional dual system: a complex linear map from its phase space
// (x, y, p_x, p_y) onto the conjugate pairs (X, P, Q, Pi), the dual
// Hamiltonian H_B, the quantum realization on functions of (x, y, t), the
// reconstruction of H_B from the quadruple, the exact classical flow, and
// Gaussian-state propagation.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qdho/errors.hpp"
#include "qdho/phys_params.hpp"
#include "qdho/report.hpp"
#include "qdho/weyl_op.hpp"

namespace qdho {

// ---------------------------------------------------------------------------
// Classical map

/// Rows map (x, y, p_x, p_y) to (X, P, Q, Pi).
struct BatemanMap {
  PhysParams params;
  Eigen::Matrix4cd M;
  Eigen::Matrix4cd Minv;
};

inline BatemanMap build_bateman_map(const PhysParams& p) {
  p.require_underdamped();
  if (p.gamma <= 0.0)
    throw DegenerateParams("dual-system map needs gamma > 0 (it divides by "
                           "sqrt(-i*gamma*Omega))");
  const double W = p.Omega(), g = p.gamma, m = p.m, w = p.omega;
  const cplx iW(0.0, W);
  const cplx s = std::sqrt(cplx(0.0, -g * W));

  BatemanMap map;
  map.params = p;
  Eigen::Matrix4cd& M = map.M;
  // X = [m w^2 y - (p_y + m(g/2)x) iW] / (m w s)
  M(0, 0) = -iW * (g / 2.0) / (w * s);
  M(0, 1) = w / s;
  M(0, 2) = 0.0;
  M(0, 3) = -iW / (m * w * s);
  // P = w (p_x - m(g/2)y + m x iW) / s
  M(1, 0) = w * m * iW / s;
  M(1, 1) = -w * m * (g / 2.0) / s;
  M(1, 2) = w / s;
  M(1, 3) = 0.0;
  // Q = [m w^2 y - (p_y - m(g/2)x) iW] / (m w s)
  M(2, 0) = iW * (g / 2.0) / (w * s);
  M(2, 1) = w / s;
  M(2, 2) = 0.0;
  M(2, 3) = -iW / (m * w * s);
  // Pi = -w (p_x + m(g/2)y + m x iW) / s
  M(3, 0) = -w * m * iW / s;
  M(3, 1) = -w * m * (g / 2.0) / s;
  M(3, 2) = -w / s;
  M(3, 3) = 0.0;

  map.Minv = M.inverse();
  return map;
}

/// Poisson matrix of (x, y, p_x, p_y) with {x, p_x} = {y, p_y} = 1.
inline Eigen::Matrix4d poisson_matrix_xy() {
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
  J(0, 2) = 1.0;
  J(1, 3) = 1.0;
  J(2, 0) = -1.0;
  J(3, 1) = -1.0;
  return J;
}

/// Poisson matrix of (X, P, Q, Pi) with {X, P} = {Q, Pi} = 1.
inline Eigen::Matrix4d poisson_matrix_pairs() {
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
  J(0, 1) = 1.0;
  J(1, 0) = -1.0;
  J(2, 3) = 1.0;
  J(3, 2) = -1.0;
  return J;
}

/// Max deviation of M J M^T from the conjugate-pair Poisson matrix.
inline double map_canonicity_defect(const BatemanMap& map) {
  Eigen::Matrix4cd got =
      map.M * poisson_matrix_xy().cast<cplx>() * map.M.transpose();
  return (got - poisson_matrix_pairs().cast<cplx>()).cwiseAbs().maxCoeff();
}

/// H_B = p_x p_y / m + (g/2)(y p_y - x p_x) + m W^2 x y.
inline double bateman_hamiltonian(const PhysParams& p,
                                  const Eigen::Vector4d& v) {
  const double W = p.Omega();
  return v[2] * v[3] / p.m + (p.gamma / 2.0) * (v[1] * v[3] - v[0] * v[2]) +
         p.m * W * W * v[0] * v[1];
}

/// The damped-system Hamiltonian written in the conjugate pairs:
/// H = -Pi P / m - g Q Pi - Pi^2 / m + m w^2 X Q - m w^2 Q^2.
inline cplx pair_hamiltonian(const PhysParams& p, const Eigen::Vector4cd& w) {
  const double w2 = p.omega * p.omega;
  const cplx X = w[0], P = w[1], Q = w[2], Pi = w[3];
  return -Pi * P / p.m - p.gamma * Q * Pi - Pi * Pi / p.m + p.m * w2 * X * Q -
         p.m * w2 * Q * Q;
}

/// Canonicity plus the Hamiltonian identity H(M v) = H_B(v) at random points.
inline Report verify_bateman_map(const PhysParams& p, int npoints = 100,
                                 std::uint64_t seed = 20260825) {
  BatemanMap map = build_bateman_map(p);
  Report rep("dual-system map");
  rep.add("map is canonical", map_canonicity_defect(map), 1e-12);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < npoints; ++i) {
    Eigen::Vector4d v;
    for (int j = 0; j < 4; ++j) v[j] = dist(rng);
    cplx lhs = pair_hamiltonian(p, map.M * v.cast<cplx>());
    double rhs = bateman_hamiltonian(p, v);
    worst = std::max(worst, std::abs(lhs - cplx(rhs, 0.0)));
  }
  rep.add("H(map(v)) = H_B(v) on random points", worst, 1e-10);
  return rep;
}

// ---------------------------------------------------------------------------
// Quantum realization

struct BatemanOps {
  PhysParams params;
  WeylOp x, y, px, py, HB;
  WeylOp X, P, Q, Pi;
};

inline BatemanOps build_bateman_ops(const PhysParams& p) {
  BatemanMap map = build_bateman_map(p);
  const double W = p.Omega();
  const cplx mih(0.0, -p.hbar);

  BatemanOps ops;
  ops.params = p;
  ops.x = WeylOp::x();
  ops.y = WeylOp::y();
  ops.px = mih * WeylOp::dx();
  ops.py = mih * WeylOp::dy();
  ops.HB = cplx(1.0 / p.m) * (ops.px * ops.py) +
           cplx(p.gamma / 2.0) * (ops.y * ops.py - ops.x * ops.px) +
           cplx(p.m * W * W) * (ops.x * ops.y);

  auto realize = [&](int row) {
    return map.M(row, 0) * ops.x + map.M(row, 1) * ops.y +
           map.M(row, 2) * ops.px + map.M(row, 3) * ops.py;
  };
  ops.X = realize(0);
  ops.P = realize(1);
  ops.Q = realize(2);
  ops.Pi = realize(3);
  return ops;
}

/// Brackets of {x, y, p_x, p_y} with each other and with H_B.
inline Report verify_bateman_algebra(const BatemanOps& ops,
                                     double tol = 1e-12) {
  const PhysParams& p = ops.params;
  const double W = p.Omega(), g = p.gamma, m = p.m;
  const cplx ih(0.0, p.hbar);
  auto C = [](const WeylOp& a, const WeylOp& b) { return commutator(a, b); };
  auto add = [&](Report& rep, const std::string& name, const WeylOp& got,
                 const WeylOp& expect) {
    double scale = std::max({got.max_amp(), expect.max_amp(), 1.0});
    rep.add(name, WeylOp::deviation(got, expect) / scale, tol);
  };

  Report rep("dual-system algebra");
  add(rep, "[x,px]", C(ops.x, ops.px), ih * WeylOp::identity());
  add(rep, "[y,py]", C(ops.y, ops.py), ih * WeylOp::identity());
  add(rep, "[x,y]", C(ops.x, ops.y), WeylOp::zero());
  add(rep, "[x,py]", C(ops.x, ops.py), WeylOp::zero());
  add(rep, "[y,px]", C(ops.y, ops.px), WeylOp::zero());
  add(rep, "[px,py]", C(ops.px, ops.py), WeylOp::zero());
  add(rep, "[HB,x]", C(ops.HB, ops.x),
      (ih / m) * (-ops.py + cplx(m * g / 2.0) * ops.x));
  add(rep, "[HB,px]", C(ops.HB, ops.px),
      ih * (cplx(-g / 2.0) * ops.px + cplx(m * W * W) * ops.y));
  add(rep, "[HB,y]", C(ops.HB, ops.y),
      (ih / m) * (-ops.px - cplx(m * g / 2.0) * ops.y));
  add(rep, "[HB,py]", C(ops.HB, ops.py),
      ih * (cplx(g / 2.0) * ops.py + cplx(m * W * W) * ops.x));
  return rep;
}

/// Brackets of the realized quadruple: the conjugate-pair pattern with unit
/// charges on both pairs and the five-generator rows with H_B as evolution.
inline Report verify_pair_realization(const BatemanOps& ops,
                                      double tol = 1e-12) {
  const PhysParams& p = ops.params;
  const double g = p.gamma, m = p.m, w2 = p.omega * p.omega;
  const cplx ih(0.0, p.hbar);
  auto C = [](const WeylOp& a, const WeylOp& b) { return commutator(a, b); };
  auto add = [&](Report& rep, const std::string& name, const WeylOp& got,
                 const WeylOp& expect) {
    double scale = std::max({got.max_amp(), expect.max_amp(), 1.0});
    rep.add(name, WeylOp::deviation(got, expect) / scale, tol);
  };

  Report rep("conjugate-pair realization");
  add(rep, "[X,P]", C(ops.X, ops.P), ih * WeylOp::identity());
  add(rep, "[Q,Pi]", C(ops.Q, ops.Pi), ih * WeylOp::identity());
  add(rep, "[X,Q]", C(ops.X, ops.Q), WeylOp::zero());
  add(rep, "[X,Pi]", C(ops.X, ops.Pi), WeylOp::zero());
  add(rep, "[Q,P]", C(ops.Q, ops.P), WeylOp::zero());
  add(rep, "[P,Pi]", C(ops.P, ops.Pi), WeylOp::zero());
  add(rep, "[HB,X]", C(ops.HB, ops.X), (ih / m) * ops.Pi);
  add(rep, "[HB,P]", C(ops.HB, ops.P), ih * m * w2 * ops.Q);
  add(rep, "[HB,Q]", C(ops.HB, ops.Q),
      (ih / m) * ops.P + (2.0 * ih / m) * ops.Pi + ih * g * ops.Q);
  add(rep, "[HB,Pi]", C(ops.HB, ops.Pi),
      ih * m * w2 * ops.X - 2.0 * ih * m * w2 * ops.Q - ih * g * ops.Pi);
  return rep;
}

/// H rebuilt from the quadruple; must reproduce H_B identically.
inline WeylOp reconstruct_hamiltonian(const BatemanOps& ops) {
  const PhysParams& p = ops.params;
  const double w2 = p.omega * p.omega;
  return cplx(-1.0 / p.m) * (ops.Pi * ops.P) -
         cplx(p.gamma / 2.0) * (ops.Q * ops.Pi + ops.Pi * ops.Q) -
         cplx(1.0 / p.m) * (ops.Pi * ops.Pi) +
         cplx(p.m * w2) * (ops.X * ops.Q) - cplx(p.m * w2) * (ops.Q * ops.Q);
}

inline Report verify_reconstruction(const BatemanOps& ops,
                                    double tol = 1e-12) {
  Report rep("Hamiltonian reconstruction");
  WeylOp rebuilt = reconstruct_hamiltonian(ops);
  double scale = std::max({rebuilt.max_amp(), ops.HB.max_amp(), 1.0});
  rep.add("rebuilt H equals H_B", WeylOp::deviation(rebuilt, ops.HB) / scale,
          tol);
  return rep;
}

// ---------------------------------------------------------------------------
// Classical flow

/// Generator S of the linear flow v' = S v.
inline Eigen::Matrix4d bateman_generator(const PhysParams& p) {
  const double W = p.Omega(), g = p.gamma, m = p.m;
  Eigen::Matrix4d S = Eigen::Matrix4d::Zero();
  S(0, 0) = -g / 2.0;
  S(0, 3) = 1.0 / m;
  S(1, 1) = g / 2.0;
  S(1, 2) = 1.0 / m;
  S(2, 1) = -m * W * W;
  S(2, 2) = g / 2.0;
  S(3, 0) = -m * W * W;
  S(3, 3) = -g / 2.0;
  return S;
}

/// Exact flow matrix v(t) = Phi(t) v(0).
inline Eigen::Matrix4d bateman_flow_matrix(const PhysParams& p, double t) {
  const double W = p.Omega(), g = p.gamma, m = p.m;
  const double c = std::cos(W * t), s = std::sin(W * t);
  const double em = std::exp(-g * t / 2.0), ep = std::exp(g * t / 2.0);
  Eigen::Matrix4d F = Eigen::Matrix4d::Zero();
  F(0, 0) = em * c;
  F(0, 3) = em * s / (m * W);
  F(1, 1) = ep * c;
  F(1, 2) = ep * s / (m * W);
  F(2, 1) = -m * W * ep * s;
  F(2, 2) = ep * c;
  F(3, 0) = -m * W * em * s;
  F(3, 3) = em * c;
  return F;
}

/// Gaussian state: mean and covariance of (x, y, p_x, p_y).
struct GaussianState4 {
  Eigen::Vector4d mean;
  Eigen::Matrix4d cov;
};

inline GaussianState4 propagate(const PhysParams& p, const GaussianState4& s,
                                double t) {
  Eigen::Matrix4d F = bateman_flow_matrix(p, t);
  return {F * s.mean, F * s.cov * F.transpose()};
}

/// The two symplectic invariants of a 4x4 covariance: positive imaginary
/// parts of the eigenvalues of J Sigma, ascending.
inline Eigen::Vector2d symplectic_eigenvalues(const Eigen::Matrix4d& cov) {
  Eigen::Matrix4cd JS =
      poisson_matrix_xy().cast<cplx>() * cov.cast<cplx>();
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(JS);
  std::vector<double> pos;
  for (int i = 0; i < 4; ++i) {
    double im = es.eigenvalues()[i].imag();
    if (im > 0.0) pos.push_back(im);
  }
  if (pos.size() != 2)
    throw DegenerateParams("covariance has no symplectic spectrum");
  std::sort(pos.begin(), pos.end());
  return {pos[0], pos[1]};
}

/// The time-reversal exchange: solutions map to solutions under
/// (x, y, p_x, p_y, t) -> (y, x, -p_y, -p_x, -t).  The same exchange without
/// the momentum sign flips is reported as a flagged non-symmetry.
inline Report verify_duality(const PhysParams& p) {
  Eigen::Matrix4d D = Eigen::Matrix4d::Zero();
  D(0, 1) = 1.0;
  D(1, 0) = 1.0;
  D(2, 3) = -1.0;
  D(3, 2) = -1.0;
  Eigen::Matrix4d Dnaive = D.cwiseAbs();

  double worst = 0.0, worst_naive = 0.0;
  for (double t : {0.3, 0.9, 1.7, 2.8, 4.4}) {
    Eigen::Matrix4d lhs = D * bateman_flow_matrix(p, -t);
    Eigen::Matrix4d rhs = bateman_flow_matrix(p, t) * D;
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    Eigen::Matrix4d ln = Dnaive * bateman_flow_matrix(p, -t);
    Eigen::Matrix4d rn = bateman_flow_matrix(p, t) * Dnaive;
    worst_naive = std::max(worst_naive, (ln - rn).cwiseAbs().maxCoeff());
  }

  Report rep("time-reversal exchange");
  rep.add("exchange with momentum flips intertwines the flow", worst, 1e-12);
  rep.add_flag("plain swap alternative flagged", worst_naive > 1e-3,
               "exchanging coordinates and momenta without sign flips does "
               "not commute with the flow (defect " +
                   std::to_string(worst_naive) + ")");
  return rep;
}

}  // namespace qdho
