#pragma once

// Crank-Nicolson integrator for
//
//   i hbar phi_t = -(hbar^2/2m) e^{-gamma t} phi_xx + (m/2) omega^2 e^{gamma t} x^2 phi
//
// on a uniform grid with Dirichlet edges.  The Hamiltonian is evaluated at
// the step midpoint, keeping the scheme second order for the time-dependent
// coefficients; the tridiagonal systems are solved by the Thomas algorithm.

#include <map>
#include <string>
#include <vector>

#include "qdho/errors.hpp"
#include "qdho/grid_state.hpp"
#include "qdho/phys_params.hpp"
#include "qdho/weyl_op.hpp"

namespace qdho {

struct EvolveOptions {
  double dt = 1e-3;
  double boundary_tol = 1e-6;          // relative edge amplitude during a run
  double initial_boundary_tol = 1e-12; // relative edge amplitude at the start
  int boundary_check_every = 50;
};

namespace detail {

/// Solves the tridiagonal system (lower, diag, upper) v = rhs in place.
inline void thomas_solve(std::vector<cplx>& diag, const std::vector<cplx>& lower,
                         const std::vector<cplx>& upper, std::vector<cplx>& rhs) {
  const int n = static_cast<int>(diag.size());
  for (int i = 1; i < n; ++i) {
    cplx w = lower[size_t(i)] / diag[size_t(i - 1)];
    diag[size_t(i)] -= w * upper[size_t(i - 1)];
    rhs[size_t(i)] -= w * rhs[size_t(i - 1)];
  }
  rhs[size_t(n - 1)] /= diag[size_t(n - 1)];
  for (int i = n - 2; i >= 0; --i)
    rhs[size_t(i)] =
        (rhs[size_t(i)] - upper[size_t(i)] * rhs[size_t(i + 1)]) /
        diag[size_t(i)];
}

inline double edge_amplitude(const GridState& s) {
  const size_t n = s.values.size();
  double edge = std::max({std::abs(s.values[0]), std::abs(s.values[1]),
                          std::abs(s.values[n - 1]), std::abs(s.values[n - 2])});
  double peak = 0.0;
  for (const cplx& v : s.values) peak = std::max(peak, std::abs(v));
  return peak > 0.0 ? edge / peak : 0.0;
}

}  // namespace detail

class CkEvolver {
 public:
  CkEvolver(const PhysParams& p, const Grid& g, EvolveOptions opt = {})
      : params_(p), grid_(g), opt_(opt) {
    p.validate();
    if (g.n < 8 || (g.n & (g.n - 1)) != 0)
      throw ConfigError("grid size must be a power of two (>= 8)");
    if (!(opt.dt > 0.0)) throw ConfigError("dt must be positive");
  }

  const Grid& grid() const { return grid_; }
  const EvolveOptions& options() const { return opt_; }

  /// One Crank-Nicolson step; advances s.time by dt.
  void step(GridState& s) const {
    const int n = grid_.n;
    const double dx = grid_.dx(), dt = opt_.dt;
    const double tm = s.time + 0.5 * dt;
    const double a = -params_.hbar * params_.hbar *
                     std::exp(-params_.gamma * tm) / (2.0 * params_.m);
    const double vfac = 0.5 * params_.m * params_.omega * params_.omega *
                        std::exp(params_.gamma * tm);
    const cplx lam(0.0, dt / (2.0 * params_.hbar));

    const size_t nn = static_cast<size_t>(n);
    std::vector<cplx> diag(nn), lower(nn), upper(nn), rhs(nn);
    const cplx off = lam * (a / (dx * dx));
    for (int i = 0; i < n; ++i) {
      const double x = grid_.point(i);
      const cplx h_diag = -2.0 * a / (dx * dx) + vfac * x * x;
      diag[size_t(i)] = 1.0 + lam * h_diag;
      lower[size_t(i)] = off;
      upper[size_t(i)] = off;
      cplx m1 = (i > 0) ? s.values[size_t(i - 1)] : cplx(0.0);
      cplx p1 = (i + 1 < n) ? s.values[size_t(i + 1)] : cplx(0.0);
      rhs[size_t(i)] =
          (1.0 - lam * h_diag) * s.values[size_t(i)] - off * (m1 + p1);
    }
    // Dirichlet edges
    diag[0] = 1.0;
    upper[0] = 0.0;
    rhs[0] = 0.0;
    diag[size_t(n - 1)] = 1.0;
    lower[size_t(n - 1)] = 0.0;
    rhs[size_t(n - 1)] = 0.0;

    detail::thomas_solve(diag, lower, upper, rhs);
    s.values = std::move(rhs);
    s.time += dt;
  }

  /// Steps until s.time reaches t_end (within half a step).
  void evolve(GridState& s, double t_end) const {
    check_initial(s);
    long k = 0;
    while (s.time < t_end - 0.5 * opt_.dt) {
      step(s);
      if (++k % opt_.boundary_check_every == 0) check_running(s);
    }
    check_running(s);
  }

  void check_initial(const GridState& s) const {
    if (s.grid.n != grid_.n)
      throw ConfigError("state grid does not match evolver grid");
    double rel = detail::edge_amplitude(s);
    if (rel > opt_.initial_boundary_tol)
      throw BoundaryLeak("initial state touches the grid edge (relative "
                         "amplitude " +
                         std::to_string(rel) + ")");
  }

  void check_running(const GridState& s) const {
    double rel = detail::edge_amplitude(s);
    if (rel > opt_.boundary_tol)
      throw BoundaryLeak("wavefunction reached the grid edge (relative "
                         "amplitude " +
                         std::to_string(rel) + ")");
  }

 private:
  PhysParams params_;
  Grid grid_;
  EvolveOptions opt_;
};

/// Expectation and norm series sampled along an evolution.
struct ProbeSeries {
  std::vector<double> times;
  std::vector<double> norms;
  std::vector<std::string> names;
  std::map<std::string, std::vector<cplx>> expectations;

  /// Max relative excursion of a tracked expectation from its initial value.
  double relative_drift(const std::string& name) const {
    const auto& vals = expectations.at(name);
    const double scale = std::max(std::abs(vals.front()), 1e-12);
    double worst = 0.0;
    for (const cplx& v : vals)
      worst = std::max(worst, std::abs(v - vals.front()) / scale);
    return worst;
  }

  /// Max per-step norm drift relative to the initial norm.
  double norm_drift_per_step(int steps_per_sample) const {
    double worst = 0.0;
    for (size_t i = 1; i < norms.size(); ++i)
      worst = std::max(worst,
                       std::abs(norms[i] - norms[i - 1]) / steps_per_sample);
    return worst / std::max(norms.front(), 1e-12);
  }
};

inline ProbeSeries evolve_probed(
    const CkEvolver& ev, GridState& s, double t_end,
    const std::vector<std::pair<std::string, WeylOp>>& ops,
    int sample_every = 10) {
  ev.check_initial(s);
  ProbeSeries out;
  for (const auto& [name, op] : ops) {
    out.names.push_back(name);
    out.expectations[name] = {};
  }
  auto record = [&]() {
    out.times.push_back(s.time);
    out.norms.push_back(l2_norm(s));
    for (const auto& [name, op] : ops)
      out.expectations[name].push_back(expectation(op, s));
  };
  record();
  long k = 0;
  const double dt = ev.options().dt;
  while (s.time < t_end - 0.5 * dt) {
    ev.step(s);
    if (++k % ev.options().boundary_check_every == 0) ev.check_running(s);
    if (k % sample_every == 0) record();
  }
  ev.check_running(s);
  if (out.times.back() != s.time) record();
  return out;
}

}  // namespace qdho
