#pragma once

// Uniform-grid wavefunctions and quadrature: L2 norms, inner products, and
// expectation values of normal-ordered operators via fourth-order stencils.

#include <cmath>
#include <vector>

#include "qdho/errors.hpp"
#include "qdho/weyl_op.hpp"

namespace qdho {

struct Grid {
  double xmin = -8.0;
  double xmax = 8.0;
  int n = 2048;

  double dx() const { return (xmax - xmin) / (n - 1); }
  double point(int i) const { return xmin + i * dx(); }
};

struct GridState {
  Grid grid;
  double time = 0.0;
  std::vector<cplx> values;
};

template <typename F>
GridState sample_on_grid(const Grid& g, double t, F&& f) {
  GridState s;
  s.grid = g;
  s.time = t;
  s.values.resize(g.n);
  for (int i = 0; i < g.n; ++i) s.values[size_t(i)] = f(g.point(i), t);
  return s;
}

inline double l2_norm(const GridState& s) {
  double acc = 0.0;
  for (const cplx& v : s.values) acc += std::norm(v);
  return std::sqrt(acc * s.grid.dx());
}

inline cplx inner_product(const GridState& a, const GridState& b) {
  if (a.grid.n != b.grid.n)
    throw ConfigError("inner product needs matching grids");
  cplx acc = 0.0;
  for (int i = 0; i < a.grid.n; ++i)
    acc += std::conj(a.values[size_t(i)]) * b.values[size_t(i)];
  return acc * a.grid.dx();
}

inline double l2_distance(const GridState& a, const GridState& b) {
  if (a.grid.n != b.grid.n) throw ConfigError("distance needs matching grids");
  double acc = 0.0;
  for (int i = 0; i < a.grid.n; ++i)
    acc += std::norm(a.values[size_t(i)] - b.values[size_t(i)]);
  return std::sqrt(acc * a.grid.dx());
}

namespace detail {

/// Fourth-order first and second derivatives; off-grid values are treated
/// as zero, which is adequate for states that vanish at the edges.
inline std::vector<cplx> stencil_derivative(const std::vector<cplx>& v,
                                            double dx, int order) {
  const int n = static_cast<int>(v.size());
  auto at = [&](int i) -> cplx {
    return (i < 0 || i >= n) ? cplx(0.0, 0.0) : v[size_t(i)];
  };
  std::vector<cplx> out(v.size());
  if (order == 1) {
    for (int i = 0; i < n; ++i)
      out[size_t(i)] = (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) +
                        at(i - 2)) /
                       (12.0 * dx);
  } else if (order == 2) {
    for (int i = 0; i < n; ++i)
      out[size_t(i)] = (-at(i + 2) + 16.0 * at(i + 1) - 30.0 * at(i) +
                        16.0 * at(i - 1) - at(i - 2)) /
                       (12.0 * dx * dx);
  } else {
    throw UnsupportedOperator("stencils cover derivative orders 1 and 2 only");
  }
  return out;
}

}  // namespace detail

/// Applies a one-dimensional operator (x powers, up to two x-derivatives,
/// time-dependent coefficients) to the state.
inline GridState apply_operator(const WeylOp& op, const GridState& s) {
  GridState out = s;
  std::fill(out.values.begin(), out.values.end(), cplx(0.0, 0.0));
  const double dx = s.grid.dx();

  for (const auto& mono : op.monomials()) {
    if (mono.yp != 0 || mono.dyp != 0 || mono.dtp != 0)
      throw UnsupportedOperator(
          "grid expectation supports x-only operators without d/dt");
    if (mono.dxp > 2)
      throw UnsupportedOperator("grid expectation supports d/dx order <= 2");

    std::vector<cplx> work = s.values;
    if (mono.dxp > 0) work = detail::stencil_derivative(work, dx, mono.dxp);
    const cplx c = mono.coeff.eval(s.time);
    for (int i = 0; i < s.grid.n; ++i) {
      double xw = 1.0;
      for (int k = 0; k < mono.xp; ++k) xw *= s.grid.point(i);
      out.values[size_t(i)] += c * xw * work[size_t(i)];
    }
  }
  return out;
}

inline cplx expectation(const WeylOp& op, const GridState& s) {
  return inner_product(s, apply_operator(op, s));
}

}  // namespace qdho
