#pragma once

// Normal-ordered differential operators on functions of (x, y, t) with
// ExpPoly coefficients.  A monomial is
//
//   f(t) * x^xp * y^yp * (d/dx)^dxp * (d/dy)^dyp * (d/dt)^dtp
//
// with all multiplication operators to the left of all derivatives.
// Products are reordered with [d/dx, x] = 1, [d/dy, y] = 1 and
// [d/dt, f(t)] = f'(t); everything stays exact in the coefficient ring.

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "qdho/exp_poly.hpp"

namespace qdho {

struct WeylMonomial {
  ExpPoly coeff;
  int xp = 0, yp = 0, dxp = 0, dyp = 0, dtp = 0;

  std::array<int, 5> key() const { return {xp, yp, dxp, dyp, dtp}; }
};

class WeylOp {
 public:
  WeylOp() = default;
  explicit WeylOp(std::vector<WeylMonomial> monos) : monos_(std::move(monos)) {
    normalize();
  }

  static WeylOp zero() { return WeylOp{}; }
  static WeylOp identity() { return from_coeff(ExpPoly::constant(1.0)); }
  /// Multiplication operator by the time-dependent function f(t).
  static WeylOp from_coeff(ExpPoly f) {
    return WeylOp({{std::move(f), 0, 0, 0, 0, 0}});
  }
  static WeylOp x() { return WeylOp({{ExpPoly::constant(1.0), 1, 0, 0, 0, 0}}); }
  static WeylOp y() { return WeylOp({{ExpPoly::constant(1.0), 0, 1, 0, 0, 0}}); }
  static WeylOp dx() { return WeylOp({{ExpPoly::constant(1.0), 0, 0, 1, 0, 0}}); }
  static WeylOp dy() { return WeylOp({{ExpPoly::constant(1.0), 0, 0, 0, 1, 0}}); }
  static WeylOp dt() { return WeylOp({{ExpPoly::constant(1.0), 0, 0, 0, 0, 1}}); }

  const std::vector<WeylMonomial>& monomials() const { return monos_; }
  bool empty() const { return monos_.empty(); }

  double max_amp() const {
    double m = 0.0;
    for (const auto& mono : monos_) m = std::max(m, mono.coeff.max_amp());
    return m;
  }

  WeylOp operator-() const {
    std::vector<WeylMonomial> out = monos_;
    for (auto& mono : out) mono.coeff = -mono.coeff;
    WeylOp r;
    r.monos_ = std::move(out);
    return r;
  }

  WeylOp& operator+=(const WeylOp& o) {
    monos_.insert(monos_.end(), o.monos_.begin(), o.monos_.end());
    normalize();
    return *this;
  }
  WeylOp& operator-=(const WeylOp& o) { return *this += (-o); }

  friend WeylOp operator+(WeylOp a, const WeylOp& b) { return a += b; }
  friend WeylOp operator-(WeylOp a, const WeylOp& b) { return a -= b; }

  friend WeylOp operator*(cplx c, const WeylOp& op) {
    std::vector<WeylMonomial> out = op.monos_;
    for (auto& mono : out) mono.coeff = c * mono.coeff;
    return WeylOp(std::move(out));
  }
  friend WeylOp operator*(const WeylOp& op, cplx c) { return c * op; }
  friend WeylOp operator*(const ExpPoly& f, const WeylOp& op) {
    std::vector<WeylMonomial> out = op.monos_;
    for (auto& mono : out) mono.coeff = f * mono.coeff;
    return WeylOp(std::move(out));
  }

  /// Normal-ordered operator product.
  friend WeylOp operator*(const WeylOp& a, const WeylOp& b) {
    std::vector<WeylMonomial> out;
    for (const auto& ma : a.monos_) {
      for (const auto& mb : b.monos_) {
        // Precompute t-derivatives of the right coefficient once per pair.
        std::vector<ExpPoly> fb_derivs(size_t(ma.dtp) + 1);
        fb_derivs[0] = mb.coeff;
        for (int l = 1; l <= ma.dtp; ++l)
          fb_derivs[l] = fb_derivs[l - 1].derivative();
        for (int i = 0; i <= std::min(ma.dxp, mb.xp); ++i) {
          for (int j = 0; j <= std::min(ma.dyp, mb.yp); ++j) {
            for (int l = 0; l <= ma.dtp; ++l) {
              double c = binom(ma.dxp, i) * falling(mb.xp, i) *
                         binom(ma.dyp, j) * falling(mb.yp, j) *
                         binom(ma.dtp, l);
              WeylMonomial mono;
              mono.coeff = c * (ma.coeff * fb_derivs[l]);
              mono.xp = ma.xp + mb.xp - i;
              mono.yp = ma.yp + mb.yp - j;
              mono.dxp = ma.dxp + mb.dxp - i;
              mono.dyp = ma.dyp + mb.dyp - j;
              mono.dtp = ma.dtp + mb.dtp - l;
              out.push_back(std::move(mono));
            }
          }
        }
      }
    }
    return WeylOp(std::move(out));
  }

  /// d/dt applied to the coefficients only.  For operators with no d/dt
  /// factor this equals [d/dt, A].
  WeylOp time_derivative() const {
    std::vector<WeylMonomial> out = monos_;
    for (auto& mono : out) mono.coeff = mono.coeff.derivative();
    return WeylOp(std::move(out));
  }

  /// Max coefficient amplitude of (a - b) in canonical form.
  static double deviation(const WeylOp& a, const WeylOp& b) {
    return (a - b).max_amp();
  }

  static bool approx_equal(const WeylOp& a, const WeylOp& b,
                           double tol = 1e-12) {
    double scale = std::max({a.max_amp(), b.max_amp(), 1.0});
    return deviation(a, b) <= tol * scale;
  }

  std::string to_string() const {
    if (monos_.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < monos_.size(); ++i) {
      const auto& mono = monos_[i];
      if (i) s += "  +  ";
      s += "[" + mono.coeff.to_string() + "]";
      auto pow = [&s](const char* sym, int p) {
        if (p == 0) return;
        s += std::string(" ") + sym;
        if (p > 1) s += "^" + std::to_string(p);
      };
      pow("x", mono.xp);
      pow("y", mono.yp);
      pow("dx", mono.dxp);
      pow("dy", mono.dyp);
      pow("dt", mono.dtp);
    }
    return s;
  }

 private:
  static double binom(int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * double(n - i) / double(i + 1);
    return r;
  }
  static double falling(int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= double(n - i);
    return r;
  }

  void normalize() {
    std::sort(monos_.begin(), monos_.end(),
              [](const WeylMonomial& a, const WeylMonomial& b) {
                return a.key() < b.key();
              });
    std::vector<WeylMonomial> merged;
    for (auto& mono : monos_) {
      if (!merged.empty() && merged.back().key() == mono.key())
        merged.back().coeff += mono.coeff;
      else
        merged.push_back(std::move(mono));
    }
    double scale = 0.0;
    for (const auto& mono : merged) scale = std::max(scale, mono.coeff.max_amp());
    monos_.clear();
    for (auto& mono : merged) {
      mono.coeff = mono.coeff.pruned_against(scale);
      if (!mono.coeff.empty()) monos_.push_back(std::move(mono));
    }
  }

  std::vector<WeylMonomial> monos_;
};

inline WeylOp commutator(const WeylOp& a, const WeylOp& b) {
  return a * b - b * a;
}

}  // namespace qdho
