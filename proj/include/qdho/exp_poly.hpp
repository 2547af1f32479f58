#pragma once

// Exact arithmetic on finite sums  sum_j  c_j * t^k_j * exp(a_j t)
// with complex amplitudes c and rates a, integer powers k >= 0.
// The family is closed under +, *, and d/dt, which is what makes the
// operator algebra elsewhere in this library exact.  Trigonometric
// coefficients enter through their Euler decomposition, e.g.
// cos(w t) = (e^{iwt} + e^{-iwt}) / 2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace qdho {

using cplx = std::complex<double>;

struct ExpTerm {
  cplx amp;
  int tpow = 0;
  cplx rate;
};

class ExpPoly {
 public:
  // Amplitudes below amp_tol * (largest amplitude) are dropped when
  // normalizing; rates closer than rate_tol are merged.
  static constexpr double amp_tol = 1e-14;
  static constexpr double rate_tol = 1e-12;

  ExpPoly() = default;
  explicit ExpPoly(std::vector<ExpTerm> terms) : terms_(std::move(terms)) {
    normalize();
  }

  static ExpPoly zero() { return ExpPoly{}; }
  static ExpPoly constant(cplx c) { return ExpPoly({{c, 0, cplx{0.0}}}); }
  static ExpPoly term(cplx c, int tpow, cplx rate) {
    return ExpPoly({{c, tpow, rate}});
  }
  /// e^{a t}
  static ExpPoly exponential(cplx a) { return term(1.0, 0, a); }
  /// cos(w t) via Euler decomposition
  static ExpPoly cosine(double w) {
    return ExpPoly({{0.5, 0, cplx{0.0, w}}, {0.5, 0, cplx{0.0, -w}}});
  }
  /// sin(w t) via Euler decomposition
  static ExpPoly sine(double w) {
    return ExpPoly({{cplx{0.0, -0.5}, 0, cplx{0.0, w}},
                    {cplx{0.0, 0.5}, 0, cplx{0.0, -w}}});
  }
  /// e^{a t} cos(w t)
  static ExpPoly exp_cos(double a, double w) {
    return ExpPoly({{0.5, 0, cplx{a, w}}, {0.5, 0, cplx{a, -w}}});
  }
  /// e^{a t} sin(w t)
  static ExpPoly exp_sin(double a, double w) {
    return ExpPoly({{cplx{0.0, -0.5}, 0, cplx{a, w}},
                    {cplx{0.0, 0.5}, 0, cplx{a, -w}}});
  }

  const std::vector<ExpTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  cplx eval(double t) const {
    cplx s{0.0};
    for (const auto& term : terms_)
      s += term.amp * std::pow(t, term.tpow) * std::exp(term.rate * t);
    return s;
  }

  /// Largest amplitude over all canonical terms.
  double max_amp() const {
    double m = 0.0;
    for (const auto& term : terms_) m = std::max(m, std::abs(term.amp));
    return m;
  }

  ExpPoly derivative() const {
    std::vector<ExpTerm> out;
    out.reserve(2 * terms_.size());
    for (const auto& term : terms_) {
      if (term.tpow > 0)
        out.push_back({term.amp * double(term.tpow), term.tpow - 1, term.rate});
      if (term.rate != cplx{0.0})
        out.push_back({term.amp * term.rate, term.tpow, term.rate});
    }
    return ExpPoly(std::move(out));
  }

  /// Complex conjugate as a function of real t: conj(c) t^k e^{conj(a) t}.
  ExpPoly conj() const {
    std::vector<ExpTerm> out = terms_;
    for (auto& term : out) {
      term.amp = std::conj(term.amp);
      term.rate = std::conj(term.rate);
    }
    return ExpPoly(std::move(out));
  }

  ExpPoly operator-() const {
    std::vector<ExpTerm> out = terms_;
    for (auto& term : out) term.amp = -term.amp;
    ExpPoly p;
    p.terms_ = std::move(out);  // already canonical
    return p;
  }

  ExpPoly& operator+=(const ExpPoly& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    normalize();
    return *this;
  }
  ExpPoly& operator-=(const ExpPoly& o) { return *this += (-o); }

  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }

  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
    std::vector<ExpTerm> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_)
      for (const auto& tb : b.terms_)
        out.push_back({ta.amp * tb.amp, ta.tpow + tb.tpow, ta.rate + tb.rate});
    return ExpPoly(std::move(out));
  }
  friend ExpPoly operator*(cplx c, const ExpPoly& p) {
    std::vector<ExpTerm> out = p.terms_;
    for (auto& term : out) term.amp *= c;
    return ExpPoly(std::move(out));
  }
  friend ExpPoly operator*(const ExpPoly& p, cplx c) { return c * p; }

  /// True when every amplitude is below tol relative to `scale`
  /// (defaults to this polynomial's own largest amplitude, so an
  /// exactly-normalized nonzero polynomial is never "zero").
  bool is_zero(double tol = 1e-12, double scale = -1.0) const {
    if (terms_.empty()) return true;
    double s = scale > 0.0 ? scale : 1.0;
    return max_amp() <= tol * s;
  }

  /// Max amplitude of (a - b), i.e. an absolute deviation in canonical form.
  static double deviation(const ExpPoly& a, const ExpPoly& b) {
    return (a - b).max_amp();
  }

  /// Copy with amplitudes below amp_tol * scale removed.  Used by the
  /// operator algebra to prune against a scale spanning many coefficients.
  ExpPoly pruned_against(double scale) const {
    std::vector<ExpTerm> out;
    for (const auto& term : terms_)
      if (std::abs(term.amp) > amp_tol * scale) out.push_back(term);
    ExpPoly p;
    p.terms_ = std::move(out);  // subset of canonical terms stays canonical
    return p;
  }

  static bool approx_equal(const ExpPoly& a, const ExpPoly& b,
                           double tol = 1e-12) {
    double scale = std::max({a.max_amp(), b.max_amp(), 1.0});
    return deviation(a, b) <= tol * scale;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < terms_.size(); ++i) {
      const auto& term = terms_[i];
      if (i) s += " + ";
      s += "(" + fmt(term.amp.real()) + (term.amp.imag() < 0 ? "-" : "+") +
           fmt(std::abs(term.amp.imag())) + "i)";
      if (term.tpow > 0) s += "*t^" + std::to_string(term.tpow);
      if (term.rate != cplx{0.0})
        s += "*exp((" + fmt(term.rate.real()) + (term.rate.imag() < 0 ? "-" : "+") +
             fmt(std::abs(term.rate.imag())) + "i)t)";
    }
    return s;
  }

 private:
  static std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const ExpTerm& a, const ExpTerm& b) {
      if (a.tpow != b.tpow) return a.tpow < b.tpow;
      if (a.rate.real() != b.rate.real()) return a.rate.real() < b.rate.real();
      return a.rate.imag() < b.rate.imag();
    });
    std::vector<ExpTerm> merged;
    for (const auto& term : terms_) {
      if (!merged.empty()) {
        auto& last = merged.back();
        double rscale = 1.0 + std::max(std::abs(last.rate), std::abs(term.rate));
        if (last.tpow == term.tpow &&
            std::abs(last.rate - term.rate) <= rate_tol * rscale) {
          last.amp += term.amp;
          continue;
        }
      }
      merged.push_back(term);
    }
    double m = 0.0;
    for (const auto& term : merged) m = std::max(m, std::abs(term.amp));
    terms_.clear();
    for (const auto& term : merged)
      if (std::abs(term.amp) > amp_tol * m) terms_.push_back(term);
  }

  std::vector<ExpTerm> terms_;
};

}  // namespace qdho
