#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "qdho/exp_poly.hpp"
#include "support/test_util.hpp"

using qdho::cplx;
using qdho::ExpPoly;
namespace qt = qdho::test;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("constant and exponential evaluation") {
  auto one = ExpPoly::constant(1.0);
  CHECK(one.eval(0.7) == cplx(1.0, 0.0));

  auto decay = ExpPoly::exponential(-0.2);
  // independent reference through std::exp
  CHECK(std::abs(decay.eval(1.0) - std::exp(-0.2)) < 1e-15);
  CHECK(std::abs(decay.eval(1.0) - cplx(0.8187307530779818, 0.0)) < 1e-15);
  CHECK(std::abs(decay.eval(-3.0) - std::exp(0.6)) < 1e-14);
}

TEST_CASE("trig factories match std implementations") {
  auto rng = qt::make_rng(11);
  double w = 1.3, a = -0.25;
  auto c = ExpPoly::cosine(w);
  auto s = ExpPoly::sine(w);
  auto ec = ExpPoly::exp_cos(a, w);
  auto es = ExpPoly::exp_sin(a, w);
  for (int i = 0; i < 20; ++i) {
    double t = qt::uniform(rng, -2.0, 3.0);
    CHECK(std::abs(c.eval(t) - std::cos(w * t)) < 1e-14);
    CHECK(std::abs(s.eval(t) - std::sin(w * t)) < 1e-14);
    CHECK(std::abs(ec.eval(t) - std::exp(a * t) * std::cos(w * t)) < 1e-14);
    CHECK(std::abs(es.eval(t) - std::exp(a * t) * std::sin(w * t)) < 1e-14);
  }
}

TEST_CASE("pythagorean identity collapses to the constant one") {
  double w = 0.994987437106620;
  auto c = ExpPoly::cosine(w);
  auto s = ExpPoly::sine(w);
  auto sum = c * c + s * s;
  // cancellation must happen structurally, not just numerically
  REQUIRE(sum.terms().size() == 1);
  CHECK(sum.terms()[0].tpow == 0);
  CHECK(std::abs(sum.terms()[0].rate) < 1e-14);
  CHECK(std::abs(sum.eval(2.1) - 1.0) < 1e-14);
}

TEST_CASE("double angle identity") {
  double w = 0.83;
  auto lhs = ExpPoly::sine(w) * ExpPoly::cosine(w);
  auto rhs = ExpPoly::sine(2 * w) * cplx(0.5, 0.0);
  CHECK(ExpPoly::deviation(lhs, rhs) < 1e-14);
  CHECK(ExpPoly::approx_equal(lhs, rhs, 1e-13));
}

TEST_CASE("products merge powers and rates") {
  auto f = ExpPoly::term(1.0, 1, cplx(-0.1, 0.0));   // t e^{-0.1 t}
  auto g = ExpPoly::term(2.0, 1, cplx(0.35, 0.0));   // 2 t e^{0.35 t}
  auto prod = f * g;
  REQUIRE(prod.terms().size() == 1);
  CHECK(prod.terms()[0].tpow == 2);
  CHECK(std::abs(prod.terms()[0].rate - cplx(0.25, 0.0)) < 1e-14);
  CHECK(std::abs(prod.terms()[0].amp - cplx(2.0, 0.0)) < 1e-14);
}

TEST_CASE("nearby rates merge in canonical form") {
  // the two rates differ by far less than rate_tol and must fuse
  auto a = ExpPoly::term(1.0, 0, cplx(0.5, 0.0));
  auto b = ExpPoly::term(1.0, 0, cplx(0.5 + 1e-15, 0.0));
  auto sum = a + b;
  REQUIRE(sum.terms().size() == 1);
  CHECK(std::abs(sum.terms()[0].amp - cplx(2.0, 0.0)) < 1e-13);
}

TEST_CASE("derivative of monomial terms") {
  cplx a(-0.3, 1.1);
  auto f = ExpPoly::term(1.0, 2, a);  // t^2 e^{a t}
  auto df = f.derivative();
  auto expect = ExpPoly::term(2.0, 1, a) + ExpPoly::term(a, 2, a);
  CHECK(ExpPoly::deviation(df, expect) < 1e-14);
}

TEST_CASE("derivative matches finite differences on random sums") {
  auto rng = qt::make_rng(29);
  for (int rep = 0; rep < 10; ++rep) {
    ExpPoly f = ExpPoly::zero();
    int nterms = qt::uniform_int(rng, 1, 4);
    for (int i = 0; i < nterms; ++i) {
      f += ExpPoly::term(qt::random_cplx(rng), qt::uniform_int(rng, 0, 3),
                         qt::random_cplx(rng, 0.6));
    }
    auto df = f.derivative();
    double t0 = qt::uniform(rng, -1.0, 1.0);
    cplx fd = qt::deriv1([&](double t) { return f.eval(t); }, t0, 1e-3);
    CHECK(std::abs(df.eval(t0) - fd) < 1e-9 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("product rule holds exactly") {
  auto rng = qt::make_rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    auto f = ExpPoly::term(qt::random_cplx(rng), qt::uniform_int(rng, 0, 2),
                           qt::random_cplx(rng, 0.5)) +
             ExpPoly::term(qt::random_cplx(rng), qt::uniform_int(rng, 0, 2),
                           qt::random_cplx(rng, 0.5));
    auto g = ExpPoly::term(qt::random_cplx(rng), qt::uniform_int(rng, 0, 2),
                           qt::random_cplx(rng, 0.5));
    auto lhs = (f * g).derivative();
    auto rhs = f.derivative() * g + f * g.derivative();
    CHECK(ExpPoly::deviation(lhs, rhs) <
          1e-12 * std::max(1.0, std::max(lhs.max_amp(), rhs.max_amp())));
  }
}

TEST_CASE("conjugation commutes with evaluation at real times") {
  auto rng = qt::make_rng(37);
  auto f = ExpPoly::term(cplx(0.4, -1.2), 1, cplx(-0.2, 0.9)) +
           ExpPoly::term(cplx(-0.1, 0.3), 0, cplx(0.1, -0.4));
  for (int i = 0; i < 5; ++i) {
    double t = qt::uniform(rng, -1.5, 1.5);
    CHECK(std::abs(f.conj().eval(t) - std::conj(f.eval(t))) < 1e-14);
  }
}

TEST_CASE("zero detection is relative to the supplied scale") {
  auto tiny = ExpPoly::term(cplx(1e-20, 0.0), 1, cplx(0.3, 0.0));
  CHECK(tiny.is_zero(1e-12, 1.0));
  CHECK_FALSE(tiny.is_zero(1e-12, 1e-10));
  CHECK(ExpPoly::zero().is_zero(1e-12, 1.0));
}

TEST_CASE("pruning drops terms below the reference scale") {
  auto f = ExpPoly::term(1.0, 0, cplx(0.0, 0.0)) +
           ExpPoly::term(cplx(1e-18, 0.0), 2, cplx(0.7, 0.0));
  auto pruned = f.pruned_against(1.0);
  REQUIRE(pruned.terms().size() == 1);
  CHECK(pruned.terms()[0].tpow == 0);
}

TEST_CASE("oscillatory sums evaluate stably over a period") {
  double w = 2 * kPi;
  auto f = ExpPoly::exp_cos(-0.2, w);
  CHECK(std::abs(f.eval(1.0) - std::exp(-0.2)) < 1e-13);
  CHECK(std::abs(f.eval(0.25)) < 1e-13);  // cos(pi/2) = 0
}
