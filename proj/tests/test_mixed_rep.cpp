#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "qdho/mixed_rep.hpp"
#include "support/test_util.hpp"

using namespace qdho;

TEST_CASE("eigenfunction matches an independently computed value") {
  PhysParams p;
  cplx v = mixed_eigenfunction(p, 3, 0.25, 0.6, -0.4);
  CHECK(std::abs(v.real() - 0.9339828659146334682332) < 1e-15);
  CHECK(std::abs(v.imag() - 0.3573177943762216273104) < 1e-15);
  CHECK(std::abs(ladder_energy(p, 3, 0.25) - 3.034962311319859864203) < 1e-15);
  CHECK(std::abs(std::abs(v) - 1.0) < 1e-14);  // pure phase
}

TEST_CASE("origin evaluation is rejected") {
  PhysParams p;
  CHECK_THROWS_AS(mixed_eigenfunction(p, 2, 0.5, 0.0, 0.0), OriginSingular);
}

TEST_CASE("structural report passes") {
  PhysParams p;
  Report rep = verify_mixed_representation(p);
  for (const auto& e : rep.entries) {
    INFO(e.name << " dev=" << e.deviation << " note=" << e.note);
    CHECK(e.pass);
  }
}

TEST_CASE("loop winding is linear in the trial energy and hits integers") {
  PhysParams p;
  const double hw = p.hbar * p.Omega();
  // on-rung energies wind an integer number of times
  for (int n : {-4, 0, 2, 5}) {
    for (double lam : {0.0, 0.5}) {
      double w = mixed_loop_winding(p, ladder_energy(p, n, lam), lam);
      CHECK(std::abs(w - n) < 1e-12);
    }
  }
  // off-rung trial energies land exactly on the analytic winding
  double e = 1.37 * hw + 0.25 * p.hbar * p.gamma;
  CHECK(std::abs(mixed_loop_winding(p, e, 0.25) - 1.37) < 1e-12);
  // invariance under loop discretization and radius
  CHECK(std::abs(mixed_loop_winding(p, e, 0.25, 0.35, 4096) - 1.37) < 1e-12);
  CHECK_THROWS_AS(mixed_loop_winding(p, e, 0.25, -1.0), ConfigError);
}

TEST_CASE("spectrum scan fills the window with ladder lines") {
  PhysParams p;
  SpectrumScan scan = scan_spectrum(p);
  for (const auto& e : scan.report.entries) {
    INFO(e.name << " dev=" << e.deviation << " note=" << e.note);
    CHECK(e.pass);
  }
  // default window and labels: 11 lines at lambda=0, 10 at 0.25 and 0.5
  CHECK(scan.lines.size() == 31);

  int n_zero = 0;
  for (const auto& line : scan.lines) {
    CHECK(std::abs(line.energy - ladder_energy(p, line.n, line.lambda)) <
          1e-9);
    CHECK(line.residual < 1e-5);
    CHECK(std::abs(line.energy) <= 5.0 * p.hbar * p.Omega() + 1e-9);
    if (line.lambda == 0.0) ++n_zero;
  }
  CHECK(n_zero == 11);

  // gamma enters the accepted energies: lambda=0.5 lines are offset rungs
  bool found_offset = false;
  for (const auto& line : scan.lines)
    if (line.lambda == 0.5 && line.n == 1) {
      CHECK(std::abs(line.energy - (p.hbar * p.Omega() +
                                    0.5 * p.hbar * p.gamma)) < 1e-9);
      found_offset = true;
    }
  CHECK(found_offset);
}

TEST_CASE("drift generator reproduces the eigenvalue pointwise") {
  PhysParams p;
  auto rng = qdho::test::make_rng(77);
  std::function<cplx(double, double)> phi = [&](double x, double py) {
    return mixed_eigenfunction(p, -2, 0.5, x, py);
  };
  double E = ladder_energy(p, -2, 0.5);
  for (int i = 0; i < 20; ++i) {
    double a = qdho::test::uniform(rng, 0.0, 2.0 * M_PI);
    double r = qdho::test::uniform(rng, 0.5, 2.0);
    double py = r * std::cos(a), x = r * std::sin(a) / (p.m * p.Omega());
    cplx lhs = cplx(0.0, p.hbar) * mixed_drift(p, phi, x, py);
    cplx rhs = E * phi(x, py);
    CHECK(std::abs(lhs - rhs) < 1e-7);
  }
}

TEST_CASE("overdamped parameters are rejected up front") {
  PhysParams p;
  p.gamma = 3.0;
  CHECK_THROWS_AS(scan_spectrum(p), OverdampedUnsupported);
  CHECK_THROWS_AS(verify_mixed_representation(p), OverdampedUnsupported);
}
