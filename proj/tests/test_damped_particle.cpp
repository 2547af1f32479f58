#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "qdho/damped_particle.hpp"
#include "qdho/errors.hpp"

using namespace qdho;

namespace {

PhysParams particle_params() {
  PhysParams p;
  p.omega = 0.0;
  return p;  // m = 1, hbar = 1, gamma = 0.2
}

}  // namespace

TEST_CASE("damped-particle generators have the stated basic forms") {
  auto a = build_dp(particle_params(), 3);
  const PhysParams& p = a.params;

  // X reduces to multiplication by x at t = 0.
  const WeylOp shift = a.X - WeylOp::x();
  for (const auto& mono : shift.monomials())
    REQUIRE(std::abs(mono.coeff.eval(0.0)) < 1e-15);

  REQUIRE(WeylOp::deviation(a.P[0], cplx(0.0, -p.hbar) * WeylOp::dx()) <
          1e-15);
  REQUIRE(WeylOp::deviation(a.Y[0], cplx(0.0, 1.0) * WeylOp::identity()) <
          1e-15);
}

TEST_CASE("hand-checked damped-particle brackets") {
  auto a = build_dp(particle_params(), 4);
  const PhysParams& p = a.params;
  const cplx ih(0.0, p.hbar);

  REQUIRE(WeylOp::deviation(commutator(a.X, a.P[0]), cplx(p.hbar) * a.Y[0]) <
          1e-15);
  REQUIRE(WeylOp::deviation(commutator(a.H_G, a.H_DP),
                            -ih * cplx(p.gamma) * a.H_G) < 1e-14);
  for (int m = 0; m <= 4; ++m)
    for (int n = 0; n <= 4; ++n)
      REQUIRE(commutator(a.P[size_t(m)], a.P[size_t(n)]).max_amp() < 1e-15);
}

TEST_CASE("full bracket table closes at N = 6") {
  auto a = build_dp(particle_params(), 6);
  Report rep = verify_dp_algebra(a);
  INFO(rep.summary());
  for (const auto& e : rep.entries) {
    INFO(e.name + " dev=" + std::to_string(e.deviation));
    CHECK(e.pass);
  }
  REQUIRE(rep.pass());
  REQUIRE(rep.entries.size() == 53);
}

TEST_CASE("smaller truncations close too") {
  Report rep = verify_dp_algebra(build_dp(particle_params(), 2));
  REQUIRE(rep.pass());
}

TEST_CASE("parameter validation for the particle algebra") {
  PhysParams with_omega;  // omega = 1 by default
  REQUIRE_THROWS_AS(build_dp(with_omega, 3), ConfigError);

  PhysParams no_damping = particle_params();
  no_damping.gamma = 0.0;
  REQUIRE_THROWS_AS(build_dp(no_damping, 3), ConfigError);

  REQUIRE_THROWS_AS(build_dp(particle_params(), 0), ConfigError);
}

TEST_CASE("opposite-exponent position variant fails the table") {
  auto p = particle_params();
  auto a = build_dp(p, 2);
  const WeylOp xvar = dp_x_display_variant(p);

  // The bracket lands on a growing exponential instead of P_1.
  const WeylOp got = commutator(a.H_DP, xvar);
  const WeylOp expected_growth =
      cplx(p.hbar * p.hbar / p.m) *
      (ExpPoly::exponential(p.gamma) * WeylOp::dx());
  REQUIRE(WeylOp::deviation(got, expected_growth) < 1e-14);
  REQUIRE(WeylOp::deviation(got, cplx(0.0, -p.hbar / p.m) * a.P[1]) > 0.1);
}

TEST_CASE("oscillator pair continues onto the particle pair") {
  auto p = particle_params();
  auto a = build_dp(p, 1);
  auto [x_limit, p_limit] = ck_limit_pair(p);
  REQUIRE(WeylOp::deviation(a.X, x_limit) < 1e-15);
  REQUIRE(WeylOp::deviation(a.P[0], p_limit) < 1e-15);
}
