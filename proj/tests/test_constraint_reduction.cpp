#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "qdho/constraint_reduction.hpp"
#include "qdho/errors.hpp"
#include "support/test_util.hpp"

using namespace qdho;
using Catch::Approx;

namespace {

PhysParams default_params() { return PhysParams{}; }

FreeGaussian oracle_seed(const PhysParams& p) {
  FreeGaussian g;
  g.params = p;
  g.sigma0 = 0.7;
  g.kappa0 = 0.2;
  g.p0 = 0.4;
  return g;
}

}  // namespace

TEST_CASE("constraint pair closes on a nonzero central element") {
  auto c = build_constraints(default_params());
  const WeylOp expected =
      cplx(0.0, 2.0 * c.params.hbar) * WeylOp::identity();
  REQUIRE(WeylOp::deviation(commutator(c.C1, c.C2), expected) < 1e-14);
}

TEST_CASE("distinguished operators commute with the imposed constraint") {
  auto p = default_params();
  auto c = build_constraints(p);
  REQUIRE(commutator(c.good1, c.C1).max_amp() < 1e-14);
  REQUIRE(commutator(c.good2, c.C1).max_amp() < 1e-14);

  Report rep = good_operator_check(p);
  INFO(rep.summary());
  REQUIRE(rep.pass());
}

TEST_CASE("dual Hamiltonian does not preserve the constraint") {
  auto p = default_params();
  auto c = build_constraints(p);
  auto ops = build_bateman_ops(p);
  const double W = p.Omega();

  const WeylOp hc = commutator(ops.HB, c.C1);
  REQUIRE(hc.max_amp() > 1e-3);

  // [H_B, C1] = -i hbar (gamma C1 - (w^2/m W^2) C2 + (gamma w^2/W^2) x):
  // the x-term has no counterpart in the constraint span.
  const WeylOp combo =
      cplx(0.0, -p.hbar) *
      (cplx(p.gamma) * c.C1 -
       cplx(p.omega * p.omega / (p.m * W * W)) * c.C2 +
       cplx(p.gamma * p.omega * p.omega / (W * W)) * WeylOp::x());
  REQUIRE(WeylOp::deviation(hc, combo) < 1e-13);
}

TEST_CASE("constrained initial point matches the stated relations") {
  auto p = default_params();
  const double W = p.Omega();

  Eigen::Vector4d s = constrained_initial_state(p, 1.0, 0.0);
  REQUIRE(s[1] == Approx(p.omega * p.omega / (W * W)).epsilon(1e-15));
  REQUIRE(s[3] == Approx(p.m * p.gamma / 2.0).epsilon(1e-15));

  // x0 = 0.8, p_x0 = -0.35 gives y0 = 17/22, p_y0 = -0.27.
  Eigen::Vector4d s2 = constrained_initial_state(p, 0.8, -0.35);
  REQUIRE(s2[1] == Approx(17.0 / 22.0).epsilon(1e-14));
  REQUIRE(s2[3] == Approx(-0.27).epsilon(1e-14));
}

TEST_CASE("classical flow preserves the constraint combinations") {
  auto p = default_params();

  SECTION("stated example point") {
    Report rep = classical_constraint_check(
        p, constrained_initial_state(p, 1.0, 0.0));
    INFO(rep.summary());
    REQUIRE(rep.pass());
  }
  SECTION("zero point is trivially preserved") {
    Report rep = classical_constraint_check(p, Eigen::Vector4d::Zero());
    INFO(rep.summary());
    REQUIRE(rep.pass());
  }
  SECTION("random constrained points, t in [0, 5]") {
    auto rng = test::make_rng(20260825);
    for (int k = 0; k < 8; ++k) {
      const double x0 = test::uniform(rng, -2.0, 2.0);
      const double px0 = test::uniform(rng, -2.0, 2.0);
      Report rep =
          classical_constraint_check(p, constrained_initial_state(p, x0, px0));
      INFO(rep.summary());
      REQUIRE(rep.pass());
    }
  }
  SECTION("off-surface point is detected") {
    Eigen::Vector4d s;
    s << 1.0, 0.0, 0.0, 0.0;  // y0 off the surface
    Report rep = classical_constraint_check(p, s);
    REQUIRE_FALSE(rep.pass());
  }
}

TEST_CASE("reduction map values at t = 0.7") {
  auto p = default_params();
  auto maps = build_reduction_maps(p, 1.0);

  CHECK(maps.mu(0.7) == Approx(1.759648859764450388649177).epsilon(1e-14));
  CHECK(maps.mu_prime(0.7) ==
        Approx(0.485954919532017734660443).epsilon(1e-14));
  CHECK(maps.xshift(0.7) ==
        Approx(0.7572337876849399391720497).epsilon(1e-14));
  CHECK(maps.theta(0.3, -0.2, 0.7) ==
        Approx(-0.07556673087210269834777847).epsilon(1e-13));
  CHECK(maps.theta_display(0.3, -0.2, 0.7) ==
        Approx(-0.07556673087210269834777847).epsilon(1e-13));

  CHECK(maps.tau(0.7) ==
        Approx(0.01311385951454065420093749).epsilon(1e-13));
  CHECK(maps.tau_prime(0.7) ==
        Approx(-0.007242378174151075203334232).epsilon(1e-13));
  CHECK(maps.tau_pprime(0.7) ==
        Approx(0.0232319976487084483144919).epsilon(1e-12));
  CHECK(maps.f(0.7) ==
        Approx(-0.1811689270368724575208339).epsilon(1e-12));

  // tau'/mu < 0 on this branch: the scale is purely imaginary.
  const cplx h = maps.h(0.7);
  CHECK(std::abs(h.real()) < 1e-16);
  CHECK(h.imag() == Approx(0.06906230701942966714353773).epsilon(1e-13));

  const cplx g = maps.g(0.7);
  CHECK(g.real() == Approx(0.3164216058101159453678954).epsilon(1e-13));
  CHECK(std::abs(g.imag()) < 1e-15);
}

TEST_CASE("reduction map values on the opposite branch constant") {
  auto p = default_params();
  auto maps = build_reduction_maps(p, -1.0);

  // Same |tau| data with the sign flipped, at the same positive time.
  CHECK(maps.tau(0.7) ==
        Approx(-0.01311385951454065420093749).epsilon(1e-13));
  CHECK(maps.tau_prime(0.7) ==
        Approx(0.007242378174151075203334232).epsilon(1e-13));
  CHECK(maps.tau_pprime(0.7) ==
        Approx(-0.0232319976487084483144919).epsilon(1e-12));
  CHECK(maps.f(0.7) ==
        Approx(-0.1816447427898967870956701).epsilon(1e-12));

  const cplx h = maps.h(0.7);
  CHECK(h.real() == Approx(0.06924367944310792604826646).epsilon(1e-13));
  CHECK(std::abs(h.imag()) < 1e-16);

  // Quarter power of a negative base: constant pi/4 phase.
  const cplx g = maps.g(0.7);
  CHECK(g.real() == Approx(0.2240374702151628881382842).epsilon(1e-13));
  CHECK(g.imag() == Approx(0.2240374702151628881382842).epsilon(1e-13));

  // Negative-time window of the same branch constant.
  CHECK(maps.mu(-0.7) == Approx(2.240351140235549611350823).epsilon(1e-14));
  CHECK(maps.tau(-0.7) ==
        Approx(-0.00809031876596516760007738).epsilon(1e-13));
  CHECK(maps.tau_prime(-0.7) ==
        Approx(0.003509593025606891015875693).epsilon(1e-13));
  CHECK(maps.f(-0.7) ==
        Approx(-0.08465800982424908163381547).epsilon(1e-12));
}

TEST_CASE("transformed solution values against independent evaluation") {
  auto p = default_params();
  auto basis = build_basis(p);
  auto seed = oracle_seed(p);

  auto maps_pos = build_reduction_maps(p, 1.0);
  const cplx psi_pos = reduced_solution(maps_pos, basis, seed, 0.6, 0.55);
  CHECK(psi_pos.real() ==
        Approx(0.2956361212986251706743481).epsilon(1e-12));
  CHECK(psi_pos.imag() ==
        Approx(0.03288894456136537570215065).epsilon(1e-11));
  const cplx phi_pos = lifted_solution(maps_pos, basis, seed, 0.3, -0.2, 0.7);
  CHECK(phi_pos.real() ==
        Approx(0.2321717738493396747162787).epsilon(1e-12));
  CHECK(phi_pos.imag() ==
        Approx(-0.01787591441706560581991656).epsilon(1e-11));

  auto maps_neg = build_reduction_maps(p, -1.0);
  const cplx psi_neg = reduced_solution(maps_neg, basis, seed, 0.6, 0.55);
  CHECK(psi_neg.real() ==
        Approx(0.1854598151795038746758991).epsilon(1e-12));
  CHECK(psi_neg.imag() ==
        Approx(0.2455524720672207059475193).epsilon(1e-12));
  const cplx phi_neg = lifted_solution(maps_neg, basis, seed, 0.3, -0.2, 0.7);
  CHECK(phi_neg.real() ==
        Approx(0.175875149990577339969688).epsilon(1e-12));
  CHECK(phi_neg.imag() ==
        Approx(0.1559720576519562672090938).epsilon(1e-12));

  const cplx psi_tneg = reduced_solution(maps_neg, basis, seed, 0.4, -0.7);
  CHECK(psi_tneg.real() ==
        Approx(0.1273917476004162010762729).epsilon(1e-12));
  CHECK(psi_tneg.imag() ==
        Approx(0.1337098289227535939895197).epsilon(1e-12));
}

TEST_CASE("guard band and branch-constant validation") {
  auto p = default_params();
  REQUIRE_THROWS_AS(build_reduction_maps(p, 0.0), ConfigError);

  auto maps = build_reduction_maps(p, 1.0);
  const double W = p.Omega();
  // mu vanishes at t = arctan(gamma / 2 W) / W.
  const double t_mu = std::atan(p.gamma / (2.0 * W)) / W;
  REQUIRE_THROWS_AS(maps.tau(t_mu), BranchSingularity);
  REQUIRE_THROWS_AS(maps.mu(M_PI / W), BranchSingularity);
  REQUIRE_THROWS_AS(maps.theta(0.3, 0.1, M_PI / W + 2e-4), BranchSingularity);
  REQUIRE_NOTHROW(maps.tau(0.7));

  PhysParams over;
  over.gamma = 3.0;  // gamma > 2 w: no oscillatory window
  REQUIRE_THROWS_AS(build_reduction_maps(over, 1.0), OverdampedUnsupported);
}

TEST_CASE("wavefunction reduction inverts the construction") {
  auto p = default_params();
  auto basis = build_basis(p);
  auto seed = oracle_seed(p);
  auto maps = build_reduction_maps(p, 1.0);
  const double t = 0.7;

  auto phi = [&](double x, double y) {
    return lifted_solution(maps, basis, seed, x, y, t);
  };
  auto psi = reduce_wavefunction(phi, maps, t);
  for (double xp : {-0.5, 0.2, 0.9}) {
    const cplx expected = reduced_solution(maps, basis, seed, xp, t);
    REQUIRE(std::abs(psi(xp) - expected) < 1e-12);
    REQUIRE(reduction_y_spread(phi, maps, t, xp) < 1e-12);
  }
}

TEST_CASE("reduction rejects functions off the constrained subspace") {
  auto p = default_params();
  auto maps = build_reduction_maps(p, 1.0);
  auto generic = [](double x, double y) {
    return cplx(std::exp(-x * x - y * y), 0.0);
  };
  REQUIRE_THROWS_AS(reduce_wavefunction(generic, maps, 0.7),
                    OffConstraintSurface);
}

TEST_CASE("reduced section of a constructed state satisfies the reduced "
          "equation") {
  auto p = default_params();
  auto basis = build_basis(p);
  auto seed = oracle_seed(p);
  auto maps = build_reduction_maps(p, 1.0);

  // Reduce the lifted state at each time needed by the stencil, then form
  // the finite-difference residual of the reduced equation from sections
  // alone: the reduction commutes with time evolution.
  const double W = p.Omega();
  const double dt_fd = 8e-4, dx_fd = 1e-3;
  auto section_value = [&](double xp, double t) {
    auto phi = [&](double x, double y) {
      return lifted_solution(maps, basis, seed, x, y, t);
    };
    return reduce_wavefunction(phi, maps, t)(xp);
  };
  double worst = 0.0;
  for (double t : {0.5, 0.9})
    for (double xp : {-0.6, 0.3}) {
      const cplx psi = section_value(xp, t);
      const cplx psi_t = test::deriv1(
          [&](double tt) { return section_value(xp, tt); }, t, dt_fd);
      const cplx psi_x = test::deriv1(
          [&](double xx) { return section_value(xx, t); }, xp, dx_fd);
      const cplx psi_xx = test::deriv2(
          [&](double xx) { return section_value(xx, t); }, xp, dx_fd);
      const double mu = maps.mu(t);
      const cplx ih(0.0, p.hbar);
      const cplx lhs = ih * psi_t;
      const cplx rhs =
          -(W * W * p.hbar * p.hbar / (2.0 * p.m * p.omega * p.omega)) *
              std::exp(-p.gamma * t) * mu * psi_xx -
          ih * maps.drift_coeff(t) * xp * psi_x -
          ih * W * (std::cos(W * t) / std::sin(W * t)) * psi;
      worst = std::max(worst, std::abs(lhs - rhs) /
                                  (std::abs(lhs) + std::abs(rhs)));
    }
  REQUIRE(worst < 1e-6);
}

TEST_CASE("full reduction verification passes on both branches") {
  auto p = default_params();
  auto seed = oracle_seed(p);

  SECTION("A = +1, window t in [0.3, 1.2]") {
    Report rep = verify_reduction_to_ck(build_reduction_maps(p, 1.0), seed);
    INFO(rep.summary());
    for (const auto& e : rep.entries) {
      INFO(e.name + " dev=" + std::to_string(e.deviation));
      CHECK(e.pass);
    }
    REQUIRE(rep.pass());
  }
  SECTION("A = -1, mirrored window t in [-1.2, -0.3]") {
    Report rep = verify_reduction_to_ck(build_reduction_maps(p, -1.0), seed);
    INFO(rep.summary());
    REQUIRE(rep.pass());
  }
}

TEST_CASE("branch map rows follow the time window") {
  auto p = default_params();
  auto maps = build_reduction_maps(p, 1.0);
  auto rows = branch_map(maps, 0.3, 1.2, 19);
  REQUIRE(rows.size() == 19);
  REQUIRE(rows.front().t == Approx(0.3));
  REQUIRE(rows.back().t == Approx(1.2));
  for (const auto& r : rows) {
    REQUIRE(r.tau > 0.0);        // sign(tau) = sign(A)
    REQUIRE(r.tau_prime < 0.0);  // monotone on the window
  }
}
