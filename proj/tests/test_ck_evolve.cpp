#include <catch2/catch_amalgamated.hpp>

#include "qdho/ck_evolve.hpp"
#include "qdho/ck_operators.hpp"
#include "qdho/classical.hpp"
#include "qdho/errors.hpp"
#include "qdho/qat.hpp"

using namespace qdho;

namespace {

PhysParams default_params() { return PhysParams{}; }

GridState damped_packet(const ClassicalBasis& b, const Grid& grid,
                        double sigma0, double kappa0, double p0) {
  FreeGaussian g;
  g.params = b.params;
  g.sigma0 = sigma0;
  g.kappa0 = kappa0;
  g.p0 = p0;
  return sample_on_grid(grid, 0.0, [&](double x, double) {
    return ck_gaussian(b, g, x, 0.0);
  });
}

}  // namespace

TEST_CASE("evolver validates grid and step") {
  auto p = default_params();
  REQUIRE_THROWS_AS(CkEvolver(p, Grid{-10.0, 10.0, 1000}), ConfigError);
  EvolveOptions bad;
  bad.dt = 0.0;
  REQUIRE_THROWS_AS(CkEvolver(p, Grid{-10.0, 10.0, 1024}, bad), ConfigError);
}

TEST_CASE("evolution tracks the exact damped solution") {
  auto p = default_params();
  auto basis = build_basis(p);
  Grid grid{-10.0, 10.0, 1024};
  EvolveOptions opt;
  opt.dt = 1e-3;
  CkEvolver ev(p, grid, opt);

  FreeGaussian g;
  g.params = p;
  g.sigma0 = 0.8;
  g.kappa0 = 1.0;
  g.p0 = 0.3;
  GridState s = damped_packet(basis, grid, 0.8, 1.0, 0.3);
  ev.evolve(s, 1.0);

  GridState exact = sample_on_grid(grid, 1.0, [&](double x, double) {
    return ck_gaussian(basis, g, x, 1.0);
  });
  CHECK(l2_distance(s, exact) < 2e-4);  // measured 4.5e-05
}

TEST_CASE("norm, invariants, and classical moments behave along a run") {
  auto p = default_params();
  auto basis = build_basis(p);
  auto cat = build_catalog(p);
  Grid grid{-10.0, 10.0, 1024};
  EvolveOptions opt;
  opt.dt = 1e-3;
  CkEvolver ev(p, grid, opt);

  GridState s = damped_packet(basis, grid, 0.8, 1.0, 0.3);
  std::vector<std::pair<std::string, WeylOp>> ops = {
      {"x", WeylOp::x()},
      {"p", cplx(0.0, -p.hbar) * WeylOp::dx()},
      {"X", cat.X},
      {"P", cat.P},
      {"H", dho_hamiltonian(p)}};
  ProbeSeries ps = evolve_probed(ev, s, 1.0, ops, 50);

  // Cayley stepping keeps the norm to roundoff
  CHECK(ps.norm_drift_per_step(50) < 1e-12);  // measured 1.8e-17

  // the invariant pair stays put ...
  CHECK(ps.relative_drift("X") < 1e-4);  // measured 1.7e-05
  CHECK(ps.relative_drift("P") < 3e-4);  // measured 8.1e-05
  // ... while the energy visibly changes
  CHECK(ps.relative_drift("H") > 0.05);  // measured 0.105

  // Ehrenfest: position and canonical momentum follow the classical orbit
  Trajectory tr = classical_trajectory(basis, 1.0, 0.3 / p.m, ps.times);
  double wx = 0.0, wp = 0.0;
  for (size_t i = 0; i < ps.times.size(); ++i) {
    wx = std::max(wx,
                  std::abs(ps.expectations.at("x")[i] - cplx(tr.positions[i])));
    wp = std::max(wp,
                  std::abs(ps.expectations.at("p")[i] - cplx(tr.momenta[i])));
  }
  CHECK(wx < 1e-4);  // measured 2.8e-05
  CHECK(wp < 1e-4);  // measured 3.7e-06
}

TEST_CASE("halving dt quarters the time error") {
  auto p = default_params();
  auto basis = build_basis(p);
  Grid grid{-10.0, 10.0, 512};

  auto run = [&](double dt) {
    EvolveOptions opt;
    opt.dt = dt;
    CkEvolver ev(p, grid, opt);
    GridState s = damped_packet(basis, grid, 0.8, 1.0, 0.3);
    ev.evolve(s, 0.24);
    return s;
  };
  GridState ref = run(2.5e-4);
  double e1 = l2_distance(run(4e-3), ref);
  double e2 = l2_distance(run(2e-3), ref);
  CHECK(e1 / e2 > 3.5);  // measured 4.05
  CHECK(e1 / e2 < 4.5);
}

TEST_CASE("undamped limit reproduces the coherent oscillation") {
  PhysParams q;
  q.gamma = 0.0;
  Grid grid{-10.0, 10.0, 1024};
  EvolveOptions opt;
  opt.dt = 1e-3;
  CkEvolver ev(q, grid, opt);

  FreeGaussian coh;  // ground-state width displaced to x = 1
  coh.params = q;
  coh.sigma0 = std::sqrt(q.hbar / (2.0 * q.m * q.omega));
  coh.kappa0 = 1.0;
  coh.p0 = 0.0;
  GridState s = sample_on_grid(grid, 0.0, [&](double x, double) {
    return coh.eval(x, 0.0);
  });
  GridState s0 = s;

  std::vector<std::pair<std::string, WeylOp>> ops = {{"x", WeylOp::x()}};
  ProbeSeries ps = evolve_probed(ev, s, 2.0 * M_PI, ops, 500);
  double worst = 0.0;
  for (size_t i = 0; i < ps.times.size(); ++i)
    worst = std::max(worst, std::abs(ps.expectations.at("x")[i] -
                                     cplx(std::cos(ps.times[i]))));
  CHECK(worst < 1.5e-3);  // measured 3.5e-04

  // after one period the state returns up to the ground-energy phase e^{-i pi}
  cplx overlap = inner_product(s0, s);
  CHECK(std::abs(overlap) > 0.9999);
  CHECK(overlap.real() < -0.999);
}

TEST_CASE("grid-edge contact raises an error") {
  auto p = default_params();
  auto basis = build_basis(p);
  Grid grid{-10.0, 10.0, 512};
  CkEvolver ev(p, grid);

  // initial contact: packet parked close to the edge
  GridState bad = damped_packet(basis, grid, 0.5, 8.5, 0.0);
  REQUIRE_THROWS_AS(ev.evolve(bad, 0.1), BoundaryLeak);

  // running contact: a fast free packet crossing the box
  PhysParams freep;
  freep.gamma = 0.0;
  freep.omega = 0.0;
  CkEvolver evf(freep, grid);
  FreeGaussian g;
  g.params = freep;
  g.sigma0 = 0.5;
  g.kappa0 = 0.0;
  g.p0 = 6.0;
  GridState s = sample_on_grid(grid, 0.0, [&](double x, double) {
    return g.eval(x, 0.0);
  });
  REQUIRE_THROWS_AS(evf.evolve(s, 2.5), BoundaryLeak);
}
