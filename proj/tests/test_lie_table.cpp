#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include "qdho/ck_operators.hpp"
#include "qdho/errors.hpp"
#include "qdho/lie_table.hpp"
#include "qdho/phys_params.hpp"

using namespace qdho;

namespace {
PhysParams default_params() { return PhysParams{}; }
}  // namespace

TEST_CASE("unextended seven-generator table satisfies Jacobi") {
  REQUIRE(unextended_table(default_params()).jacobi_max_defect() < 1e-12);
}

TEST_CASE("extended family satisfies Jacobi for arbitrary k") {
  auto p = default_params();
  for (double k : {-3.25, -1.0, 0.0, 0.37, 1.0, 2.5}) {
    CAPTURE(k);
    REQUIRE(k_family_table(p, k).jacobi_max_defect() < 1e-12);
    REQUIRE(shifted_table(p, k).jacobi_max_defect() < 1e-12);
  }
}

TEST_CASE("generator shift diagonalizes the conjugate pairs") {
  auto p = default_params();
  for (double k : {1.0, -1.0, 0.6}) {
    CAPTURE(k);
    LieTable fam = k_family_table(p, k);
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(7, 7);
    int iq = fam.index("Qt"), ix = fam.index("X");
    M(iq, iq) = -1.0;
    M(iq, ix) = 1.0 - k;
    LieTable got = fam.change_basis(M, {"X", "P", "Q", "Pi", "H", "G1", "G2"});
    REQUIRE(LieTable::deviation(got, shifted_table(p, k)) < 1e-12);
  }
}

TEST_CASE("identity change of basis is a no-op") {
  auto p = default_params();
  LieTable t = k_family_table(p, 0.8);
  LieTable same =
      t.change_basis(Eigen::MatrixXd::Identity(7, 7), t.names());
  REQUIRE(LieTable::deviation(t, same) == 0.0);
}

TEST_CASE("dropping a generator to a scalar folds it into the charge") {
  // Heisenberg toy: [A,B] = C, C central.  Representing C by 3.5 must turn
  // the bracket into a pure central charge.
  LieTable t({"A", "B", "C"});
  t.set_bracket("A", "B", {{"C", 1.0}});
  LieTable r = t.drop_to_scalars({{"C", 3.5}});
  REQUIRE(r.dim() == 2);
  REQUIRE(r.central(r.index("A"), r.index("B")) == 3.5);
  REQUIRE(r.coeffs(0, 1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("central extension family has exactly one free parameter") {
  auto fam = central_extension_family(default_params());

  // second cohomology: all Jacobi-compatible charge patterns modulo
  // generator redefinitions
  REQUIRE(fam.full_nullspace_dim - fam.coboundary_rank == 2);
  // the four-slot gauge captures it exactly (normalization eats one dim)
  REQUIRE(fam.gauge_fixed_dim == 2);

  Eigen::VectorXd base_expect(4), dir_expect(4);
  base_expect << 1.0, 0.0, 1.0, -1.0;   // slots (X,P),(Qt,Pi),(Qt,P),(H,G2)
  dir_expect << 0.0, 1.0, -1.0, -1.0;
  REQUIRE((fam.base - base_expect).cwiseAbs().maxCoeff() < 1e-10);
  REQUIRE((fam.direction - dir_expect).cwiseAbs().maxCoeff() < 1e-10);

  Eigen::VectorXd at_plus(4), at_minus(4);
  at_plus << 1.0, 1.0, 0.0, -2.0;   // realized pattern
  at_minus << 1.0, -1.0, 2.0, 0.0;  // the dual-pair pattern
  REQUIRE((fam.charges(1.0) - at_plus).cwiseAbs().maxCoeff() < 1e-10);
  REQUIRE((fam.charges(-1.0) - at_minus).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("family charges solve the Jacobi constraint for any k") {
  auto p = default_params();
  auto fam = central_extension_family(p);
  for (double k : {-2.0, 0.25, 4.0}) {
    LieTable t = unextended_table(p);
    Eigen::VectorXd z = fam.charges(k);
    t.set_bracket("X", "P", {}, z[0]);
    t.set_bracket("Qt", "Pi", {{"G1", 2.0}}, z[1]);
    t.set_bracket("Qt", "P", {{"G1", -1.0}, {"G2", p.gamma}}, z[2]);
    t.set_bracket("H", "G2", {{"G1", -2.0}, {"G2", p.gamma}}, z[3]);
    CAPTURE(k);
    REQUIRE(t.jacobi_max_defect() < 1e-12);
  }
}

TEST_CASE("k = -1 reduction to the five-generator table") {
  Report rep = reduce_k_minus_one(default_params());
  INFO(rep.summary());
  REQUIRE(rep.pass());
  REQUIRE(rep.entries.size() == 3);
  REQUIRE(five_plus_one_table(default_params()).jacobi_max_defect() < 1e-12);
}

TEST_CASE("extension solver rejects bad slot requests") {
  auto p = default_params();
  LieTable t = unextended_table(p);
  std::vector<std::pair<std::string, std::string>> slots = {
      {"X", "P"}, {"Qt", "Pi"}, {"Qt", "P"}, {"H", "G2"}};
  REQUIRE_THROWS_AS(
      solve_central_extensions(t, slots, {"H", "X"}, {"Qt", "Pi"}),
      ConfigError);
  REQUIRE_THROWS_AS(
      solve_central_extensions(t, slots, {"X", "P"}, {"X", "P"}),
      InconsistentTable);
}
