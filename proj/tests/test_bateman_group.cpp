#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qdho/bateman_group.hpp"
#include "support/test_util.hpp"

using namespace qdho;

namespace {

GroupElement make(double t, double x, double y, double px, double py,
                  double theta) {
  GroupElement g;
  g.t = t;
  g.x = x;
  g.y = y;
  g.px = px;
  g.py = py;
  g.theta = theta;
  return g;
}

}  // namespace

TEST_CASE("composition matches an independently computed product") {
  PhysParams p;
  GroupElement a = make(0.7, -0.4, 0.3, 0.5, -0.2, 0.1);
  GroupElement b = make(-0.3, 0.6, -0.1, 0.2, 0.8, -0.5);
  GroupElement ab = compose(p, a, b);

  CHECK(std::abs(ab.t - 0.4) < 1e-14);
  CHECK(std::abs(ab.x - 0.2669581661351702047961) < 1e-14);
  CHECK(std::abs(ab.y - 0.0348448997992460702047) < 1e-14);
  CHECK(std::abs(ab.px - 0.7489544952057216842953) < 1e-14);
  CHECK(std::abs(ab.py - 0.4824143007602657374528) < 1e-14);
  CHECK(std::abs(ab.theta - (-0.6214967772840361544134)) < 1e-14);
}

TEST_CASE("closed-form inverse matches the frozen values") {
  PhysParams p;
  GroupElement a = make(0.7, -0.4, 0.3, 0.5, -0.2, 0.1);
  GroupElement ia = inverse(p, a);

  CHECK(std::abs(ia.t - (-0.7)) < 1e-14);
  CHECK(std::abs(ia.x - 0.1907850140020946301026) < 1e-14);
  CHECK(std::abs(ia.y - 0.0860148321128271075569) < 1e-14);
  CHECK(std::abs(ia.px - (-0.5361667761002831834884)) < 1e-14);
  CHECK(std::abs(ia.py - 0.4383826973560569718867) < 1e-14);
  CHECK(std::abs(ia.theta - 0.04) < 1e-14);

  CHECK(element_distance(compose(p, ia, a), group_identity()) < 1e-14);
  CHECK(element_distance(compose(p, a, ia), group_identity()) < 1e-14);
}

TEST_CASE("pure translations recover the familiar phase pattern") {
  PhysParams p;
  // zero-time elements compose additively in the vector part
  GroupElement a = make(0, 0.3, -0.7, 1.1, 0.4, 0);
  GroupElement b = make(0, -0.6, 0.2, 0.5, -0.9, 0);
  GroupElement ab = compose(p, a, b);
  CHECK(std::abs(ab.x - (a.x + b.x)) < 1e-15);
  CHECK(std::abs(ab.y - (a.y + b.y)) < 1e-15);
  CHECK(std::abs(ab.px - (a.px + b.px)) < 1e-15);
  CHECK(std::abs(ab.py - (a.py + b.py)) < 1e-15);
  // phase cocycle at zero time: a.y b.py - b.x a.px
  CHECK(std::abs(ab.theta - (a.y * b.py - b.x * a.px) / p.hbar) < 1e-15);

  // commuting pairs pick up no phase
  GroupElement gx = make(0, 0.8, 0, 0, 0, 0);
  GroupElement gy = make(0, 0, -0.5, 0, 0, 0);
  CHECK(std::abs(compose(p, gx, gy).theta) < 1e-15);
  CHECK(std::abs(compose(p, gy, gx).theta) < 1e-15);

  // conjugate pairs pick up opposite phases in opposite orders
  GroupElement gpy = make(0, 0, 0, 0, 1.3, 0);
  double th1 = compose(p, gy, gpy).theta;
  double th2 = compose(p, gpy, gy).theta;
  CHECK(std::abs(th1 - (-0.5) * 1.3) < 1e-15);
  CHECK(std::abs(th2) < 1e-15);  // cocycle pairs y-left with py-right only
}

TEST_CASE("time translations form a one-parameter subgroup") {
  PhysParams p;
  GroupElement t1 = nudge(GroupAxis::T, 0.6);
  GroupElement t2 = nudge(GroupAxis::T, -1.1);
  GroupElement both = compose(p, t1, t2);
  CHECK(element_distance(both, nudge(GroupAxis::T, -0.5)) < 1e-14);
  CHECK(std::abs(both.theta) < 1e-15);

  // and transport vector elements by the classical flow
  GroupElement g = make(0, 0.7, -0.4, 0.3, 0.5, 0);
  GroupElement moved = compose(p, g, nudge(GroupAxis::T, 0.9));
  Eigen::Vector4d expected = bateman_flow_matrix(p, 0.9) * g.vec();
  CHECK((moved.vec() - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("group axioms hold on random triples") {
  PhysParams p;
  Report rep = verify_group_axioms(p, 1000);
  CHECK(rep.entries.size() == 4);
  for (const auto& e : rep.entries) {
    INFO(e.name << " dev=" << e.deviation);
    CHECK(e.pass);
  }
}

TEST_CASE("invariant fields match the law and close on the dual table") {
  PhysParams p;
  Report rep = verify_field_closure(p);
  for (const auto& e : rep.entries) {
    INFO(e.name << " dev=" << e.deviation);
    CHECK(e.pass);
  }
}

TEST_CASE("field brackets reproduce canonical pairs explicitly") {
  PhysParams p;
  GroupElement g = make(0.4, -0.8, 0.25, 1.3, -0.45, 0.6);

  auto lx = [&](const GroupElement& h) { return left_field(p, GroupAxis::X, h); };
  auto lpx = [&](const GroupElement& h) { return left_field(p, GroupAxis::Px, h); };
  auto ly = [&](const GroupElement& h) { return left_field(p, GroupAxis::Y, h); };
  auto lpy = [&](const GroupElement& h) { return left_field(p, GroupAxis::Py, h); };

  FieldVec central = FieldVec::Zero();
  central[5] = 1.0 / p.hbar;

  CHECK((detail::field_bracket(lx, lpx, g) - central).cwiseAbs().maxCoeff() <
        1e-9);
  CHECK((detail::field_bracket(ly, lpy, g) - central).cwiseAbs().maxCoeff() <
        1e-9);
  CHECK(detail::field_bracket(lx, ly, g).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(detail::field_bracket(lpx, lpy, g).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("fields at the identity are the bare coordinate directions") {
  PhysParams p;
  GroupElement e = group_identity();
  for (GroupAxis ax : {GroupAxis::T, GroupAxis::X, GroupAxis::Y, GroupAxis::Px,
                       GroupAxis::Py}) {
    FieldVec l = left_field(p, ax, e);
    FieldVec r = right_field(p, ax, e);
    CHECK((l - r).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(l[static_cast<int>(ax)] - 1.0) < 1e-14);
  }
}
