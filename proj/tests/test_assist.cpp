#include "toolbench/assist.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace toolbench;

namespace {

VirtualFixture floor_fixture(double damping = 50.0) {
  return fixture_from_workpiece(Plane{}, 0.0, 5000.0, damping);
}

RigidPoint master_at(const Vec3& pos, const Vec3& vel = Vec3::Zero()) {
  RigidPoint m;
  m.pos = pos;
  m.vel = vel;
  m.mass = 0.5;
  return m;
}

}  // namespace

TEST(Fixture, AllowedSideIsForceFree) {
  const auto vf = floor_fixture();
  EXPECT_EQ(fixture_wrench(vf, master_at(Vec3(0, 0, 0.01), Vec3(0, 0, -1))).f, Vec3::Zero());
  EXPECT_EQ(fixture_wrench(vf, master_at(Vec3(0, 0, 0.0), Vec3(0, 0, -1))).f, Vec3::Zero());
  EXPECT_EQ(fixture_potential(vf, Vec3(0, 0, 0.01)), 0.0);
}

TEST(Fixture, SpringExample) {
  const auto f = fixture_wrench(floor_fixture(), master_at(Vec3(0.03, 0, -0.002)));
  EXPECT_NEAR(f.f.norm(), 10.0, 1e-9);
  EXPECT_GT(f.f.z(), 0.0);
}

TEST(Fixture, DampsOnlyNormalVelocityWhilePenetrating) {
  const auto f = fixture_wrench(floor_fixture(), master_at(Vec3(0, 0, -0.002), Vec3(0.3, 0, -0.1)));
  EXPECT_NEAR(f.f.z(), 10.0 + 50.0 * 0.1, 1e-9);
  EXPECT_EQ(f.f.x(), 0.0);
}

TEST(Fixture, OffsetShiftsTheBoundary) {
  const auto vf = fixture_from_workpiece(Plane{}, 0.001, 5000.0, 0.0);
  EXPECT_NEAR(fixture_penetration(vf, Vec3::Zero()), 0.001, 1e-15);
  const auto bore = fixture_from_workpiece(InnerCylinder{Vec3::Zero(), Vec3::UnitZ(), 0.15}, 0.0, 5000.0, 0.0);
  // Outside the bore radius is material: forbidden, pushed back toward the axis.
  Vec3 dir;
  EXPECT_NEAR(fixture_penetration(bore, Vec3(0.152, 0, 0), &dir), 0.002, 1e-12);
  EXPECT_NEAR((dir - Vec3(-1, 0, 0)).norm(), 0.0, 1e-12);
}

TEST(Fixture, SpringIsGradientOfPotential) {
  const auto vf = floor_fixture(0.0);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.01, 0.005);
  for (int i = 0; i < 200; ++i) {
    const Vec3 p(u(rng), u(rng), u(rng));
    const double h = 1e-7;
    Vec3 grad;
    for (int k = 0; k < 3; ++k) {
      Vec3 a = p, b = p;
      a[k] += h;
      b[k] -= h;
      grad[k] = (fixture_potential(vf, a) - fixture_potential(vf, b)) / (2 * h);
    }
    EXPECT_NEAR((fixture_wrench(vf, master_at(p)).f + grad).norm(), 0.0, 1e-3);
  }
}

// Work done by the fixture on a master that is driven around a closed loop
// crossing the boundary: never positive (it can only give back what it stored).
TEST(Fixture, ClosedLoopWorkIsNonPositive) {
  for (double damping : {0.0, 50.0}) {
    const auto vf = floor_fixture(damping);
    const int n = 20000;
    const double period = 2.0;
    double work = 0.0;
    auto state = [&](double t) {
      const double w = 2.0 * std::numbers::pi / period;
      return master_at(Vec3(0.01 * std::cos(w * t), 0.0, 0.004 * std::sin(w * t)),
                       Vec3(-0.01 * w * std::sin(w * t), 0.0, 0.004 * w * std::cos(w * t)));
    };
    for (int i = 0; i < n; ++i) {
      const double t0 = period * i / n, t1 = period * (i + 1) / n;
      const auto mid = state(0.5 * (t0 + t1));
      work += fixture_wrench(vf, mid).f.dot(state(t1).pos - state(t0).pos);
    }
    EXPECT_LE(work, 1e-9) << "damping " << damping;
    if (damping > 0.0) {
      EXPECT_LT(work, 0.0);
    }
  }
}

TEST(Shared, DualSetpointEquilibrium) {
  const SharedControlParams p;
  const Wrench3 at_setpoint(p.force_setpoint * p.press_dir);
  EXPECT_EQ(shared_command(p, Vec3::Zero(), at_setpoint, Vec3::Zero()), Vec3::Zero());
}

TEST(Shared, LateralMotionPassesThroughExactly) {
  SharedControlParams p;
  p.press_dir = Vec3::UnitZ();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 500; ++i) {
    const Wrench3 meas(Vec3(u(rng), u(rng), u(rng)));
    const Vec3 integral(u(rng), u(rng), u(rng));
    const Vec3 cmd = shared_command(p, Vec3(0.01, 0, 0), meas, integral);
    const Vec3 lateral = p.selection().motion_part(cmd);
    EXPECT_EQ(lateral, Vec3(0.01, 0, 0));
  }
}

TEST(Shared, NormalComponentIgnoresTeleopVelocity) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    SharedControlParams p;
    const bool axis = trial % 2 == 0;
    p.press_dir = axis ? -Vec3::UnitZ() : Vec3(g(rng), g(rng), g(rng)).normalized();
    const Wrench3 meas(Vec3(u(rng), u(rng), u(rng)) * 20.0);
    const Vec3 integral = Vec3(u(rng), u(rng), u(rng));
    const auto s = p.selection();
    const Vec3 ref = s.force_part(shared_command(p, Vec3::Zero(), meas, integral));
    for (int k = 0; k < 5; ++k) {
      const Vec3 v(u(rng), u(rng), u(rng));
      const Vec3 got = s.force_part(shared_command(p, v, meas, integral));
      const Vec3 lateral = s.motion_part(shared_command(p, v, meas, integral));
      if (axis) {
        EXPECT_EQ(got, ref);
      } else {
        EXPECT_LE((got - ref).norm(), 1e-12);
      }
      EXPECT_LE((lateral - s.motion_part(v)).norm(), 1e-12);
    }
  }
}

TEST(Validation, AssistParameters) {
  EXPECT_NO_THROW(validate(floor_fixture()));
  VirtualFixture bad = floor_fixture();
  bad.stiffness = 0.0;
  EXPECT_THROW(validate(bad), InvalidInput);
  SharedControlParams p;
  p.press_dir = Vec3(0, 0, -2);
  EXPECT_THROW(validate(p), InvalidInput);
}
