#include "toolbench/controllers.hpp"
#include "toolbench/sim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace toolbench;

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v(g(rng), g(rng), g(rng));
  return v.normalized();
}

Vec3 random_vec(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vec3(u(rng), u(rng), u(rng));
}

}  // namespace

TEST(Hybrid, ZeroSelectionIsPureMotion) {
  const Vec3 vd(0.01, -0.02, 0.03);
  const Vec3 v = hybrid_command(SelectionMatrix(), vd, Wrench3(Vec3(5, 6, 7)), Vec3(1, 2, 3), HybridGains{});
  EXPECT_EQ(v, vd);
}

TEST(Hybrid, FullSelectionAtSetpointIsStill) {
  const Vec3 v = hybrid_command(SelectionMatrix::identity(), Vec3(0.5, 0.5, 0.5), Wrench3(), Vec3::Zero(), HybridGains{});
  EXPECT_EQ(v, Vec3::Zero());
}

TEST(Hybrid, NormalForceLoopExample) {
  const HybridGains g{.kfp = 1e-3, .kfi = 0.0};
  const Vec3 v = hybrid_command(SelectionMatrix::from_normal(Vec3::UnitZ()), Vec3(0.01, 0, 0),
                                Wrench3(Vec3(0, 0, 2)), Vec3::Zero(), g);
  // Component-wise: x passes V_d, z is K_fp * 2.
  EXPECT_EQ(v.x(), 0.01);
  EXPECT_EQ(v.y(), 0.0);
  EXPECT_NEAR(v.z(), 0.002, 1e-18);
}

TEST(Hybrid, DoublingAllInputsDoublesOutput) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto s = SelectionMatrix::from_normal(random_unit(rng));
    const Vec3 vd = random_vec(rng, 0.1), fe = random_vec(rng, 20.0), in = random_vec(rng, 5.0);
    const Vec3 v1 = hybrid_command(s, vd, Wrench3(fe), in, HybridGains{});
    const Vec3 v2 = hybrid_command(s, 2.0 * vd, Wrench3(2.0 * fe), 2.0 * in, HybridGains{});
    EXPECT_EQ(v2, 2.0 * v1);
  }
}

TEST(Hybrid, MotionAndForceContributionsAreOrthogonal) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const Vec3 n = random_unit(rng);
    for (const auto& s : {SelectionMatrix::from_normal(n), SelectionMatrix(Mat3::Identity() - n * n.transpose())}) {
      const Vec3 vd = random_vec(rng, 0.1), fe = random_vec(rng, 20.0);
      const HybridGains g;
      const Vec3 motion = hybrid_command(s, vd, Wrench3(), Vec3::Zero(), g);
      const Vec3 force = hybrid_command(s, Vec3::Zero(), Wrench3(fe), Vec3::Zero(), g);
      EXPECT_LE(std::abs(motion.dot(force)), 1e-12);
      EXPECT_LE((s.force_part(force) - force).norm(), 1e-12);
    }
  }
}

TEST(Selection, FromNormalIsAProjector) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 n = random_unit(rng);
    const auto s = SelectionMatrix::from_normal(n);
    EXPECT_LE((s.matrix() * n - n).norm(), 1e-12);
    Vec3 t = random_vec(rng, 1.0);
    t -= t.dot(n) * n;
    EXPECT_LE((s.matrix() * t).norm(), 1e-12);
    EXPECT_TRUE(SelectionMatrix::is_projector(s.matrix()));
  }
}

TEST(Selection, RejectsNonProjectors) {
  Mat3 m = Mat3::Zero();
  m(2, 2) = 2.0;  // symmetric, not idempotent
  EXPECT_THROW(SelectionMatrix{m}, InvalidInput);
  m = Mat3::Zero();
  m(0, 1) = 1.0;  // nilpotent, not symmetric
  EXPECT_THROW(SelectionMatrix{m}, InvalidInput);
  EXPECT_THROW(SelectionMatrix::from_normal(Vec3::Zero()), InvalidInput);
}

TEST(Hybrid, IntegralAccumulatesOnlyAlongSelection) {
  const auto s = SelectionMatrix::from_normal(Vec3::UnitZ());
  Vec3 integral = Vec3::Zero();
  for (int i = 0; i < 1000; ++i) integral = accumulate_force_error(s, integral, Wrench3(Vec3(3, 4, 5)), 1e-3, 50.0);
  EXPECT_EQ(integral.x(), 0.0);
  EXPECT_EQ(integral.y(), 0.0);
  EXPECT_NEAR(integral.z(), 5.0, 1e-9);
  for (int i = 0; i < 20000; ++i) integral = accumulate_force_error(s, integral, Wrench3(Vec3(0, 0, 5)), 1e-3, 50.0);
  EXPECT_EQ(integral.z(), 50.0);
}

TEST(VelocityServo, Examples) {
  RigidPoint p;
  p.vel = Vec3(0.2, -0.1, 0.0);
  EXPECT_EQ(velocity_to_force(p.vel, p, VelocityServo{}).f, Vec3::Zero());
  const auto f = velocity_to_force(p.vel + Vec3(0.1, 0, 0), p, VelocityServo{});
  EXPECT_NEAR((f.f - Vec3(40, 0, 0)).norm(), 0.0, 1e-12);

  const Vec3 big(3.0, 4.0, 0.0);
  const auto sat = velocity_to_force(p.vel + big, p, VelocityServo{});
  EXPECT_NEAR(sat.f.norm(), 150.0, 1e-12);
  EXPECT_NEAR((sat.f.normalized() - big.normalized()).norm(), 0.0, 1e-12);
}

TEST(Admittance, EquilibriumIsFixed) {
  const AdmittanceParams p;
  AdmittanceState s;
  s.pos = Vec3(0.1, 0.2, 0.3);
  const auto next = admittance_step(p, s.pos, s, Wrench3(), 1e-3);
  EXPECT_EQ(next.pos, s.pos);
  EXPECT_EQ(next.vel, Vec3::Zero());
  EXPECT_THROW(admittance_step(p, s.pos, s, Wrench3(), 0.0), InvalidInput);
}

TEST(Admittance, SteadyOffsetIsForceOverStiffness) {
  const AdmittanceParams p;  // K_a = 500
  AdmittanceState s;
  const Vec3 ref(0.0, 0.0, 0.1);
  s.pos = ref;
  for (int i = 0; i < 20000; ++i) s = admittance_step(p, ref, s, Wrench3(Vec3(0, 0, -10)), 1e-3);
  EXPECT_NEAR((s.pos - ref - Vec3(0, 0, -0.02)).norm(), 0.0, 1e-9);
}

TEST(Admittance, TerminalVelocityWithoutSpring) {
  AdmittanceParams p;
  p.stiffness = 0.0;
  AdmittanceState s;
  for (int i = 0; i < 5000; ++i) s = admittance_step(p, Vec3::Zero(), s, Wrench3(Vec3(10, 0, 0)), 1e-3);
  EXPECT_NEAR(s.vel.x(), 10.0 / p.damping, 0.01 * 10.0 / p.damping);
}

TEST(Admittance, StepResponseMatchesAnalyticSecondOrder) {
  for (const AdmittanceParams p : {AdmittanceParams{}, AdmittanceParams{1.0, 51.5, 500.0}, AdmittanceParams{4.0, 40.0, 500.0}}) {
    const double f = -10.0, dt = 1e-3;
    const double m = p.mass, b = p.damping, k = p.stiffness;
    const double xs = f / k;
    // Analytic step response of m x'' + b x' + k x = f from rest.
    auto analytic = [&](double t) {
      const double disc = b * b - 4.0 * m * k;
      if (disc > 0.0) {
        const double r1 = (-b + std::sqrt(disc)) / (2.0 * m), r2 = (-b - std::sqrt(disc)) / (2.0 * m);
        return xs * (1.0 - (r2 * std::exp(r1 * t) - r1 * std::exp(r2 * t)) / (r2 - r1));
      }
      const double sigma = b / (2.0 * m), wd = std::sqrt(-disc) / (2.0 * m);
      return xs * (1.0 - std::exp(-sigma * t) * (std::cos(wd * t) + sigma / wd * std::sin(wd * t)));
    };
    AdmittanceState s;
    double se = 0.0, sr = 0.0;
    const int n = 2000;
    for (int i = 1; i <= n; ++i) {
      s = admittance_step(p, Vec3::Zero(), s, Wrench3(Vec3(0, 0, f)), dt);
      const double ref = analytic(i * dt);
      se += (s.pos.z() - ref) * (s.pos.z() - ref);
      sr += ref * ref;
    }
    EXPECT_LE(std::sqrt(se / sr), 0.02) << "B=" << p.damping;
  }
}

TEST(PositionControl, Examples) {
  RigidPoint p;
  p.pos = Vec3(0.1, 0.1, 0.1);
  EXPECT_EQ(position_control(PositionGains{}, p.pos, p).f, Vec3::Zero());
  const PositionGains g{.kp = 1e4, .kd = 0.0, .fmax = 150.0};
  const auto f = position_control(g, p.pos + Vec3(0, 0, 0.01), p);
  EXPECT_NEAR((f.f - Vec3(0, 0, 100)).norm(), 0.0, 1e-9);
  EXPECT_NEAR(position_control(g, p.pos + Vec3(0, 0, 1.0), p).f.norm(), 150.0, 1e-12);
}

// A 10 N disturbance on the slave: stiff pose servo versus admittance
// (K_a = K_p / 20) feeding the same servo. Both sides long-run to steady state.
TEST(Compliance, PositionServoIsStifferThanAdmittance) {
  const PositionGains g;
  const double dt = 1e-3;
  const Vec3 load(0, 0, -10.0);
  Workpiece far;
  far.geometry = Plane{Vec3(0, 0, -10.0), Vec3::UnitZ()};

  SimState a;
  a.slave.mass = 2.0;
  for (int i = 0; i < 10000; ++i)
    integrate_step(a, far, position_control(g, Vec3::Zero(), a.slave) + Wrench3(load), Wrench3(), dt);
  const double d_position = a.slave.pos.norm();

  SimState b;
  b.slave.mass = 2.0;
  AdmittanceState adm;
  const AdmittanceParams p{.mass = 4.0, .damping = 120.0, .stiffness = g.kp / 20.0};
  for (int i = 0; i < 10000; ++i) {
    adm = admittance_step(p, Vec3::Zero(), adm, Wrench3(load), dt);
    integrate_step(b, far, position_control(g, adm.pos, b.slave) + Wrench3(load), Wrench3(), dt);
  }
  const double d_admittance = b.slave.pos.norm();

  EXPECT_NEAR(d_position, 10.0 / g.kp, 1e-6);
  EXPECT_LT(d_position, d_admittance);
  EXPECT_GE(d_admittance / d_position, 20.0);
}

TEST(Validation, RejectsBadGains) {
  EXPECT_THROW(validate(HybridGains{.kfp = -1.0}), InvalidInput);
  EXPECT_THROW(validate(AdmittanceParams{.mass = 0.0}), InvalidInput);
  EXPECT_THROW(validate(PositionGains{.kp = 0.0}), InvalidInput);
  EXPECT_THROW(validate(VelocityServo{.kv = 400.0, .fmax = 0.0}), InvalidInput);
  EXPECT_NO_THROW(validate(HybridGains{}));
}
