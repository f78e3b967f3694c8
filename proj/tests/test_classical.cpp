#include "curvosc/classical.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace curvosc;
using cplx = std::complex<double>;

namespace {

Curvature K(const char* s) { return Curvature::parse(s); }

const char* kCurved[] = {"1", "-1", "1/2", "-2"};

std::vector<PhasePoint> random_points(const Curvature& k, int n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double theta_max = k.regime() == Regime::positive ? 0.9 * radial_limit(k) : 1.5;
  std::vector<PhasePoint> pts;
  for (int i = 0; i < n; ++i)
    pts.push_back({0.1 + (theta_max - 0.1) * (u(rng) + 1) / 2, 3 * u(rng), u(rng), 2 * u(rng), 2 * u(rng), 1 + 0.5 * u(rng)});
  return pts;
}

} // namespace

TEST(PoissonBracket, CanonicalPair)
{
  ClassicalGenerators g = classical_generators(K("1"));
  PhasePoint pt{0.4, 0.1, 0.0, 0.3, 1.0, 1.0};
  EXPECT_NEAR(std::abs(poisson_bracket(g.theta, g.p_theta, pt) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(poisson_bracket(g.p_theta, g.theta, pt) + 1.0), 0.0, 1e-15);
}

TEST(PoissonBracket, ParallelBasis)
{
  for (const char* ks : kCurved) {
    Curvature k = K(ks);
    double kv = k.value();
    ClassicalGenerators g = classical_generators(k);
    for (const auto& pt : random_points(k, 100, 11)) {
      cplx j12 = evaluate(g.J12, pt), pz = pt.p_zeta;
      EXPECT_LT(std::abs(poisson_bracket(g.a1_minus, g.a1_plus, pt) - cplx(0, -2) * pz), 1e-10) << ks;
      EXPECT_LT(std::abs(poisson_bracket(g.a2_minus, g.a2_plus, pt) - cplx(0, -2) * pz), 1e-10) << ks;
      EXPECT_LT(std::abs(poisson_bracket(g.a1_minus, g.a2_plus, pt) - 2 * kv * j12), 1e-10) << ks;
      EXPECT_LT(std::abs(poisson_bracket(g.a1_plus, g.a2_minus, pt) - 2 * kv * j12), 1e-10) << ks;
      EXPECT_LT(std::abs(poisson_bracket(g.a2_minus, g.a1_plus, pt) + 2 * kv * j12), 1e-10) << ks;
      EXPECT_LT(std::abs(poisson_bracket(g.a1_plus, g.a2_plus, pt)), 1e-10) << ks;
      EXPECT_LT(std::abs(poisson_bracket(g.a1_minus, g.a2_minus, pt)), 1e-10) << ks;
      EXPECT_LT(std::abs(poisson_bracket(g.p_zeta, g.a1_plus, pt) - cplx(0, kv) * evaluate(g.a1_plus, pt)), 1e-10) << ks;
      EXPECT_LT(std::abs(poisson_bracket(g.p_zeta, g.a2_minus, pt) - cplx(0, -kv) * evaluate(g.a2_minus, pt)), 1e-10)
          << ks;
      EXPECT_LT(std::abs(poisson_bracket(g.J12, g.a2_plus, pt) + evaluate(g.a1_plus, pt)), 1e-10) << ks;
    }
  }
}

TEST(PoissonBracket, RotationAlgebra)
{
  for (const char* ks : kCurved) {
    Curvature k = K(ks);
    ClassicalGenerators g = classical_generators(k);
    for (const auto& pt : random_points(k, 100, 12)) {
      EXPECT_LT(std::abs(poisson_bracket(g.J01, g.J02, pt) - k.value() * evaluate(g.J12, pt)), 1e-10) << ks;
      EXPECT_LT(std::abs(poisson_bracket(g.J01, g.J12, pt) + evaluate(g.J02, pt)), 1e-10) << ks;
      EXPECT_LT(std::abs(poisson_bracket(g.J02, g.J12, pt) - evaluate(g.J01, pt)), 1e-10) << ks;
    }
  }
}

TEST(PoissonBracket, FiniteDifferenceAgrees)
{
  Curvature k = K("-1/2");
  ClassicalGenerators g = classical_generators(k);
  for (const auto& pt : random_points(k, 10, 13)) {
    cplx a = poisson_bracket(g.a1_minus, g.a2_plus, pt);
    cplx b = poisson_bracket_fd(g.a1_minus, g.a2_plus, pt);
    EXPECT_LT(std::abs(a - b), 1e-6);
  }
}

TEST(Integrals, CommuteWithHamiltonian)
{
  for (const char* ks : kCurved) {
    Curvature k = K(ks);
    ClassicalGenerators g = classical_generators(k);
    for (const auto& pt : random_points(k, 100, 14)) {
      for (const PhaseFunction* f : {&g.F11, &g.F12, &g.F22, &g.D12, &g.QAA, &g.QBB, &g.QAB, &g.I01, &g.I02, &g.I12})
        EXPECT_LT(std::abs(poisson_bracket(*f, g.H, pt)), 1e-10) << ks;
    }
  }
}

TEST(Integrals, QuarterCurvatureShiftIsNotConserved)
{
  Curvature k = K("1");
  ClassicalGenerators g = classical_generators(k);
  double worst = 0.0;
  for (const auto& pt : random_points(k, 50, 15)) worst = std::max(worst, std::abs(poisson_bracket(g.F11_alt, g.H, pt)));
  EXPECT_GT(worst, 1e-3);
}

TEST(Hamiltonian, FactorizedForm)
{
  for (const char* ks : kCurved) {
    Curvature k = K(ks);
    ClassicalGenerators g = classical_generators(k);
    for (const auto& pt : random_points(k, 100, 16)) {
      double h = hamiltonian_classical(k, pt);
      EXPECT_NEAR(evaluate(g.H, pt).real(), h, 1e-12 * std::max(1.0, h));
      cplx fact = 2.0 * (evaluate(g.QAA, pt) + evaluate(g.QBB, pt)) + k.value() * pt.p_phi * pt.p_phi;
      EXPECT_LT(std::abs(fact - h), 1e-12 * std::max(1.0, h)) << ks;
      EXPECT_LT(std::abs(evaluate(g.a1_plus, pt) - evaluate(g.a1_plus_sph, pt)), 1e-12) << ks;
    }
  }
}

TEST(Hamiltonian, FlatPolar)
{
  PhasePoint pt{0.7, 0.2, 0.0, 0.3, 0.5, 2.0};
  EXPECT_NEAR(hamiltonian_classical(Curvature(), pt), 0.09 + 0.25 / 0.49 + 4 * 0.49, 1e-14);
}

TEST(Invariants, DifferenceIdentityAndDTensor)
{
  for (const char* ks : kCurved) {
    Curvature k = K(ks);
    for (const auto& pt : random_points(k, 100, 17)) {
      OrbitInvariants inv = invariants(k, pt);
      double scale = std::max({1.0, inv.qa2, inv.qb2});
      EXPECT_NEAR(inv.qa2 - inv.qb2, 4 * pt.p_zeta * pt.p_phi, 1e-12 * scale) << ks;
      EXPECT_NEAR(inv.D12, pt.p_zeta * pt.p_phi, 1e-12 * scale) << ks;
      EXPECT_NEAR(std::abs(inv.qab), inv.qa * inv.qb, 1e-10 * scale) << ks;
    }
  }
}

TEST(Invariants, FlatDemkovFradkinLimit)
{
  PhasePoint pt{0.8, 0.3, 0.0, 0.4, 1.0, 1.5};
  double c = std::cos(pt.phi), s = std::sin(pt.phi);
  double x1 = pt.theta * c, p1 = c * pt.p_theta - s * pt.p_phi / pt.theta;
  OrbitInvariants inv = invariants(K("1/100000"), pt);
  EXPECT_NEAR(inv.F11, 2.25 * x1 * x1 + p1 * p1, 1e-4);
}

TEST(Embedding, Values)
{
  auto a = embed(K("1"), 0.0, 1.3);
  EXPECT_DOUBLE_EQ(a[0], 1.0);
  EXPECT_DOUBLE_EQ(a[1], 0.0);
  auto b = embed(K("1"), M_PI / 2, 0.0);
  EXPECT_NEAR(b[0], 0.0, 1e-15);
  EXPECT_NEAR(b[1], 1.0, 1e-15);
  auto c = embed(K("-1"), 1.0, M_PI / 2);
  EXPECT_NEAR(c[0], std::cosh(1.0), 1e-15);
  EXPECT_NEAR(c[1], 0.0, 1e-15);
  EXPECT_NEAR(c[2], std::sinh(1.0), 1e-15);
  for (const char* ks : kCurved)
    EXPECT_LT(ambient_constraint_residual(K(ks), embed(K(ks), 0.9, 0.4)), 1e-14) << ks;
}

TEST(InitialCondition, TurningPoint)
{
  Curvature k = K("1");
  InitialCondition ic = initial_condition(k, 2, 2, 40);
  EXPECT_FALSE(ic.circular);
  EXPECT_DOUBLE_EQ(ic.point.p_theta, 0.0);
  EXPECT_NEAR(hamiltonian_classical(k, ic.point), 40.0, 1e-12);
  EXPECT_TRUE(initial_condition(k, 2, 2, 12).circular);
  EXPECT_THROW(initial_condition(k, 2, 2, 8), std::invalid_argument);
  EXPECT_THROW(initial_condition(k, -1, 2, 40), std::invalid_argument);
  InitialCondition h = initial_condition(K("-1"), 1, 3, 6);
  EXPECT_NEAR(hamiltonian_classical(K("-1"), h.point), 6.0, 1e-12);
}

TEST(Integrate, FlatRadialPeriod)
{
  Curvature k;
  InitialCondition ic = initial_condition(k, 1, 0, 4);
  Trajectory tr = integrate(k, ic.point, M_PI, M_PI / 3000);
  ASSERT_EQ(tr.status, TrajectoryStatus::completed);
  EXPECT_NEAR(tr.samples.back().point.theta, ic.point.theta, 1e-8);
  EXPECT_NEAR(tr.samples.back().point.p_theta, ic.point.p_theta, 1e-8);
  Trajectory half = integrate(k, ic.point, M_PI / 2, M_PI / 3000);
  EXPECT_NEAR(half.samples.back().point.theta, -ic.point.theta, 1e-8);
}

TEST(Integrate, SphereConservation)
{
  Curvature k = K("1");
  Trajectory tr = integrate(k, initial_condition(k, 2, 2, 20).point, 20, 1e-3, {.stride = 10});
  ASSERT_EQ(tr.status, TrajectoryStatus::completed);
  EXPECT_EQ(tr.samples.size(), 2001u);
  EXPECT_LT(tr.drift.E, 1e-6);
  EXPECT_LT(tr.drift.qa2, 1e-6);
  EXPECT_LT(tr.drift.qb2, 1e-6);
  EXPECT_LT(tr.drift.difference_identity, 1e-8);
  EXPECT_GT(tr.drift.min_x0, 0.0);
  EXPECT_LT(tr.drift.constraint, 1e-12);
}

TEST(Integrate, DriftShrinksWithStep)
{
  Curvature k = K("1");
  PhasePoint start = initial_condition(k, 2, 2, 40).point;
  double coarse = integrate(k, start, 10, 1e-3).drift.E;
  double fine = integrate(k, start, 10, 5e-4).drift.E;
  EXPECT_LT(fine, coarse / 16);
}

TEST(Integrate, HyperbolicOpenOrbit)
{
  Curvature k = K("-1");
  Trajectory tr = integrate(k, initial_condition(k, 1, 3, 40).point, 50, 1e-3, {.stride = 100});
  ASSERT_EQ(tr.status, TrajectoryStatus::completed);
  EXPECT_GT(tr.samples.back().point.theta, 100.0);
  EXPECT_LT(tr.drift.E, 1e-6);
  EXPECT_LT(tr.drift.constraint, 1e-10);
}

TEST(Integrate, RejectsLargeSteps)
{
  Curvature k = K("1");
  Trajectory tr = integrate(k, initial_condition(k, 2, 2, 40).point, 50, 5e-2);
  EXPECT_EQ(tr.status, TrajectoryStatus::rejected);
  EXPECT_FALSE(tr.event.empty());
  EXPECT_THROW(integrate(k, PhasePoint{}, 1, 0.0), std::invalid_argument);
}

TEST(Integrate, HaltsAtEquator)
{
  Curvature k = K("1");
  PhasePoint start{0.5, 0.0, 0.0, 3.0, 0.0, 0.0};
  Trajectory tr = integrate(k, start, 5, 1e-3);
  EXPECT_EQ(tr.status, TrajectoryStatus::singularity);
  EXPECT_LT(tr.samples.back().point.theta, radial_limit(k));
}

TEST(Orbit, DerivedRelationHoldsOnFlatEllipse)
{
  Curvature k;
  Trajectory tr = integrate(k, initial_condition(k, 1, 1, 4).point, 20, 1e-3);
  ASSERT_EQ(tr.status, TrajectoryStatus::completed);
  EXPECT_NEAR(tr.samples.front().inv.qa2 - tr.samples.front().inv.qb2, 4.0, 1e-12);
  OrbitResidualReport r = orbit_residual(k, tr);
  EXPECT_TRUE(r.defined);
  EXPECT_LT(r.algebraic_derived, 1e-8);
  EXPECT_GT(r.algebraic_printed, 1e-2);
  EXPECT_GT(r.turning_points, 0);
  EXPECT_LT(r.turning_point_gap, 1e-3);
}

TEST(Orbit, DerivedRelationOnSphereAtModerateEnergy)
{
  Curvature k = K("1");
  Trajectory tr = integrate(k, initial_condition(k, 2, 2, 20).point, 10, 1e-4, {.stride = 10});
  OrbitResidualReport r = orbit_residual(k, tr);
  EXPECT_LT(r.algebraic_derived, 1e-8);
  EXPECT_GT(r.algebraic_printed, 1e-2);
}

TEST(Orbit, CircularOrbitIsDegenerate)
{
  Curvature k = K("1");
  Trajectory tr = integrate(k, initial_condition(k, 2, 2, 12).point, 5, 1e-3);
  EXPECT_FALSE(orbit_residual(k, tr).defined);
  EXPECT_FALSE(tr.drift.arg_defined);
}

TEST(Orbit, RelationAtAPoint)
{
  Curvature k = K("-1/2");
  PhasePoint pt{0.7, 0.4, 0.0, 0.9, 1.2, 1.7};
  OrbitInvariants c0 = invariants(k, pt);
  OrbitRelationValues r = orbit_relations(k, pt, c0);
  EXPECT_LT(r.algebraic_derived, 1e-12);
  EXPECT_LT(r.arccos_derived, 1e-10);
}
