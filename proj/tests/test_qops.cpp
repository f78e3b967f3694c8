#include "curvosc/qops.hpp"

#include <gtest/gtest.h>

using namespace curvosc;

namespace {

Curvature K(const char* s) { return Curvature::parse(s); }

const char* kCurved[] = {"1", "-1", "1/2", "-2"};

WaveFunction ground(const Curvature& k, Rational b, long nfreq, int ell = 0)
{
  return WaveFunction::monomial(k, ComplexQ(1), Rational(1, 2), std::move(b), ell, nfreq);
}

void expect_all_exact(const std::vector<AlgebraReport>& reports, const std::string& where)
{
  ASSERT_FALSE(reports.empty()) << where;
  for (const auto& r : reports) EXPECT_TRUE(r.exact) << where << ": " << r.relation << " residual " << r.max_residual;
}

} // namespace

TEST(Generators, ExtremalStateIsAnnihilatedOnSphere)
{
  Curvature k = K("1");
  SphericalGenerators g = spherical_generators(k);
  WaveFunction psi = ground(k, Rational(5, 2), 2);
  EXPECT_TRUE(g.A_minus(psi).is_zero());
  EXPECT_TRUE(g.B_plus(psi).is_zero());
  EXPECT_FALSE(g.A_plus(psi).is_zero());
  EXPECT_FALSE(g.B_minus(psi).is_zero());
}

TEST(Generators, ExtremalStateOnHyperboloid)
{
  Curvature k = K("-1");
  SphericalGenerators g = spherical_generators(k);
  // S^{1/2} C^{1/2 - nu} with omega = nu |k|
  for (long nu : {1, 2, 3}) {
    WaveFunction psi = ground(k, Rational(1, 2) - nu, -nu);
    EXPECT_TRUE(g.A_minus(psi).is_zero()) << nu;
    EXPECT_TRUE(g.B_plus(psi).is_zero()) << nu;
  }
  // the exponent -nu - 1/2 is not annihilated
  WaveFunction other = ground(k, Rational(-3, 2), -1);
  EXPECT_FALSE(g.A_minus(other).is_zero());
}

TEST(Generators, L3ReadsAngularMomentum)
{
  Curvature k = K("1/2");
  SphericalGenerators g = spherical_generators(k);
  WaveFunction psi = WaveFunction::monomial(k, ComplexQ(3, 1), Rational(3, 2), Rational(1, 2), 2, 4);
  EXPECT_EQ(g.L3(psi), ComplexQ(2) * psi);
  EXPECT_EQ(g.Omega(psi), ComplexQ(2) * psi);
  EXPECT_EQ(g.J12(psi), ComplexQ(0, -2) * psi);
}

TEST(Generators, LaddersMoveLabels)
{
  Curvature k = K("1");
  SphericalGenerators g = spherical_generators(k);
  WaveFunction psi = ground(k, Rational(5, 2), 2);
  WaveFunction up = g.A_plus(psi);
  for (const auto& t : up.terms()) {
    EXPECT_EQ(t.key.ell, 1);
    EXPECT_EQ(t.key.nfreq, 1);
  }
  WaveFunction down = g.B_minus(psi);
  for (const auto& t : down.terms()) {
    EXPECT_EQ(t.key.ell, -1);
    EXPECT_EQ(t.key.nfreq, 1);
  }
}

TEST(Algebra, AllRelationsExactInCurvedRegimes)
{
  for (const char* ks : kCurved) expect_all_exact(check_algebra(K(ks), 1, 20), ks);
}

TEST(Algebra, AllRelationsExactOnOtherSeeds)
{
  for (std::uint64_t seed : {2u, 7u, 12345u}) expect_all_exact(check_algebra(K("-1/2"), seed, 10), "seed");
}

TEST(Algebra, FlatHeisenbergRelations)
{
  auto reports = check_algebra(Curvature(), 1, 20);
  expect_all_exact(reports, "flat");
  std::vector<std::string> names;
  for (const auto& r : reports) names.push_back(r.relation);
  EXPECT_NE(std::find(names.begin(), names.end(), "[A-,A+] = w"), names.end());
  EXPECT_NE(std::find(names.begin(), names.end(), "[B-,B+] = -w"), names.end());
}

TEST(Algebra, MutationIsDetected)
{
  auto reports = check_algebra(K("1"), 1, 20, GeneratorOptions{true});
  int broken = 0;
  for (const auto& r : reports) broken += r.exact ? 0 : 1;
  EXPECT_GT(broken, 0);
}

TEST(Algebra, SpecificCommutators)
{
  Curvature k = K("1");
  SphericalGenerators g = spherical_generators(k);
  ProbeFactory factory(k, 3);
  for (const auto& f : factory.batch(10)) {
    EXPECT_EQ(commutator(g.A_plus, g.A_minus)(f), ComplexQ(2) * g.A3(f));
    EXPECT_EQ(commutator(g.A3, g.A_plus)(f), g.A_plus(f));
    EXPECT_EQ(commutator(g.L3, g.B_plus)(f), g.B_plus(f));
    EXPECT_EQ(commutator(g.Omega, g.A_plus)(f), ComplexQ(-1) * g.A_plus(f));
    EXPECT_TRUE(commutator(g.A_plus, g.B_minus)(f).is_zero());
  }
}

TEST(ParallelBasis, CrossCommutatorReadsAngularMomentum)
{
  for (const char* ks : kCurved) {
    Curvature k = K(ks);
    ParallelOperators a = parallel_ops(spherical_generators(k));
    WaveFunction psi = WaveFunction::monomial(k, ComplexQ(1), Rational(3, 2), Rational(1, 2), 2, 3);
    // -2k J12 with J12 = -i l
    ComplexQ expected(Rational(0), 2 * k.exact() * 2);
    EXPECT_EQ(commutator(a.a1_minus, a.a2_plus)(psi), expected * psi) << ks;
    // [a1-, a1+] = 2 Omega
    EXPECT_EQ(commutator(a.a1_minus, a.a1_plus)(psi), ComplexQ(2 * 3 * k.exact()) * psi) << ks;
    EXPECT_TRUE(commutator(a.a1_plus, a.a2_plus)(psi).is_zero()) << ks;
  }
}

TEST(Hamiltonian, GroundStateEnergies)
{
  Curvature k = K("1");
  LinearOperator h = hamiltonian(k, HamiltonianMode::viaAB);
  WaveFunction psi = ground(k, Rational(3, 2), 1);
  EXPECT_EQ(h(psi), ComplexQ(3) * psi);
  EXPECT_NE(h(psi), ComplexQ(4) * psi);

  WaveFunction flat = WaveFunction::gaussian(ComplexQ(1), Rational(1, 2), 0, 1);
  EXPECT_EQ(hamiltonian(Curvature(), HamiltonianMode::flat)(flat), ComplexQ(2) * flat);
}

TEST(Hamiltonian, ModesAgree)
{
  for (const char* ks : kCurved) expect_all_exact(check_hamiltonian_modes(K(ks), 1, 20), ks);
  expect_all_exact(check_hamiltonian_modes(Curvature(), 1, 20), "flat");
}

TEST(Hamiltonian, AlternateABFormIsOffByAngularTerm)
{
  Curvature k = K("1");
  SphericalGenerators g = spherical_generators(k);
  WaveFunction psi = WaveFunction::monomial(k, ComplexQ(1), Rational(3, 2), Rational(1, 2), 1, 2);
  WaveFunction diff = hamiltonian(g, HamiltonianMode::viaABPrinted)(psi) - hamiltonian(g, HamiltonianMode::viaAB)(psi);
  EXPECT_EQ(diff, ComplexQ(2) * psi);
}

TEST(Hamiltonian, RegimeErrors)
{
  EXPECT_THROW(hamiltonian(K("1"), HamiltonianMode::flat), RegimeError);
  EXPECT_THROW(hamiltonian(Curvature(), HamiltonianMode::viaCasimir), RegimeError);
  EXPECT_THROW(casimirs(Curvature()), RegimeError);
}

TEST(Casimir, ExtremalEigenvalue)
{
  Curvature k = K("1");
  Casimirs c = casimirs(k);
  WaveFunction psi = ground(k, Rational(3, 2), 1);
  EXPECT_EQ(c.C1(psi), ComplexQ(3) * psi);
  EXPECT_EQ(c.C2(psi), ComplexQ(3) * psi);
  EXPECT_EQ(c.C1_alt(psi), c.C1(psi));
  EXPECT_EQ(c.C2_alt(psi), c.C2(psi));
}

TEST(Symmetries, CommuteWithHamiltonian)
{
  for (const char* ks : kCurved) expect_all_exact(check_symmetries(K(ks), 1, 20), ks);
  expect_all_exact(check_symmetries(Curvature(), 1, 20), "flat");
}

TEST(Symmetries, BarredFactorizationCommutes)
{
  Curvature k = K("-1");
  SphericalGenerators g = spherical_generators(k);
  LinearOperator h = hamiltonian(g, HamiltonianMode::viaAB);
  ProbeFactory factory(k, 5);
  for (const auto& f : factory.batch(10)) {
    EXPECT_TRUE(commutator(barred_I0(g, 1), h)(f).is_zero());
    EXPECT_TRUE(commutator(barred_I0(g, 2), h)(f).is_zero());
  }
  EXPECT_EQ(barred_mu(Rational(2), Rational(3)), Rational(8));
  EXPECT_THROW(barred_mu(Rational(0), Rational(1)), RegimeError);
}

TEST(Intertwining, PinnedProbes)
{
  expect_all_exact(intertwine_check(K("1"), 1, 20, ProbeSpec{0, 2, std::nullopt}), "k=1");
  expect_all_exact(intertwine_check(K("-1"), 1, 20, ProbeSpec{1, 3, std::nullopt}), "k=-1");
  expect_all_exact(intertwine_check(Curvature(), 1, 20), "k=0");
}

TEST(Probes, Deterministic)
{
  ProbeFactory a(K("1"), 42), b(K("1"), 42), c(K("1"), 43);
  auto pa = a.batch(20), pb = b.batch(20), pc = c.batch(20);
  EXPECT_EQ(pa, pb);
  EXPECT_NE(pa, pc);
  for (const auto& p : pa) EXPECT_FALSE(p.is_zero());
}

TEST(Probes, HonourPinnedLabels)
{
  ProbeFactory f(K("-1"), 9);
  for (const auto& p : f.batch(10, ProbeSpec{1, 3, std::nullopt})) {
    for (const auto& t : p.terms()) {
      EXPECT_EQ(t.key.ell, 1);
      EXPECT_EQ(t.key.nfreq, 3);
    }
  }
}

TEST(Report, Json)
{
  auto reports = check_algebra(K("1"), 1, 2);
  nlohmann::json j = to_json(reports.front());
  EXPECT_EQ(j["relation"], reports.front().relation);
  EXPECT_EQ(j["probes"], 2);
  EXPECT_EQ(j["exact"], true);
  EXPECT_EQ(j["regime"], "positive");
}
