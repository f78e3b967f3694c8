#ifndef CURVOSC_QOPS_HPP
#define CURVOSC_QOPS_HPP

// Quantum operators of the curved oscillator acting on WaveFunction:
// spherical basis A, B, L3, Omega; parallel basis a_i; Hamiltonians;
// Casimirs; symmetries; and extensional commutator checks.
//
// Operators compose right to left. Phase factors written to the right of a
// bracket are relabelings that act first, so -i d_zeta inside the bracket
// reads the shifted frequency.

#include "curvosc/wavealg.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace curvosc {

class LinearOperator {
public:
  using Action = std::function<WaveFunction(const WaveFunction&)>;

  LinearOperator() : action_([](const WaveFunction& f) { return f; }), descriptor_("1") {}
  LinearOperator(Action action, std::string descriptor) : action_(std::move(action)), descriptor_(std::move(descriptor)) {}

  WaveFunction operator()(const WaveFunction& f) const { return action_(f); }
  const std::string& descriptor() const { return descriptor_; }

  /// Composition: (X * Y)(f) = X(Y(f)).
  friend LinearOperator operator*(const LinearOperator& x, const LinearOperator& y)
  {
    return {[x, y](const WaveFunction& f) { return x(y(f)); }, x.descriptor_ + " " + y.descriptor_};
  }
  friend LinearOperator operator+(const LinearOperator& x, const LinearOperator& y)
  {
    return {[x, y](const WaveFunction& f) { return x(f) + y(f); }, "(" + x.descriptor_ + " + " + y.descriptor_ + ")"};
  }
  friend LinearOperator operator-(const LinearOperator& x, const LinearOperator& y)
  {
    return {[x, y](const WaveFunction& f) { return x(f) - y(f); }, "(" + x.descriptor_ + " - " + y.descriptor_ + ")"};
  }
  friend LinearOperator operator*(const ComplexQ& c, const LinearOperator& x)
  {
    std::ostringstream os;
    os << c;
    return {[c, x](const WaveFunction& f) { return c * x(f); }, os.str() + " " + x.descriptor_};
  }

private:
  Action action_;
  std::string descriptor_;
};

/// Multiplication by a scalar read from each term's (omega, ell) labels.
inline LinearOperator label_scalar(std::function<ComplexQ(const Rational& omega, int ell)> fn, std::string descriptor)
{
  return {[fn](const WaveFunction& f) {
            return transform_terms(f, [&](const TermKey& key, const ComplexQ& c, WaveFunction& out) {
              out.accumulate(key, fn(f.omega(key), key.ell) * c);
            });
          },
          std::move(descriptor)};
}

inline LinearOperator constant_operator(const ComplexQ& c, const std::string& descriptor)
{
  return label_scalar([c](const Rational&, int) { return c; }, descriptor);
}

inline LinearOperator commutator(const LinearOperator& x, const LinearOperator& y)
{
  return {[x, y](const WaveFunction& f) { return x(y(f)) - y(x(f)); },
          "[" + x.descriptor() + ", " + y.descriptor() + "]"};
}

struct GeneratorOptions {
  /// Negative control: reverses the sign of A3.
  bool flip_a3 = false;
};

struct SphericalGenerators {
  Curvature kappa;
  LinearOperator A_plus, A_minus, A3, B_plus, B_minus, B3, L3, Omega;
  /// J3 = J12 = -i L3 in the 2D reduction.
  LinearOperator J12;
};

namespace detail {

inline LinearOperator relabel(int d_ell, int d_n, const std::string& descriptor)
{
  return {[d_ell, d_n](const WaveFunction& f) {
            WaveFunction g = d_ell != 0 ? shift_ell(f, d_ell) : f;
            if (d_n != 0 && !f.curvature().is_flat()) g = shift_n(g, d_n);
            return g;
          },
          descriptor};
}

/// g -> 1/2 [ s_d d_theta g + s_t (1/2 - l) g / T + (omega + kappa/2) T g ]
inline LinearOperator factor_bracket(int s_d, int s_t, const std::string& descriptor)
{
  return {[s_d, s_t](const WaveFunction& g) {
            const Rational& kappa = g.curvature().exact();
            Rational half(1, 2);
            WaveFunction centrifugal = scale_by_label(g, [&](const TermKey& key) {
              return ComplexQ(Rational(s_t) * (half - key.ell));
            });
            WaveFunction potential = scale_by_label(g, [&](const TermKey& key) {
              return ComplexQ(g.omega(key) + kappa / 2);
            });
            WaveFunction sum = ComplexQ(s_d) * d_theta(g) + div_t(centrifugal) + mul_t(potential);
            return ComplexQ(half) * sum;
          },
          descriptor};
}

} // namespace detail

inline SphericalGenerators spherical_generators(const Curvature& k, GeneratorOptions opt = {})
{
  using detail::factor_bracket;
  using detail::relabel;
  Rational kappa = k.exact();
  SphericalGenerators g{k, {}, {}, {}, {}, {}, {}, {}, {}, {}};

  auto named = [](const LinearOperator& op, const char* name) {
    return LinearOperator([op](const WaveFunction& f) { return op(f); }, name);
  };
  g.A_plus = named(factor_bracket(-1, -1, "") * relabel(+1, -1, ""), "A+");
  g.A_minus = named(relabel(-1, +1, "") * factor_bracket(+1, -1, ""), "A-");
  g.B_minus = named(relabel(-1, 0, "") * factor_bracket(-1, +1, "") * relabel(0, -1, ""), "B-");
  g.B_plus = named(relabel(0, +1, "") * factor_bracket(+1, +1, "") * relabel(+1, 0, ""), "B+");

  int a3_sign = opt.flip_a3 ? -1 : 1;
  g.A3 = label_scalar([kappa, a3_sign](const Rational& omega, int ell) {
    return ComplexQ(Rational(a3_sign) * (-omega + kappa * ell) / 2);
  }, "A3");
  g.B3 = label_scalar([kappa](const Rational& omega, int ell) { return ComplexQ((omega + kappa * ell) / 2); }, "B3");
  g.L3 = label_scalar([](const Rational&, int ell) { return ComplexQ(ell); }, "L3");
  g.Omega = label_scalar([](const Rational& omega, int) { return ComplexQ(omega); }, "Omega");
  g.J12 = label_scalar([](const Rational&, int ell) { return ComplexQ(Rational(0), Rational(-ell)); }, "J12");
  return g;
}

struct ParallelOperators {
  LinearOperator a1_plus, a1_minus, a2_plus, a2_minus;
};

/// a1+ = A+ + B-, a2+ = -i(A+ - B-), a1- = A- + B+, a2- = i(A- - B+).
inline ParallelOperators parallel_ops(const SphericalGenerators& g)
{
  ComplexQ i = ComplexQ::i();
  auto named = [](const LinearOperator& op, const char* name) {
    return LinearOperator([op](const WaveFunction& f) { return op(f); }, name);
  };
  return {named(g.A_plus + g.B_minus, "a1+"), named(g.A_minus + g.B_plus, "a1-"),
          named(-i * (g.A_plus - g.B_minus), "a2+"), named(i * (g.A_minus - g.B_plus), "a2-")};
}

inline ParallelOperators parallel_ops(const Curvature& k, GeneratorOptions opt = {})
{
  return parallel_ops(spherical_generators(k, opt));
}

enum class HamiltonianMode { viaAB, viaABPrinted, viaShift, viaCasimir, flat, laplacian };

inline const char* mode_name(HamiltonianMode m)
{
  switch (m) {
  case HamiltonianMode::viaAB: return "viaAB";
  case HamiltonianMode::viaABPrinted: return "viaABPrinted";
  case HamiltonianMode::viaShift: return "viaShift";
  case HamiltonianMode::viaCasimir: return "viaCasimir";
  case HamiltonianMode::flat: return "flat";
  case HamiltonianMode::laplacian: return "laplacian";
  }
  return "?";
}

struct Casimirs {
  LinearOperator C1, C1_alt, C2, C2_alt;
};

/// C1 = (4/k)(k A+A- + A3(A3 - k)) = (4/k)(k A-A+ + A3(A3 + k))
/// C2 = (4/k)(k B-B+ + B3(B3 + k)) = (4/k)(k B+B- + B3(B3 - k))
inline Casimirs casimirs(const SphericalGenerators& g)
{
  if (g.kappa.is_flat()) throw RegimeError("Casimir operators are singular at zero curvature");
  Rational kappa = g.kappa.exact();
  ComplexQ ck(kappa), four_over_k(Rational(4) / kappa);
  LinearOperator kI = constant_operator(ck, "k");
  auto build = [&](const LinearOperator& raise_lower, const LinearOperator& h, int sign, const char* name) {
    LinearOperator inner = ck * raise_lower + h * (sign > 0 ? h + kI : h - kI);
    LinearOperator op = four_over_k * inner;
    return LinearOperator([op](const WaveFunction& f) { return op(f); }, name);
  };
  return {build(g.A_plus * g.A_minus, g.A3, -1, "C1"), build(g.A_minus * g.A_plus, g.A3, +1, "C1'"),
          build(g.B_minus * g.B_plus, g.B3, +1, "C2"), build(g.B_plus * g.B_minus, g.B3, -1, "C2'")};
}

inline Casimirs casimirs(const Curvature& k) { return casimirs(spherical_generators(k)); }

/// H = 4A+A- + (4/k)A3(A3 - k) - (w^2 - k^2)/k, with the analogous forms per mode.
inline LinearOperator hamiltonian(const SphericalGenerators& g, HamiltonianMode mode)
{
  const Curvature& k = g.kappa;
  Rational kappa = k.exact();
  bool flat = k.is_flat();
  auto named = [mode](const LinearOperator& op) {
    return LinearOperator([op](const WaveFunction& f) { return op(f); }, std::string("H[") + mode_name(mode) + "]");
  };
  LinearOperator four_AA = ComplexQ(4) * (g.A_plus * g.A_minus);

  // 4A+A- - 2i w J3 + 2w
  auto flat_form = [&] {
    return named(four_AA + label_scalar([](const Rational& w, int ell) { return ComplexQ(-2 * w * ell + 2 * w); },
                                        "-2i w J3 + 2w"));
  };

  switch (mode) {
  case HamiltonianMode::flat:
    if (!flat) throw RegimeError("flat Hamiltonian form requires zero curvature");
    return flat_form();

  case HamiltonianMode::viaAB: {
    if (flat) return flat_form();
    LinearOperator kI = constant_operator(ComplexQ(kappa), "k");
    LinearOperator a3_term = ComplexQ(Rational(4) / kappa) * (g.A3 * (g.A3 - kI));
    LinearOperator offset =
        label_scalar([kappa](const Rational& w, int) { return ComplexQ(-(w * w - kappa * kappa) / kappa); },
                     "-(w^2-k^2)/k");
    return named(four_AA + a3_term + offset);
  }

  case HamiltonianMode::viaABPrinted:
    if (flat) return flat_form();
    // 4A+A- - 2i w J3 + (2w + k) - k J3^2, with J3 -> -i l
    return named(four_AA + label_scalar([kappa](const Rational& w, int ell) {
                   return ComplexQ(-2 * w * ell + 2 * w + kappa + kappa * ell * ell);
                 }, "-2i w J3 + (2w+k) - k J3^2"));

  case HamiltonianMode::viaShift: {
    ParallelOperators a = parallel_ops(g);
    LinearOperator offset = label_scalar(
        [kappa](const Rational& w, int ell) { return ComplexQ(2 * (w + kappa / 2) + kappa * ell * ell); },
        "2(w+k/2) - k I12");
    return named(a.a1_plus * a.a1_minus + a.a2_plus * a.a2_minus + offset);
  }

  case HamiltonianMode::viaCasimir: {
    if (flat) throw RegimeError("Casimir form of the Hamiltonian is singular at zero curvature");
    Casimirs c = casimirs(g);
    LinearOperator offset =
        label_scalar([kappa](const Rational& w, int) { return ComplexQ(-(w * w - kappa * kappa) / kappa); },
                     "-(w^2-k^2)/k");
    return named(ComplexQ(Rational(1, 2)) * (c.C1 + c.C2) + offset);
  }

  case HamiltonianMode::laplacian: {
    // -d^2 + (l^2 - 1/4)(1/T^2 + k) - k/4 + (w^2 - k^2/4) T^2
    return named(LinearOperator(
        [kappa](const WaveFunction& f) {
          WaveFunction out = -d_theta(d_theta(f));
          WaveFunction cent = scale_by_label(f, [](const TermKey& key) {
            return ComplexQ(Rational(key.ell) * key.ell - Rational(1, 4));
          });
          out += div_t(div_t(cent));
          out += ComplexQ(kappa) * cent;
          out += ComplexQ(-kappa / 4) * f;
          out += mul_t2(scale_by_label(f, [&](const TermKey& key) {
            Rational w = f.omega(key);
            return ComplexQ(w * w - kappa * kappa / 4);
          }));
          return out;
        },
        ""));
  }
  }
  throw std::invalid_argument("unknown Hamiltonian mode");
}

inline LinearOperator hamiltonian(const Curvature& k, HamiltonianMode mode, GeneratorOptions opt = {})
{
  return hamiltonian(spherical_generators(k, opt), mode);
}

/// mu(w) = (w + k/2)^2 / k, the constant of the barred factorization.
inline Rational barred_mu(const Rational& kappa, const Rational& omega)
{
  if (kappa == 0) throw RegimeError("mu(omega) diverges at zero curvature");
  Rational s = omega + kappa / 2;
  return s * s / kappa;
}

struct SymmetrySuite {
  LinearOperator QAA, QBB, QAB;
  LinearOperator Q11, Q12, Q21, Q22;
  LinearOperator F11, F12, F22, D12;
  LinearOperator I12, I01, I02;

  std::vector<std::pair<std::string, LinearOperator>> named() const
  {
    return {{"QAA", QAA}, {"QBB", QBB}, {"QAB", QAB}, {"Q11", Q11}, {"Q12", Q12}, {"Q21", Q21}, {"Q22", Q22},
            {"F11", F11}, {"F12", F12}, {"F22", F22}, {"D12", D12}, {"I12", I12}, {"I01", I01}, {"I02", I02}};
  }
};

inline SymmetrySuite symmetry_suite(const SphericalGenerators& g)
{
  ParallelOperators a = parallel_ops(g);
  Rational kappa = g.kappa.exact();
  ComplexQ half(Rational(1, 2));
  ComplexQ over_2i(Rational(0), Rational(-1, 2));
  LinearOperator shift_const =
      label_scalar([kappa](const Rational& w, int) { return ComplexQ(w + kappa / 2); }, "(w+k/2)");

  SymmetrySuite s;
  s.QAA = g.A_plus * g.A_minus;
  s.QBB = g.B_plus * g.B_minus;
  s.QAB = g.A_plus * g.B_plus;
  s.Q11 = a.a1_plus * a.a1_minus;
  s.Q12 = a.a1_plus * a.a2_minus;
  s.Q21 = a.a2_plus * a.a1_minus;
  s.Q22 = a.a2_plus * a.a2_minus;
  s.F11 = s.Q11;
  s.F22 = s.Q22;
  s.F12 = half * (s.Q21 + s.Q12);
  s.D12 = over_2i * (s.Q12 - s.Q21);
  s.I12 = label_scalar([](const Rational&, int ell) { return ComplexQ(Rational(-ell * ell)); }, "J12^2");
  s.I01 = s.Q11 + shift_const;
  s.I02 = s.Q22 + shift_const;
  return s;
}

/// Ibar_0i = a_i+ a_i- + mu(w).
inline LinearOperator barred_I0(const SphericalGenerators& g, int i)
{
  ParallelOperators a = parallel_ops(g);
  Rational kappa = g.kappa.exact();
  LinearOperator mu = label_scalar([kappa](const Rational& w, int) { return ComplexQ(barred_mu(kappa, w)); }, "mu(w)");
  return (i == 1 ? a.a1_plus * a.a1_minus : a.a2_plus * a.a2_minus) + mu;
}

// ---------------------------------------------------------------------------
// Probes and extensional checks

struct ProbeSpec {
  std::optional<int> ell;
  std::optional<long> nfreq;
  std::optional<Rational> gsigma;
};

/// Seeded pseudo-random wavefunctions spanning the exponent lattice the
/// ladders generate.
class ProbeFactory {
public:
  ProbeFactory(Curvature k, std::uint64_t seed) : kappa_(std::move(k)), rng_(seed) {}

  WaveFunction next(const ProbeSpec& spec = {})
  {
    std::vector<WaveTerm> terms;
    int count = 1 + pick(3);
    for (int t = 0; t < count; ++t) {
      WaveTerm term;
      term.coeff = random_coeff();
      term.key.a = Rational(2 * pick(3) + 1, 2);
      term.key.ell = spec.ell ? *spec.ell : pick(7) - 3;
      if (kappa_.is_flat()) {
        static const Rational sigmas[] = {Rational(1, 2), Rational(1), Rational(2)};
        term.key.gsigma = spec.gsigma ? *spec.gsigma : sigmas[pick(3)];
      } else {
        term.key.b = Rational(2 * pick(6) - 5, 2);
        term.key.nfreq = spec.nfreq ? *spec.nfreq : pick(7) - 3;
      }
      terms.push_back(std::move(term));
    }
    WaveFunction f = WaveFunction::from_terms(kappa_, terms);
    return f.is_zero() ? next(spec) : f;
  }

  std::vector<WaveFunction> batch(int n, const ProbeSpec& spec = {})
  {
    std::vector<WaveFunction> out;
    for (int i = 0; i < n; ++i) out.push_back(next(spec));
    return out;
  }

private:
  int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }

  ComplexQ random_coeff()
  {
    for (;;) {
      int re = pick(7) - 3;
      int im = pick(7) - 3;
      if (re != 0 || im != 0) return {Rational(re), Rational(im)};
    }
  }

  Curvature kappa_;
  std::mt19937_64 rng_;
};

struct AlgebraReport {
  std::string relation;
  std::string regime;
  int probes = 0;
  std::uint64_t seed = 0;
  double max_residual = 0.0;
  bool exact = true;
};

inline nlohmann::json to_json(const AlgebraReport& r)
{
  return {{"relation", r.relation}, {"regime", r.regime},      {"probes", r.probes},
          {"seed", r.seed},         {"max_residual", r.max_residual}, {"exact", r.exact}};
}

/// Largest coefficient modulus of a wavefunction.
inline double residual_size(const WaveFunction& f)
{
  double m = 0.0;
  for (const auto& [key, c] : f.term_map()) m = std::max(m, std::abs(c.to_complex()));
  return m;
}

/// Checks lhs(f) == rhs(f) exactly on every probe.
inline AlgebraReport check_relation(const std::string& name, const LinearOperator& lhs, const LinearOperator& rhs,
                                    const std::vector<WaveFunction>& probes, std::uint64_t seed)
{
  AlgebraReport r;
  r.relation = name;
  r.probes = static_cast<int>(probes.size());
  r.seed = seed;
  if (!probes.empty()) r.regime = regime_name(probes.front().curvature().regime());
  for (const auto& f : probes) {
    WaveFunction diff = lhs(f) - rhs(f);
    if (!diff.is_zero()) {
      r.exact = false;
      r.max_residual = std::max(r.max_residual, residual_size(diff));
    }
  }
  return r;
}

struct Relation {
  std::string name;
  LinearOperator lhs, rhs;
};

namespace detail {

inline LinearOperator zero_operator()
{
  return {[](const WaveFunction& f) { return WaveFunction(f.curvature()); }, "0"};
}

} // namespace detail

/// The full relation list for the given regime.
inline std::vector<Relation> algebra_relations(const Curvature& k, GeneratorOptions opt = {})
{
  SphericalGenerators g = spherical_generators(k, opt);
  ParallelOperators a = parallel_ops(g);
  LinearOperator zero = detail::zero_operator();
  ComplexQ kq(k.exact());
  ComplexQ i = ComplexQ::i();
  LinearOperator minus_one = constant_operator(ComplexQ(-1), "-1");
  std::vector<Relation> rel;
  auto add = [&](std::string name, LinearOperator lhs, LinearOperator rhs) {
    rel.push_back({std::move(name), std::move(lhs), std::move(rhs)});
  };

  if (!k.is_flat()) {
    add("[A+,A-] = 2A3", commutator(g.A_plus, g.A_minus), ComplexQ(2) * g.A3);
    add("[A3,A+] = k A+", commutator(g.A3, g.A_plus), kq * g.A_plus);
    add("[A3,A-] = -k A-", commutator(g.A3, g.A_minus), -kq * g.A_minus);
    add("[B-,B+] = -2B3", commutator(g.B_minus, g.B_plus), ComplexQ(-2) * g.B3);
    add("[B3,B-] = -k B-", commutator(g.B3, g.B_minus), -kq * g.B_minus);
    add("[B3,B+] = k B+", commutator(g.B3, g.B_plus), kq * g.B_plus);
  } else {
    add("[A-,A+] = w", commutator(g.A_minus, g.A_plus), g.Omega);
    add("[A3,A+] = 0", commutator(g.A3, g.A_plus), zero);
    add("[A3,A-] = 0", commutator(g.A3, g.A_minus), zero);
    add("[B-,B+] = -w", commutator(g.B_minus, g.B_plus), minus_one * g.Omega);
    add("[B3,B+] = 0", commutator(g.B3, g.B_plus), zero);
    add("[B3,B-] = 0", commutator(g.B3, g.B_minus), zero);
  }

  add("[A+,B+] = 0", commutator(g.A_plus, g.B_plus), zero);
  add("[A+,B-] = 0", commutator(g.A_plus, g.B_minus), zero);
  add("[A-,B+] = 0", commutator(g.A_minus, g.B_plus), zero);
  add("[A-,B-] = 0", commutator(g.A_minus, g.B_minus), zero);
  add("[A3,B+] = 0", commutator(g.A3, g.B_plus), zero);
  add("[A3,B-] = 0", commutator(g.A3, g.B_minus), zero);
  add("[B3,A+] = 0", commutator(g.B3, g.A_plus), zero);
  add("[B3,A-] = 0", commutator(g.B3, g.A_minus), zero);

  add("[L3,A+] = A+", commutator(g.L3, g.A_plus), g.A_plus);
  add("[L3,A-] = -A-", commutator(g.L3, g.A_minus), minus_one * g.A_minus);
  add("[L3,B+] = B+", commutator(g.L3, g.B_plus), g.B_plus);
  add("[L3,B-] = -B-", commutator(g.L3, g.B_minus), minus_one * g.B_minus);

  add("[Omega,A+] = -k A+", commutator(g.Omega, g.A_plus), -kq * g.A_plus);
  add("[Omega,A-] = k A-", commutator(g.Omega, g.A_minus), kq * g.A_minus);
  add("[Omega,B+] = k B+", commutator(g.Omega, g.B_plus), kq * g.B_plus);
  add("[Omega,B-] = -k B-", commutator(g.Omega, g.B_minus), -kq * g.B_minus);
  add("[Omega,L3] = 0", commutator(g.Omega, g.L3), zero);

  LinearOperator two_omega = ComplexQ(2) * g.Omega;
  LinearOperator kJ = ComplexQ(-2) * kq * g.J12;
  add("[a1-,a1+] = 2 Omega", commutator(a.a1_minus, a.a1_plus), two_omega);
  add("[a2-,a2+] = 2 Omega", commutator(a.a2_minus, a.a2_plus), two_omega);
  add("[a1-,a2+] = -2k J12", commutator(a.a1_minus, a.a2_plus), kJ);
  add("[a1+,a2-] = -2k J12", commutator(a.a1_plus, a.a2_minus), kJ);
  add("[a2-,a1+] = 2k J12", commutator(a.a2_minus, a.a1_plus), -ComplexQ(1) * kJ);
  add("[a1+,a2+] = 0", commutator(a.a1_plus, a.a2_plus), zero);
  add("[a1-,a2-] = 0", commutator(a.a1_minus, a.a2_minus), zero);
  add("[J12,a2+] = -a1+", commutator(g.J12, a.a2_plus), minus_one * a.a1_plus);
  add("[J12,a2-] = -a1-", commutator(g.J12, a.a2_minus), minus_one * a.a1_minus);
  add("[J12,a1+] = a2+", commutator(g.J12, a.a1_plus), a.a2_plus);
  add("[J12,a1-] = a2-", commutator(g.J12, a.a1_minus), a.a2_minus);
  for (int idx = 1; idx <= 2; ++idx) {
    const LinearOperator& up = idx == 1 ? a.a1_plus : a.a2_plus;
    const LinearOperator& down = idx == 1 ? a.a1_minus : a.a2_minus;
    std::string s = std::to_string(idx);
    add("[Omega,a" + s + "+] = -k a" + s + "+", commutator(g.Omega, up), -kq * up);
    add("[Omega,a" + s + "-] = k a" + s + "-", commutator(g.Omega, down), kq * down);
  }

  if (k.is_flat()) {
    LinearOperator h = hamiltonian(g, HamiltonianMode::flat);
    LinearOperator two_w = ComplexQ(2) * g.Omega;
    add("[H,A+] = 2w A+", commutator(h, g.A_plus), g.A_plus * two_w);
    add("[H,A-] = -2w A-", commutator(h, g.A_minus), minus_one * g.A_minus * two_w);
    add("[H,B+] = -2w B+", commutator(h, g.B_plus), minus_one * g.B_plus * two_w);
    add("[H,B-] = 2w B-", commutator(h, g.B_minus), g.B_minus * two_w);
  }
  return rel;
}

inline std::vector<AlgebraReport> check_algebra(const Curvature& k, std::uint64_t seed, int probe_count = 20,
                                                GeneratorOptions opt = {})
{
  ProbeFactory factory(k, seed);
  std::vector<WaveFunction> probes = factory.batch(probe_count);
  std::vector<AlgebraReport> out;
  for (const auto& r : algebra_relations(k, opt)) out.push_back(check_relation(r.name, r.lhs, r.rhs, probes, seed));
  return out;
}

/// Pairwise agreement of every Hamiltonian form available in the regime.
inline std::vector<AlgebraReport> check_hamiltonian_modes(const Curvature& k, std::uint64_t seed, int probe_count = 20)
{
  ProbeFactory factory(k, seed);
  std::vector<WaveFunction> probes = factory.batch(probe_count);
  SphericalGenerators g = spherical_generators(k);
  std::vector<HamiltonianMode> modes;
  if (k.is_flat())
    modes = {HamiltonianMode::flat, HamiltonianMode::viaShift, HamiltonianMode::laplacian};
  else
    modes = {HamiltonianMode::viaAB, HamiltonianMode::viaShift, HamiltonianMode::viaCasimir, HamiltonianMode::laplacian};
  std::vector<AlgebraReport> out;
  LinearOperator ref = hamiltonian(g, modes.front());
  for (std::size_t m = 1; m < modes.size(); ++m) {
    out.push_back(check_relation(std::string("H[") + mode_name(modes.front()) + "] = H[" + mode_name(modes[m]) + "]", ref,
                                 hamiltonian(g, modes[m]), probes, seed));
  }
  return out;
}

/// Each symmetry commutes with H; D12 = (w + k) L3; I01 + I02 - k I12 = H.
inline std::vector<AlgebraReport> check_symmetries(const Curvature& k, std::uint64_t seed, int probe_count = 20)
{
  ProbeFactory factory(k, seed);
  std::vector<WaveFunction> probes = factory.batch(probe_count);
  SphericalGenerators g = spherical_generators(k);
  SymmetrySuite s = symmetry_suite(g);
  LinearOperator h = hamiltonian(g, k.is_flat() ? HamiltonianMode::flat : HamiltonianMode::viaAB);
  LinearOperator zero = detail::zero_operator();
  Rational kappa = k.exact();
  std::vector<AlgebraReport> out;
  for (const auto& [name, op] : s.named())
    out.push_back(check_relation("[" + name + ",H] = 0", commutator(op, h), zero, probes, seed));
  LinearOperator d_expected =
      label_scalar([kappa](const Rational& w, int ell) { return ComplexQ((w + kappa) * ell); }, "(w+k) L3");
  out.push_back(check_relation("D12 = (w+k) L3", s.D12, d_expected, probes, seed));
  out.push_back(check_relation("I01 + I02 - k I12 = H", s.I01 + s.I02 - ComplexQ(kappa) * s.I12, h, probes, seed));
  return out;
}

/// a_i- H - H a_i- = 2(w + k/2) a_i-, with w the label of the input. At zero
/// curvature the frequency is fixed and the relation reduces to [H, a_i-] = 2w a_i-.
inline std::vector<AlgebraReport> intertwine_check(const Curvature& k, std::uint64_t seed, int probe_count = 20,
                                                   ProbeSpec spec = {})
{
  ProbeFactory factory(k, seed);
  std::vector<WaveFunction> probes = factory.batch(probe_count, spec);
  SphericalGenerators g = spherical_generators(k);
  ParallelOperators a = parallel_ops(g);
  LinearOperator h = hamiltonian(g, k.is_flat() ? HamiltonianMode::flat : HamiltonianMode::viaAB);
  Rational kappa = k.exact();
  LinearOperator shift = label_scalar([kappa](const Rational& w, int) { return ComplexQ(2 * (w + kappa / 2)); },
                                      "2(w+k/2)");
  std::vector<AlgebraReport> out;
  out.push_back(check_relation("a1- H - H a1- = 2(w+k/2) a1-", commutator(a.a1_minus, h), a.a1_minus * shift, probes, seed));
  out.push_back(check_relation("a2- H - H a2- = 2(w+k/2) a2-", commutator(a.a2_minus, h), a.a2_minus * shift, probes, seed));
  LinearOperator shift_up = label_scalar([kappa](const Rational& w, int) { return ComplexQ(2 * (w - kappa / 2)); },
                                         "2(w-k/2)");
  out.push_back(check_relation("H a1+ - a1+ H = 2(w-k/2) a1+", commutator(h, a.a1_plus), a.a1_plus * shift_up, probes, seed));
  return out;
}

} // namespace curvosc

#endif
