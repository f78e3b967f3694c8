#ifndef CURVOSC_SPECTRUM_HPP
#define CURVOSC_SPECTRUM_HPP

// Representation lattices, ladder-built eigenfunctions, energy levels and
// degeneracies of the 2D curved oscillator.

#include "curvosc/qops.hpp"

#include "json.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace curvosc {

/// Raised when a ladder label lies outside its representation.
class LatticeError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

struct Representation {
  Curvature kappa;
  /// 2j: nbar for k > 0, nunder for k < 0. Unused at k = 0.
  int jtwice = 0;
  /// Oscillator frequency at k = 0.
  Rational omega;
  WaveFunction extremal;
};

struct StateLabel {
  int p = 0;
  int q = 0;
  /// Frequency label w / |k| (level index at k = 0) and angular momentum.
  long n = 0;
  int ell = 0;

  friend bool operator==(const StateLabel&, const StateLabel&) = default;
};

/// (n, l) reached from the extremal state by (A+)^q (B-)^p.
inline StateLabel make_label(const Representation& rep, int p, int q)
{
  StateLabel s{p, q, 0, q - p};
  switch (rep.kappa.regime()) {
  case Regime::positive: s.n = rep.jtwice - p - q; break;
  case Regime::negative: s.n = rep.jtwice + p + q; break;
  case Regime::zero: s.n = p + q; break;
  }
  return s;
}

namespace detail {

inline void require_annihilated(const SphericalGenerators& g, const WaveFunction& psi)
{
  if (!g.A_minus(psi).is_zero() || !g.B_plus(psi).is_zero())
    throw std::logic_error("extremal candidate is not annihilated by A- and B+");
}

} // namespace detail

/// S^{1/2} C^{nfreq + 1/2} with l = 0 and nfreq = sign(k) 2j. The state is
/// checked against A- psi = B+ psi = 0 before it is returned.
inline WaveFunction extremal_state(const Curvature& k, int jtwice)
{
  if (k.is_flat()) throw RegimeError("use flat_extremal_state at zero curvature");
  if (jtwice < 0) throw std::invalid_argument("2j must be non-negative");
  if (k.regime() == Regime::negative && jtwice < 1)
    throw std::invalid_argument("negative curvature requires 2j >= 1");
  long nfreq = k.regime() == Regime::positive ? jtwice : -jtwice;
  WaveFunction psi = WaveFunction::monomial(k, ComplexQ(1), Rational(1, 2), Rational(nfreq) + Rational(1, 2), 0, nfreq);
  detail::require_annihilated(spherical_generators(k), psi);
  return psi;
}

/// theta^{1/2} e^{-w theta^2/2}, l = 0.
inline WaveFunction flat_extremal_state(const Rational& omega)
{
  if (omega <= 0) throw std::invalid_argument("frequency must be positive");
  WaveFunction psi = WaveFunction::gaussian(ComplexQ(1), Rational(1, 2), 0, omega);
  detail::require_annihilated(spherical_generators(Curvature()), psi);
  return psi;
}

inline Representation make_representation(const Curvature& k, int jtwice)
{
  return {k, jtwice, Rational(0), extremal_state(k, jtwice)};
}

inline Representation make_flat_representation(const Rational& omega)
{
  return {Curvature(), 0, omega, flat_extremal_state(omega)};
}

inline bool in_lattice(const Representation& rep, int p, int q)
{
  if (p < 0 || q < 0) return false;
  if (rep.kappa.regime() == Regime::positive) return p <= rep.jtwice && q <= rep.jtwice;
  return true;
}

/// (A+)^q (B-)^p applied to the extremal state, unnormalized.
inline WaveFunction ladder_state(const Representation& rep, int p, int q)
{
  if (!in_lattice(rep, p, q))
    throw LatticeError("label (p=" + std::to_string(p) + ", q=" + std::to_string(q) + ") outside the representation");
  SphericalGenerators g = spherical_generators(rep.kappa);
  WaveFunction psi = rep.extremal;
  for (int i = 0; i < p; ++i) psi = g.B_minus(psi);
  for (int i = 0; i < q; ++i) psi = g.A_plus(psi);
  if (psi.is_zero()) throw std::logic_error("ladder action produced the zero function inside the lattice");
  return psi;
}

inline WaveFunction ladder_state(const Representation& rep, const StateLabel& label)
{
  return ladder_state(rep, label.p, label.q);
}

/// Number of nonzero ladder states of a k > 0 representation.
inline int representation_dimension(const Representation& rep)
{
  if (rep.kappa.regime() != Regime::positive) throw RegimeError("only k > 0 representations are finite");
  int count = 0;
  for (int p = 0; p <= rep.jtwice; ++p)
    for (int q = 0; q <= rep.jtwice; ++q)
      if (in_lattice(rep, p, q)) {
        ladder_state(rep, p, q);
        ++count;
      }
  return count;
}

/// Common eigenvalue of both Casimirs on a representation: k n (n + 2) with
/// n the signed frequency label of the extremal state.
inline Rational casimir_eigenvalue(const Representation& rep)
{
  if (rep.kappa.is_flat()) throw RegimeError("Casimir operators are singular at zero curvature");
  Rational nf = rep.kappa.regime() == Regime::positive ? rep.jtwice : -rep.jtwice;
  return rep.kappa.exact() * nf * (nf + 2);
}

/// True iff H psi = E psi exactly.
inline bool eigen_check(const Curvature& k, const WaveFunction& psi, const Rational& energy)
{
  if (psi.is_zero()) return false;
  LinearOperator h = hamiltonian(k, k.is_flat() ? HamiltonianMode::flat : HamiltonianMode::viaAB);
  return h(psi) == ComplexQ(energy) * psi;
}

/// 2 w0 (n + 1) + k (n + 1)^2.
inline Rational level_energy(const Curvature& k, const Rational& omega0, int n)
{
  Rational m(n + 1);
  return 2 * omega0 * m + k.exact() * m * m;
}

struct StateEntry {
  StateLabel label;
  int rep_jtwice = 0;
  bool eigen_ok = false;
};

struct Level {
  int n = 0;
  Rational energy;
  int degeneracy = 0;
  std::vector<StateEntry> states;
  bool eigen_ok = true;
};

struct Spectrum {
  Curvature kappa;
  Rational omega0;
  long n0 = 0;
  std::vector<Level> levels;
  std::vector<std::string> notices;

  bool all_eigen_ok() const
  {
    for (const auto& l : levels)
      if (!l.eigen_ok) return false;
    return true;
  }
};

/// k != 0: omega0 = n0 |k|. Levels 0..nmax; for k < 0 truncated at p_max = n0 - 1.
inline Spectrum enumerate_levels(const Curvature& k, long n0, int nmax)
{
  if (k.is_flat()) throw RegimeError("use enumerate_flat_levels at zero curvature");
  if (n0 < 1) throw std::invalid_argument("n0 must be at least 1 (no discrete states otherwise)");
  if (nmax < 0) throw std::invalid_argument("nmax must be non-negative");
  Spectrum s;
  s.kappa = k;
  s.n0 = n0;
  s.omega0 = Rational(n0) * abs(k.exact());
  int top = nmax;
  if (k.regime() == Regime::negative) {
    int p_max = static_cast<int>(n0 - 1);
    if (nmax > p_max) {
      s.notices.push_back("levels truncated at p_max = " + std::to_string(p_max) + " (n0 = " + std::to_string(n0) + ")");
      top = p_max;
    }
  }
  for (int n = 0; n <= top; ++n) {
    int jtwice = k.regime() == Regime::positive ? static_cast<int>(n0) + n : static_cast<int>(n0) - n;
    Representation rep = make_representation(k, jtwice);
    Level level;
    level.n = n;
    level.energy = level_energy(k, s.omega0, n);
    for (int p = 0; p <= n; ++p) {
      StateLabel label = make_label(rep, p, n - p);
      WaveFunction psi = ladder_state(rep, label);
      bool ok = eigen_check(k, psi, level.energy);
      level.eigen_ok = level.eigen_ok && ok;
      level.states.push_back({label, jtwice, ok});
    }
    level.degeneracy = static_cast<int>(level.states.size());
    s.levels.push_back(std::move(level));
  }
  return s;
}

inline Spectrum enumerate_flat_levels(const Rational& omega, int nmax)
{
  if (nmax < 0) throw std::invalid_argument("nmax must be non-negative");
  Curvature k;
  Representation rep = make_flat_representation(omega);
  Spectrum s;
  s.kappa = k;
  s.omega0 = omega;
  for (int n = 0; n <= nmax; ++n) {
    Level level;
    level.n = n;
    level.energy = level_energy(k, omega, n);
    for (int p = 0; p <= n; ++p) {
      StateLabel label = make_label(rep, p, n - p);
      bool ok = eigen_check(k, ladder_state(rep, label), level.energy);
      level.eigen_ok = level.eigen_ok && ok;
      level.states.push_back({label, 0, ok});
    }
    level.degeneracy = static_cast<int>(level.states.size());
    s.levels.push_back(std::move(level));
  }
  return s;
}

struct DegeneracyRow {
  int n = 0;
  int enumerated = 0;
  int printed = 0;
  std::string printed_formula;
  bool match = false;
};

/// Enumerated degeneracy against the closed forms n+1 (k >= 0) and 2p+1 (k < 0).
inline std::vector<DegeneracyRow> degeneracy_audit(const Spectrum& s)
{
  std::vector<DegeneracyRow> rows;
  bool negative = s.kappa.regime() == Regime::negative;
  for (const auto& l : s.levels) {
    DegeneracyRow r;
    r.n = l.n;
    r.enumerated = l.degeneracy;
    r.printed = negative ? 2 * l.n + 1 : l.n + 1;
    r.printed_formula = negative ? "2p+1" : "n+1";
    r.match = r.enumerated == r.printed;
    rows.push_back(r);
  }
  return rows;
}

inline nlohmann::json to_json(const Spectrum& s)
{
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : s.levels) {
    nlohmann::json states = nlohmann::json::array();
    for (const auto& st : l.states)
      states.push_back({{"p", st.label.p}, {"q", st.label.q}, {"n", st.label.n}, {"ell", st.label.ell},
                        {"rep_jtwice", st.rep_jtwice}});
    levels.push_back({{"n", l.n},
                      {"energy_num", l.energy.get_num().get_si()},
                      {"energy_den", l.energy.get_den().get_si()},
                      {"degeneracy", l.degeneracy},
                      {"states", std::move(states)}});
  }
  nlohmann::json j;
  j["kappa"] = to_string(s.kappa.exact());
  j["omega0"] = to_string(s.omega0);
  j["levels"] = std::move(levels);
  if (!s.notices.empty()) j["notices"] = s.notices;
  return j;
}

} // namespace curvosc

#endif
