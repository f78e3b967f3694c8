#ifndef CURVOSC_WAVEALG_HPP
#define CURVOSC_WAVEALG_HPP

// Exact symbolic wavefunctions
//
//   sum_k  c_k  S_k(theta)^a C_k(theta)^b  e^{i l phi}  e^{i n kappa zeta}     (kappa != 0)
//   sum_k  c_k  theta^a e^{-sigma theta^2 / 2}  e^{i l phi}                    (kappa == 0)
//
// with exact complex-rational coefficients and rational exponents. The class
// is closed under differentiation in theta, multiplication and division by
// T_k(theta), and the phase relabelings that the ladder operators use.

#include "curvosc/ktrig.hpp"
#include "curvosc/rational.hpp"

#include "json.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <ostream>
#include <tuple>
#include <vector>

namespace curvosc {

/// Labels of a single monomial. In the curved regime gsigma is 0; in the
/// flat regime b and nfreq are 0.
struct TermKey {
  Rational a;
  Rational b;
  int ell = 0;
  long nfreq = 0;
  Rational gsigma;

  friend bool operator<(const TermKey& x, const TermKey& y)
  {
    if (x.ell != y.ell) return x.ell < y.ell;
    if (x.nfreq != y.nfreq) return x.nfreq < y.nfreq;
    if (x.gsigma != y.gsigma) return x.gsigma < y.gsigma;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  }
  friend bool operator==(const TermKey& x, const TermKey& y)
  {
    return x.ell == y.ell && x.nfreq == y.nfreq && x.gsigma == y.gsigma && x.a == y.a && x.b == y.b;
  }
};

struct WaveTerm {
  ComplexQ coeff;
  TermKey key;
};

class WaveFunction {
public:
  using TermMap = std::map<TermKey, ComplexQ>;

  explicit WaveFunction(Curvature k = Curvature()) : kappa_(std::move(k)) {}

  /// c S^a C^b e^{i ell phi} e^{i nfreq kappa zeta}
  static WaveFunction monomial(const Curvature& k, ComplexQ coeff, Rational a, Rational b, int ell, long nfreq)
  {
    if (k.is_flat()) throw RegimeError("trigonometric monomial requires nonzero curvature");
    WaveFunction f(k);
    f.accumulate(TermKey{std::move(a), std::move(b), ell, nfreq, Rational(0)}, coeff);
    return f;
  }

  /// c theta^a e^{-sigma theta^2/2} e^{i ell phi}, flat regime only.
  static WaveFunction gaussian(ComplexQ coeff, Rational a, int ell, Rational gsigma)
  {
    if (gsigma <= 0) throw std::invalid_argument("gaussian width parameter must be positive");
    WaveFunction f{Curvature()};
    f.accumulate(TermKey{std::move(a), Rational(0), ell, 0, std::move(gsigma)}, coeff);
    return f;
  }

  /// Builds the canonical form of an arbitrary term list: like terms merged,
  /// zero coefficients dropped.
  static WaveFunction from_terms(const Curvature& k, const std::vector<WaveTerm>& terms)
  {
    WaveFunction f(k);
    for (const auto& t : terms) {
      f.check_key(t.key);
      f.accumulate(t.key, t.coeff);
    }
    return f;
  }

  const Curvature& curvature() const { return kappa_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const TermMap& term_map() const { return terms_; }

  std::vector<WaveTerm> terms() const
  {
    std::vector<WaveTerm> out;
    out.reserve(terms_.size());
    for (const auto& [key, c] : terms_) out.push_back({c, key});
    return out;
  }

  /// Frequency omega carried by a term: nfreq * kappa, or gsigma when flat.
  Rational omega(const TermKey& key) const
  {
    if (kappa_.is_flat()) return key.gsigma;
    return Rational(key.nfreq) * kappa_.exact();
  }

  void accumulate(const TermKey& key, const ComplexQ& c)
  {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  WaveFunction& operator+=(const WaveFunction& g)
  {
    require_same_regime(g);
    for (const auto& [key, c] : g.terms_) accumulate(key, c);
    return *this;
  }
  WaveFunction& operator-=(const WaveFunction& g)
  {
    require_same_regime(g);
    for (const auto& [key, c] : g.terms_) accumulate(key, -c);
    return *this;
  }

  friend WaveFunction operator+(WaveFunction f, const WaveFunction& g) { return f += g; }
  friend WaveFunction operator-(WaveFunction f, const WaveFunction& g) { return f -= g; }
  friend WaveFunction operator*(const ComplexQ& c, const WaveFunction& f)
  {
    WaveFunction out(f.kappa_);
    if (c.is_zero()) return out;
    for (const auto& [key, v] : f.terms_) out.terms_.emplace(key, c * v);
    return out;
  }
  friend WaveFunction operator-(const WaveFunction& f) { return ComplexQ(-1) * f; }

  /// Exact identity of canonical forms.
  friend bool operator==(const WaveFunction& f, const WaveFunction& g)
  {
    return f.kappa_ == g.kappa_ && f.terms_ == g.terms_;
  }
  friend bool operator!=(const WaveFunction& f, const WaveFunction& g) { return !(f == g); }

  void require_same_regime(const WaveFunction& g) const
  {
    if (kappa_ != g.kappa_)
      throw RegimeError("wavefunctions over different curvatures: " + to_string(kappa_.exact()) + " vs " +
                        to_string(g.kappa_.exact()));
  }

private:
  void check_key(const TermKey& key) const
  {
    if (kappa_.is_flat()) {
      if (key.b != 0 || key.nfreq != 0 || key.gsigma <= 0)
        throw RegimeError("flat-regime term must carry only a and a positive gsigma");
    } else if (key.gsigma != 0) {
      throw RegimeError("curved-regime term cannot carry a gaussian width");
    }
  }

  Curvature kappa_;
  TermMap terms_;
};

inline WaveFunction add(const WaveFunction& f, const WaveFunction& g) { return f + g; }
inline WaveFunction scale(const ComplexQ& c, const WaveFunction& f) { return c * f; }
inline bool equals(const WaveFunction& f, const WaveFunction& g)
{
  f.require_same_regime(g);
  return f == g;
}
inline WaveFunction canonicalize(const WaveFunction& f) { return WaveFunction::from_terms(f.curvature(), f.terms()); }

/// Applies fn to every term and accumulates the produced terms.
template <class Fn>
WaveFunction transform_terms(const WaveFunction& f, Fn&& fn)
{
  WaveFunction out(f.curvature());
  for (const auto& [key, c] : f.term_map()) fn(key, c, out);
  return out;
}

/// Multiplies each term by a scalar that depends on its labels.
inline WaveFunction scale_by_label(const WaveFunction& f, const std::function<ComplexQ(const TermKey&)>& factor)
{
  return transform_terms(f, [&](const TermKey& key, const ComplexQ& c, WaveFunction& out) {
    out.accumulate(key, factor(key) * c);
  });
}

/// d/dtheta, using dS = C, dC = -kappa S, and for the flat gaussian class
/// d(theta^a e^{-s theta^2/2}) = (a theta^{a-1} - s theta^{a+1}) e^{-s theta^2/2}.
inline WaveFunction d_theta(const WaveFunction& f)
{
  const Rational& kappa = f.curvature().exact();
  bool flat = f.curvature().is_flat();
  return transform_terms(f, [&](const TermKey& key, const ComplexQ& c, WaveFunction& out) {
    if (flat) {
      if (key.a != 0) out.accumulate({key.a - 1, key.b, key.ell, key.nfreq, key.gsigma}, ComplexQ(key.a) * c);
      out.accumulate({key.a + 1, key.b, key.ell, key.nfreq, key.gsigma}, ComplexQ(-key.gsigma) * c);
      return;
    }
    if (key.a != 0) out.accumulate({key.a - 1, key.b + 1, key.ell, key.nfreq, key.gsigma}, ComplexQ(key.a) * c);
    if (key.b != 0) {
      Rational factor = -kappa * key.b;
      out.accumulate({key.a + 1, key.b - 1, key.ell, key.nfreq, key.gsigma}, ComplexQ(factor) * c);
    }
  });
}

/// Multiplication by T_k(theta)^power (theta^power when flat).
inline WaveFunction mul_t_power(const WaveFunction& f, int power)
{
  bool flat = f.curvature().is_flat();
  return transform_terms(f, [&](const TermKey& key, const ComplexQ& c, WaveFunction& out) {
    TermKey k = key;
    k.a += power;
    if (!flat) k.b -= power;
    out.accumulate(k, c);
  });
}

inline WaveFunction mul_t(const WaveFunction& f) { return mul_t_power(f, 1); }
inline WaveFunction div_t(const WaveFunction& f) { return mul_t_power(f, -1); }
inline WaveFunction mul_t2(const WaveFunction& f) { return mul_t_power(f, 2); }

/// Relabels e^{i l phi} -> e^{i (l+d) phi}.
inline WaveFunction shift_ell(const WaveFunction& f, int d)
{
  return transform_terms(f, [&](const TermKey& key, const ComplexQ& c, WaveFunction& out) {
    TermKey k = key;
    k.ell += d;
    out.accumulate(k, c);
  });
}

/// Relabels the frequency: nfreq -> nfreq + d, i.e. omega -> omega + d kappa.
inline WaveFunction shift_n(const WaveFunction& f, int d)
{
  if (f.curvature().is_flat()) throw RegimeError("shift_n is undefined at zero curvature");
  return transform_terms(f, [&](const TermKey& key, const ComplexQ& c, WaveFunction& out) {
    TermKey k = key;
    k.nfreq += d;
    out.accumulate(k, c);
  });
}

namespace detail {

inline double checked_pow(double base, const Rational& exponent, const char* what)
{
  if (exponent == 0) return 1.0;
  if (std::abs(base) < 1e-15) {
    if (exponent < 0) throw PoleError(std::string("wavefunction pole: ") + what + " vanishes");
    return 0.0;
  }
  if (base < 0.0 && exponent.get_den() != 1)
    throw std::domain_error(std::string("non-integer power of negative ") + what);
  return std::pow(base, exponent.get_d());
}

} // namespace detail

/// Numeric value at (theta, phi, zeta).
inline std::complex<double> eval(const WaveFunction& f, double theta, double phi = 0.0, double zeta = 0.0)
{
  const Curvature& k = f.curvature();
  std::complex<double> sum = 0.0;
  if (k.is_flat()) {
    for (const auto& [key, c] : f.term_map()) {
      double radial = detail::checked_pow(theta, key.a, "theta") *
                      std::exp(-key.gsigma.get_d() * theta * theta / 2.0);
      sum += c.to_complex() * radial * std::polar(1.0, key.ell * phi);
    }
    return sum;
  }
  double s = s_kappa(k, theta);
  double cc = c_kappa(k, theta);
  for (const auto& [key, c] : f.term_map()) {
    double radial = detail::checked_pow(s, key.a, "S_kappa") * detail::checked_pow(cc, key.b, "C_kappa");
    double phase = key.ell * phi + static_cast<double>(key.nfreq) * k.value() * zeta;
    sum += c.to_complex() * radial * std::polar(1.0, phase);
  }
  return sum;
}

inline std::ostream& operator<<(std::ostream& os, const WaveFunction& f)
{
  if (f.is_zero()) return os << "0";
  bool first = true;
  for (const auto& [key, c] : f.term_map()) {
    if (!first) os << " + ";
    first = false;
    os << c;
    if (f.curvature().is_flat())
      os << " th^" << key.a << " g(" << key.gsigma << ")";
    else
      os << " S^" << key.a << " C^" << key.b;
    os << " [l=" << key.ell;
    if (!f.curvature().is_flat()) os << ", n=" << key.nfreq;
    os << "]";
  }
  return os;
}

/// Array of {re, im, a_num, a_den, b_num, b_den, ell, nfreq | gsigma}.
/// Coefficients and gsigma are exact rationals written as "p/q" strings.
inline nlohmann::json to_json(const WaveFunction& f)
{
  nlohmann::json arr = nlohmann::json::array();
  bool flat = f.curvature().is_flat();
  for (const auto& [key, c] : f.term_map()) {
    nlohmann::json t;
    t["re"] = to_string(c.re);
    t["im"] = to_string(c.im);
    t["a_num"] = key.a.get_num().get_si();
    t["a_den"] = key.a.get_den().get_si();
    t["b_num"] = key.b.get_num().get_si();
    t["b_den"] = key.b.get_den().get_si();
    t["ell"] = key.ell;
    if (flat)
      t["gsigma"] = to_string(key.gsigma);
    else
      t["nfreq"] = key.nfreq;
    arr.push_back(std::move(t));
  }
  return arr;
}

inline WaveFunction wavefunction_from_json(const nlohmann::json& arr, const Curvature& k)
{
  std::vector<WaveTerm> terms;
  for (const auto& t : arr) {
    WaveTerm term;
    term.coeff = ComplexQ(parse_rational(t.at("re").get<std::string>()), parse_rational(t.at("im").get<std::string>()));
    term.key.a = make_rational(t.at("a_num").get<long>(), t.at("a_den").get<long>());
    term.key.b = make_rational(t.at("b_num").get<long>(), t.at("b_den").get<long>());
    term.key.ell = t.at("ell").get<int>();
    if (k.is_flat())
      term.key.gsigma = parse_rational(t.at("gsigma").get<std::string>());
    else
      term.key.nfreq = t.at("nfreq").get<long>();
    terms.push_back(std::move(term));
  }
  return WaveFunction::from_terms(k, terms);
}

} // namespace curvosc

#endif
