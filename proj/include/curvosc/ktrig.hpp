#ifndef CURVOSC_KTRIG_HPP
#define CURVOSC_KTRIG_HPP

// Curvature-dependent trigonometry: C_k, S_k, T_k, Cot_k and their
// derivatives, interpolating circular (k > 0), linear (k = 0) and
// hyperbolic (k < 0) functions.

#include "curvosc/rational.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace curvosc {

enum class Regime { negative, zero, positive };

inline const char* regime_name(Regime r)
{
  switch (r) {
  case Regime::negative: return "negative";
  case Regime::zero: return "zero";
  case Regime::positive: return "positive";
  }
  return "?";
}

/// Raised when a function is evaluated at a coordinate singularity.
class PoleError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Raised when an operation is used outside the curvature regime it is
/// defined for.
class RegimeError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Sectional curvature. The exact value drives the symbolic layer; the
/// regime is read from the sign of the exact value, never from a float.
class Curvature {
public:
  Curvature() : Curvature(Rational(0)) {}
  explicit Curvature(Rational kappa) : exact_(std::move(kappa))
  {
    exact_.canonicalize();
    value_ = exact_.get_d();
    int s = sgn(exact_);
    regime_ = s > 0 ? Regime::positive : (s < 0 ? Regime::negative : Regime::zero);
  }
  Curvature(long num, long den) : Curvature(make_rational(num, den)) {}

  static Curvature parse(std::string_view text) { return Curvature(parse_rational(text)); }

  const Rational& exact() const { return exact_; }
  double value() const { return value_; }
  Regime regime() const { return regime_; }
  bool is_flat() const { return regime_ == Regime::zero; }

  friend bool operator==(const Curvature& a, const Curvature& b) { return a.exact_ == b.exact_; }
  friend bool operator!=(const Curvature& a, const Curvature& b) { return !(a == b); }

private:
  Rational exact_;
  double value_ = 0.0;
  Regime regime_ = Regime::zero;
};

inline double c_kappa(const Curvature& k, double r)
{
  switch (k.regime()) {
  case Regime::positive: return std::cos(std::sqrt(k.value()) * r);
  case Regime::zero: return 1.0;
  case Regime::negative: return std::cosh(std::sqrt(-k.value()) * r);
  }
  return 1.0;
}

inline double s_kappa(const Curvature& k, double r)
{
  switch (k.regime()) {
  case Regime::positive: {
    double rk = std::sqrt(k.value());
    return std::sin(rk * r) / rk;
  }
  case Regime::zero: return r;
  case Regime::negative: {
    double rk = std::sqrt(-k.value());
    return std::sinh(rk * r) / rk;
  }
  }
  return r;
}

/// T_k = S_k / C_k. The hyperbolic branch uses tanh directly so that large
/// geodesic distances do not produce inf/inf.
inline double t_kappa(const Curvature& k, double r)
{
  switch (k.regime()) {
  case Regime::positive: {
    double c = c_kappa(k, r);
    if (c == 0.0) throw PoleError("T_kappa pole: C_kappa vanishes at r = " + std::to_string(r));
    return s_kappa(k, r) / c;
  }
  case Regime::zero: return r;
  case Regime::negative: {
    double rk = std::sqrt(-k.value());
    return std::tanh(rk * r) / rk;
  }
  }
  return r;
}

inline double cot_kappa(const Curvature& k, double r)
{
  double s = s_kappa(k, r);
  if (s == 0.0) throw PoleError("Cot_kappa pole: S_kappa vanishes at r = " + std::to_string(r));
  return c_kappa(k, r) / s;
}

/// dS_k/dr = C_k
inline double d_s(const Curvature& k, double r) { return c_kappa(k, r); }

/// dC_k/dr = -k S_k
inline double d_c(const Curvature& k, double r) { return -k.value() * s_kappa(k, r); }

/// Inverse of T_k on its principal branch. Returns NaN when t lies outside
/// the range of T_k (|t| >= 1/sqrt(-k) for k < 0).
inline double arc_t_kappa(const Curvature& k, double t)
{
  switch (k.regime()) {
  case Regime::positive: {
    double rk = std::sqrt(k.value());
    return std::atan(rk * t) / rk;
  }
  case Regime::zero: return t;
  case Regime::negative: {
    double rk = std::sqrt(-k.value());
    if (std::abs(rk * t) >= 1.0) return std::nan("");
    return std::atanh(rk * t) / rk;
  }
  }
  return t;
}

/// Upper end of the radial coordinate range: the equator x0 = 0 for k > 0,
/// unbounded otherwise.
inline double radial_limit(const Curvature& k)
{
  if (k.regime() == Regime::positive) return M_PI / (2.0 * std::sqrt(k.value()));
  return INFINITY;
}

} // namespace curvosc

#endif
