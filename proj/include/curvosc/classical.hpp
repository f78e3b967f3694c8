#ifndef CURVOSC_CLASSICAL_HPP
#define CURVOSC_CLASSICAL_HPP

// Classical curved oscillator in spherical canonical coordinates
// (theta, phi, zeta; p_theta, p_phi, p_zeta), with p_zeta playing the role
// of the frequency omega.
//
//   H = p_theta^2 + p_phi^2 / S^2 + p_zeta^2 T^2

#include "curvosc/ktrig.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvosc {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Forward-mode jets over the six phase-space variables

inline constexpr int kPhaseDim = 6;
enum PhaseIndex { iTheta = 0, iPhi = 1, iZeta = 2, iPTheta = 3, iPPhi = 4, iPZeta = 5 };

struct Jet {
  cplx v;
  std::array<cplx, kPhaseDim> d{};

  Jet() = default;
  Jet(cplx value) : v(value) {}
  Jet(double value) : v(value) {}

  static Jet variable(int index, double value)
  {
    Jet j(value);
    j.d[static_cast<std::size_t>(index)] = 1.0;
    return j;
  }

  Jet& operator+=(const Jet& o)
  {
    v += o.v;
    for (int i = 0; i < kPhaseDim; ++i) d[i] += o.d[i];
    return *this;
  }
  Jet& operator-=(const Jet& o)
  {
    v -= o.v;
    for (int i = 0; i < kPhaseDim; ++i) d[i] -= o.d[i];
    return *this;
  }
  Jet& operator*=(const Jet& o)
  {
    for (int i = 0; i < kPhaseDim; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Jet& operator/=(const Jet& o)
  {
    cplx inv = 1.0 / o.v;
    for (int i = 0; i < kPhaseDim; ++i) d[i] = (d[i] - v * inv * o.d[i]) * inv;
    v *= inv;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }
  friend Jet operator-(Jet a)
  {
    a.v = -a.v;
    for (auto& x : a.d) x = -x;
    return a;
  }
};

/// f(x) with derivative df at x.v.
inline Jet chain(const Jet& x, cplx f, cplx df)
{
  Jet r(f);
  for (int i = 0; i < kPhaseDim; ++i) r.d[i] = df * x.d[i];
  return r;
}

inline Jet exp(const Jet& x)
{
  cplx e = std::exp(x.v);
  return chain(x, e, e);
}
inline Jet cos(const Jet& x) { return chain(x, std::cos(x.v), -std::sin(x.v)); }
inline Jet sin(const Jet& x) { return chain(x, std::sin(x.v), std::cos(x.v)); }

/// e^{i s x}
inline Jet phase(const Jet& x, double s) { return exp(cplx(0.0, s) * x); }

using PhaseVars = std::array<Jet, kPhaseDim>;
using PhaseFunction = std::function<Jet(const PhaseVars&)>;

struct PhasePoint {
  double theta = 0.0;
  double phi = 0.0;
  double zeta = 0.0;
  double p_theta = 0.0;
  double p_phi = 0.0;
  double p_zeta = 0.0;

  std::array<double, kPhaseDim> as_array() const { return {theta, phi, zeta, p_theta, p_phi, p_zeta}; }
  static PhasePoint from_array(const std::array<double, kPhaseDim>& a) { return {a[0], a[1], a[2], a[3], a[4], a[5]}; }
};

inline PhaseVars seed_jets(const PhasePoint& pt)
{
  auto a = pt.as_array();
  PhaseVars vars;
  for (int i = 0; i < kPhaseDim; ++i) vars[i] = Jet::variable(i, a[i]);
  return vars;
}

inline cplx evaluate(const PhaseFunction& f, const PhasePoint& pt) { return f(seed_jets(pt)).v; }

/// S, C, T of a jet argument using dS = C, dC = -k S.
struct KTrigJet {
  Jet S, C, T;
};

inline KTrigJet ktrig_jet(const Curvature& k, const Jet& theta)
{
  double r = theta.v.real();
  double s = s_kappa(k, r), c = c_kappa(k, r);
  KTrigJet out;
  out.S = chain(theta, s, c);
  out.C = chain(theta, c, -k.value() * s);
  out.T = out.S / out.C;
  return out;
}

/// Canonical bracket {f, g} from analytic partials.
inline cplx poisson_bracket(const PhaseFunction& f, const PhaseFunction& g, const PhasePoint& pt)
{
  PhaseVars vars = seed_jets(pt);
  Jet jf = f(vars), jg = g(vars);
  cplx sum = 0.0;
  for (int i = 0; i < 3; ++i) sum += jf.d[i] * jg.d[i + 3] - jf.d[i + 3] * jg.d[i];
  return sum;
}

/// Canonical bracket from central differences of the values.
inline cplx poisson_bracket_fd(const PhaseFunction& f, const PhaseFunction& g, const PhasePoint& pt, double h = 1e-6)
{
  auto partial = [&](const PhaseFunction& fn, int i) {
    auto a = pt.as_array();
    a[i] += h;
    cplx up = evaluate(fn, PhasePoint::from_array(a));
    a[i] -= 2 * h;
    cplx down = evaluate(fn, PhasePoint::from_array(a));
    return (up - down) / (2 * h);
  };
  cplx sum = 0.0;
  for (int i = 0; i < 3; ++i) sum += partial(f, i) * partial(g, i + 3) - partial(f, i + 3) * partial(g, i);
  return sum;
}

// ---------------------------------------------------------------------------
// Generators

struct ClassicalGenerators {
  Curvature kappa;
  /// A+ = A^+_p, A- = A^-_m, B+ = B^-_p, B- = B^+_m.
  PhaseFunction A_plus, A_minus, A3, B_plus, B_minus, B3;
  PhaseFunction J01, J02, J12;
  /// a_i^{-/+} = (+/- i J0i + p_zeta t_i) e^{+/- i k zeta}, t_i = x_i / x0.
  PhaseFunction a1_plus, a1_minus, a2_plus, a2_minus;
  /// The same functions rebuilt from the spherical basis.
  PhaseFunction a1_plus_sph, a1_minus_sph, a2_plus_sph, a2_minus_sph;
  PhaseFunction H;
  PhaseFunction QAA, QBB, QAB;
  PhaseFunction F11, F12, F22, D12;
  /// F_ij with coefficient (w^2 - k^2/4) on x_i x_j / x0^2.
  PhaseFunction F11_alt, F12_alt, F22_alt;
  PhaseFunction I01, I02, I12;
  PhaseFunction theta, p_theta, p_zeta;
};

inline ClassicalGenerators classical_generators(const Curvature& k)
{
  ClassicalGenerators g;
  g.kappa = k;
  double kv = k.value();
  const cplx I(0.0, 1.0);
  const Jet half(0.5);

  auto trig = [k](const PhaseVars& x) { return ktrig_jet(k, x[iTheta]); };

  g.A_plus = [=](const PhaseVars& x) {
    Jet T = trig(x).T;
    return half * phase(x[iPhi], 1) * phase(x[iZeta], -kv) * (Jet(-I) * x[iPTheta] + x[iPPhi] / T + x[iPZeta] * T);
  };
  g.A_minus = [=](const PhaseVars& x) {
    Jet T = trig(x).T;
    return half * phase(x[iPhi], -1) * phase(x[iZeta], kv) * (Jet(I) * x[iPTheta] + x[iPPhi] / T + x[iPZeta] * T);
  };
  g.A3 = [=](const PhaseVars& x) { return half * (-x[iPZeta] + Jet(kv) * x[iPPhi]); };
  g.B_minus = [=](const PhaseVars& x) {
    Jet T = trig(x).T;
    return half * phase(x[iPhi], -1) * phase(x[iZeta], -kv) * (Jet(-I) * x[iPTheta] - x[iPPhi] / T + x[iPZeta] * T);
  };
  g.B_plus = [=](const PhaseVars& x) {
    Jet T = trig(x).T;
    return half * phase(x[iPhi], 1) * phase(x[iZeta], kv) * (Jet(I) * x[iPTheta] - x[iPPhi] / T + x[iPZeta] * T);
  };
  g.B3 = [=](const PhaseVars& x) { return half * (x[iPZeta] + Jet(kv) * x[iPPhi]); };

  g.J01 = [=](const PhaseVars& x) {
    Jet T = trig(x).T;
    return cos(x[iPhi]) * x[iPTheta] - sin(x[iPhi]) * x[iPPhi] / T;
  };
  g.J02 = [=](const PhaseVars& x) {
    Jet T = trig(x).T;
    return sin(x[iPhi]) * x[iPTheta] + cos(x[iPhi]) * x[iPPhi] / T;
  };
  g.J12 = [](const PhaseVars& x) { return x[iPPhi]; };

  auto t1 = [=](const PhaseVars& x) { return trig(x).T * cos(x[iPhi]); };
  auto t2 = [=](const PhaseVars& x) { return trig(x).T * sin(x[iPhi]); };
  auto J01 = g.J01, J02 = g.J02;
  g.a1_plus = [=](const PhaseVars& x) { return (Jet(-I) * J01(x) + x[iPZeta] * t1(x)) * phase(x[iZeta], -kv); };
  g.a1_minus = [=](const PhaseVars& x) { return (Jet(I) * J01(x) + x[iPZeta] * t1(x)) * phase(x[iZeta], kv); };
  g.a2_plus = [=](const PhaseVars& x) { return (Jet(-I) * J02(x) + x[iPZeta] * t2(x)) * phase(x[iZeta], -kv); };
  g.a2_minus = [=](const PhaseVars& x) { return (Jet(I) * J02(x) + x[iPZeta] * t2(x)) * phase(x[iZeta], kv); };

  auto Ap = g.A_plus, Am = g.A_minus, Bp = g.B_plus, Bm = g.B_minus;
  g.a1_plus_sph = [=](const PhaseVars& x) { return Ap(x) + Bm(x); };
  g.a2_plus_sph = [=](const PhaseVars& x) { return Jet(-I) * (Ap(x) - Bm(x)); };
  g.a1_minus_sph = [=](const PhaseVars& x) { return Am(x) + Bp(x); };
  g.a2_minus_sph = [=](const PhaseVars& x) { return Jet(I) * (Am(x) - Bp(x)); };

  g.H = [=](const PhaseVars& x) {
    KTrigJet t = trig(x);
    return x[iPTheta] * x[iPTheta] + x[iPPhi] * x[iPPhi] / (t.S * t.S) + x[iPZeta] * x[iPZeta] * t.T * t.T;
  };

  g.QAA = [=](const PhaseVars& x) { return Ap(x) * Am(x); };
  g.QBB = [=](const PhaseVars& x) { return Bp(x) * Bm(x); };
  g.QAB = [=](const PhaseVars& x) { return Ap(x) * Bp(x); };

  auto a1p = g.a1_plus, a1m = g.a1_minus, a2p = g.a2_plus, a2m = g.a2_minus;
  g.F11 = [=](const PhaseVars& x) { return a1p(x) * a1m(x); };
  g.F22 = [=](const PhaseVars& x) { return a2p(x) * a2m(x); };
  g.F12 = [=](const PhaseVars& x) { return half * (a2p(x) * a1m(x) + a1p(x) * a2m(x)); };
  g.D12 = [=](const PhaseVars& x) { return Jet(cplx(0.0, -0.5)) * (a1p(x) * a2m(x) - a2p(x) * a1m(x)); };

  auto coef_alt = [kv](const PhaseVars& x) { return x[iPZeta] * x[iPZeta] - Jet(kv * kv / 4); };
  g.F11_alt = [=](const PhaseVars& x) { return coef_alt(x) * t1(x) * t1(x) + J01(x) * J01(x); };
  g.F22_alt = [=](const PhaseVars& x) { return coef_alt(x) * t2(x) * t2(x) + J02(x) * J02(x); };
  g.F12_alt = [=](const PhaseVars& x) { return coef_alt(x) * t1(x) * t2(x) + J01(x) * J02(x); };

  g.I01 = g.F11;
  g.I02 = g.F22;
  g.I12 = [](const PhaseVars& x) { return x[iPPhi] * x[iPPhi]; };

  g.theta = [](const PhaseVars& x) { return x[iTheta]; };
  g.p_theta = [](const PhaseVars& x) { return x[iPTheta]; };
  g.p_zeta = [](const PhaseVars& x) { return x[iPZeta]; };
  return g;
}

/// p_theta^2 + p_phi^2 / S^2 + p_zeta^2 T^2
inline double hamiltonian_classical(const Curvature& k, const PhasePoint& pt)
{
  double s = s_kappa(k, pt.theta);
  if (s == 0.0 && pt.p_phi != 0.0) throw PoleError("classical Hamiltonian: S_kappa vanishes with nonzero p_phi");
  double t = t_kappa(k, pt.theta);
  double centrifugal = pt.p_phi == 0.0 ? 0.0 : pt.p_phi * pt.p_phi / (s * s);
  return pt.p_theta * pt.p_theta + centrifugal + pt.p_zeta * pt.p_zeta * t * t;
}

/// x0 = C, x1 = S cos phi, x2 = S sin phi.
inline std::array<double, 3> embed(const Curvature& k, double theta, double phi)
{
  double s = s_kappa(k, theta);
  return {c_kappa(k, theta), s * std::cos(phi), s * std::sin(phi)};
}

/// |x0^2 + k (x1^2 + x2^2) - 1|, scaled by x0^2 when x0 > 1.
inline double ambient_constraint_residual(const Curvature& k, const std::array<double, 3>& x)
{
  if (std::abs(x[0]) > 1.0) {
    double inv = 1.0 / x[0];
    double y1 = x[1] * inv, y2 = x[2] * inv;
    return std::abs(1.0 + k.value() * (y1 * y1 + y2 * y2) - inv * inv);
  }
  return std::abs(x[0] * x[0] + k.value() * (x[1] * x[1] + x[2] * x[2]) - 1.0);
}

// ---------------------------------------------------------------------------
// Orbit invariants

struct OrbitInvariants {
  /// qa^2 = p_theta^2 + (l/T + w T)^2 = 4 A+A-, qb^2 = p_theta^2 + (-l/T + w T)^2 = 4 B+B-.
  double qa2 = 0.0, qb2 = 0.0;
  double qa = 0.0, qb = 0.0;
  /// 4 A+B+ = qa qb e^{2 i phi0}.
  cplx qab;
  double arg_qab = 0.0;
  double phi0 = 0.0;
  bool degenerate = false;
  double E = 0.0;
  double ell = 0.0;
  double F11 = 0.0, F12 = 0.0, F22 = 0.0, D12 = 0.0;
};

inline OrbitInvariants invariants(const Curvature& k, const PhasePoint& pt)
{
  OrbitInvariants inv;
  double T = t_kappa(k, pt.theta);
  double w = pt.p_zeta, l = pt.p_phi, p = pt.p_theta;
  double lt = l == 0.0 ? 0.0 : l / T;
  double u = lt + w * T, v = -lt + w * T;
  inv.qa2 = p * p + u * u;
  inv.qb2 = p * p + v * v;
  inv.qa = std::sqrt(inv.qa2);
  inv.qb = std::sqrt(inv.qb2);
  inv.qab = std::polar(1.0, 2 * pt.phi) * cplx(u, -p) * cplx(v, p);
  inv.arg_qab = std::arg(inv.qab);
  inv.phi0 = inv.arg_qab / 2;
  inv.degenerate = inv.qa * inv.qb < 1e-12 * std::max(1.0, inv.qa2 + inv.qb2);
  inv.E = hamiltonian_classical(k, pt);
  inv.ell = l;
  double J01 = std::cos(pt.phi) * p - (l == 0.0 ? 0.0 : std::sin(pt.phi) * l / T);
  double J02 = std::sin(pt.phi) * p + (l == 0.0 ? 0.0 : std::cos(pt.phi) * l / T);
  double t1 = T * std::cos(pt.phi), t2 = T * std::sin(pt.phi);
  inv.F11 = w * w * t1 * t1 + J01 * J01;
  inv.F22 = w * w * t2 * t2 + J02 * J02;
  inv.F12 = w * w * t1 * t2 + J01 * J02;
  inv.D12 = w * (t1 * J02 - t2 * J01);
  return inv;
}

// ---------------------------------------------------------------------------
// Initial conditions from (E, l)

struct InitialCondition {
  PhasePoint point;
  bool circular = false;
};

/// Turning point of the radial motion: w^2 s^2 + (k l^2 - E) s + l^2 = 0 with
/// s = T^2. Starts at the inner turning point for l != 0, at the outer one
/// (or the origin if unbounded) for l = 0.
inline InitialCondition initial_condition(const Curvature& k, double omega, double ell, double energy)
{
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  double b = energy - k.value() * ell * ell;
  double disc = b * b - 4 * omega * omega * ell * ell;
  double tol = 1e-12 * std::max(1.0, b * b);
  if (b <= 0.0 || disc < -tol) throw std::invalid_argument("no radial turning-point interval for these (E, l)");
  disc = std::max(disc, 0.0);
  InitialCondition ic;
  ic.circular = ell != 0.0 && disc <= tol;
  ic.point.p_phi = ell;
  ic.point.p_zeta = omega;
  double w2 = omega * omega;
  auto valid_s = [&](double s) { return k.regime() != Regime::negative || s * -k.value() < 1.0; };
  if (ell != 0.0) {
    double s = (b - std::sqrt(disc)) / (2 * w2);
    if (!(s > 0.0) || !valid_s(s)) throw std::invalid_argument("inner turning point outside the chart");
    ic.point.theta = arc_t_kappa(k, std::sqrt(s));
    return ic;
  }
  double s = b / w2;
  if (valid_s(s)) {
    ic.point.theta = arc_t_kappa(k, std::sqrt(s));
  } else {
    ic.point.theta = 0.0;
    ic.point.p_theta = std::sqrt(energy);
  }
  return ic;
}

// ---------------------------------------------------------------------------
// Integration

struct TrajectorySample {
  double t = 0.0;
  PhasePoint point;
  std::array<double, 3> x{};
  OrbitInvariants inv;
  double arg_unwrapped = 0.0;
  double residual_derived = 0.0;
  double residual_printed = 0.0;
};

enum class TrajectoryStatus { completed, singularity, rejected };

inline const char* status_name(TrajectoryStatus s)
{
  switch (s) {
  case TrajectoryStatus::completed: return "completed";
  case TrajectoryStatus::singularity: return "singularity";
  case TrajectoryStatus::rejected: return "rejected";
  }
  return "?";
}

struct DriftReport {
  double E = 0.0, ell = 0.0, qa2 = 0.0, qb2 = 0.0, arg_qab = 0.0;
  bool arg_defined = true;
  double difference_identity = 0.0;
  double constraint = 0.0;
  double min_x0 = 0.0;
};

struct Trajectory {
  Curvature kappa;
  double dt = 0.0;
  std::string integrator = "rk4";
  std::vector<TrajectorySample> samples;
  TrajectoryStatus status = TrajectoryStatus::completed;
  std::string event;
  DriftReport drift;
};

inline double relative_drift(double x, double x0) { return std::abs(x - x0) / std::max(std::abs(x0), 1.0); }

inline double wrap_angle(double a)
{
  a = std::remainder(a, 2 * std::numbers::pi);
  return a;
}

namespace detail {

struct FlowState {
  double theta, phi, zeta, p_theta;
};

inline FlowState flow(const Curvature& k, const FlowState& s, double l, double w)
{
  double S = s_kappa(k, s.theta), C = c_kappa(k, s.theta);
  double T = S / C;
  FlowState d{};
  d.theta = 2 * s.p_theta;
  d.phi = l == 0.0 ? 0.0 : 2 * l / (S * S);
  d.zeta = 2 * w * T * T;
  double centrifugal = l == 0.0 ? 0.0 : 2 * l * l * C / (S * S * S);
  d.p_theta = centrifugal - 2 * w * w * T * (1 + k.value() * T * T);
  return d;
}

inline FlowState axpy(const FlowState& a, double h, const FlowState& d)
{
  return {a.theta + h * d.theta, a.phi + h * d.phi, a.zeta + h * d.zeta, a.p_theta + h * d.p_theta};
}

inline bool near_singularity(const Curvature& k, double theta, double l)
{
  if (k.regime() == Regime::positive && c_kappa(k, theta) < 1e-8) return true;
  if (k.regime() == Regime::negative && std::sqrt(-k.value()) * std::abs(theta) > 700.0) return true;
  if (l != 0.0 && std::abs(s_kappa(k, theta)) < 1e-12) return true;
  return !std::isfinite(theta);
}

} // namespace detail

/// Residuals of the orbit relations at one point against the constants of
/// the starting point. Derived: cos 2(phi - phi0) = (qa^2 + qb^2 - 4 l^2/T^2) / (2 qa qb).
/// Printed: cos 2(phi - phi0) = (qa^2 + qb^2 + 2 l^2/T^2) / (qa qb).
struct OrbitRelationValues {
  double algebraic_derived = 0.0;
  double algebraic_printed = 0.0;
  double arccos_derived = 0.0;
  double arccos_printed = 0.0;
};

inline OrbitRelationValues orbit_relations(const Curvature& k, const PhasePoint& pt, const OrbitInvariants& c0)
{
  OrbitRelationValues r;
  double T = t_kappa(k, pt.theta);
  double l = c0.ell, w = pt.p_zeta;
  double l2t2 = l == 0.0 ? 0.0 : l * l / (T * T);
  double lhs = std::cos(2 * (pt.phi - c0.phi0));
  double qq = c0.qa * c0.qb;
  r.algebraic_derived = std::abs(lhs - (c0.qa2 + c0.qb2 - 4 * l2t2) / (2 * qq));
  r.algebraic_printed = std::abs(lhs - (c0.qa2 + c0.qb2 + 2 * l2t2) / qq);
  double lt = l == 0.0 ? 0.0 : l / T;
  double ca = std::acos(std::clamp((lt + w * T) / c0.qa, -1.0, 1.0));
  double cb = std::acos(std::clamp((-lt + w * T) / c0.qb, -1.0, 1.0));
  double angle = 2 * (pt.phi - c0.phi0);
  double sgn = pt.p_theta >= 0.0 ? 1.0 : -1.0;
  r.arccos_derived = std::abs(wrap_angle(angle - sgn * (ca - cb)));
  r.arccos_printed = std::min(std::abs(wrap_angle(angle - (ca + cb))), std::abs(wrap_angle(angle + (ca + cb))));
  return r;
}

struct IntegrateOptions {
  /// Keep every stride-th step.
  int stride = 1;
  double reject_drift = 1e-4;
};

/// Fixed-step RK4 on Hamilton's equations.
inline Trajectory integrate(const Curvature& k, const PhasePoint& start, double tmax, double dt, IntegrateOptions opt = {})
{
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(tmax >= 0.0)) throw std::invalid_argument("tmax must be non-negative");
  if (opt.stride < 1) throw std::invalid_argument("stride must be positive");
  if (detail::near_singularity(k, start.theta, start.p_phi))
    throw PoleError("starting point lies on a coordinate singularity");

  Trajectory traj;
  traj.kappa = k;
  traj.dt = dt;
  const double l = start.p_phi, w = start.p_zeta;
  OrbitInvariants c0 = invariants(k, start);
  bool orbit_defined = !c0.degenerate;
  traj.drift.arg_defined = orbit_defined;
  traj.drift.min_x0 = INFINITY;
  double prev_arg = c0.arg_qab, unwrapped = c0.arg_qab;

  auto record = [&](double t, const detail::FlowState& s) {
    TrajectorySample smp;
    smp.t = t;
    smp.point = {s.theta, s.phi, s.zeta, s.p_theta, l, w};
    smp.x = embed(k, s.theta, s.phi);
    smp.inv = invariants(k, smp.point);
    unwrapped += wrap_angle(smp.inv.arg_qab - prev_arg);
    prev_arg = smp.inv.arg_qab;
    smp.arg_unwrapped = unwrapped;
    if (orbit_defined) {
      OrbitRelationValues rel = orbit_relations(k, smp.point, c0);
      smp.residual_derived = rel.algebraic_derived;
      smp.residual_printed = rel.algebraic_printed;
    } else {
      smp.residual_derived = smp.residual_printed = std::nan("");
    }
    DriftReport& d = traj.drift;
    d.E = std::max(d.E, relative_drift(smp.inv.E, c0.E));
    d.ell = std::max(d.ell, relative_drift(smp.inv.ell, c0.ell));
    d.qa2 = std::max(d.qa2, relative_drift(smp.inv.qa2, c0.qa2));
    d.qb2 = std::max(d.qb2, relative_drift(smp.inv.qb2, c0.qb2));
    if (orbit_defined) d.arg_qab = std::max(d.arg_qab, relative_drift(unwrapped, c0.arg_qab));
    double scale = std::max({1.0, smp.inv.qa2, smp.inv.qb2});
    d.difference_identity = std::max(d.difference_identity, std::abs(smp.inv.qa2 - smp.inv.qb2 - 4 * w * l) / scale);
    d.constraint = std::max(d.constraint, ambient_constraint_residual(k, smp.x));
    d.min_x0 = std::min(d.min_x0, smp.x[0]);
    traj.samples.push_back(std::move(smp));
    return relative_drift(traj.samples.back().inv.E, c0.E);
  };

  detail::FlowState s{start.theta, start.phi, start.zeta, start.p_theta};
  record(0.0, s);
  long steps = static_cast<long>(std::llround(tmax / dt));
  for (long n = 1; n <= steps; ++n) {
    using detail::axpy;
    using detail::flow;
    detail::FlowState k1 = flow(k, s, l, w);
    detail::FlowState k2 = flow(k, axpy(s, dt / 2, k1), l, w);
    detail::FlowState k3 = flow(k, axpy(s, dt / 2, k2), l, w);
    detail::FlowState k4 = flow(k, axpy(s, dt, k3), l, w);
    s.theta += dt / 6 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta);
    s.phi += dt / 6 * (k1.phi + 2 * k2.phi + 2 * k3.phi + k4.phi);
    s.zeta += dt / 6 * (k1.zeta + 2 * k2.zeta + 2 * k3.zeta + k4.zeta);
    s.p_theta += dt / 6 * (k1.p_theta + 2 * k2.p_theta + 2 * k3.p_theta + k4.p_theta);
    double t = static_cast<double>(n) * dt;
    if (detail::near_singularity(k, s.theta, l)) {
      traj.status = TrajectoryStatus::singularity;
      traj.event = "coordinate singularity reached at t = " + std::to_string(t);
      break;
    }
    if (n % opt.stride == 0 || n == steps) {
      double drift = record(t, s);
      if (drift > opt.reject_drift) {
        traj.status = TrajectoryStatus::rejected;
        traj.event = "energy drift exceeded " + std::to_string(opt.reject_drift) + " at t = " + std::to_string(t) +
                     "; reduce dt";
        break;
      }
    }
  }
  return traj;
}

struct OrbitResidualReport {
  bool defined = true;
  double algebraic_derived = 0.0;
  double algebraic_printed = 0.0;
  double arccos_derived = 0.0;
  double arccos_printed = 0.0;
  int turning_points = 0;
  /// Largest | |arccos argument| - 1 | at interpolated p_theta sign changes.
  double turning_point_gap = 0.0;
};

inline OrbitResidualReport orbit_residual(const Curvature& k, const Trajectory& traj)
{
  OrbitResidualReport rep;
  if (traj.samples.empty()) return rep;
  OrbitInvariants c0 = invariants(k, traj.samples.front().point);
  if (c0.degenerate) {
    rep.defined = false;
    return rep;
  }
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const PhasePoint& pt = traj.samples[i].point;
    OrbitRelationValues r = orbit_relations(k, pt, c0);
    rep.algebraic_derived = std::max(rep.algebraic_derived, r.algebraic_derived);
    rep.algebraic_printed = std::max(rep.algebraic_printed, r.algebraic_printed);
    rep.arccos_derived = std::max(rep.arccos_derived, r.arccos_derived);
    rep.arccos_printed = std::max(rep.arccos_printed, r.arccos_printed);
    if (i == 0) continue;
    const PhasePoint& prev = traj.samples[i - 1].point;
    if ((prev.p_theta < 0.0) != (pt.p_theta < 0.0) && prev.p_theta != pt.p_theta) {
      double f = prev.p_theta / (prev.p_theta - pt.p_theta);
      double theta = prev.theta + f * (pt.theta - prev.theta);
      double T = t_kappa(k, theta);
      double lt = c0.ell == 0.0 ? 0.0 : c0.ell / T;
      double a = std::abs((lt + pt.p_zeta * T) / c0.qa);
      double b = std::abs((-lt + pt.p_zeta * T) / c0.qb);
      rep.turning_points++;
      rep.turning_point_gap = std::max({rep.turning_point_gap, std::abs(a - 1.0), std::abs(b - 1.0)});
    }
  }
  return rep;
}

inline nlohmann::json to_json(const OrbitInvariants& inv)
{
  return {{"qa2", inv.qa2},   {"qb2", inv.qb2}, {"qa", inv.qa},   {"qb", inv.qb},   {"phi0", inv.phi0},
          {"arg_qab", inv.arg_qab}, {"degenerate", inv.degenerate}, {"E", inv.E}, {"ell", inv.ell},
          {"F11", inv.F11}, {"F12", inv.F12}, {"F22", inv.F22}, {"D12", inv.D12}};
}

} // namespace curvosc

#endif
