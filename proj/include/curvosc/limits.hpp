#ifndef CURVOSC_LIMITS_HPP
#define CURVOSC_LIMITS_HPP

// Convergence of curved quantities to their flat counterparts as k -> 0.

#include "curvosc/classical.hpp"
#include "curvosc/qops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvosc {

struct LimitStudy {
  std::string quantity;
  std::vector<double> kappas;
  std::vector<double> errors;
  double slope = 0.0;
};

/// Least-squares slope of log10(y) against log10(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs at least two points");
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log10(x[i]), ly = std::log10(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline void require_kappa_sequence(const std::vector<Rational>& kappas)
{
  if (kappas.empty()) throw std::invalid_argument("empty curvature sequence");
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    if (kappas[i] <= 0) throw std::invalid_argument("curvature sequence must be positive");
    if (i > 0 && kappas[i] >= kappas[i - 1]) throw std::invalid_argument("curvature sequence must decrease strictly");
  }
}

inline std::vector<double> uniform_grid(double lo, double hi, int points)
{
  if (points < 2) throw std::invalid_argument("grid needs at least two points");
  std::vector<double> g;
  for (int i = 0; i < points; ++i) g.push_back(lo + (hi - lo) * i / (points - 1));
  return g;
}

/// Probe family S^{3/2} C^{w/k - 1/2} e^{i phi} e^{i w zeta}, which tends to
/// theta^{3/2} e^{-w theta^2/2} e^{i phi}.
inline WaveFunction limit_probe(const Curvature& k, long omega)
{
  if (k.is_flat()) return WaveFunction::gaussian(ComplexQ(1), Rational(3, 2), 1, Rational(omega));
  Rational nf = Rational(omega) / k.exact();
  if (nf.get_den() != 1) throw std::invalid_argument("w / k must be an integer for the limit probe");
  return WaveFunction::monomial(k, ComplexQ(1), Rational(3, 2), nf - Rational(1, 2), 1, nf.get_num().get_si());
}

inline const LinearOperator& pick_generator(const SphericalGenerators& g, const std::string& name)
{
  if (name == "A+") return g.A_plus;
  if (name == "A-") return g.A_minus;
  if (name == "B+") return g.B_plus;
  if (name == "B-") return g.B_minus;
  throw std::invalid_argument("unknown generator '" + name + "'");
}

/// max over the grid of |op_k psi_k - op_0 psi_0| at phi = zeta = 0.
inline LimitStudy quantum_operator_limit(const std::string& op, long omega, const std::vector<Rational>& kappas,
                                         const std::vector<double>& grid)
{
  require_kappa_sequence(kappas);
  SphericalGenerators g0 = spherical_generators(Curvature());
  WaveFunction flat = pick_generator(g0, op)(limit_probe(Curvature(), omega));
  LimitStudy s;
  s.quantity = "quantum " + op;
  for (const auto& kq : kappas) {
    Curvature k(kq);
    SphericalGenerators g = spherical_generators(k);
    WaveFunction curved = pick_generator(g, op)(limit_probe(k, omega));
    double err = 0.0;
    for (double th : grid) err = std::max(err, std::abs(eval(curved, th) - eval(flat, th)));
    s.kappas.push_back(kq.get_d());
    s.errors.push_back(err);
  }
  s.slope = loglog_slope(s.kappas, s.errors);
  return s;
}

/// Flat Cartesian position and momentum of a polar phase point.
inline std::array<double, 4> flat_cartesian(const PhasePoint& pt)
{
  double c = std::cos(pt.phi), s = std::sin(pt.phi);
  double x1 = pt.theta * c, x2 = pt.theta * s;
  double p1 = c * pt.p_theta - s * pt.p_phi / pt.theta;
  double p2 = s * pt.p_theta + c * pt.p_phi / pt.theta;
  return {x1, x2, p1, p2};
}

/// Demkov-Fradkin components against w^2 x_i x_j + sign p_i p_j at a fixed point.
inline LimitStudy classical_df_limit(const std::vector<Rational>& kappas, const PhasePoint& pt, double momentum_sign = 1.0)
{
  require_kappa_sequence(kappas);
  auto c = flat_cartesian(pt);
  double w2 = pt.p_zeta * pt.p_zeta;
  double f11 = w2 * c[0] * c[0] + momentum_sign * c[2] * c[2];
  double f12 = w2 * c[0] * c[1] + momentum_sign * c[2] * c[3];
  double f22 = w2 * c[1] * c[1] + momentum_sign * c[3] * c[3];
  LimitStudy s;
  s.quantity = momentum_sign > 0 ? "classical F (w^2 x x + p p)" : "classical F (w^2 x x - p p)";
  for (const auto& kq : kappas) {
    OrbitInvariants inv = invariants(Curvature(kq), pt);
    double err = std::max({std::abs(inv.F11 - f11), std::abs(inv.F12 - f12), std::abs(inv.F22 - f22)});
    s.kappas.push_back(kq.get_d());
    s.errors.push_back(err);
  }
  s.slope = loglog_slope(s.kappas, s.errors);
  return s;
}

/// Pointwise deviation of curved trajectories from the flat one started at
/// the same phase point.
inline LimitStudy trajectory_limit(const std::vector<Rational>& kappas, const PhasePoint& start, double tmax = 5.0,
                                   double dt = 1e-3)
{
  require_kappa_sequence(kappas);
  Trajectory flat = integrate(Curvature(), start, tmax, dt);
  LimitStudy s;
  s.quantity = "classical trajectory";
  for (const auto& kq : kappas) {
    Trajectory curved = integrate(Curvature(kq), start, tmax, dt);
    if (curved.samples.size() != flat.samples.size()) throw std::runtime_error("trajectory halted early in limit study");
    double err = 0.0;
    for (std::size_t i = 0; i < flat.samples.size(); ++i) {
      const PhasePoint& a = curved.samples[i].point;
      const PhasePoint& b = flat.samples[i].point;
      err = std::max({err, std::abs(a.theta - b.theta), std::abs(a.phi - b.phi), std::abs(a.p_theta - b.p_theta)});
    }
    s.kappas.push_back(kq.get_d());
    s.errors.push_back(err);
  }
  s.slope = loglog_slope(s.kappas, s.errors);
  return s;
}

inline std::vector<Rational> default_limit_kappas()
{
  return {Rational(1, 10), Rational(1, 100), Rational(1, 1000), Rational(1, 10000)};
}

inline PhasePoint default_limit_start() { return {0.8, 0.3, 0.0, 0.4, 1.0, 1.0}; }

} // namespace curvosc

#endif
