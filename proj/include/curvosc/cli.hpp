#ifndef CURVOSC_CLI_HPP
#define CURVOSC_CLI_HPP

// Command-line front end. run() is the whole program minus argv handling so
// that tests can drive it in-process.
//
// Exit codes: 0 success, 2 usage or parameter error, 3 failed relation or
// eigen-check, 4 runtime event (singularity, step rejection).

#include "curvosc/classical.hpp"
#include "curvosc/limits.hpp"
#include "curvosc/qops.hpp"
#include "curvosc/spectrum.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fmt/format.h>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace curvosc::cli {

enum ExitCode { ok = 0, usage = 2, relation_failure = 3, runtime_event = 4 };

inline std::string fmt_double(double x) { return fmt::format("{:.17g}", x); }

inline std::uint64_t default_seed()
{
  if (const char* env = std::getenv("CURVOSC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

/// Writes to the --out file when given, otherwise to the output stream.
inline bool emit(const std::string& path, const std::string& content, std::ostream& out, std::ostream& err)
{
  if (path.empty()) {
    out << content;
    return true;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  f << content;
  return static_cast<bool>(f);
}

inline std::vector<Rational> parse_kappa_list(const std::string& text)
{
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_rational(item));
  return out;
}

struct Options {
  std::string kappa = "1";
  long n0 = 0;
  std::string omega;
  int nmax = 4;
  std::string format;
  std::string out;
  std::uint64_t seed = 1;
  int probes = 20;
  bool mutate_a3 = false;
  int rep = -1, p = -1, q = -1;
  int level = -1, ell = 0;
  bool ell_given = false;
  double theta_min = NAN, theta_max = NAN;
  int points = 200;
  double energy = NAN;
  double tmax = 50.0;
  double dt = 1e-3;
  int stride = 10;
  std::string summary;
  std::string kappas = "1/10,1/100,1/1000,1/10000";
};

// ---------------------------------------------------------------------------

inline int cmd_spectrum(const Options& o, std::ostream& out, std::ostream& err)
{
  Curvature k = Curvature::parse(o.kappa);
  Spectrum s;
  if (k.is_flat()) {
    if (o.omega.empty()) throw std::invalid_argument("--omega is required at zero curvature");
    s = enumerate_flat_levels(parse_rational(o.omega), o.nmax);
  } else {
    s = enumerate_levels(k, o.n0, o.nmax);
  }
  for (const auto& n : s.notices) err << "notice: " << n << "\n";

  std::string body;
  if (o.format == "csv") {
    body = "level,energy_num,energy_den,energy,degeneracy,p,q,n,ell,rep_jtwice\n";
    for (const auto& l : s.levels)
      for (const auto& st : l.states)
        body += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", l.n, l.energy.get_num().get_str(),
                            l.energy.get_den().get_str(), fmt_double(l.energy.get_d()), l.degeneracy, st.label.p,
                            st.label.q, st.label.n, st.label.ell, st.rep_jtwice);
  } else {
    nlohmann::json j = to_json(s);
    nlohmann::json audit = nlohmann::json::array();
    for (const auto& r : degeneracy_audit(s))
      audit.push_back({{"n", r.n}, {"enumerated", r.enumerated}, {"printed", r.printed},
                       {"printed_formula", r.printed_formula}, {"match", r.match}});
    j["degeneracy_audit"] = audit;
    body = j.dump(2) + "\n";
  }
  if (!emit(o.out, body, out, err)) return usage;
  if (!s.all_eigen_ok()) {
    err << "error: eigen-check failed\n";
    return relation_failure;
  }
  return ok;
}

inline int cmd_state(const Options& o, std::ostream& out, std::ostream& err)
{
  Curvature k = Curvature::parse(o.kappa);
  Representation rep;
  int p = o.p, q = o.q;
  if (o.level >= 0) {
    if (!o.ell_given) throw std::invalid_argument("--level requires --ell");
    if ((o.level - o.ell) % 2 != 0 || std::abs(o.ell) > o.level)
      throw LatticeError("no state with this (level, ell)");
    p = (o.level - o.ell) / 2;
    q = (o.level + o.ell) / 2;
  }
  if (p < 0 || q < 0) throw std::invalid_argument("state requires --p/--q or --level/--ell");
  if (k.is_flat()) {
    if (o.omega.empty()) throw std::invalid_argument("--omega is required at zero curvature");
    rep = make_flat_representation(parse_rational(o.omega));
  } else {
    int jtwice = o.rep;
    if (o.level >= 0) {
      if (o.n0 < 1) throw std::invalid_argument("--level requires --n0");
      jtwice = k.regime() == Regime::positive ? static_cast<int>(o.n0) + o.level : static_cast<int>(o.n0) - o.level;
    }
    if (jtwice < 0) throw std::invalid_argument("state requires --rep (2j) or --n0/--level");
    rep = make_representation(k, jtwice);
  }
  WaveFunction psi = ladder_state(rep, p, q);

  if (o.format == "json") {
    StateLabel label = make_label(rep, p, q);
    nlohmann::json j = {{"kappa", to_string(k.exact())}, {"rep_jtwice", rep.jtwice}, {"p", p}, {"q", q},
                        {"n", label.n}, {"ell", label.ell}, {"terms", to_json(psi)}};
    return emit(o.out, j.dump(2) + "\n", out, err) ? ok : usage;
  }

  if (o.points < 1) throw std::invalid_argument("grid must contain at least one point");
  double hi = k.regime() == Regime::positive ? radial_limit(k) - 1e-2 : 5.0;
  double lo = std::isnan(o.theta_min) ? 1e-2 : o.theta_min;
  hi = std::isnan(o.theta_max) ? hi : o.theta_max;
  if (!(hi > lo) && o.points > 1) throw std::invalid_argument("empty theta range");
  std::string body = "theta,re_psi,im_psi\n";
  for (int i = 0; i < o.points; ++i) {
    double th = o.points == 1 ? lo : lo + (hi - lo) * i / (o.points - 1);
    auto v = eval(psi, th);
    body += fmt_double(th) + "," + fmt_double(v.real()) + "," + fmt_double(v.imag()) + "\n";
  }
  return emit(o.out, body, out, err) ? ok : usage;
}

inline int cmd_check_algebra(const Options& o, std::ostream& out, std::ostream& err)
{
  Curvature k = Curvature::parse(o.kappa);
  if (o.probes < 1) throw std::invalid_argument("--probes must be positive");
  GeneratorOptions gopt{o.mutate_a3};
  std::vector<AlgebraReport> reports = check_algebra(k, o.seed, o.probes, gopt);
  if (!o.mutate_a3) {
    for (auto& r : check_hamiltonian_modes(k, o.seed, o.probes)) reports.push_back(r);
    for (auto& r : check_symmetries(k, o.seed, o.probes)) reports.push_back(r);
    for (auto& r : intertwine_check(k, o.seed, o.probes)) reports.push_back(r);
  }
  nlohmann::json arr = nlohmann::json::array();
  bool all = true;
  for (const auto& r : reports) {
    arr.push_back(to_json(r));
    all = all && r.exact;
  }
  if (!emit(o.out, arr.dump(2) + "\n", out, err)) return usage;
  if (!all) {
    for (const auto& r : reports)
      if (!r.exact) err << "violated: " << r.relation << " (max residual " << r.max_residual << ")\n";
    return relation_failure;
  }
  return ok;
}

inline int cmd_orbit(const Options& o, std::ostream& out, std::ostream& err)
{
  Curvature k = Curvature::parse(o.kappa);
  if (o.omega.empty() || std::isnan(o.energy)) throw std::invalid_argument("orbit requires --omega and --energy");
  double omega = parse_rational(o.omega).get_d();
  InitialCondition ic = initial_condition(k, omega, o.ell, o.energy);
  IntegrateOptions iopt;
  iopt.stride = o.stride;
  Trajectory tr = integrate(k, ic.point, o.tmax, o.dt, iopt);
  OrbitResidualReport orb = orbit_residual(k, tr);

  std::string body = "t,theta,phi,p_theta,p_phi,x0,x1,x2,E,ell,qa2,qb2,arg_qab,residual_derived,residual_printed\n";
  for (const auto& s : tr.samples) {
    body += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", fmt_double(s.t), fmt_double(s.point.theta),
                        fmt_double(s.point.phi), fmt_double(s.point.p_theta), fmt_double(s.point.p_phi),
                        fmt_double(s.x[0]), fmt_double(s.x[1]), fmt_double(s.x[2]), fmt_double(s.inv.E),
                        fmt_double(s.inv.ell), fmt_double(s.inv.qa2), fmt_double(s.inv.qb2),
                        fmt_double(s.arg_unwrapped), fmt_double(s.residual_derived), fmt_double(s.residual_printed));
  }
  if (!emit(o.out, body, out, err)) return usage;

  const DriftReport& d = tr.drift;
  nlohmann::json summary = {
      {"kappa", to_string(k.exact())},
      {"omega", omega},
      {"ell", o.ell},
      {"energy", o.energy},
      {"circular", ic.circular},
      {"status", status_name(tr.status)},
      {"event", tr.event},
      {"dt", o.dt},
      {"samples", tr.samples.size()},
      {"initial", to_json(tr.samples.front().inv)},
      {"drift",
       {{"E", d.E}, {"ell", d.ell}, {"qa2", d.qa2}, {"qb2", d.qb2}, {"arg_qab", d.arg_defined ? nlohmann::json(d.arg_qab) : nlohmann::json()},
        {"qa2_minus_qb2_minus_4wl", d.difference_identity}, {"ambient_constraint", d.constraint}, {"min_x0", d.min_x0}}},
      {"orbit",
       {{"defined", orb.defined},
        {"algebraic_derived", orb.algebraic_derived},
        {"algebraic_printed", orb.algebraic_printed},
        {"arccos_derived", orb.arccos_derived},
        {"arccos_printed", orb.arccos_printed},
        {"turning_points", orb.turning_points},
        {"turning_point_gap", orb.turning_point_gap}}}};
  std::string summary_path = o.summary;
  if (summary_path.empty() && !o.out.empty()) summary_path = o.out + ".summary.json";
  if (summary_path.empty())
    err << summary.dump(2) << "\n";
  else if (!emit(summary_path, summary.dump(2) + "\n", out, err))
    return usage;

  if (tr.status != TrajectoryStatus::completed) {
    err << "warning: " << tr.event << "\n";
    return runtime_event;
  }
  return ok;
}

inline int cmd_limit(const Options& o, std::ostream& out, std::ostream& err)
{
  std::vector<Rational> kappas = parse_kappa_list(o.kappas);
  require_kappa_sequence(kappas);
  long omega = o.omega.empty() ? 1 : parse_rational(o.omega).get_num().get_si();
  std::vector<double> grid = uniform_grid(0.2, 2.0, 50);
  std::vector<LimitStudy> studies;
  for (const char* op : {"A+", "A-", "B+", "B-"}) studies.push_back(quantum_operator_limit(op, omega, kappas, grid));
  PhasePoint start = default_limit_start();
  start.p_zeta = static_cast<double>(omega);
  studies.push_back(classical_df_limit(kappas, start, +1.0));
  studies.push_back(classical_df_limit(kappas, start, -1.0));
  studies.push_back(trajectory_limit(kappas, start));

  std::string body = "quantity,kappa,error,slope\n";
  for (const auto& s : studies)
    for (std::size_t i = 0; i < s.kappas.size(); ++i)
      body += s.quantity + "," + fmt_double(s.kappas[i]) + "," + fmt_double(s.errors[i]) + "," + fmt_double(s.slope) + "\n";
  return emit(o.out, body, out, err) ? ok : usage;
}

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Curved harmonic oscillator: spectra, operator algebra, classical orbits"};
  app.require_subcommand(1);
  Options o;
  o.seed = default_seed();

  auto add_kappa = [&](CLI::App* c) { c->add_option("--kappa", o.kappa, "curvature, p/q or decimal"); };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "output path (default stdout)"); };

  CLI::App* spectrum = app.add_subcommand("spectrum", "energy levels and degeneracies");
  add_kappa(spectrum);
  spectrum->add_option("--n0", o.n0, "w0 = n0 |kappa|");
  spectrum->add_option("--omega", o.omega, "frequency at zero curvature");
  spectrum->add_option("--nmax", o.nmax, "highest level");
  spectrum->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  add_out(spectrum);

  CLI::App* state = app.add_subcommand("state", "sample a ladder-built eigenfunction");
  add_kappa(state);
  state->add_option("--rep", o.rep, "2j of the representation");
  state->add_option("--p", o.p, "number of B- steps");
  state->add_option("--q", o.q, "number of A+ steps");
  state->add_option("--n0", o.n0, "w0 = n0 |kappa|, with --level");
  state->add_option("--level", o.level, "energy level");
  state->add_option("--ell", o.ell, "angular momentum, with --level");
  state->add_option("--omega", o.omega, "frequency at zero curvature");
  state->add_option("--theta-min", o.theta_min);
  state->add_option("--theta-max", o.theta_max);
  state->add_option("--points", o.points, "grid size");
  state->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"json", "csv"}));
  add_out(state);

  CLI::App* check = app.add_subcommand("check-algebra", "verify the operator relations on seeded probes");
  add_kappa(check);
  check->add_option("--seed", o.seed, "probe seed (default $CURVOSC_SEED or 1)");
  check->add_option("--probes", o.probes, "number of probes");
  check->add_flag("--mutate-a3", o.mutate_a3, "negative control: flip the sign of A3");
  add_out(check);

  CLI::App* orbit = app.add_subcommand("orbit", "integrate a classical trajectory");
  add_kappa(orbit);
  orbit->add_option("--omega", o.omega)->required();
  orbit->add_option("--ell", o.ell);
  orbit->add_option("--energy", o.energy)->required();
  orbit->add_option("--tmax", o.tmax);
  orbit->add_option("--dt", o.dt);
  orbit->add_option("--stride", o.stride, "keep every n-th step");
  orbit->add_option("--summary", o.summary, "invariants summary path");
  add_out(orbit);

  CLI::App* limit = app.add_subcommand("limit", "flat-limit convergence study");
  limit->add_option("--kappas", o.kappas, "comma-separated decreasing curvatures");
  limit->add_option("--omega", o.omega, "integer frequency");
  add_out(limit);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
  o.ell_given = state->count("--ell") > 0;

  try {
    if (spectrum->parsed()) {
      if (o.format.empty()) o.format = "json";
      return cmd_spectrum(o, out, err);
    }
    if (state->parsed()) {
      if (o.format.empty()) o.format = "csv";
      return cmd_state(o, out, err);
    }
    if (check->parsed()) return cmd_check_algebra(o, out, err);
    if (orbit->parsed()) return cmd_orbit(o, out, err);
    if (limit->parsed()) return cmd_limit(o, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return runtime_event;
  }
  return usage;
}

} // namespace curvosc::cli

#endif
