// Command-line front end.  Verification suites, simulation runs, and the
// spectrum scan; JSON reports on stdout, CSV artifacts in --out when given.
// Exit codes: 0 pass, 1 verification failure, 2 config error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdho/bateman.hpp"
#include "qdho/bateman_group.hpp"
#include "qdho/ck_evolve.hpp"
#include "qdho/ck_operators.hpp"
#include "qdho/classical.hpp"
#include "qdho/constraint_reduction.hpp"
#include "qdho/damped_particle.hpp"
#include "qdho/errors.hpp"
#include "qdho/mixed_rep.hpp"
#include "qdho/qat.hpp"

using nlohmann::json;
using namespace qdho;

namespace {

// ---------------------------------------------------------------------------
// Serialization: operators as monomial lists, coefficient terms as
// (re, im, k, a_re, a_im) meaning (re + i im) t^k e^{(a_re + i a_im) t}.

json poly_json(const ExpPoly& c) {
  json terms = json::array();
  for (const auto& t : c.terms())
    terms.push_back({t.amp.real(), t.amp.imag(), t.tpow, t.rate.real(),
                     t.rate.imag()});
  return terms;
}

json op_json(const WeylOp& op) {
  json monos = json::array();
  for (const auto& m : op.monomials())
    monos.push_back({{"x", m.xp},
                     {"y", m.yp},
                     {"dx", m.dxp},
                     {"dy", m.dyp},
                     {"dt", m.dtp},
                     {"coeff", poly_json(m.coeff)}});
  return monos;
}

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

// ---------------------------------------------------------------------------
// Run context: resolved parameters, output directory, loaded config.

struct Ctx {
  PhysParams params;
  std::string out;  // empty = no file artifacts
  json cfg = json::object();

  json section(const std::string& name) const {
    if (cfg.contains(name) && cfg.at(name).is_object()) return cfg.at(name);
    return json::object();
  }
};

// config value lookup with a default; CLI flags override by being applied
// after this in command setup (flag count checked by the caller)
template <typename T>
T get_or(const json& sec, const std::string& key, T fallback) {
  if (sec.contains(key)) return sec.at(key).get<T>();
  return fallback;
}

void write_text(const Ctx& ctx, const std::string& fname,
                const std::string& text) {
  if (ctx.out.empty()) return;
  std::filesystem::create_directories(ctx.out);
  std::ofstream f(std::filesystem::path(ctx.out) / fname);
  f << text;
}

int finish(const Ctx& ctx, const std::string& command, json body, bool pass) {
  body["command"] = command;
  body["params"] = {{"m", ctx.params.m},
                    {"hbar", ctx.params.hbar},
                    {"omega", ctx.params.omega},
                    {"gamma", ctx.params.gamma}};
  body["pass"] = pass;
  const std::string text = body.dump(2);
  std::printf("%s\n", text.c_str());
  write_text(ctx, "report.json", text + "\n");
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify ck-algebra [--extensions] [--k-reduction]

int cmd_ck_algebra(const Ctx& ctx, bool extensions, bool k_reduction,
                   double tol) {
  auto cat = build_catalog(ctx.params);
  auto cases = seven_algebra_cases(cat);
  Report rep("seven-generator bracket table");
  json brackets = json::array();
  for (const auto& c : cases) {
    const double scale =
        std::max({c.got.max_amp(), c.expect.max_amp(), 1.0});
    const double dev = WeylOp::deviation(c.got, c.expect) / scale;
    rep.add(c.name, dev, tol);
    brackets.push_back({{"bracket", c.name},
                        {"max_dev", dev},
                        {"expected", op_json(c.expect)},
                        {"got", op_json(c.got)}});
  }

  json body;
  body["report"] = rep.to_json();
  body["brackets"] = brackets;
  bool pass = rep.pass();

  if (extensions) {
    auto fam = central_extension_family(ctx.params);
    const auto names = seven_names();
    json slots = json::array();
    for (auto [a, b] : fam.slots) slots.push_back({names[a], names[b]});
    body["central_extensions"] = {
        {"slots", slots},
        {"base", vec_json(fam.base)},
        {"direction", vec_json(fam.direction)},
        {"full_nullspace_dim", fam.full_nullspace_dim},
        {"coboundary_rank", fam.coboundary_rank},
        {"gauge_fixed_dim", fam.gauge_fixed_dim},
        {"free_parameters_after_normalization", fam.gauge_fixed_dim - 1},
        {"charges_at_plus_one", vec_json(fam.charges(1.0))},
        {"charges_at_minus_one", vec_json(fam.charges(-1.0))}};
    pass = pass && fam.gauge_fixed_dim == 2;
  }
  if (k_reduction) {
    Report red = reduce_k_minus_one(ctx.params);
    body["k_minus_one_reduction"] = red.to_json();
    pass = pass && red.pass();
  }
  return finish(ctx, "verify ck-algebra", body, pass);
}

// ---------------------------------------------------------------------------
// verify bateman-algebra: canonical pairs, invariant map, Hamiltonian
// reconstruction, x-projection of the flow, optionally the k = -1 reduction.

int cmd_bateman_algebra(const Ctx& ctx, int map_points, bool k_reduction) {
  auto ops = build_bateman_ops(ctx.params);
  Report alg = verify_bateman_algebra(ops);
  Report map = verify_bateman_map(ctx.params, map_points);
  Report rec = verify_reconstruction(ops);

  // x-projection of the flow against the closed-form damped trajectory
  const PhysParams& p = ctx.params;
  auto basis = build_basis(p);
  const double x0 = 0.8, v0 = -0.3;
  Eigen::Vector4d s0(x0, 0.5, 0.2, p.m * (v0 + 0.5 * p.gamma * x0));
  std::vector<double> times;
  for (int i = 0; i <= 200; ++i) times.push_back(10.0 * i / 200.0);
  auto tr = classical_trajectory(basis, x0, v0, times);
  double worst = 0.0;
  for (size_t i = 0; i < times.size(); ++i) {
    Eigen::Vector4d s = bateman_flow_matrix(p, times[i]) * s0;
    worst = std::max(worst, std::abs(s[0] - tr.positions[i]));
  }
  Report proj("flow projects onto the damped trajectory");
  proj.add("x-component vs closed form on [0, 10]", worst, 1e-6);

  json body;
  body["algebra"] = alg.to_json();
  body["map"] = map.to_json();
  body["reconstruction"] = rec.to_json();
  body["projection"] = proj.to_json();
  body["operators"] = {{"x", op_json(ops.x)},   {"y", op_json(ops.y)},
                       {"px", op_json(ops.px)}, {"py", op_json(ops.py)},
                       {"HB", op_json(ops.HB)}, {"X", op_json(ops.X)},
                       {"P", op_json(ops.P)},   {"Q", op_json(ops.Q)},
                       {"Pi", op_json(ops.Pi)}};
  bool pass = alg.pass() && map.pass() && rec.pass() && proj.pass();
  if (k_reduction) {
    Report red = reduce_k_minus_one(ctx.params);
    body["k_minus_one_reduction"] = red.to_json();
    pass = pass && red.pass();
  }
  return finish(ctx, "verify bateman-algebra", body, pass);
}

// ---------------------------------------------------------------------------
// verify group [--triples N --seed S]

int cmd_group(const Ctx& ctx, int triples, std::uint64_t seed,
              int field_points) {
  Report ax = verify_group_axioms(ctx.params, triples, seed);
  Report fc = verify_field_closure(ctx.params, field_points);
  json body;
  body["axioms"] = ax.to_json();
  body["fields"] = fc.to_json();
  for (const auto& e : ax.entries)
    if (e.name.find("associa") != std::string::npos)
      body["associativity_max_error"] = e.deviation;
  return finish(ctx, "verify group", body, ax.pass() && fc.pass());
}

// ---------------------------------------------------------------------------
// verify reduction [--A a --t-window lo:hi]: constraint checks, the full
// reduction verification, residual statistics, and the t <-> tau branch map.

int cmd_reduction(const Ctx& ctx, double A, double t_lo, double t_hi,
                  double sigma0, double kappa0, double p0, double x0,
                  double px0) {
  const PhysParams& p = ctx.params;
  auto maps = build_reduction_maps(p, A);
  auto basis = build_basis(p);
  FreeGaussian seed;
  seed.params = p;
  seed.sigma0 = sigma0;
  seed.kappa0 = kappa0;
  seed.p0 = p0;

  Report good = good_operator_check(p);
  Report flow =
      classical_constraint_check(p, constrained_initial_state(p, x0, px0));
  Report red = verify_reduction_to_ck(maps, seed, t_lo, t_hi);

  // residual statistics over the window (negative-time window when A < 0)
  auto window_t = [&](double t) { return A < 0.0 ? -t : t; };
  double red_max = 0.0, red_sum = 0.0, lift_max = 0.0, lift_sum = 0.0;
  int npts = 0;
  for (int i = 0; i < 9; ++i) {
    const double t = window_t(t_lo + (t_hi - t_lo) * (0.5 + i) / 9.0);
    for (double xp : {-1.2, -0.6, 0.0, 0.6, 1.2}) {
      auto [num, den] = reduced_equation_residual(maps, basis, seed, xp, t);
      const double rel = num / den;
      red_max = std::max(red_max, rel);
      red_sum += rel;
      auto [lnum, lden] =
          lifted_equation_residual(maps, basis, seed, xp, 0.4 * xp + 0.1, t);
      const double lrel = lnum / lden;
      lift_max = std::max(lift_max, lrel);
      lift_sum += lrel;
      ++npts;
    }
  }

  auto rows = branch_map(maps, window_t(A < 0.0 ? t_hi : t_lo),
                         window_t(A < 0.0 ? t_lo : t_hi), 33);
  std::ostringstream csv;
  csv << "t,tau,tau_prime\n";
  json branch = json::array();
  for (const auto& r : rows) {
    csv << r.t << "," << r.tau << "," << r.tau_prime << "\n";
    branch.push_back({r.t, r.tau, r.tau_prime});
  }
  write_text(ctx, "branch_map.csv", csv.str());

  json body;
  body["constraint_operators"] = good.to_json();
  body["classical_constraints"] = flow.to_json();
  body["reduction"] = red.to_json();
  body["residual_statistics"] = {
      {"points", npts},
      {"reduced", {{"max", red_max}, {"mean", red_sum / npts}}},
      {"lifted", {{"max", lift_max}, {"mean", lift_sum / npts}}}};
  body["branch"] = {{"A", A},
                    {"t_window", {t_lo, t_hi}},
                    {"rows", branch}};
  return finish(ctx, "verify reduction", body,
                good.pass() && flow.pass() && red.pass());
}

// ---------------------------------------------------------------------------
// verify dp [--N n]: free damped particle, omega forced to zero unless the
// user explicitly overrides it (which the module then rejects).

int cmd_dp(const Ctx& ctx, int N, bool omega_given) {
  PhysParams dp = ctx.params;
  if (!omega_given) dp.omega = 0.0;
  Report rep = verify_dp_algebra(build_dp(dp, N));
  json body;
  body["report"] = rep.to_json();
  return finish(ctx, "verify dp", body, rep.pass());
}

// ---------------------------------------------------------------------------
// simulate ck: Crank-Nicolson run with expectation probes.

int cmd_simulate_ck(const Ctx& ctx, const json& sec, double dt_flag,
                    bool dt_given) {
  const PhysParams& p = ctx.params;
  const double period = 2.0 * M_PI / p.Omega();

  Grid grid{get_or(sec, "xmin", -10.0), get_or(sec, "xmax", 10.0),
            get_or(sec, "grid_n", 4096)};
  EvolveOptions opt;
  opt.dt = dt_given ? dt_flag : get_or(sec, "dt", 1e-3);
  const double t_end = get_or(sec, "t_end", period);
  const int sample_every = get_or(sec, "sample_every", 100);
  const double norm_tol = get_or(sec, "norm_tol", 1e-10);
  // default run uses a light grid; pinned configs tighten this with a fine one
  const double xp_tol = get_or(sec, "xp_tol", 5e-4);

  FreeGaussian seed;
  seed.params = p;
  seed.sigma0 = get_or(sec, "sigma0", 0.65);
  seed.kappa0 = get_or(sec, "kappa0", 1.0);
  seed.p0 = get_or(sec, "p0", 1.0);

  auto basis = build_basis(p);
  GridState s = sample_on_grid(grid, 0.0, [&](double x, double t) {
    return ck_gaussian(basis, seed, x, t);
  });
  std::vector<cplx> initial = s.values;

  CkEvolver ev(p, grid, opt);
  auto cat = build_catalog(p);
  ProbeSeries probes = evolve_probed(
      ev, s, t_end,
      {{"X", cat.X}, {"P", cat.P}, {"H", dho_hamiltonian(p)}}, sample_every);

  Report rep("evolution conservation");
  rep.add("norm drift per step", probes.norm_drift_per_step(sample_every),
          norm_tol);
  const double k = t_end / period;
  const bool whole_periods = std::abs(k - std::round(k)) < 1e-9 && k > 0.5;
  if (whole_periods) {
    rep.add("<X> returns after whole periods", probes.relative_drift("X"),
            xp_tol);
    rep.add("<P> returns after whole periods", probes.relative_drift("P"),
            xp_tol);
    rep.add_flag("<H> decays measurably",
                 probes.relative_drift("H") > 0.01);
  }

  // expectation series + initial/final snapshots as CSV artifacts
  std::ostringstream exps;
  exps << "t,norm,re_X,im_X,re_P,im_P,re_H,im_H\n";
  for (size_t i = 0; i < probes.times.size(); ++i) {
    exps << probes.times[i] << "," << probes.norms[i];
    for (const char* nm : {"X", "P", "H"}) {
      const cplx v = probes.expectations.at(nm)[i];
      exps << "," << v.real() << "," << v.imag();
    }
    exps << "\n";
  }
  write_text(ctx, "expectations.csv", exps.str());

  std::ostringstream snap;
  snap << "x,re_psi0,im_psi0,re_psiT,im_psiT\n";
  const int stride = std::max(1, grid.n / 512);
  for (int i = 0; i < grid.n; i += stride)
    snap << grid.xmin + i * grid.dx() << "," << initial[i].real() << ","
         << initial[i].imag() << "," << s.values[i].real() << ","
         << s.values[i].imag() << "\n";
  write_text(ctx, "snapshots.csv", snap.str());

  json body;
  body["report"] = rep.to_json();
  body["run"] = {{"grid_n", grid.n},
                 {"xmin", grid.xmin},
                 {"xmax", grid.xmax},
                 {"dt", opt.dt},
                 {"t_end", t_end},
                 {"sample_every", sample_every}};
  body["drifts"] = {{"norm_per_step", probes.norm_drift_per_step(sample_every)},
                    {"X", probes.relative_drift("X")},
                    {"P", probes.relative_drift("P")},
                    {"H", probes.relative_drift("H")}};
  return finish(ctx, "simulate ck", body, rep.pass());
}

// ---------------------------------------------------------------------------
// simulate bateman: the linear two-coordinate flow with invariant checks.

int cmd_simulate_bateman(const Ctx& ctx, const json& sec) {
  const PhysParams& p = ctx.params;
  const double W = p.Omega();
  const double t_end = get_or(sec, "t_end", 10.0);
  const int steps = get_or(sec, "steps", 200);
  Eigen::Vector4d s0(get_or(sec, "x0", 0.8), get_or(sec, "y0", 0.5),
                     get_or(sec, "px0", 0.2), get_or(sec, "py0", -0.2));

  auto energy = [&](const Eigen::Vector4d& s) {
    return s[2] * s[3] / p.m + 0.5 * p.gamma * (s[1] * s[3] - s[0] * s[2]) +
           p.m * W * W * s[0] * s[1];
  };
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
  J(0, 2) = J(1, 3) = 1.0;
  J(2, 0) = J(3, 1) = -1.0;

  const double e0 = energy(s0);
  double e_dev = 0.0, symp_dev = 0.0;
  std::ostringstream csv;
  csv << "t,x,y,px,py,energy\n";
  for (int i = 0; i <= steps; ++i) {
    const double t = t_end * i / steps;
    Eigen::Matrix4d F = bateman_flow_matrix(p, t);
    Eigen::Vector4d s = F * s0;
    e_dev = std::max(e_dev, std::abs(energy(s) - e0));
    symp_dev = std::max(
        symp_dev, (F.transpose() * J * F - J).cwiseAbs().maxCoeff());
    csv << t << "," << s[0] << "," << s[1] << "," << s[2] << "," << s[3]
        << "," << energy(s) << "\n";
  }
  write_text(ctx, "trajectory.csv", csv.str());

  Report rep("flow invariants");
  const double scale = std::max(std::abs(e0), 1.0);
  rep.add("energy conserved along the flow", e_dev / scale, 1e-8);
  rep.add("flow is symplectic", symp_dev, 1e-10);

  json body;
  body["report"] = rep.to_json();
  body["run"] = {{"t_end", t_end},
                 {"steps", steps},
                 {"initial", {s0[0], s0[1], s0[2], s0[3]}},
                 {"energy0", e0}};
  return finish(ctx, "simulate bateman", body, rep.pass());
}

// ---------------------------------------------------------------------------
// spectrum [--n-min --n-max --lambdas]

int cmd_spectrum(const Ctx& ctx, double n_min, double n_max,
                 const std::vector<double>& lambdas, std::uint64_t seed) {
  SpectrumOptions so;
  so.emin_units = n_min;
  so.emax_units = n_max;
  if (!lambdas.empty()) so.lambdas = lambdas;
  so.seed = seed;
  SpectrumScan scan = scan_spectrum(ctx.params, so);

  std::ostringstream csv;
  csv << "n,lambda,energy,rule_deviation,eigen_residual\n";
  json lines = json::array();
  for (const auto& l : scan.lines) {
    csv << l.n << "," << l.lambda << "," << l.energy << ","
        << l.rule_deviation << "," << l.residual << "\n";
    lines.push_back({{"n", l.n},
                     {"lambda", l.lambda},
                     {"energy", l.energy},
                     {"rule_deviation", l.rule_deviation},
                     {"eigen_residual", l.residual}});
  }
  write_text(ctx, "spectrum.csv", csv.str());

  json body;
  body["report"] = scan.report.to_json();
  body["lines"] = lines;
  body["csv"] = csv.str();
  return finish(ctx, "spectrum", body, scan.report.pass());
}

// ---------------------------------------------------------------------------
// qat-roundtrip: transport residual and forward/inverse identity.

int cmd_qat(const Ctx& ctx, const json& sec) {
  const PhysParams& p = ctx.params;
  auto basis = build_basis(p);
  FreeGaussian seed;
  seed.params = p;
  seed.sigma0 = get_or(sec, "sigma0", 0.8);
  seed.kappa0 = get_or(sec, "kappa0", 0.3);
  seed.p0 = get_or(sec, "p0", 0.6);
  const double t0 = get_or(sec, "t0", 0.9);

  // finite-difference residual of the transported packet in the damped
  // equation  i hbar psi_t = -(hbar^2/2m) e^{-gt} psi_xx + (m/2) w^2 e^{gt} x^2 psi
  auto fd1 = [](const std::function<cplx(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) /
           (12.0 * h);
  };
  auto fd2 = [](const std::function<cplx(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) +
            16.0 * f(x - h) - f(x - 2 * h)) /
           (12.0 * h * h);
  };
  double worst = 0.0;
  for (double t : {0.4, 0.9, 1.5})
    for (double x : {-1.0, -0.3, 0.5, 1.2}) {
      auto in_t = [&](double tt) { return ck_gaussian(basis, seed, x, tt); };
      auto in_x = [&](double xx) { return ck_gaussian(basis, seed, xx, t); };
      const cplx lhs = cplx(0.0, p.hbar) * fd1(in_t, t, 8e-4);
      const cplx rhs = -(p.hbar * p.hbar / (2.0 * p.m)) *
                           std::exp(-p.gamma * t) * fd2(in_x, x, 1e-3) +
                       0.5 * p.m * p.omega * p.omega * std::exp(p.gamma * t) *
                           x * x * in_x(x);
      worst =
          std::max(worst, std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs)));
    }

  Grid grid{get_or(sec, "xmin", -8.0), get_or(sec, "xmax", 8.0),
            get_or(sec, "grid_n", 2048)};
  GridState s = sample_on_grid(grid, t0, [&](double x, double t) {
    return ck_gaussian(basis, seed, x, t);
  });
  GridState back = qat_inverse(basis, qat_forward(basis, s), t0);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < s.values.size(); ++i) {
    num += std::norm(back.values[i] - s.values[i]);
    den += std::norm(s.values[i]);
  }
  const double round = std::sqrt(num / den);

  Report rep("point-transformation transport");
  rep.add("transported packet solves the damped equation", worst, 1e-5);
  rep.add("inverse undoes forward (relative L2)", round, 1e-12);

  json body;
  body["report"] = rep.to_json();
  body["pde_residual_max"] = worst;
  body["roundtrip_relative_l2"] = round;
  return finish(ctx, "qat-roundtrip", body, rep.pass());
}

std::vector<double> parse_lambdas(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum damped oscillator toolkit"};
  app.require_subcommand(0, 1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path, out_dir;
  app.add_option("--config", config_path, "run configuration (JSON)");
  auto* out_opt = app.add_option("--out", out_dir, "artifact directory");
  PhysParams params;
  auto* g_opt = app.add_option("--gamma", params.gamma, "damping rate");
  auto* w_opt = app.add_option("--omega", params.omega, "bare frequency");
  auto* m_opt = app.add_option("--m", params.m, "mass");
  auto* h_opt = app.add_option("--hbar", params.hbar, "Planck constant");
  // per-command overrides, usable together with --config
  double A = 1.0, dt = 1e-3;
  int dp_n = 6;
  auto* a_top = app.add_option("--A", A, "branch sign (verify reduction)");
  auto* n_top = app.add_option("--N", dp_n, "family size (verify dp)");
  auto* dt_top = app.add_option("--dt", dt, "time step (simulate ck)");

  // verify subtree
  auto* verify = app.add_subcommand("verify", "verification suites");
  verify->require_subcommand(1);
  verify->fallthrough();

  double tol_ck = 1e-12;
  bool extensions = false, k_reduction = false;
  auto* v_ck = verify->add_subcommand("ck-algebra",
                                      "seven-generator bracket table");
  v_ck->fallthrough();
  v_ck->add_option("--tol", tol_ck, "bracket tolerance");
  v_ck->add_flag("--extensions", extensions, "central-extension family");
  v_ck->add_flag("--k-reduction", k_reduction, "k = -1 reduction");

  int map_points = 100;
  bool bat_k_reduction = false;
  auto* v_bat = verify->add_subcommand("bateman-algebra",
                                       "dual-system operators and map");
  v_bat->fallthrough();
  v_bat->add_option("--map-points", map_points, "random points for the map");
  v_bat->add_flag("--k-reduction", bat_k_reduction, "k = -1 reduction");

  int triples = 1000, field_points = 5;
  std::uint64_t group_seed = 20260825ULL;
  auto* v_grp = verify->add_subcommand("group", "group axioms and fields");
  v_grp->fallthrough();
  v_grp->add_option("--triples", triples, "associativity triples");
  v_grp->add_option("--seed", group_seed, "rng seed");
  v_grp->add_option("--field-points", field_points, "closure sample points");

  std::string window = "0.3:1.2";
  auto* v_red = verify->add_subcommand("reduction",
                                       "constraint reduction checks");
  v_red->fallthrough();
  auto* a_opt = v_red->add_option("--A", A, "branch sign (+1 or -1)");
  v_red->add_option("--t-window", window, "time window lo:hi");

  auto* v_dp = verify->add_subcommand("dp", "damped-particle brackets");
  v_dp->fallthrough();
  auto* n_opt = v_dp->add_option("--N", dp_n, "momentum family size");

  // simulate subtree
  auto* simulate = app.add_subcommand("simulate", "simulation runs");
  simulate->require_subcommand(1);
  simulate->fallthrough();
  auto* s_ck = simulate->add_subcommand("ck", "Crank-Nicolson evolution");
  s_ck->fallthrough();
  auto* dt_opt = s_ck->add_option("--dt", dt, "time step");
  auto* s_bat = simulate->add_subcommand("bateman", "classical flow");
  s_bat->fallthrough();

  double n_min = -5.0, n_max = 5.0;
  std::string lambdas_text = "0,0.25,0.5";
  std::uint64_t spec_seed = 20260825ULL;
  auto* spec = app.add_subcommand("spectrum", "mixed-representation scan");
  spec->fallthrough();
  spec->add_option("--n-min", n_min, "lowest level in units of hbar*Omega");
  spec->add_option("--n-max", n_max, "highest level in units of hbar*Omega");
  spec->add_option("--lambdas", lambdas_text, "comma-separated offsets");
  spec->add_option("--seed", spec_seed, "rng seed");

  auto* qat = app.add_subcommand("qat-roundtrip", "transport identity");
  qat->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  Ctx ctx;
  std::string command;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("config file not found: " + config_path);
      f >> ctx.cfg;
      if (ctx.cfg.contains("command"))
        command = ctx.cfg.at("command").get<std::string>();
      if (ctx.cfg.contains("params")) {
        const json& cp = ctx.cfg.at("params");
        if (g_opt->count() == 0) params.gamma = get_or(cp, "gamma", params.gamma);
        if (w_opt->count() == 0) params.omega = get_or(cp, "omega", params.omega);
        if (m_opt->count() == 0) params.m = get_or(cp, "m", params.m);
        if (h_opt->count() == 0) params.hbar = get_or(cp, "hbar", params.hbar);
      }
      if (out_opt->count() == 0)
        out_dir = get_or(ctx.cfg, std::string("out"), out_dir);
    }
    // a typed subcommand wins over the config command
    if (v_ck->parsed()) command = "verify ck-algebra";
    if (v_bat->parsed()) command = "verify bateman-algebra";
    if (v_grp->parsed()) command = "verify group";
    if (v_red->parsed()) command = "verify reduction";
    if (v_dp->parsed()) command = "verify dp";
    if (s_ck->parsed()) command = "simulate ck";
    if (s_bat->parsed()) command = "simulate bateman";
    if (spec->parsed()) command = "spectrum";
    if (qat->parsed()) command = "qat-roundtrip";
    if (command.empty())
      throw ConfigError("no command: pass a subcommand or --config");

    params.validate();
    // every command except the free damped particle needs oscillation
    if (command != "verify dp" && !params.underdamped())
      throw ConfigError(
          "params.omega: underdamped regime required (omega > gamma/2)");
    ctx.params = params;
    ctx.out = out_dir;

    if (command == "verify ck-algebra") {
      const json sec = ctx.section("ck_algebra");
      if (!v_ck->parsed() || !extensions)
        extensions = get_or(sec, "extensions", extensions);
      if (!v_ck->parsed() || !k_reduction)
        k_reduction = get_or(sec, "k_reduction", k_reduction);
      tol_ck = v_ck->count("--tol") ? tol_ck : get_or(sec, "tol", tol_ck);
      return cmd_ck_algebra(ctx, extensions, k_reduction, tol_ck);
    }
    if (command == "verify bateman-algebra") {
      const json sec = ctx.section("bateman");
      if (v_bat->count("--map-points") == 0)
        map_points = get_or(sec, "map_points", map_points);
      if (!bat_k_reduction)
        bat_k_reduction = get_or(sec, "k_reduction", bat_k_reduction);
      return cmd_bateman_algebra(ctx, map_points, bat_k_reduction);
    }
    if (command == "verify group") {
      const json sec = ctx.section("group");
      if (v_grp->count("--triples") == 0)
        triples = get_or(sec, "triples", triples);
      if (v_grp->count("--seed") == 0)
        group_seed = get_or(sec, "seed", group_seed);
      if (v_grp->count("--field-points") == 0)
        field_points = get_or(sec, "field_points", field_points);
      return cmd_group(ctx, triples, group_seed, field_points);
    }
    if (command == "verify reduction") {
      const json sec = ctx.section("reduction");
      if (a_opt->count() + a_top->count() == 0) A = get_or(sec, "A", A);
      if (v_red->count("--t-window") == 0)
        window = get_or(sec, "t_window", window);
      const auto colon = window.find(':');
      if (colon == std::string::npos)
        throw ConfigError("t-window must be lo:hi, got " + window);
      const double t_lo = std::stod(window.substr(0, colon));
      const double t_hi = std::stod(window.substr(colon + 1));
      return cmd_reduction(ctx, A, t_lo, t_hi, get_or(sec, "sigma0", 0.7),
                           get_or(sec, "kappa0", 0.2), get_or(sec, "p0", 0.4),
                           get_or(sec, "x0", 1.0), get_or(sec, "px0", 0.0));
    }
    if (command == "verify dp") {
      const json sec = ctx.section("dp");
      if (n_opt->count() + n_top->count() == 0) dp_n = get_or(sec, "N", dp_n);
      return cmd_dp(ctx, dp_n, w_opt->count() > 0);
    }
    if (command == "simulate ck")
      return cmd_simulate_ck(ctx, ctx.section("ck"), dt,
                             dt_opt->count() + dt_top->count() > 0);
    if (command == "simulate bateman")
      return cmd_simulate_bateman(ctx, ctx.section("bateman_flow"));
    if (command == "spectrum") {
      const json sec = ctx.section("spectrum");
      if (spec->count("--n-min") == 0) n_min = get_or(sec, "n_min", n_min);
      if (spec->count("--n-max") == 0) n_max = get_or(sec, "n_max", n_max);
      if (spec->count("--seed") == 0) spec_seed = get_or(sec, "seed", spec_seed);
      std::vector<double> lambdas = parse_lambdas(lambdas_text);
      if (spec->count("--lambdas") == 0 && sec.contains("lambdas"))
        lambdas = sec.at("lambdas").get<std::vector<double>>();
      return cmd_spectrum(ctx, n_min, n_max, lambdas, spec_seed);
    }
    if (command == "qat-roundtrip") return cmd_qat(ctx, ctx.section("qat"));
    throw ConfigError("unknown command: " + command);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
