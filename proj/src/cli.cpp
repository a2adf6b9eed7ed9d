#include "lienard/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "lienard/checks.hpp"
#include "lienard/classical.hpp"
#include "lienard/config.hpp"
#include "lienard/quantum.hpp"
#include "lienard/symmetry.hpp"

namespace lienard {

namespace {

struct Common {
  std::string config;
  std::string out;
  int levels = 0;  // 0: from config
  bool plot = false;
};

struct Extra {
  int n = 0;
  double x0 = std::nan("");
  double v0 = 0.0;
  double periods = 5.0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "configuration file")->required();
  sub->add_option("--out", c.out, "output CSV path (stdout when omitted)");
  sub->add_option("--levels", c.levels, "number of states")->check(CLI::Range(1, 20));
  sub->add_flag("--plot", c.plot, "write a gnuplot script beside the CSV");
}

std::string csv_quote(const std::string& s) {
  std::string q = "\"";
  for (const char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

// Writes `body` to the --out path (or `out`) and, with --plot, a gnuplot
// script next to it.
void emit(const Common& c, std::ostream& out, const std::function<void(std::ostream&)>& body,
          const std::string& plot_commands) {
  if (c.out.empty()) {
    if (c.plot) throw ConfigError("--plot needs --out", 0);
    body(out);
    return;
  }
  {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + c.out + "'", 0);
    body(f);
  }
  if (c.plot) {
    std::ofstream gp(c.out + ".gp", std::ios::binary);
    if (!gp) throw ConfigError("cannot write '" + c.out + ".gp'", 0);
    std::string name = c.out;
    if (const auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
    gp << "# gnuplot script; run from the directory containing " << name << "\n";
    gp << "set datafile separator ','\n";
    gp << "set key autotitle columnhead\n";
    gp << "set terminal pngcairo size 900,600\n";
    gp << "set output '" << name << ".png'\n";
    gp << "data = '" << name << "'\n";
    gp << plot_commands;
  }
}

int cmd_spectrum(const Config& cfg, const Common& c, std::ostream& out) {
  const LienardModel m = build_model(cfg);
  const int levels = c.levels > 0 ? c.levels : cfg.levels;
  const Spectrum s = compute_spectrum(m, levels, cfg.grid_n, default_x_range(m, levels - 1));
  emit(c, out, [&](std::ostream& os) { write_spectrum_csv(os, s); },
       "set xlabel 'n'\nset ylabel 'E'\nplot data using 1:2 with points pt 7, data using 1:3 with lines\n");
  return 0;
}

int cmd_eigenfunction(const Config& cfg, const Common& c, const Extra& e, std::ostream& out) {
  const LienardModel m = build_model(cfg);
  if (e.n < 0 || e.n >= 20) throw ConfigError("--n must be in [0, 19]", 0);
  const int levels = std::max(c.levels > 0 ? c.levels : cfg.levels, e.n + 1);
  const DiscreteHamiltonian H = build_hamiltonian(m, cfg.grid_n, default_x_range(m, levels - 1));
  const double E = lowest_eigenvalues(H, e.n + 1).back();
  const std::vector<double> phi = eigenvector(H, E, cfg.seed);
  emit(c, out, [&](std::ostream& os) { write_eigenfunction_csv(os, m, H, phi); },
       "set xlabel 'x'\nset ylabel 'psi'\nplot data using 1:3 with lines\n");
  return 0;
}

int cmd_classical(const Config& cfg, const Common& c, const Extra& e, std::ostream& out) {
  const LienardModel m = build_model(cfg);
  double x0 = e.x0;
  if (std::isnan(x0)) {
    // Rest start at xi = 1/sqrt(omega) (A = 0) or 1.5 xi_eq (A < 0).
    const double xi = m.A() < 0.0 ? 1.5 * std::pow(-m.A(), 0.25) / std::sqrt(m.omega()) : 1.0 / std::sqrt(m.omega());
    x0 = m.inverse(xi);
  }
  if (!(e.periods > 0.0)) throw ConfigError("--periods must be positive", 0);
  const double T = 2.0 * 3.14159265358979323846 / m.omega();
  const Trajectory tr = integrate_orbit(m, x0, e.v0, e.periods * T, default_time_step(m));
  emit(c, out, [&](std::ostream& os) { write_trajectory_csv(os, tr); },
       "set xlabel 't'\nplot data using 1:2 with lines, data using 1:5 with lines\n");
  return 0;
}

int cmd_symmetries(const Config& cfg, const Common& c, std::ostream& out) {
  const LienardModel m = build_model(cfg);
  const auto rows = classify_standard_generators(m, 100, cfg.seed);
  emit(c, out, [&](std::ostream& os) { write_symmetry_csv(os, rows); },
       "set style fill solid\nset logscale y\nset ylabel 'max residual'\n"
       "plot data using 0:($2+1e-300):xtic(1) with boxes\n");
  return 0;
}

int cmd_ladder(const Config& cfg, const Common& c, std::ostream& out) {
  const LienardModel m = build_model(cfg);
  const int levels = c.levels > 0 ? c.levels : cfg.levels;
  const auto points = sample_phase_points(m, 20, cfg.seed);
  std::ostringstream body;
  body << "n,energy,closed_energy,overlap,max_pde_residual\n" << std::setprecision(17);
  for (int n = 0; n < levels; ++n) {
    const StationaryState st = ladder_generate(m, n);
    const StationaryState cf = closed_form_eigenfunction(m, n);
    double worst = 0.0;
    for (const PhasePoint& p : points) worst = std::max(worst, pde_residual(m, st, p.t, p.x));
    body << n << ',' << st.energy << ',' << cf.energy << ',' << normalized_overlap(m, st.spatial, cf.spatial) << ','
         << worst << '\n';
  }
  emit(c, out, [&](std::ostream& os) { os << body.str(); },
       "set xlabel 'n'\nset ylabel '1 - overlap'\nset logscale y\nplot data using 1:(abs(1-$4)+1e-17) with points pt 7\n");
  return 0;
}

int cmd_vonroos(const Config& cfg, const Common& c, std::ostream& out) {
  const LienardModel m = build_model(cfg);
  if (!m.isotonic() && m.omega() != 1.0) throw ConfigError("vonroos: model.omega must be 1 when model.A = 0", 0);
  if (m.isotonic() && m.omega() != 0.5) throw ConfigError("vonroos: model.omega must be 0.5 when model.A != 0", 0);
  const StationaryState st = closed_form_eigenfunction(m, 0);
  std::ostringstream body;
  body << "t,x,residual_compliant,residual_violated\n" << std::setprecision(17);
  for (const PhasePoint& p : sample_phase_points(m, 50, cfg.seed)) {
    body << p.t << ',' << p.x << ',' << vonroos_residual(m, st, -0.25, -0.5, -0.25, p.t, p.x) << ','
         << vonroos_residual(m, st, 0.0, 0.0, -1.0, p.t, p.x) << '\n';
  }
  emit(c, out, [&](std::ostream& os) { os << body.str(); },
       "set logscale y\nset xlabel 'x'\nplot data using 2:($3+1e-300) with points, data using 2:($4+1e-300) with points\n");
  return 0;
}

int cmd_report(const Config& cfg, const Common& c, std::ostream& out) {
  const LienardModel m = build_model(cfg);
  ReportSettings s;
  s.n_grid = cfg.grid_n;
  s.levels = c.levels > 0 ? c.levels : cfg.levels;
  s.seed = cfg.seed;
  const auto results = run_model_checks(m, s);
  bool any_fail = false;
  std::ostringstream body;
  body << "check,status,value,threshold,detail\n" << std::setprecision(17);
  for (const CheckResult& r : results) {
    any_fail = any_fail || r.failed();
    body << r.name << ',' << to_string(r.status) << ',' << r.value << ',' << r.threshold << ',' << csv_quote(r.detail)
         << '\n';
  }
  if (c.plot) throw ConfigError("report has no plot", 0);
  emit(c, out, [&](std::ostream& os) { os << body.str(); }, "");
  return any_fail ? 1 : 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Isochronous Lienard-II models: classical structure, symmetries and spectra", "lienard"};
  app.require_subcommand(1);
  Common common;
  Extra extra;

  CLI::App* spectrum = app.add_subcommand("spectrum", "numerical versus closed-form eigenvalues");
  CLI::App* eigenfunction = app.add_subcommand("eigenfunction", "grid eigenfunction of level --n");
  CLI::App* classical = app.add_subcommand("classical", "RK4 orbit");
  CLI::App* symmetries = app.add_subcommand("symmetries", "residuals and Noether classification of Gamma_1..8");
  CLI::App* ladder = app.add_subcommand("ladder", "states built by the creation characteristic");
  CLI::App* vonroos = app.add_subcommand("vonroos", "von Roos ordering residuals of the ground state");
  CLI::App* report = app.add_subcommand("report", "all checks for the configured model");
  for (CLI::App* sub : {spectrum, eigenfunction, classical, symmetries, ladder, vonroos, report}) {
    add_common(sub, common);
  }
  eigenfunction->add_option("--n", extra.n, "level index");
  classical->add_option("--x0", extra.x0, "initial position");
  classical->add_option("--v0", extra.v0, "initial velocity");
  classical->add_option("--periods", extra.periods, "duration in periods 2 pi / omega");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const Config cfg = load_config(common.config);
    if (spectrum->parsed()) return cmd_spectrum(cfg, common, out);
    if (eigenfunction->parsed()) return cmd_eigenfunction(cfg, common, extra, out);
    if (classical->parsed()) return cmd_classical(cfg, common, extra, out);
    if (symmetries->parsed()) return cmd_symmetries(cfg, common, out);
    if (ladder->parsed()) return cmd_ladder(cfg, common, out);
    if (vonroos->parsed()) return cmd_vonroos(cfg, common, out);
    if (report->parsed()) return cmd_report(cfg, common, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace lienard
