#include "bcslab/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <vector>

#include "bcslab/critical_temp.hpp"
#include "bcslab/error.hpp"
#include "bcslab/gap.hpp"
#include "bcslab/potential.hpp"
#include "bcslab/scattering.hpp"

namespace bcslab {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Rows and per-row notes accumulated before anything is written, so the
// manifest can carry the measured wall time up front.
struct Body {
  std::ostringstream rows;
  std::vector<std::string> notes;
  bool any_failure = false;
};

void write_cells(Body& b, const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) b.rows << ',';
    b.rows << cells[i];
  }
  b.rows << '\n';
}

Body do_scatter(const RunConfig& cfg, int) {
  const Potential pot = cfg.make_potential();
  const GridSpec spec = cfg.grid_spec();
  const RadialGrid grid = spec.radial(pot);
  const ScatteringResult bs = scattering_length_bs(pot, grid);
  const ScatteringResult ode = scattering_length_ode(pot);
  const double identity = appendix_identity_check(pot);
  Body b;
  b.rows << "a_bs,a_ode,abs_gap,bs_error_estimate,ode_fit_rms,identity_residual\n";
  write_cells(b, {fmt(bs.a), fmt(ode.a), fmt(std::abs(bs.a - ode.a)), fmt(bs.error_estimate),
                  fmt(ode.fit_rms), fmt(identity)});
  return b;
}

Body do_tc(const RunConfig& cfg, int) {
  const Potential pot = cfg.make_potential();
  const TcResult tr = tc_solve(pot, cfg.mu, cfg.grid_spec(), cfg.t_floor_rel);
  Body b;
  b.rows << "mu,tc,bracket_lo,bracket_hi,eig_residual,iterations,upper_bound,lambda,"
            "min_eig_at_tc\n";
  write_cells(b, {fmt(cfg.mu), fmt(tr.tc), fmt(tr.bracket_lo), fmt(tr.bracket_hi),
                  fmt(tr.eig_residual), std::to_string(tr.iterations), fmt(tr.upper_bound),
                  fmt(tr.lambda), fmt(tr.min_eig_at_tc)});
  return b;
}

Body do_mmu(const RunConfig& cfg, int) {
  const GridSpec spec = cfg.grid_spec();
  std::vector<double> ts = cfg.t_list.empty() ? std::vector<double>{cfg.T} : cfg.t_list;
  Body b;
  b.rows << "mu,T,value,quadrature_error,asymptotic\n";
  for (double t : ts) {
    const MmuValue m = m_mu(t, cfg.mu, spec.bt);
    write_cells(b, {fmt(cfg.mu), fmt(t), fmt(m.value), fmt(m.quadrature_error),
                    fmt(m_mu_asymptotic(t, cfg.mu))});
  }
  return b;
}

Body do_sweep(const RunConfig& cfg, int n_threads) {
  const Potential pot = cfg.make_potential();
  const std::vector<double> mu_list =
      cfg.mu_list.empty() ? std::vector<double>{1e-2, 1e-3, 1e-4} : cfg.mu_list;
  const std::vector<SweepRow> rows = sweep(pot, mu_list, cfg.grid_spec(), n_threads);
  Body b;
  b.rows << "mu,tc,a,m_at_tc,m_limit,asymptotic_tc,deviation,eig_residual\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& r = rows[i];
    write_cells(b, {fmt(r.mu), fmt(r.tc), fmt(r.a), fmt(r.m_at_tc), fmt(r.m_limit),
                    fmt(r.asymptotic_tc), fmt(r.deviation), fmt(r.eig_residual)});
    if (!r.ok) {
      b.any_failure = true;
      b.notes.push_back("# row " + std::to_string(i) + " (mu = " + fmt_short(r.mu) +
                        ") failed: " + r.error);
    }
  }
  return b;
}

Body do_gap(const RunConfig& cfg, int n_threads) {
  const Potential pot = cfg.make_potential();
  const GridSpec spec = cfg.grid_spec();
  std::vector<double> t_list = cfg.t_list;
  if (t_list.empty()) {
    // Build a ladder straddling the transition located by the linear criterion.
    const TcResult tr = tc_solve(pot, cfg.mu, spec, cfg.t_floor_rel);
    if (!(tr.tc > 0.0))
      fail(ErrorKind::domain,
           "gap: no transition above the temperature floor; supply t_list explicitly");
    for (double f : {0.70, 0.80, 0.90, 0.95, 1.05, 1.10, 1.25, 1.50})
      t_list.push_back(f * tr.tc);
  }
  const double delta0 = cfg.delta0.value_or(0.1 * cfg.mu);
  const std::vector<TransitionPoint> pts =
      transition_scan(pot, cfg.mu, t_list, spec, delta0, n_threads);
  Body b;
  b.rows << "T,max_delta,residual,iterations,classification\n";
  for (size_t i = 0; i < pts.size(); ++i) {
    const TransitionPoint& p = pts[i];
    const char* cls = !p.ok ? "error" : (p.nontrivial ? "nontrivial" : "trivial");
    write_cells(b, {fmt(p.T), fmt(p.max_delta), fmt(p.residual), std::to_string(p.iterations),
                    cls});
    if (!p.ok) {
      b.any_failure = true;
      b.notes.push_back("# row " + std::to_string(i) + " (T = " + fmt_short(p.T) +
                        ") failed: " + p.error);
    }
  }
  return b;
}

Body do_diagnose(const RunConfig& cfg, int n_threads) {
  const Potential pot = cfg.make_potential();
  const GridSpec spec = cfg.grid_spec();
  // With a mu_list, report the standard trend points T = mu/10; otherwise
  // the single configured (mu, T) pair.
  std::vector<std::pair<double, double>> points;
  if (cfg.mu_list.empty()) {
    points.emplace_back(cfg.mu, cfg.T);
  } else {
    for (double mu : cfg.mu_list) points.emplace_back(mu, mu / 10.0);
  }
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  Body b;
  b.rows << "mu,T,a_norm_hs,norm_ratio,form_value,form_ratio,m\n";
  for (size_t i = 0; i < points.size(); ++i) {
    const auto [mu, t] = points[i];
    try {
      const CorrectionDiagnostics d = correction_diagnostics(pot, t, mu, spec, n_threads);
      write_cells(b, {fmt(mu), fmt(t), fmt(d.a_norm_hs), fmt(d.norm_ratio), fmt(d.form_value),
                      fmt(d.form_ratio), fmt(d.m)});
    } catch (const std::exception& e) {
      write_cells(b, {fmt(mu), fmt(t), fmt(nan), fmt(nan), fmt(nan), fmt(nan), fmt(nan)});
      b.any_failure = true;
      b.notes.push_back("# row " + std::to_string(i) + " (mu = " + fmt_short(mu) +
                        ") failed: " + e.what());
    }
  }
  return b;
}

Body do_validate(const RunConfig& cfg, int) {
  const Potential pot = cfg.make_potential();
  const GridSpec spec = cfg.grid_spec();
  const AssumptionReport rep = validate_assumptions(pot, spec.radial(pot));
  Body b;
  b.rows << "lambda,scattering_length,spectrum_ok,norm_l1,weighted_l1,norm_l32,d_constant\n";
  write_cells(b, {fmt(rep.lambda), fmt(rep.scattering_length),
                  rep.spectrum_ok ? "true" : "false", fmt(rep.moments.norm_l1),
                  fmt(rep.moments.weighted_l1), fmt(rep.moments.norm_l32),
                  fmt(rep.d_constant)});
  return b;
}

} // namespace

const char* usage_text() {
  return "usage: bcslab <subcommand> [--config <path>] [--out <path>] [--threads <k>]"
         " [--seed <u64>]\n"
         "subcommands:\n"
         "  scatter   scattering length by both methods plus their gap\n"
         "  tc        critical temperature at the configured mu\n"
         "  mmu       thermal measure m(T, mu) at the configured points\n"
         "  sweep     tc vs the asymptotic law over a decreasing mu list\n"
         "  gap       order-parameter scan of the nonlinear gap equation\n"
         "  diagnose  correction-kernel size diagnostics\n"
         "  validate  potential admissibility report\n";
}

int run_command(const std::string& subcommand, const RunConfig& cfg, int n_threads,
                unsigned long long seed, std::ostream& os) {
  using Handler = Body (*)(const RunConfig&, int);
  Handler handler = nullptr;
  if (subcommand == "scatter") handler = do_scatter;
  else if (subcommand == "tc") handler = do_tc;
  else if (subcommand == "mmu") handler = do_mmu;
  else if (subcommand == "sweep") handler = do_sweep;
  else if (subcommand == "gap") handler = do_gap;
  else if (subcommand == "diagnose") handler = do_diagnose;
  else if (subcommand == "validate") handler = do_validate;
  if (handler == nullptr) {
    os << "unknown subcommand '" << subcommand << "'\n" << usage_text();
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  Body body;
  bool command_failed = false;
  std::string command_error;
  try {
    body = handler(cfg, n_threads);
  } catch (const std::exception& e) {
    command_failed = true;
    command_error = e.what();
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::string potential_desc;
  try {
    potential_desc = cfg.make_potential().describe();
  } catch (const std::exception&) {
    potential_desc = cfg.potential_kind + " (unavailable)";
  }

  os << "# bcslab " << subcommand << '\n';
  os << "# config_hash: " << cfg.config_hash << '\n';
  os << "# potential: " << potential_desc << '\n';
  os << "# grid: n=" << cfg.n << " r_max=" << (cfg.r_max > 0.0 ? fmt_short(cfg.r_max) : "auto")
     << " p_max=" << fmt_short(cfg.p_max) << " window_factor=" << fmt_short(cfg.window_factor)
     << " quality=" << fmt_short(cfg.quality) << '\n';
  os << "# tolerances: tail=" << fmt_short(cfg.tail)
     << " t_floor_rel=" << fmt_short(cfg.t_floor_rel) << '\n';
  os << "# threads: " << n_threads << '\n';
  os << "# seed: " << seed << '\n';
  os << "# wall_time_s: " << fmt_short(wall) << '\n';
  if (command_failed) {
    os << "# error: " << command_error << '\n';
    return 1;
  }
  for (const std::string& note : body.notes) os << note << '\n';
  os << body.rows.str();
  os.flush();
  return body.any_failure ? 1 : 0;
}

int run_command_to_path(const std::string& subcommand, const RunConfig& cfg, int n_threads,
                        unsigned long long seed, const std::string& out_override) {
  const std::string path = !out_override.empty() ? out_override : cfg.out_path;
  if (path.empty() || path == "-")
    return run_command(subcommand, cfg, n_threads, seed, std::cout);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot open output file '" + path + "'");
  const int code = run_command(subcommand, cfg, n_threads, seed, out);
  out.close();
  if (!out) fail(ErrorKind::io, "error while writing output file '" + path + "'");
  return code;
}

} // namespace bcslab
