#include "bcslab/critical_temp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "bcslab/constants.hpp"
#include "bcslab/error.hpp"
#include "bcslab/kernels.hpp"
#include "bcslab/scattering.hpp"
#include "bcslab/spectral.hpp"

namespace bcslab {

namespace {

// Single-quality thermal-measure sum: the node part of
// (1/2pi^2) integral (p^2/K - 1) dp plus the analytic mu/(p^2 - mu) tail.
double m_sum(double T, double mu, const MomentumGridParams& params) {
  const MomentumGrid g = make_momentum_grid(T, mu, /*s_max=*/0.0, params);
  const double body = (g.w_over_k * g.p.square() - g.w).sum();
  return (body + g.tail_m) / (2.0 * kPi * kPi);
}

} // namespace

MmuValue m_mu(double T, double mu, const MomentumGridParams& params) {
  if (!(T > 0.0)) fail(ErrorKind::domain, "m_mu: T must be positive");
  if (!(mu > 0.0)) fail(ErrorKind::domain, "m_mu: mu must be positive");
  const double coarse = m_sum(T, mu, params);
  MomentumGridParams fine = params;
  fine.quality = 2.0 * params.quality;
  MmuValue out;
  out.value = m_sum(T, mu, fine);
  out.T = T;
  out.mu = mu;
  out.quadrature_error = std::abs(out.value - coarse);
  return out;
}

double m_mu_asymptotic(double T, double mu) {
  if (!(T > 0.0)) fail(ErrorKind::domain, "m_mu_asymptotic: T must be positive");
  if (!(mu > 0.0)) fail(ErrorKind::domain, "m_mu_asymptotic: mu must be positive");
  return std::sqrt(mu) / (2.0 * kPi * kPi) * (std::log(mu / T) - universal_offset());
}

double tc_asymptotic(double mu, double a) {
  if (!(mu > 0.0)) fail(ErrorKind::domain, "tc_asymptotic: mu must be positive");
  if (!(a < 0.0))
    fail(ErrorKind::domain, "tc_asymptotic: requires a negative scattering length");
  return mu * tc_prefactor() * std::exp(kPi / (2.0 * std::sqrt(mu) * a));
}

TcResult tc_solve(const Potential& pot, double mu, const GridSpec& spec, double t_floor_rel) {
  if (!(mu > 0.0)) fail(ErrorKind::domain, "tc_solve: mu must be positive");
  if (!(t_floor_rel > 0.0 && t_floor_rel < 1.0))
    fail(ErrorKind::domain, "tc_solve: t_floor_rel must lie in (0, 1)");

  const RadialGrid grid = spec.radial(pot);
  const double e0 = min_eig_value(assemble_bs_zero_sym(pot, grid));
  if (e0 <= -1.0) {
    std::ostringstream ss;
    ss << "tc_solve: the zero-energy operator has smallest eigenvalue " << e0
       << " <= -1 (a bound state); the transition criterion applies only below the"
          " binding threshold";
    fail(ErrorKind::bound_state, ss.str());
  }
  const double lambda =
      e0 < 0.0 ? -1.0 / e0 : std::numeric_limits<double>::infinity();

  TcResult res;
  res.lambda = lambda;

  // The operator's eigenvalue is an increasing function of T. Sign-definite
  // potentials use the position-space assembly (cheaper at fixed accuracy);
  // sign-changing ones use the always-symmetric momentum-space partner.
  const bool definite = pot.sign() != 0;
  const double s_max = 2.0 * grid.r_max;
  int iterations = 0;
  auto eval = [&](double T) -> double {
    const MomentumGrid pg = make_momentum_grid(T, mu, s_max, spec.bt);
    const KernelMatrix b = definite ? assemble_bt(pot, grid, pg, spec.tail_tol)
                                    : assemble_bt_momentum(pot, grid, pg, spec.tail_tol);
    ++iterations;
    return min_eig_value(b);
  };

  // Upper end of the bracket: mu / (2 (lambda - 1)) restores positivity for
  // sign-definite potentials. For sign-changing V the coupling of the signed
  // operator can understate the bound, so walk upward before giving up.
  double t_hi = std::isfinite(lambda) ? mu / (2.0 * (lambda - 1.0)) : mu;
  double e_hi = eval(t_hi);
  for (int widen = 0; e_hi < -1.0 - 1e-6 && (pot.sign() == 0 || !std::isfinite(lambda)) &&
                      widen < 10;
       ++widen) {
    t_hi *= 4.0;
    e_hi = eval(t_hi);
  }
  if (e_hi < -1.0 - 1e-6) {
    std::ostringstream ss;
    ss << "tc_solve: positivity fails at the bracket's upper end T = " << t_hi
       << " (min eigenvalue " << e_hi << "); internal inconsistency between the"
          " zero-energy coupling and the thermal assembly";
    fail(ErrorKind::bracket, ss.str());
  }
  res.upper_bound = t_hi;
  res.iterations = iterations;

  if (std::abs(e_hi + 1.0) < 1e-6) {
    // The transition sits at (or within tolerance of) the a-priori bound.
    res.tc = t_hi;
    res.bracket_lo = t_hi;
    res.bracket_hi = t_hi;
    res.min_eig_at_tc = e_hi;
    res.eig_residual = std::abs(e_hi + 1.0);
    return res;
  }

  const double t_floor = std::max(mu * t_floor_rel, 1e-300);
  const double e_floor = eval(t_floor);
  res.iterations = iterations;
  if (e_floor >= -1.0) {
    // Positivity holds down to the floor: no transition at representable
    // temperatures. Sentinel, documented in the header.
    res.tc = 0.0;
    res.bracket_lo = 0.0;
    res.bracket_hi = 0.0;
    res.min_eig_at_tc = e_floor;
    res.eig_residual = std::numeric_limits<double>::quiet_NaN();
    return res;
  }

  // Log-bisection, invariant eval(lo) < -1 <= eval(hi).
  double llo = std::log(t_floor);
  double lhi = std::log(t_hi);
  constexpr int kMaxIter = 200;
  while (true) {
    if (iterations >= kMaxIter || lhi - llo < 1e-12) {
      std::ostringstream ss;
      ss << "tc_solve: bisection "
         << (iterations >= kMaxIter ? "exceeded the evaluation budget"
                                    : "collapsed the bracket (log-width < 1e-12)")
         << " near T = " << std::exp(0.5 * (llo + lhi))
         << " without meeting the eigenvalue residual 1e-6; increase the grid"
            " resolution or loosen the momentum tolerances";
      fail(ErrorKind::convergence, ss.str());
    }
    const double lmid = 0.5 * (llo + lhi);
    const double tmid = std::exp(lmid);
    const double e = eval(tmid);
    res.iterations = iterations;
    if (std::abs(e + 1.0) < 1e-6) {
      res.tc = tmid;
      res.bracket_lo = std::exp(llo);
      res.bracket_hi = std::exp(lhi);
      res.min_eig_at_tc = e;
      res.eig_residual = std::abs(e + 1.0);
      return res;
    }
    (e < -1.0 ? llo : lhi) = lmid;
  }
}

CorrectionDiagnostics correction_diagnostics(const Potential& pot, double T, double mu,
                                             const GridSpec& spec, int n_threads) {
  if (!(T > 0.0)) fail(ErrorKind::domain, "correction_diagnostics: T must be positive");
  if (!(mu > 0.0)) fail(ErrorKind::domain, "correction_diagnostics: mu must be positive");
  const RadialGrid grid = spec.radial(pot);
  const MomentumGrid pg = make_momentum_grid(T, mu, 2.0 * grid.r_max, spec.a_kernel);
  if (pg.tail_kernel_bound > spec.tail_tol) {
    std::ostringstream ss;
    ss << "correction_diagnostics: neglected momentum tail bound " << pg.tail_kernel_bound
       << " exceeds the tolerance " << spec.tail_tol << "; raise p_max";
    fail(ErrorKind::resolution, ss.str());
  }

  // One profile evaluation serves both dressings.
  const Eigen::MatrixXd prof = a_kernel_profile(grid, pg, n_threads);
  const int n = grid.n();
  Eigen::VectorXd d_signed(n), d_abs(n);
  for (int i = 0; i < n; ++i) {
    const double sw = std::sqrt(grid.w[i]);
    d_signed[i] = pot.sqrt_signed(grid.r[i]) * sw;
    d_abs[i] = pot.sqrt_abs(grid.r[i]) * sw;
  }
  const Eigen::MatrixXd a_signed =
      d_signed.asDiagonal() * prof * d_abs.asDiagonal();
  // sgn(V) V^{1/2} = |V|^{1/2}, so the sign-twisted kernel in the quadratic
  // form is the |V|-dressed profile, symmetric by construction.
  const Eigen::MatrixXd a_twisted = d_abs.asDiagonal() * prof * d_abs.asDiagonal();

  const Eigen::VectorXd f = solve_shifted(assemble_bs_zero(pot, grid), dressed_r_signed(pot, grid));

  CorrectionDiagnostics out;
  out.m = m_mu(T, mu).value;
  out.a_norm_hs = a_signed.norm();
  out.norm_ratio = out.a_norm_hs / (std::pow(mu, 0.25) * out.m);
  out.form_value = f.dot(a_twisted * f);
  out.form_ratio = std::abs(out.form_value) / (std::sqrt(mu) * out.m);
  return out;
}

double hs_norm_a(const Potential& pot, double T, double mu, const GridSpec& spec,
                 int n_threads) {
  if (!(T > 0.0)) fail(ErrorKind::domain, "hs_norm_a: T must be positive");
  if (!(mu > 0.0)) fail(ErrorKind::domain, "hs_norm_a: mu must be positive");
  const RadialGrid grid = spec.radial(pot);
  const MomentumGrid pg = make_momentum_grid(T, mu, 2.0 * grid.r_max, spec.a_kernel);
  return assemble_a_kernel(pot, grid, pg, spec.tail_tol, n_threads).m.norm();
}

std::vector<SweepRow> sweep(const Potential& pot, const std::vector<double>& mu_list,
                            const GridSpec& spec, int n_threads) {
  if (mu_list.empty()) fail(ErrorKind::domain, "sweep: mu_list is empty");
  for (double mu : mu_list)
    if (!(mu > 0.0)) fail(ErrorKind::domain, "sweep: every mu must be positive");

  // The scattering length does not depend on mu: compute it once up front.
  const RadialGrid grid = spec.radial(pot);
  const AssumptionReport rep = validate_assumptions(pot, grid);
  if (!rep.spectrum_ok)
    fail(ErrorKind::bound_state,
         "sweep: the zero-energy operator has a bound state; the scattering length"
         " and the weak-coupling asymptotics are undefined");
  const double a = rep.scattering_length;
  if (!(a < 0.0)) {
    std::ostringstream ss;
    ss << "sweep: scattering length " << a
       << " is nonnegative; the asymptotic comparison requires a < 0";
    fail(ErrorKind::domain, ss.str());
  }

  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const int n = static_cast<int>(mu_list.size());
  std::vector<SweepRow> rows(n);
  std::atomic<int> next{0};
  auto work = [&]() {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      SweepRow& row = rows[i];
      row.mu = mu_list[i];
      row.a = a;
      row.m_limit = -1.0 / (4.0 * kPi * a);
      row.asymptotic_tc = tc_asymptotic(row.mu, a);
      row.ok = true;
      try {
        const TcResult tr = tc_solve(pot, row.mu, spec);
        row.tc = tr.tc;
        row.eig_residual = tr.eig_residual;
        if (tr.tc > 0.0) {
          row.m_at_tc = m_mu(tr.tc, row.mu).value;
          row.deviation = std::log(row.mu / tr.tc) +
                          kPi / (2.0 * std::sqrt(row.mu) * a) - universal_offset();
        } else {
          row.m_at_tc = nan;
          row.deviation = nan;
        }
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
        row.tc = nan;
        row.m_at_tc = nan;
        row.deviation = nan;
        row.eig_residual = nan;
      }
    }
  };

  const int workers = std::clamp(n_threads, 1, n);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int k = 0; k < workers - 1; ++k) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
  }
  return rows;
}

} // namespace bcslab
