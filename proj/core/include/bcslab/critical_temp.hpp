#pragma once
// Thermal measure m(T, mu), the critical temperature of the pairing
// criterion located by log-bisection on the smallest eigenvalue of the
// thermal Birman-Schwinger operator, the closed-form weak-coupling
// asymptotics, correction-kernel diagnostics, and the mu-sweep that
// compares solver output against the asymptotic formula.

#include <string>
#include <vector>

#include "bcslab/grids.hpp"
#include "bcslab/potential.hpp"

namespace bcslab {

// Thermal measure
//   m(T, mu) = (1 / 2 pi^2) * integral_0^inf (1/K(p) - 1/p^2) p^2 dp,
// with K(p) = |p^2 - mu| / tanh(|p^2 - mu| / 2T). Finite for every T > 0,
// strictly decreasing in T, and growing like sqrt(mu) ln(mu/T) as T -> 0.
struct MmuValue {
  double value = 0.0;
  double T = 0.0;
  double mu = 0.0;
  // Absolute estimate from recomputing with doubled grid quality.
  double quadrature_error = 0.0;
};

MmuValue m_mu(double T, double mu, const MomentumGridParams& params = {});

// Closed-form leading behavior (sqrt(mu) / 2 pi^2)(ln(mu/T) + gamma - 2 +
// ln(8/pi)); crosses zero at T = mu * exp(gamma - 2 + ln(8/pi)).
double m_mu_asymptotic(double T, double mu);

// Result of the critical-temperature bisection.
struct TcResult {
  double tc = 0.0;          // critical temperature; 0 when positivity holds down to the floor
  double bracket_lo = 0.0;  // final bisection bracket, bracket_lo <= tc <= bracket_hi
  double bracket_hi = 0.0;
  double eig_residual = 0.0;  // |min_eig + 1| at tc (NaN for the tc = 0 sentinel)
  int iterations = 0;         // eigenvalue evaluations performed
  double upper_bound = 0.0;   // a-priori bound mu / (2 (lambda - 1)) when it applies
  double lambda = 0.0;        // coupling strength of the zero-energy operator
  double min_eig_at_tc = 0.0;
};

// Locates the temperature where the smallest eigenvalue of the thermal
// operator crosses -1, bisecting in log T over [mu * t_floor_rel, the
// a-priori upper bound]. Returns the tc = 0 sentinel when the operator
// stays above -1 all the way down to the floor. Errors: bound_state when
// the zero-energy operator already has an eigenvalue <= -1; bracket when
// positivity fails at the bracket's upper end; convergence when the
// eigenvalue residual cannot be brought below 1e-6.
TcResult tc_solve(const Potential& pot, double mu, const GridSpec& spec = {},
                  double t_floor_rel = 1e-280);

// Weak-coupling closed form mu * (8/pi) e^{gamma - 2} * e^{pi / (2 sqrt(mu) a)}.
// Requires mu > 0 and a < 0 (domain error otherwise); underflows to 0 as
// a -> 0^- by design.
double tc_asymptotic(double mu, double a);

// Size diagnostics for the correction kernel A (the part of the thermal
// operator left after removing the zero-energy operator and the rank-one
// thermal term). Both normalized ratios must vanish as mu -> 0 for the
// weak-coupling asymptotics to hold; the sweep tests monotone decrease.
struct CorrectionDiagnostics {
  double a_norm_hs = 0.0;   // weighted Frobenius (Hilbert-Schmidt) norm of A
  double norm_ratio = 0.0;  // a_norm_hs / (mu^{1/4} m)
  double form_value = 0.0;  // <f| sgn(V) A |f>, f the dressed zero-energy source
  double form_ratio = 0.0;  // |form_value| / (sqrt(mu) m)
  double m = 0.0;           // thermal measure used in the normalizations
};

CorrectionDiagnostics correction_diagnostics(const Potential& pot, double T, double mu,
                                             const GridSpec& spec = {}, int n_threads = 1);

// Weighted Frobenius norm of the correction kernel alone.
double hs_norm_a(const Potential& pot, double T, double mu, const GridSpec& spec = {},
                 int n_threads = 1);

// One row of the mu-sweep. deviation = ln(mu/tc) + pi/(2 sqrt(mu) a) -
// (2 - gamma - ln(8/pi)) measures the distance from the asymptotic law;
// m_limit = -1/(4 pi a) is the predicted limit of m(tc, mu) as mu -> 0.
struct SweepRow {
  double mu = 0.0;
  double tc = 0.0;
  double a = 0.0;
  double m_at_tc = 0.0;
  double m_limit = 0.0;
  double asymptotic_tc = 0.0;
  double deviation = 0.0;
  double eig_residual = 0.0;
  bool ok = false;
  std::string error;  // nonempty when ok is false
};

// Runs tc_solve plus the asymptotic comparison for each mu. The scattering
// length is computed once (it does not depend on mu). Row failures are
// recorded in-row and the sweep continues; rows are independent and may be
// computed on n_threads workers, with results always in input order.
std::vector<SweepRow> sweep(const Potential& pot, const std::vector<double>& mu_list,
                            const GridSpec& spec = {}, int n_threads = 1);

} // namespace bcslab
