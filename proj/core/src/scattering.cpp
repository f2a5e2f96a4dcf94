#include "bcslab/scattering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "bcslab/constants.hpp"
#include "bcslab/error.hpp"
#include "bcslab/kernels.hpp"
#include "bcslab/spectral.hpp"

namespace bcslab {

namespace {

// State for the zero-energy radial problem: y = (u, u', I) with
// I' = V u r accumulating int V psi r^2 dr = int V u r dr.
using State = std::array<double, 3>;

State rhs(const Potential& pot, double r, const State& y, double r_lo, double r_hi) {
  // Clamp the evaluation point a hair inside the smooth segment so one-sided
  // limits are taken correctly at potential breakpoints.
  const double eps = 1e-13 * (r_hi - r_lo);
  const double rc = std::min(std::max(r, r_lo + eps), r_hi - eps);
  const double v = pot(rc);
  return {y[1], v * y[0], v * y[0] * rc};
}

// Dormand-Prince 5(4) embedded pair.
State dopri5_step(const Potential& pot, double r, const State& y, double h, double r_lo,
                  double r_hi, double& err_norm) {
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                   e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                   e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  auto axpy = [&y](double h_, std::initializer_list<std::pair<double, const State*>> terms) {
    State out = y;
    for (const auto& [c, k] : terms)
      for (int i = 0; i < 3; ++i) out[i] += h_ * c * (*k)[i];
    return out;
  };
  const State k1 = rhs(pot, r, y, r_lo, r_hi);
  const State k2 = rhs(pot, r + h / 5, axpy(h, {{a21, &k1}}), r_lo, r_hi);
  const State k3 = rhs(pot, r + 3 * h / 10, axpy(h, {{a31, &k1}, {a32, &k2}}), r_lo, r_hi);
  const State k4 =
      rhs(pot, r + 4 * h / 5, axpy(h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}), r_lo, r_hi);
  const State k5 = rhs(pot, r + 8 * h / 9,
                       axpy(h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}), r_lo, r_hi);
  const State k6 = rhs(
      pot, r + h, axpy(h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}), r_lo,
      r_hi);
  const State y5 = axpy(h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
  const State k7 = rhs(pot, r + h, y5, r_lo, r_hi);

  err_norm = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double err =
        h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    const double scale = 1e-12 * std::max({std::abs(y[i]), std::abs(y5[i]), 1.0});
    err_norm = std::max(err_norm, std::abs(err) / scale);
  }
  return y5;
}

// Integrates over one smooth segment [r0, r1], stopping exactly at the points
// in `stops` (ascending, within the segment) and recording (r, u) there.
void integrate_segment(const Potential& pot, double r0, double r1, State& y,
                       const std::vector<double>& stops,
                       std::vector<std::pair<double, double>>& samples) {
  size_t next_stop = 0;
  double r = r0;
  double h = (r1 - r0) / 64.0;
  int steps = 0;
  while (r < r1) {
    double target = r1;
    while (next_stop < stops.size() && stops[next_stop] <= r + 1e-14 * r1) ++next_stop;
    if (next_stop < stops.size() && stops[next_stop] < target) target = stops[next_stop];
    if (r + h > target) h = target - r;
    double err = 0.0;
    const State y_new = dopri5_step(pot, r, y, h, r0, r1, err);
    if (err <= 1.0) {
      const double u_prev = y[0];
      y = y_new;
      r = std::min(r + h, r1);
      if (u_prev > 0.0 && y[0] <= 0.0) {
        std::ostringstream ss;
        ss << "zero-energy solution changes sign near r = " << r
           << ": the potential supports a bound state (coupling margin <= 1)";
        fail(ErrorKind::bound_state, ss.str());
      }
      if (next_stop < stops.size() && std::abs(r - stops[next_stop]) <= 1e-12 * r1) {
        samples.emplace_back(r, y[0]);
        ++next_stop;
      }
    }
    h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
    h = std::min(h, r1 - r + 1e-300);
    if (++steps > 2000000)
      fail(ErrorKind::convergence, "zero-energy integration exceeded its step budget");
  }
}

struct OdeRun {
  double a;
  double c;
  double fit_rms;     // rms misfit of the linear tail fit
  double u_max;       // max |u| over the fit window
  double moment;      // int_0^{r_max} V u r dr
  double r_max;
};

OdeRun ode_scatter_run(const Potential& pot, double r_max) {
  if (r_max == 0.0) r_max = 1.8 * pot.suggested_r_max(1e-10);
  if (!(r_max > 0.0)) fail(ErrorKind::domain, "scattering_length_ode: r_max must be positive");

  std::vector<double> edges{0.0};
  for (double b : pot.breakpoints())
    if (b > 0.0 && b < r_max) edges.push_back(b);
  edges.push_back(r_max);
  std::sort(edges.begin(), edges.end());

  constexpr int kSamples = 64;
  const double win_lo = 0.6 * r_max;
  std::vector<double> stops(kSamples);
  for (int i = 0; i < kSamples; ++i)
    stops[i] = win_lo + (r_max - win_lo) * i / (kSamples - 1);

  State y{0.0, 1.0, 0.0};
  std::vector<std::pair<double, double>> samples;
  for (size_t seg = 0; seg + 1 < edges.size(); ++seg) {
    std::vector<double> seg_stops;
    for (double s : stops)
      if (s > edges[seg] && s <= edges[seg + 1]) seg_stops.push_back(s);
    integrate_segment(pot, edges[seg], edges[seg + 1], y, seg_stops, samples);
  }
  if (samples.size() < 8)
    fail(ErrorKind::fit, "scattering_length_ode: too few tail samples; increase r_max");

  // Least-squares u = alpha r + beta over the tail window.
  const int ns = static_cast<int>(samples.size());
  Eigen::MatrixXd design(ns, 2);
  Eigen::VectorXd ucol(ns);
  for (int i = 0; i < ns; ++i) {
    design(i, 0) = samples[i].first;
    design(i, 1) = 1.0;
    ucol[i] = samples[i].second;
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(ucol);
  const double alpha = coef[0], beta = coef[1];
  const double rms = (design * coef - ucol).norm() / std::sqrt(static_cast<double>(ns));
  const double u_max = ucol.cwiseAbs().maxCoeff();
  if (rms > 1e-8 * std::max(u_max, 1e-300)) {
    std::ostringstream ss;
    ss << "scattering_length_ode: tail is not linear (rms misfit " << rms << " vs max|u| "
       << u_max << "); the potential is not negligible by r = " << r_max
       << ", increase r_max";
    fail(ErrorKind::fit, ss.str());
  }
  if (alpha == 0.0)
    fail(ErrorKind::fit, "scattering_length_ode: degenerate tail fit (u' -> 0)");
  return {-beta / alpha, alpha, rms, u_max, y[2], r_max};
}

} // namespace

ScatteringResult scattering_length_bs(const Potential& pot, const RadialGrid& grid) {
  auto value_on = [&pot](const RadialGrid& g) {
    const KernelMatrix m0 = assemble_bs_zero(pot, g, 0);
    const Eigen::VectorXd x = solve_shifted(m0, dressed_r_signed(pot, g));
    return dressed_r_abs(pot, g).dot(x);
  };
  ScatteringResult res;
  res.method = ScatteringMethod::bs_formula;
  res.a = value_on(grid);
  // Error estimate from a refined grid at the same extent: a coarsened one
  // can drop below the resolvability floor for long-tailed potentials, a
  // doubled one never can.
  const RadialGrid fine = make_radial_grid(pot, 2 * grid.n(), 1e-10, grid.r_max);
  res.error_estimate = std::abs(res.a - value_on(fine));
  return res;
}

ScatteringResult scattering_length_ode(const Potential& pot, double r_max) {
  const OdeRun run = ode_scatter_run(pot, r_max);
  ScatteringResult res;
  res.method = ScatteringMethod::ode_asymptote;
  res.a = run.a;
  res.c = run.c;
  res.fit_rms = run.fit_rms;
  res.error_estimate = run.fit_rms / std::abs(run.c);
  return res;
}

double lambda_coupling(const Potential& pot, const RadialGrid& grid) {
  const double e0 = min_eig_value(assemble_bs_zero_sym(pot, grid));
  if (e0 >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / e0;
}

double appendix_identity_check(const Potential& pot, double r_max) {
  const OdeRun run = ode_scatter_run(pot, r_max);
  const double lhs = 4.0 * kPi * run.moment / run.c; // int V psi d^3x, psi normalized
  const double target = 4.0 * kPi * run.a;
  return std::abs(lhs - target) / std::max(std::abs(target), 1e-300);
}

std::vector<double> born_partial_sums(const Potential& pot, const RadialGrid& grid, int orders) {
  if (orders < 1) fail(ErrorKind::domain, "born_partial_sums: need at least one order");
  const KernelMatrix m0 = assemble_bs_zero(pot, grid, 0);
  const Eigen::VectorXd w_signed = dressed_r_signed(pot, grid);
  const Eigen::VectorXd w_abs = dressed_r_abs(pot, grid);
  std::vector<double> sums;
  sums.reserve(orders);
  Eigen::VectorXd z = w_signed;
  double acc = 0.0;
  for (int k = 0; k < orders; ++k) {
    acc += w_abs.dot(z);
    sums.push_back(acc);
    z = -(m0.m * z);
  }
  return sums;
}

} // namespace bcslab
