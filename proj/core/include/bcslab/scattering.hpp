#pragma once

#include <vector>

#include "bcslab/grids.hpp"
#include "bcslab/potential.hpp"

namespace bcslab {

enum class ScatteringMethod { bs_formula, ode_asymptote, born_series };

struct ScatteringResult {
  double a = 0.0;
  ScatteringMethod method = ScatteringMethod::bs_formula;
  double error_estimate = 0.0; // same units as a
  // ODE extras: u(r) ~ c (r - a) on the fitted tail; rms misfit of the fit.
  double c = 0.0;
  double fit_rms = 0.0;
  int born_order = 0;
};

// Resolvent-formula scattering length: solves (1 + M0) x = d_signed on the
// reduced radial grid (M0 = zero-energy Birman-Schwinger matrix) and returns
// a = <d_abs, x>. The 4 pi of the 3D formula cancels against the radial
// reduction; the constant is pinned by the mandatory three-way calibration
// test (this formula, the ODE asymptote, and the first Born term).
// error_estimate is the change under halving the radial grid.
ScatteringResult scattering_length_bs(const Potential& pot, const RadialGrid& grid);

// Zero-energy radial equation -u'' + V u = 0, u(0) = 0, u'(0) = 1, integrated
// adaptively to r_max (pass 0 to choose 1.8x the potential's numerical
// support), then fitted to u = c (r - a) on [0.6 r_max, r_max] by least
// squares. A sign change of u raises ErrorKind::bound_state; a fit misfit
// above 1e-8 of max|u| raises ErrorKind::fit (r_max too small).
ScatteringResult scattering_length_ode(const Potential& pot, double r_max = 0.0);

// Coupling margin lambda = -1/min_eig of the symmetric zero-energy
// Birman-Schwinger partner; +infinity when the smallest eigenvalue is >= 0.
double lambda_coupling(const Potential& pot, const RadialGrid& grid);

// Residual of the integral identity int V psi d^3x = 4 pi a for the
// normalized zero-energy solution psi -> 1 - a/r, as a relative quantity
// |int V psi - 4 pi a| / max(4 pi |a|, eps). Both sides come from the same
// ODE integration, so a small value certifies the asymptote fit and the
// integration together.
double appendix_identity_check(const Potential& pot, double r_max = 0.0);

// Partial sums of the Born (Neumann) series for the resolvent formula:
// sums[k] = sum_{j<=k} <d_abs, (-M0)^j d_signed>. Converges to the
// scattering length at ratio 1/lambda when lambda > 1.
std::vector<double> born_partial_sums(const Potential& pot, const RadialGrid& grid, int orders);

} // namespace bcslab
