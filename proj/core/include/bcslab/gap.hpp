#pragma once
// Nonlinear s-wave pairing gap equation on the thermal momentum grid:
// damped fixed-point iteration, solution classification, the temperature
// scan that exhibits the phase transition, and the stability check of the
// linearized map at a converged solution.
//
// The gap profile is real-valued by design (for a radial attractive
// potential the minimizer can be chosen real and s-wave); complex or
// higher-angular-momentum branches are out of scope.

#include <string>
#include <vector>

#include <Eigen/Core>

#include "bcslab/grids.hpp"
#include "bcslab/kernels.hpp"
#include "bcslab/potential.hpp"

namespace bcslab {

// Spherical Fourier transform of the potential,
//   vhat(k) = sqrt(2/pi) (1/k) integral_0^inf V(r) sin(kr) r dr.
double radial_fourier(const Potential& pot, double k);

// s-wave angular average of vhat(p - q) on the momentum grid:
//   entry (i, j) = sqrt(pi/2) * vt(p_i, p_j) / (p_i p_j)
// with vt the reduced momentum kernel. Symmetric; finite on the diagonal
// for integrable potentials.
KernelMatrix vhat_swave(const Potential& pot, const RadialGrid& grid,
                        const MomentumGrid& pgrid);

struct GapSolution {
  Eigen::ArrayXd p;           // momentum nodes
  Eigen::ArrayXd delta;       // gap profile at the nodes
  Eigen::ArrayXd dispersion;  // E(p) = sqrt((p^2 - mu)^2 + delta^2)
  double residual = 0.0;      // sup-norm fixed-point defect at the last step
  int iterations = 0;
  bool nontrivial = false;    // max|delta| above the order threshold 1e-10 * mu
  double max_delta = 0.0;
  double T = 0.0;
  double mu = 0.0;
};

// Damped fixed-point iteration delta <- (1 - beta) delta + beta * RHS(delta)
// from the given starting profile (sampled on the momentum grid the solver
// builds; the overload takes a constant start). beta starts at 1, halves
// whenever the defect grows, floor 1/64. Iterates until the defect falls
// below 1e-8 both absolutely and relative to max|delta| (nontrivial), or
// the profile decays below the order threshold (trivial). delta = 0 is an
// exact fixed point and returns after one evaluation. Errors: convergence
// (with the trailing iterate history) when the budget is exhausted.
GapSolution gap_iterate(const Potential& pot, double T, double mu,
                        const GridSpec& spec, const Eigen::ArrayXd& delta0);
GapSolution gap_iterate(const Potential& pot, double T, double mu,
                        const GridSpec& spec = {}, double delta0 = 0.0);

struct TransitionPoint {
  double T = 0.0;
  double max_delta = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool nontrivial = false;
  bool ok = false;
  std::string error;  // nonempty when ok is false
};

// Runs gap_iterate at each temperature (each from the same constant start);
// per-point failures are recorded in-row. Points are independent and may be
// computed on n_threads workers, with results always in input order.
std::vector<TransitionPoint> transition_scan(const Potential& pot, double mu,
                                             const std::vector<double>& t_list,
                                             const GridSpec& spec = {}, double delta0 = 0.0,
                                             int n_threads = 1);

// Dominant eigenvalue of the gap map linearized at a converged solution
// (computed via an exactly similar symmetric matrix). Stability of the
// converged branch means a value <= 1 up to solver tolerance.
double gap_linearization_max_eig(const Potential& pot, const GapSolution& sol,
                                 const GridSpec& spec = {});

} // namespace bcslab
