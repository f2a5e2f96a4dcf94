#pragma once

#include <vector>

#include <Eigen/Core>

#include "bcslab/potential.hpp"

namespace bcslab {

// Composite Gauss-Legendre grid on [0, r_max] with panel edges aligned to the
// potential's breakpoints, so every panel sees a smooth integrand.
struct RadialGrid {
  Eigen::ArrayXd r;
  Eigen::ArrayXd w;
  double r_max = 0.0;
  // Panel structure: nodes come as consecutive blocks of panel_order
  // Gauss-Legendre nodes, block k spanning [panel_edges[k], panel_edges[k+1]].
  // Assemblies use it to integrate the kernel kink at r = r' exactly instead
  // of point-sampling across it; without it they fall back to plain sampling.
  int panel_order = 0;
  std::vector<double> panel_edges;
  int n() const { return static_cast<int>(r.size()); }
};

// r_max keeps all but tail_fraction of int |V|(1+r) r^2 dr inside the grid
// (the support edge exactly, for compactly supported kinds); a positive
// r_max_override replaces the automatic choice. Throws Error{resolution} when
// n_nodes yields fewer than 8 nodes per characteristic length of the potential.
RadialGrid make_radial_grid(const Potential& pot, int n_nodes, double tail_fraction = 1e-10,
                            double r_max_override = 0.0);

struct MomentumGridParams {
  double p_max = 48.0;    // grid endpoint; beyond it tails are handled analytically
  double xi_inner = 25.0; // half-width of the inner window in xi = (p^2-mu)/(2T)
  double eta_panel = 1.5; // panel width in eta = ln xi for the logarithmic zone
  int n_gauss = 16;       // Gauss-Legendre order for p- and xi-panels
  int n_gauss_eta = 12;   // Gauss-Legendre order for eta-panels
  double quality = 1.0;   // >= 1; resolution multiplier for convergence studies
  double flat_rel = 1e-12; // |p^2-mu|/mu below which p(xi) is constant in doubles
};

// Quadrature grid for thermal momentum integrals against K_{T,mu}(p) =
// |p^2-mu| / tanh(|p^2-mu|/(2T)). Zones: a smooth lower region
// p in [0, sqrt(mu/2)], a window resolved per side in the substituted
// variable xi = (p^2-mu)/(2T) (inner panels up to xi_inner, then panels in
// ln xi out to |p^2-mu| = mu/2, collapsing to a single panel where p(xi) is
// flat in double precision), and a geometric upper region out to p_max.
// Weights are assembled from tanh(xi)/(2 p xi) so no p^2 - mu subtraction
// ever occurs near the Fermi surface; the construction stays accurate for
// T/mu down to 1e-280.
struct MomentumGrid {
  Eigen::ArrayXd p;        // nodes
  Eigen::ArrayXd w;        // plain dp weights
  Eigen::ArrayXd p2mmu;    // p^2 - mu, formed as 2T*xi inside the window
  Eigen::ArrayXd w_over_k; // w / K_{T,mu}(p), stable at any T
  double T = 0.0;
  double mu = 0.0;
  double p_max = 0.0;
  double win_lo = 0.0; // sqrt(mu/2), lower edge of the window zones
  double win_hi = 0.0; // sqrt(3 mu/2), upper edge of the window zones
  // Exact value of int_{p_max}^inf (1/(p^2-mu) - 1/p^2) p^2 dp, the residual
  // tail of the regularized thermal integral once tanh has saturated.
  double tail_m = 0.0;
  // Bound on the neglected tail of oscillatory kernel integrals:
  // int_{p_max}^inf (1/K - 1/p^2) dp <= mu / (3 p_max^3 (1 - mu/p_max^2)).
  double tail_kernel_bound = 0.0;
  int n() const { return static_cast<int>(p.size()); }

  // In the flat zone (active only for T < flat_rel*mu/(2*xi_inner)) the plain
  // weights resolve only integrands that cancel the 1/xi thermal decay, which
  // every consumer in this library does; w_over_k is exact everywhere.
};

// s_max is the largest oscillation scale sin(p s) the grid must resolve
// (2 * r_max for the position-space kernels); pass 0 for scalar integrals.
MomentumGrid make_momentum_grid(double T, double mu, double s_max,
                                const MomentumGridParams& params = {});

// Grid bundle for a full calculation: one radial grid plus independent
// momentum measures for the thermal kernel, the remainder kernel (deliberately
// different parameters, so agreement between the two is evidence rather than
// tautology), and the momentum-space operator form.
struct GridSpec {
  int n_radial = 384;
  double radial_tail_fraction = 1e-10;
  double r_max_override = 0.0; // > 0 replaces the automatic radial extent
  double tail_tol = 1e-6;      // acceptable analytic-tail bound for kernel assembly
  MomentumGridParams bt;       // thermal kernel assembly
  MomentumGridParams a_kernel; // remainder kernel
  MomentumGridParams op;       // momentum-space operator / gap iteration
  GridSpec() {
    a_kernel.p_max = 56.0;
    a_kernel.quality = 1.5;
    op.p_max = 40.0;
  }

  RadialGrid radial(const Potential& pot) const {
    return make_radial_grid(pot, n_radial, radial_tail_fraction, r_max_override);
  }
};

} // namespace bcslab
