#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>

#include "bcslab/grids.hpp"
#include "bcslab/potential.hpp"

namespace bcslab {

// Dense assembled operator plus the bookkeeping the spectral layer needs.
// When symmetric is true the matrix is exactly symmetric (assembly routines
// build one triangle, or dress a symmetric core with commutative products).
struct KernelMatrix {
  Eigen::MatrixXd m;
  bool symmetric = false;
  std::string label;
};

// K_{T,mu}(p) = |p^2-mu| / tanh(|p^2-mu|/(2T)). A series branch below
// |p^2-mu|/(2T) = 1e-4 handles the removable singularity; K = 2T at p^2 = mu.
double kfun(double T, double mu, double p);

// S(i,j) = sin(r_i * p_j).
Eigen::MatrixXd sine_matrix(const Eigen::ArrayXd& r, const Eigen::ArrayXd& p);

// Reduced zero-energy Birman-Schwinger matrix in the angular-momentum-ell
// sector: M(i,j) = V^{1/2}(r_i) G_ell(r_i,r_j) |V(r_j)|^{1/2} sqrt(w_i w_j)
// with G_ell(r,r') = r_<^{ell+1} / ((2 ell + 1) r_>^ell), the kernel through
// which 1/p^2 acts on reduced radial functions u = r psi (min(r,r') at ell=0).
KernelMatrix assemble_bs_zero(const Potential& pot, const RadialGrid& grid, int ell = 0);

// Symmetric partner of assemble_bs_zero(..., 0) with the same nonzero
// spectrum for every sign class of V: for sign-definite V this is the
// matrix itself (exactly symmetric by construction); for sign-changing V it
// is Q^{1/2} diag(sgn V) Q^{1/2} with Q = |V|^{1/2} min(r,r') |V|^{1/2}.
KernelMatrix assemble_bs_zero_sym(const Potential& pot, const RadialGrid& grid);

// Thermal Birman-Schwinger matrix
//   B(i,j) = V^{1/2}(r_i) g_T(r_i,r_j) |V(r_j)|^{1/2} sqrt(w_i w_j),
//   g_T(r,r') = (2/pi) int sin(pr) sin(pr') (1/K - 1/p^2) dp + min(r,r'),
// the 1/p^2 part in closed form and the rest on pgrid. Errors with
// ErrorKind::resolution when pgrid's neglected-tail bound exceeds tail_tol.
KernelMatrix assemble_bt(const Potential& pot, const RadialGrid& grid, const MomentumGrid& pgrid,
                         double tail_tol = 1e-6);

// Momentum-space partner M(j,k) = Vr(p_j,p_k) sqrt(w_j w_k / (K_j K_k)) with
// Vr(p,q) = (2/pi) int V(r) sin(pr) sin(qr) dr. Symmetric by construction for
// every sign class of V, and isospectral to assemble_bt's matrix (nonzero
// spectra of XY and YX coincide).
KernelMatrix assemble_bt_momentum(const Potential& pot, const RadialGrid& grid,
                                  const MomentumGrid& pgrid, double tail_tol = 1e-6);

// Reduced momentum-space potential Vr(p_j,p_k) above; exactly symmetric.
Eigen::MatrixXd reduced_momentum_v(const Potential& pot, const RadialGrid& grid,
                                   const Eigen::ArrayXd& p);

// Reduced profile of the thermal remainder kernel:
//   P(i,j) = 2 pi (G(r_i + r_j) - G(|r_i - r_j|)),
//   G(s) = (1/2pi^2) int (1 - cos(ps) - (ps)^2/2)(1/K - 1/p^2) p^2 dp,
// assembled per pair with a series branch for small ps and the analytic
// p > p_max tail folded into the s^2 term. The full remainder matrix is this
// profile dressed with V^{1/2}, |V|^{1/2} and quadrature weights; by
// construction B_T = BS_0 + m 4pi |r V^{1/2}><r |V|^{1/2}| + remainder.
Eigen::MatrixXd a_kernel_profile(const RadialGrid& grid, const MomentumGrid& pgrid,
                                 int n_threads = 1);

// Remainder matrix A(i,j) = V^{1/2}(r_i) sqrt(w_i) P(i,j) |V(r_j)|^{1/2} sqrt(w_j).
KernelMatrix assemble_a_kernel(const Potential& pot, const RadialGrid& grid,
                               const MomentumGrid& pgrid, double tail_tol = 1e-6,
                               int n_threads = 1);

// Rank-one dressing vectors of the decomposition above and of the scattering
// resolvent formula: d_signed(i) = r_i V^{1/2}(r_i) sqrt(w_i),
// d_abs(i) = r_i |V(r_i)|^{1/2} sqrt(w_i).
Eigen::VectorXd dressed_r_signed(const Potential& pot, const RadialGrid& grid);
Eigen::VectorXd dressed_r_abs(const Potential& pot, const RadialGrid& grid);

// Average of f(|x - y|) over independent uniform directions of x and y with
// |x| = r, |y| = rp: (1/(2 r rp)) int_{|r-rp|}^{r+rp} s f(s) ds. This is the
// identity behind a_kernel_profile's G-difference form; unit-tested against
// Monte-Carlo sampling of the two spheres.
double pair_angular_average(const std::function<double(double)>& f, double r, double rp);

} // namespace bcslab
