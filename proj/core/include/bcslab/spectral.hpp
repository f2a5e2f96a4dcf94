#pragma once

#include <string>

#include <Eigen/Core>

#include "bcslab/grids.hpp"
#include "bcslab/kernels.hpp"
#include "bcslab/potential.hpp"

namespace bcslab {

struct SpectralReport {
  double min_eig = 0.0;
  Eigen::VectorXd eigvec; // unit norm
  double residual = 0.0;  // ||M v - lambda v||
  std::string method;     // "full_sym" or "inverse_iteration"
};

// Algebraically smallest eigenvalue of a symmetric kernel matrix via full
// symmetric eigendecomposition, with one inverse-iteration polish if the
// direct residual misses 1e-8. Non-symmetric input is a contract error
// (ErrorKind::not_symmetric) directing the caller to the isospectral
// momentum-space partner.
SpectralReport min_eig(const KernelMatrix& km);

// Eigenvalue-only fast path for bisection loops (same symmetry contract).
double min_eig_value(const KernelMatrix& km);

// Solves (1 + M) x = rhs with iterative refinement to relative residual
// 1e-10. For symmetric M the smallest eigenvalue is checked first:
// min_eig <= -1 + 1e-8 raises ErrorKind::near_singular (resonance / bound
// state at threshold). Non-symmetric matrices are solved by partial-pivot LU
// with the same residual contract.
Eigen::VectorXd solve_shifted(const KernelMatrix& km, const Eigen::VectorXd& rhs);

// True iff the thermal Birman-Schwinger operator at (T, mu) has smallest
// eigenvalue >= -1, i.e. K_{T,mu} + V >= 0. Sign-definite potentials use the
// position-space assembly; sign-changing ones the symmetric momentum-space
// partner. This is the predicate the critical-temperature bisection drives.
bool positivity_check(const Potential& pot, double T, double mu, const RadialGrid& grid,
                      const MomentumGridParams& params);

} // namespace bcslab
