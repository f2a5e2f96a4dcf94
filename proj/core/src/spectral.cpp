#include "bcslab/spectral.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "bcslab/error.hpp"

namespace bcslab {

namespace {

[[noreturn]] void reject_nonsymmetric(const KernelMatrix& km, const char* who) {
  std::ostringstream ss;
  ss << who << ": matrix '" << km.label
     << "' is not symmetric (sign-changing potential); use the momentum-space partner, "
        "which is symmetric and has the same nonzero spectrum";
  fail(ErrorKind::not_symmetric, ss.str());
}

} // namespace

SpectralReport min_eig(const KernelMatrix& km) {
  if (!km.symmetric) reject_nonsymmetric(km, "min_eig");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(km.m);
  if (es.info() != Eigen::Success)
    fail(ErrorKind::convergence, "min_eig: eigendecomposition failed on '" + km.label + "'");
  SpectralReport rep;
  rep.min_eig = es.eigenvalues()[0];
  rep.eigvec = es.eigenvectors().col(0);
  rep.residual = (km.m.selfadjointView<Eigen::Lower>() * rep.eigvec - rep.min_eig * rep.eigvec)
                     .norm();
  rep.method = "full_sym";
  if (rep.residual >= 1e-8) {
    // One shifted inverse-iteration sweep; the full solve already put us in
    // the right eigenspace, this only polishes the floating-point residual.
    const int n = static_cast<int>(km.m.rows());
    const double shift = rep.min_eig - 1e-10 * (1.0 + std::abs(rep.min_eig));
    Eigen::MatrixXd shifted = km.m - shift * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd v = shifted.partialPivLu().solve(rep.eigvec);
    const double nv = v.norm();
    if (nv > 0.0 && v.allFinite()) {
      v /= nv;
      const double lam = v.dot(km.m.selfadjointView<Eigen::Lower>() * v);
      const double res = (km.m.selfadjointView<Eigen::Lower>() * v - lam * v).norm();
      if (res < rep.residual) {
        rep.min_eig = lam;
        rep.eigvec = v;
        rep.residual = res;
        rep.method = "inverse_iteration";
      }
    }
    if (rep.residual >= 1e-8)
      fail(ErrorKind::convergence,
           "min_eig: eigenpair residual above 1e-8 on '" + km.label + "'");
  }
  return rep;
}

double min_eig_value(const KernelMatrix& km) {
  if (!km.symmetric) reject_nonsymmetric(km, "min_eig_value");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(km.m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    fail(ErrorKind::convergence,
         "min_eig_value: eigendecomposition failed on '" + km.label + "'");
  return es.eigenvalues()[0];
}

Eigen::VectorXd solve_shifted(const KernelMatrix& km, const Eigen::VectorXd& rhs) {
  const int n = static_cast<int>(km.m.rows());
  if (rhs.size() != n) fail(ErrorKind::domain, "solve_shifted: rhs size mismatch");
  if (km.symmetric) {
    const double e0 = min_eig_value(km);
    if (e0 <= -1.0 + 1e-8) {
      std::ostringstream ss;
      ss << "solve_shifted: smallest eigenvalue " << e0 << " of '" << km.label
         << "' is within 1e-8 of -1 (resonance / bound-state threshold)";
      fail(ErrorKind::near_singular, ss.str());
    }
  }
  Eigen::MatrixXd shifted = Eigen::MatrixXd::Identity(n, n) + km.m;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
  Eigen::VectorXd x = lu.solve(rhs);
  const double scale = std::max(rhs.norm(), 1e-300);
  for (int sweep = 0; sweep < 3; ++sweep) {
    const Eigen::VectorXd resid = rhs - shifted * x;
    if (resid.norm() <= 1e-12 * scale) break;
    x += lu.solve(resid);
  }
  const double rel = (rhs - shifted * x).norm() / scale;
  if (!(rel < 1e-10)) {
    std::ostringstream ss;
    ss << "solve_shifted: relative residual " << rel << " on '" << km.label
       << "' exceeds 1e-10 (matrix nearly singular)";
    fail(ErrorKind::near_singular, ss.str());
  }
  return x;
}

bool positivity_check(const Potential& pot, double T, double mu, const RadialGrid& grid,
                      const MomentumGridParams& params) {
  const MomentumGrid pg = make_momentum_grid(T, mu, 2.0 * grid.r_max, params);
  const KernelMatrix km =
      pot.sign() != 0 ? assemble_bt(pot, grid, pg) : assemble_bt_momentum(pot, grid, pg);
  return min_eig_value(km) >= -1.0;
}

} // namespace bcslab
