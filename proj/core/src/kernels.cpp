#include "bcslab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "bcslab/constants.hpp"
#include "bcslab/error.hpp"
#include "bcslab/quadrature.hpp"

namespace bcslab {

namespace {

void check_tail(const MomentumGrid& pg, double tail_tol, const char* who) {
  if (pg.tail_kernel_bound > tail_tol) {
    std::ostringstream ss;
    ss << who << ": neglected-tail bound " << pg.tail_kernel_bound << " exceeds " << tail_tol
       << " at p_max = " << pg.p_max << ", mu = " << pg.mu << "; increase p_max";
    fail(ErrorKind::resolution, ss.str());
  }
}

// (1 - cos x) - x^2/2 without cancellation: series for |x| < 1/2.
double cos_cancel(double x) {
  const double b = x * x;
  if (std::abs(x) < 0.5)
    return -(b * b / 24.0) *
           (1.0 - b / 30.0 * (1.0 - b / 56.0 * (1.0 - b / 90.0 * (1.0 - b / 132.0))));
  return (1.0 - std::cos(x)) - 0.5 * b;
}

// Measure weights of the regularized thermal integral, w * (1/K - 1/p^2).
Eigen::ArrayXd regularized_weights(const MomentumGrid& pg) {
  return pg.w_over_k - pg.w / pg.p.square();
}

// Dresses a symmetric core with left(i) * core(i,j) * right(j). When
// left = sign * right the result is exactly symmetric because IEEE products
// commute bitwise.
Eigen::MatrixXd dress(const Eigen::VectorXd& left, const Eigen::MatrixXd& core,
                      const Eigen::VectorXd& right) {
  return (left * right.transpose()).cwiseProduct(core);
}

Eigen::VectorXd sqrt_signed_weighted(const Potential& pot, const RadialGrid& grid) {
  Eigen::VectorXd v(grid.n());
  for (int i = 0; i < grid.n(); ++i) v[i] = pot.sqrt_signed(grid.r[i]) * std::sqrt(grid.w[i]);
  return v;
}

Eigen::VectorXd sqrt_abs_weighted(const Potential& pot, const RadialGrid& grid) {
  Eigen::VectorXd v(grid.n());
  for (int i = 0; i < grid.n(); ++i) v[i] = pot.sqrt_abs(grid.r[i]) * std::sqrt(grid.w[i]);
  return v;
}

// Exact Galerkin moments of min(t, t') against the panel's Lagrange basis on
// [-1, 1], normalized to substitute for the point samples min(t_i, t_j):
//   table(i, j) = (1 / (w_i w_j)) * int int l_i(t) min(t, t') l_j(t') dt' dt.
// Point-sampling min across the kink at t = t' costs the composite rule two
// orders of convergence (O(N^-2) overall); these moments restore high order.
// min(c + h t, c + h t') = c + h min(t, t') makes one reference table serve
// every panel. The inner integral F_j(y) = int min(y, t') l_j(t') dt' obeys
// F_j'' = -l_j, so it is a polynomial of degree order+2 and fixed-order
// Gauss rules below evaluate everything exactly.
const Eigen::MatrixXd& diag_min_table(int order) {
  static std::mutex mtx;
  static std::map<int, Eigen::MatrixXd> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  const auto& [t, wt] = gauss_legendre(order);
  std::vector<double> beta(order, 1.0); // barycentric weights of the nodes
  for (int j = 0; j < order; ++j)
    for (int k = 0; k < order; ++k)
      if (k != j) beta[j] /= t[j] - t[k];
  auto lagrange = [&](int j, double y) {
    double num = 1.0;
    for (int k = 0; k < order; ++k)
      if (k != j) num *= y - t[k];
    return beta[j] * num;
  };

  const auto& [yo, wo] = gauss_legendre(order + 2); // exact to degree 2*order+3
  const auto& [yi, wi] = gauss_legendre(order / 2 + 2);
  const int n_in = static_cast<int>(yi.size());
  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(order, order);
  for (size_t m = 0; m < yo.size(); ++m) {
    const double y = yo[m];
    for (int j = 0; j < order; ++j) {
      double f = 0.0; // int_{-1}^{y} t' l_j(t') dt' + y int_{y}^{1} l_j(t') dt'
      for (int k = 0; k < n_in; ++k) {
        const double hl = 0.5 * (y + 1.0), cl = 0.5 * (y - 1.0);
        const double hr = 0.5 * (1.0 - y), cr = 0.5 * (1.0 + y);
        const double xl = cl + hl * yi[k], xr = cr + hr * yi[k];
        f += hl * wi[k] * xl * lagrange(j, xl) + y * hr * wi[k] * lagrange(j, xr);
      }
      for (int i = 0; i < order; ++i) raw(i, j) += wo[m] * lagrange(i, y) * f;
    }
  }
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) raw(i, j) /= wt[i] * wt[j];
  Eigen::MatrixXd sym = 0.5 * (raw + raw.transpose());
  return cache.emplace(order, std::move(sym)).first->second;
}

Eigen::MatrixXd greens_kernel(const RadialGrid& grid, int ell) {
  const int n = grid.n();
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double lo = std::min(grid.r[i], grid.r[j]);
      const double hi = std::max(grid.r[i], grid.r[j]);
      double val = lo;
      for (int k = 0; k < ell; ++k) val *= lo / hi;
      g(i, j) = g(j, i) = val / (2 * ell + 1);
    }
  // Same-panel blocks straddle the kink at r = r': replace the point samples
  // with exact Galerkin moments (s-wave kernel only; see diag_min_table).
  const int m = grid.panel_order;
  const int np = static_cast<int>(grid.panel_edges.size()) - 1;
  if (ell == 0 && m > 1 && np > 0 && np * m == n) {
    const Eigen::MatrixXd& tbl = diag_min_table(m);
    for (int k = 0; k < np; ++k) {
      const double c = 0.5 * (grid.panel_edges[k] + grid.panel_edges[k + 1]);
      const double h = 0.5 * (grid.panel_edges[k + 1] - grid.panel_edges[k]);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) g(k * m + i, k * m + j) = c + h * tbl(i, j);
    }
  }
  return g;
}

} // namespace

double kfun(double T, double mu, double p) {
  if (!(T > 0.0) || !(mu > 0.0) || !(p >= 0.0))
    fail(ErrorKind::domain, "kfun: requires T > 0, mu > 0, p >= 0");
  const double x = std::abs(p * p - mu);
  const double t = x / (2.0 * T);
  if (t < 1e-4) {
    const double t2 = t * t;
    return 2.0 * T * (1.0 + t2 / 3.0 - t2 * t2 / 45.0 + 2.0 * t2 * t2 * t2 / 945.0);
  }
  return x / std::tanh(t);
}

Eigen::MatrixXd sine_matrix(const Eigen::ArrayXd& r, const Eigen::ArrayXd& p) {
  return (r.matrix() * p.matrix().transpose()).array().sin().matrix();
}

KernelMatrix assemble_bs_zero(const Potential& pot, const RadialGrid& grid, int ell) {
  if (ell < 0) fail(ErrorKind::domain, "assemble_bs_zero: ell must be >= 0");
  KernelMatrix km;
  km.m = dress(sqrt_signed_weighted(pot, grid), greens_kernel(grid, ell),
               sqrt_abs_weighted(pot, grid));
  km.symmetric = pot.sign() != 0;
  km.label = ell == 0 ? "bs_zero" : "bs_zero_l" + std::to_string(ell);
  return km;
}

KernelMatrix assemble_bs_zero_sym(const Potential& pot, const RadialGrid& grid) {
  if (pot.sign() != 0) {
    KernelMatrix km = assemble_bs_zero(pot, grid, 0);
    km.label = "bs_zero_sym";
    return km;
  }
  // Sign-changing V: the matrix D_sgn * Q with Q = |V|^{1/2} G |V|^{1/2} has
  // the same nonzero spectrum as the symmetric Q^{1/2} D_sgn Q^{1/2}.
  const int n = grid.n();
  const Eigen::VectorXd abs_w = sqrt_abs_weighted(pot, grid);
  const Eigen::MatrixXd q = dress(abs_w, greens_kernel(grid, 0), abs_w);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  if (es.info() != Eigen::Success)
    fail(ErrorKind::convergence, "assemble_bs_zero_sym: eigendecomposition failed");
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd q_half =
      es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
  Eigen::VectorXd sgn(n);
  for (int i = 0; i < n; ++i) {
    const double v = pot(grid.r[i]);
    sgn[i] = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
  }
  Eigen::MatrixXd core = q_half * sgn.asDiagonal() * q_half;
  KernelMatrix km;
  km.m = 0.5 * (core + core.transpose()); // scrub roundoff asymmetry of the triple product
  km.symmetric = true;
  km.label = "bs_zero_sym";
  return km;
}

KernelMatrix assemble_bt(const Potential& pot, const RadialGrid& grid, const MomentumGrid& pgrid,
                         double tail_tol) {
  check_tail(pgrid, tail_tol, "assemble_bt");
  const int n = grid.n();
  const Eigen::ArrayXd v = regularized_weights(pgrid);
  const Eigen::MatrixXd s = sine_matrix(grid.r, pgrid.p);
  // Split the signed measure so each half enters through a rank update,
  // keeping the kernel exactly symmetric.
  const Eigen::ArrayXd vp = v.max(0.0).sqrt();
  const Eigen::ArrayXd vm = (-v).max(0.0).sqrt();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  d.selfadjointView<Eigen::Lower>().rankUpdate(
      (s.array().rowwise() * vp.transpose()).matrix(), 2.0 / kPi);
  d.selfadjointView<Eigen::Lower>().rankUpdate(
      (s.array().rowwise() * vm.transpose()).matrix(), -2.0 / kPi);
  Eigen::MatrixXd g = d.selfadjointView<Eigen::Lower>();
  g += greens_kernel(grid, 0);

  KernelMatrix km;
  km.m = dress(sqrt_signed_weighted(pot, grid), g, sqrt_abs_weighted(pot, grid));
  km.symmetric = pot.sign() != 0;
  km.label = "bt";
  return km;
}

Eigen::MatrixXd reduced_momentum_v(const Potential& pot, const RadialGrid& grid,
                                   const Eigen::ArrayXd& p) {
  const int m = static_cast<int>(p.size());
  Eigen::ArrayXd c(grid.n());
  for (int i = 0; i < grid.n(); ++i) c[i] = grid.w[i] * pot(grid.r[i]);
  const Eigen::MatrixXd s = sine_matrix(p, grid.r); // m x n
  const Eigen::ArrayXd cp = c.max(0.0).sqrt();
  const Eigen::ArrayXd cm = (-c).max(0.0).sqrt();
  Eigen::MatrixXd vr = Eigen::MatrixXd::Zero(m, m);
  vr.selfadjointView<Eigen::Lower>().rankUpdate(
      (s.array().rowwise() * cp.transpose()).matrix(), 2.0 / kPi);
  vr.selfadjointView<Eigen::Lower>().rankUpdate(
      (s.array().rowwise() * cm.transpose()).matrix(), -2.0 / kPi);
  return vr.selfadjointView<Eigen::Lower>();
}

KernelMatrix assemble_bt_momentum(const Potential& pot, const RadialGrid& grid,
                                  const MomentumGrid& pgrid, double tail_tol) {
  check_tail(pgrid, tail_tol, "assemble_bt_momentum");
  const Eigen::VectorXd d = pgrid.w_over_k.sqrt().matrix();
  KernelMatrix km;
  km.m = dress(d, reduced_momentum_v(pot, grid, pgrid.p), d);
  km.symmetric = true;
  km.label = "bt_momentum";
  return km;
}

Eigen::MatrixXd a_kernel_profile(const RadialGrid& grid, const MomentumGrid& pgrid,
                                 int n_threads) {
  const int n = grid.n();
  const int m = pgrid.n();
  const Eigen::ArrayXd v = regularized_weights(pgrid);
  const double* q = pgrid.p.data();
  const double* vw = v.data();
  const double tail = pgrid.tail_m;

  auto g_of_s = [&](double s) {
    double acc = 0.0;
    for (int k = 0; k < m; ++k) acc += vw[k] * cos_cancel(q[k] * s);
    return (acc - 0.5 * s * s * tail) / (2.0 * kPi * kPi);
  };

  Eigen::MatrixXd prof(n, n);
  const int workers = std::max(1, std::min(n_threads, n));
  auto fill_rows = [&](int first) {
    for (int i = first; i < n; i += workers)
      for (int j = 0; j <= i; ++j) {
        const double val = 2.0 * kPi * (g_of_s(grid.r[i] + grid.r[j]) -
                                        g_of_s(std::abs(grid.r[i] - grid.r[j])));
        prof(i, j) = val;
        prof(j, i) = val;
      }
  };
  if (workers == 1) {
    fill_rows(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(fill_rows, t);
    for (auto& th : pool) th.join();
  }
  return prof;
}

KernelMatrix assemble_a_kernel(const Potential& pot, const RadialGrid& grid,
                               const MomentumGrid& pgrid, double tail_tol, int n_threads) {
  check_tail(pgrid, tail_tol, "assemble_a_kernel");
  KernelMatrix km;
  km.m = dress(sqrt_signed_weighted(pot, grid), a_kernel_profile(grid, pgrid, n_threads),
               sqrt_abs_weighted(pot, grid));
  km.symmetric = pot.sign() != 0;
  km.label = "a_kernel";
  return km;
}

Eigen::VectorXd dressed_r_signed(const Potential& pot, const RadialGrid& grid) {
  Eigen::VectorXd v = sqrt_signed_weighted(pot, grid);
  for (int i = 0; i < grid.n(); ++i) v[i] *= grid.r[i];
  return v;
}

Eigen::VectorXd dressed_r_abs(const Potential& pot, const RadialGrid& grid) {
  Eigen::VectorXd v = sqrt_abs_weighted(pot, grid);
  for (int i = 0; i < grid.n(); ++i) v[i] *= grid.r[i];
  return v;
}

double pair_angular_average(const std::function<double(double)>& f, double r, double rp) {
  if (!(r > 0.0) || !(rp > 0.0))
    fail(ErrorKind::domain, "pair_angular_average: radii must be positive");
  const double lo = std::abs(r - rp), hi = r + rp;
  const auto integrand = [&f](double s) { return s * f(s); };
  return integrate_adaptive(integrand, lo, hi, 1e-12, 1e-300).value / (2.0 * r * rp);
}

} // namespace bcslab
