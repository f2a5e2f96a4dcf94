#include "bcslab/gap.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "bcslab/constants.hpp"
#include "bcslab/error.hpp"
#include "bcslab/quadrature.hpp"

namespace bcslab {

double radial_fourier(const Potential& pot, double k) {
  if (!(k >= 0.0)) fail(ErrorKind::domain, "radial_fourier: k must be nonnegative");
  const double r_inf = pot.suggested_r_max(1e-14);
  std::vector<double> edges{0.0};
  for (double b : pot.breakpoints())
    if (b > 0.0 && b < r_inf) edges.push_back(b);
  edges.push_back(r_inf);
  std::sort(edges.begin(), edges.end());

  double total = 0.0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    auto f = [&](double r) {
      // k = 0 is the removable limit sin(kr)/k -> r.
      return pot(r) * (k > 0.0 ? std::sin(k * r) / k : r) * r;
    };
    total += integrate_adaptive(f, edges[i], edges[i + 1], 1e-11).value;
  }
  return std::sqrt(2.0 / kPi) * total;
}

KernelMatrix vhat_swave(const Potential& pot, const RadialGrid& grid,
                        const MomentumGrid& pgrid) {
  const Eigen::MatrixXd vt = reduced_momentum_v(pot, grid, pgrid.p);
  const Eigen::ArrayXd inv_p = pgrid.p.inverse();
  KernelMatrix out;
  out.m = std::sqrt(kPi / 2.0) *
          (inv_p.matrix().asDiagonal() * vt * inv_p.matrix().asDiagonal());
  out.symmetric = true;
  out.label = "vhat_swave";
  return out;
}

namespace {

struct GapWorkspace {
  MomentumGrid pg;
  Eigen::MatrixXd vt;  // reduced momentum kernel on the grid nodes
};

GapWorkspace make_gap_workspace(const Potential& pot, double T, double mu,
                                const GridSpec& spec) {
  const RadialGrid grid = spec.radial(pot);
  GapWorkspace ws;
  ws.pg = make_momentum_grid(T, mu, grid.r_max, spec.op);
  ws.vt = reduced_momentum_v(pot, grid, ws.pg.p);
  return ws;
}

GapSolution iterate_on(const GapWorkspace& ws, double T, double mu,
                       const Eigen::ArrayXd& delta0) {
  const Eigen::ArrayXd& p = ws.pg.p;
  const Eigen::ArrayXd& w = ws.pg.w;
  const Eigen::ArrayXd& x = ws.pg.p2mmu;  // p^2 - mu without cancellation
  const double inv2t = 1.0 / (2.0 * T);

  Eigen::ArrayXd energy, chi;
  auto rhs = [&](const Eigen::ArrayXd& d) -> Eigen::ArrayXd {
    energy = (x.square() + d.square()).sqrt();  // > 0: no node sits on the Fermi surface
    chi = (energy * inv2t).min(30.0).tanh() / energy;
    const Eigen::VectorXd y = (d * chi * p * w).matrix();
    return -(ws.vt * y).array() / p;
  };

  const double trivial_stop = 0.5e-10 * mu;
  constexpr int kMaxIter = 5000;
  constexpr int kHistory = 12;
  std::vector<std::array<double, 3>> history;  // (iteration, defect, max|delta|)

  Eigen::ArrayXd delta = delta0;
  double beta = 1.0;
  double prev_defect = std::numeric_limits<double>::infinity();
  double defect = 0.0;
  int it = 0;
  bool converged = false;
  while (it < kMaxIter) {
    const Eigen::ArrayXd r = rhs(delta);
    defect = (r - delta).abs().maxCoeff();
    ++it;
    if (defect > prev_defect) beta = std::max(0.5 * beta, 1.0 / 64.0);
    prev_defect = defect;
    delta = (1.0 - beta) * delta + beta * r;
    const double maxd = delta.abs().maxCoeff();

    history.push_back({static_cast<double>(it), defect, maxd});
    if (history.size() > kHistory) history.erase(history.begin());

    if (maxd < trivial_stop) {
      converged = true;  // decayed to the trivial solution
      break;
    }
    if (defect < 1e-8 && defect < 1e-4 * maxd) {
      converged = true;  // settled on a nontrivial profile
      break;
    }
  }
  if (!converged) {
    std::ostringstream ss;
    ss << "gap iteration did not converge in " << kMaxIter
       << " steps (damping " << beta << "); trailing (iteration, defect, max|delta|):";
    for (const auto& h : history)
      ss << " (" << static_cast<int>(h[0]) << ", " << h[1] << ", " << h[2] << ")";
    fail(ErrorKind::convergence, ss.str());
  }

  GapSolution sol;
  sol.p = p;
  sol.delta = delta;
  // Verify the returned profile itself: one extra evaluation, not counted.
  sol.residual = (rhs(delta) - delta).abs().maxCoeff();
  sol.dispersion = energy;  // rhs just recomputed E at the returned profile
  sol.iterations = it;
  sol.max_delta = delta.abs().maxCoeff();
  sol.nontrivial = sol.max_delta > 1e-10 * mu;
  sol.T = T;
  sol.mu = mu;
  return sol;
}

} // namespace

GapSolution gap_iterate(const Potential& pot, double T, double mu, const GridSpec& spec,
                        const Eigen::ArrayXd& delta0) {
  if (!(T > 0.0)) fail(ErrorKind::domain, "gap_iterate: T must be positive");
  if (!(mu > 0.0)) fail(ErrorKind::domain, "gap_iterate: mu must be positive");
  if (!delta0.isFinite().all())
    fail(ErrorKind::domain, "gap_iterate: starting profile must be finite");
  const GapWorkspace ws = make_gap_workspace(pot, T, mu, spec);
  if (delta0.size() != ws.pg.n()) {
    std::ostringstream ss;
    ss << "gap_iterate: starting profile has " << delta0.size()
       << " samples but the momentum grid built from the supplied grid spec has "
       << ws.pg.n() << " nodes";
    fail(ErrorKind::domain, ss.str());
  }
  return iterate_on(ws, T, mu, delta0);
}

GapSolution gap_iterate(const Potential& pot, double T, double mu, const GridSpec& spec,
                        double delta0) {
  if (!(T > 0.0)) fail(ErrorKind::domain, "gap_iterate: T must be positive");
  if (!(mu > 0.0)) fail(ErrorKind::domain, "gap_iterate: mu must be positive");
  if (!std::isfinite(delta0))
    fail(ErrorKind::domain, "gap_iterate: starting value must be finite");
  const GapWorkspace ws = make_gap_workspace(pot, T, mu, spec);
  return iterate_on(ws, T, mu, Eigen::ArrayXd::Constant(ws.pg.n(), delta0));
}

std::vector<TransitionPoint> transition_scan(const Potential& pot, double mu,
                                             const std::vector<double>& t_list,
                                             const GridSpec& spec, double delta0,
                                             int n_threads) {
  if (t_list.empty()) fail(ErrorKind::domain, "transition_scan: t_list is empty");
  for (double t : t_list)
    if (!(t > 0.0)) fail(ErrorKind::domain, "transition_scan: every T must be positive");
  if (!(mu > 0.0)) fail(ErrorKind::domain, "transition_scan: mu must be positive");

  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const int n = static_cast<int>(t_list.size());
  std::vector<TransitionPoint> points(n);
  std::atomic<int> next{0};
  auto work = [&]() {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      TransitionPoint& pt = points[i];
      pt.T = t_list[i];
      pt.ok = true;
      try {
        const GapSolution sol = gap_iterate(pot, pt.T, mu, spec, delta0);
        pt.max_delta = sol.max_delta;
        pt.residual = sol.residual;
        pt.iterations = sol.iterations;
        pt.nontrivial = sol.nontrivial;
      } catch (const std::exception& e) {
        pt.ok = false;
        pt.error = e.what();
        pt.max_delta = nan;
        pt.residual = nan;
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
  return points;
}

double gap_linearization_max_eig(const Potential& pot, const GapSolution& sol,
                                 const GridSpec& spec) {
  if (!(sol.T > 0.0 && sol.mu > 0.0))
    fail(ErrorKind::domain, "gap_linearization_max_eig: solution lacks T and mu");
  const GapWorkspace ws = make_gap_workspace(pot, sol.T, sol.mu, spec);
  if (sol.delta.size() != ws.pg.n())
    fail(ErrorKind::domain,
         "gap_linearization_max_eig: solution was computed on a different grid spec");

  const Eigen::ArrayXd& x = ws.pg.p2mmu;
  const Eigen::ArrayXd energy = (x.square() + sol.delta.square()).sqrt();
  const double inv2t = 1.0 / (2.0 * sol.T);
  const Eigen::ArrayXd t = energy * inv2t;
  const Eigen::ArrayXd chi = t.min(30.0).tanh() / energy;
  Eigen::ArrayXd sech2(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i)
    sech2[i] = t[i] < 350.0 ? 1.0 / std::pow(std::cosh(t[i]), 2) : 0.0;
  // d/d(delta) of delta * chi(E): nonnegative by  E >= |delta|, E >= |x|.
  const Eigen::ArrayXd dfac =
      (x.square() * chi + sol.delta.square() * sech2 * inv2t) / energy.square();

  // The Jacobian -diag(1/p) vt diag(p w dfac) is similar to the symmetric
  // matrix below via diag(p sqrt(w dfac)), so its spectrum is real and the
  // symmetric eigensolver applies.
  const Eigen::VectorXd dl = (ws.pg.w * dfac).sqrt().matrix();
  const Eigen::MatrixXd s = dl.asDiagonal() * (-ws.vt) * dl.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

} // namespace bcslab
