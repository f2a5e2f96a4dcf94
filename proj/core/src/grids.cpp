#include "bcslab/grids.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "bcslab/error.hpp"
#include "bcslab/quadrature.hpp"

namespace bcslab {

namespace {

std::vector<double> linspace(double a, double b, int n_panels) {
  std::vector<double> e(n_panels + 1);
  for (int i = 0; i <= n_panels; ++i) e[i] = a + (b - a) * i / n_panels;
  e.back() = b;
  return e;
}

// Accumulates zone-by-zone node data before the final Eigen copy.
struct GridBuffer {
  std::vector<double> p, w, p2mmu, wok;
  void add(double pi, double wi, double xi, double woki) {
    p.push_back(pi);
    w.push_back(wi);
    p2mmu.push_back(xi);
    wok.push_back(woki);
  }
  // Appends another buffer, optionally reversed, keeping p ascending overall.
  void append(const GridBuffer& other, bool reversed) {
    const int n = static_cast<int>(other.p.size());
    for (int k = 0; k < n; ++k) {
      const int i = reversed ? n - 1 - k : k;
      add(other.p[i], other.w[i], other.p2mmu[i], other.wok[i]);
    }
  }
};

} // namespace

RadialGrid make_radial_grid(const Potential& pot, int n_nodes, double tail_fraction,
                            double r_max_override) {
  constexpr int kOrder = 16;
  if (n_nodes < kOrder) fail(ErrorKind::domain, "make_radial_grid: need at least 16 nodes");
  const double r_max =
      r_max_override > 0.0 ? r_max_override : pot.suggested_r_max(tail_fraction);
  std::vector<double> edges{0.0};
  for (double b : pot.breakpoints())
    if (b > 0.0 && b < r_max) edges.push_back(b);
  edges.push_back(r_max);
  std::sort(edges.begin(), edges.end());

  const int panels_total = std::max<int>(1, n_nodes / kOrder);
  std::vector<double> full;
  full.push_back(0.0);
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    const double len = edges[i + 1] - edges[i];
    const int k = std::max<int>(1, static_cast<int>(std::lround(panels_total * len / r_max)));
    for (int j = 1; j <= k; ++j) full.push_back(edges[i] + len * j / k);
    full.back() = edges[i + 1];
  }

  RadialGrid g;
  PanelRule pr = panel_rule(full, kOrder);
  g.r = std::move(pr.x);
  g.w = std::move(pr.w);
  g.r_max = r_max;
  g.panel_order = kOrder;
  g.panel_edges = std::move(full);

  const double per_length = g.n() * pot.characteristic_length() / r_max;
  if (per_length < 8.0) {
    std::ostringstream ss;
    ss << "make_radial_grid: " << g.n() << " nodes give " << per_length
       << " nodes per characteristic length (need >= 8); increase n_radial";
    fail(ErrorKind::resolution, ss.str());
  }
  return g;
}

MomentumGrid make_momentum_grid(double T, double mu, double s_max,
                                const MomentumGridParams& params) {
  if (!(T > 0.0)) fail(ErrorKind::domain, "make_momentum_grid: T must be positive");
  if (!(mu > 0.0)) fail(ErrorKind::domain, "make_momentum_grid: mu must be positive");
  if (!(s_max >= 0.0)) fail(ErrorKind::domain, "make_momentum_grid: s_max must be >= 0");
  if (!(params.quality >= 1.0))
    fail(ErrorKind::domain, "make_momentum_grid: quality must be >= 1");
  const double p_f = std::sqrt(mu);
  if (!(params.p_max >= 2.0 * p_f)) {
    std::ostringstream ss;
    ss << "make_momentum_grid: p_max = " << params.p_max << " must be at least 2 sqrt(mu) = "
       << 2.0 * p_f;
    fail(ErrorKind::resolution, ss.str());
  }

  const double q = params.quality;
  const int qsplit = static_cast<int>(std::ceil(q));
  const double xi0 = params.xi_inner;
  GridBuffer buf;

  // Lower zone p in [0, sqrt(mu/2)]: smooth in p, |p^2-mu| >= mu/2.
  const double p_lo = std::sqrt(0.5 * mu);
  {
    const int n_pan = std::max(static_cast<int>(std::ceil(6.0 * q)),
                               static_cast<int>(std::ceil(q * p_lo * s_max / 14.0)));
    PanelRule pr = panel_rule(linspace(0.0, p_lo, n_pan), params.n_gauss);
    for (int i = 0; i < pr.x.size(); ++i) {
      const double p = pr.x[i], w = pr.w[i];
      const double x = mu - p * p; // >= mu/2, no cancellation
      buf.add(p, w, -x, w * std::tanh(x / (2.0 * T)) / x);
    }
  }

  // Window zones, one per side of the Fermi surface, substituted to
  // xi = |p^2-mu|/(2T): p(xi) = sqrt(mu + 2T*side*xi), dp = (T/p) dxi,
  // and w/K = w_xi * tanh(xi)/(2 p xi) with every T cancelled.
  // Each side is built with xi ascending (outward from the Fermi surface),
  // then appended so that p stays ascending overall: the p < sqrt(mu) side is
  // reversed and comes first.
  const double xi_b = mu / (4.0 * T); // window edge |p^2-mu| = mu/2
  for (double side : {-1.0, +1.0}) {
    GridBuffer zone;
    const double x1 = std::min(xi0, xi_b);
    std::vector<double> base;
    for (double b : {0.0, 0.5, 2.0, 6.0, 12.0, xi0}) {
      const double c = std::min(b, x1);
      if (base.empty() || c > base.back()) base.push_back(c);
    }
    if (base.back() < x1) base.push_back(x1);
    std::vector<double> edges;
    edges.push_back(base.front());
    for (size_t i = 0; i + 1 < base.size(); ++i)
      for (int j = 1; j <= qsplit; ++j)
        edges.push_back(base[i] + (base[i + 1] - base[i]) * j / qsplit);
    PanelRule pr = panel_rule(edges, params.n_gauss);
    for (int i = 0; i < pr.x.size(); ++i) {
      const double xi = pr.x[i], wxi = pr.w[i];
      const double p = std::sqrt(mu + 2.0 * T * side * xi);
      const double th_over = xi > 1e-8 ? std::tanh(xi) / xi : 1.0 - xi * xi / 3.0;
      zone.add(p, wxi * T / p, side * 2.0 * T * xi, wxi * th_over / (2.0 * p));
    }

    if (xi_b > xi0) {
      double eta_lo = std::log(xi0);
      const double eta_hi = std::log(xi_b);
      const double xi_flat = params.flat_rel * mu / (2.0 * T);
      if (xi_flat > xi0) {
        // p(xi) is bit-identical across [xi0, xi_flat] and tanh(xi) = 1, so
        // the thermal integrand is constant in eta: one low-order panel is
        // exact. This is what keeps the grid finite down to T/mu ~ 1e-280.
        const double eta_f = std::min(std::log(xi_flat), eta_hi);
        PanelRule pr2 = panel_rule({eta_lo, eta_f}, 6);
        for (int i = 0; i < pr2.x.size(); ++i) {
          const double xi = std::exp(pr2.x[i]), weta = pr2.w[i];
          const double p = std::sqrt(mu + 2.0 * T * side * xi);
          zone.add(p, weta * xi * T / p, side * 2.0 * T * xi,
                   weta * std::tanh(xi) / (2.0 * p));
        }
        eta_lo = eta_f;
      }
      if (eta_hi > eta_lo) {
        const int n_pan =
            std::max(3, static_cast<int>(std::ceil((eta_hi - eta_lo) / params.eta_panel * q)));
        PanelRule pr2 = panel_rule(linspace(eta_lo, eta_hi, n_pan), params.n_gauss_eta);
        for (int i = 0; i < pr2.x.size(); ++i) {
          const double xi = std::exp(pr2.x[i]), weta = pr2.w[i];
          const double p = std::sqrt(mu + 2.0 * T * side * xi);
          zone.add(p, weta * xi * T / p, side * 2.0 * T * xi,
                   weta * std::tanh(xi) / (2.0 * p));
        }
      }
    }
    buf.append(zone, /*reversed=*/side < 0.0);
  }

  // Upper zone p in [sqrt(3 mu/2), p_max]: geometric panels, width capped so
  // each holds at most ~14 radians of the fastest oscillation sin(p * s_max).
  const double p_hi = std::sqrt(1.5 * mu);
  {
    const double h_max = 14.0 / std::max(s_max, 1e-9);
    std::vector<double> base{p_hi};
    double h = std::max(0.5 * (p_hi - p_f), 0.05 * p_hi);
    while (base.back() < params.p_max) {
      h = std::min(h * 1.6, h_max);
      base.push_back(std::min(base.back() + h, params.p_max));
    }
    std::vector<double> edges;
    edges.push_back(base.front());
    for (size_t i = 0; i + 1 < base.size(); ++i)
      for (int j = 1; j <= qsplit; ++j)
        edges.push_back(base[i] + (base[i + 1] - base[i]) * j / qsplit);
    PanelRule pr = panel_rule(edges, params.n_gauss);
    for (int i = 0; i < pr.x.size(); ++i) {
      const double p = pr.x[i], w = pr.w[i];
      const double x = p * p - mu; // >= mu/2, no cancellation
      buf.add(p, w, x, w * std::tanh(x / (2.0 * T)) / x);
    }
  }

  MomentumGrid g;
  const int n = static_cast<int>(buf.p.size());
  g.p = Eigen::Map<Eigen::ArrayXd>(buf.p.data(), n);
  g.w = Eigen::Map<Eigen::ArrayXd>(buf.w.data(), n);
  g.p2mmu = Eigen::Map<Eigen::ArrayXd>(buf.p2mmu.data(), n);
  g.w_over_k = Eigen::Map<Eigen::ArrayXd>(buf.wok.data(), n);
  g.T = T;
  g.mu = mu;
  g.p_max = params.p_max;
  g.win_lo = p_lo;
  g.win_hi = p_hi;
  g.tail_m = 0.5 * p_f * std::log((params.p_max + p_f) / (params.p_max - p_f));
  g.tail_kernel_bound =
      mu / (3.0 * params.p_max * params.p_max * params.p_max * (1.0 - mu / (params.p_max * params.p_max)));
  return g;
}

} // namespace bcslab
