#include "bcslab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "bcslab/error.hpp"

namespace bcslab {

namespace {

std::pair<std::vector<double>, std::vector<double>> compute_gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev initial guess for the i-th positive root.
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
  return {std::move(x), std::move(w)};
}

} // namespace

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order) {
  if (order < 1 || order > 128) fail(ErrorKind::domain, "gauss_legendre: order out of range");
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

PanelRule panel_rule(const std::vector<double>& edges, int order) {
  if (edges.size() < 2) fail(ErrorKind::domain, "panel_rule: need at least one panel");
  const auto& [gx, gw] = gauss_legendre(order);
  const int np = static_cast<int>(edges.size()) - 1;
  PanelRule rule;
  rule.x.resize(np * order);
  rule.w.resize(np * order);
  for (int p = 0; p < np; ++p) {
    const double a = edges[p], b = edges[p + 1];
    if (!(b > a)) fail(ErrorKind::domain, "panel_rule: edges must be strictly increasing");
    const double h = 0.5 * (b - a), c = 0.5 * (b + a);
    for (int j = 0; j < order; ++j) {
      rule.x[p * order + j] = c + h * gx[j];
      rule.w[p * order + j] = h * gw[j];
    }
  }
  return rule;
}

namespace {

// Kronrod 15-point extension of Gauss 7 (positive half; rule is symmetric).
constexpr double kKronrodX[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kKronrodW[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kGaussW[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

// Returns {K15 value, |K15 - G7| error estimate}.
std::pair<double, double> gk15(const std::function<double(double)>& f, double a, double b) {
  const double h = 0.5 * (b - a), c = 0.5 * (b + a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kKronrodX[i]);
    fv[14 - i] = f(c + h * kKronrodX[i]);
  }
  fv[7] = f(c);
  double k15 = kKronrodW[7] * fv[7];
  double g7 = kGaussW[3] * fv[7];
  for (int i = 0; i < 7; ++i) k15 += kKronrodW[i] * (fv[i] + fv[14 - i]);
  for (int i = 0; i < 3; ++i) g7 += kGaussW[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  return {h * k15, std::abs(h * (k15 - g7))};
}

} // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, double abs_tol, int max_intervals) {
  struct Interval {
    double a, b, value, error;
  };
  auto ensure_finite = [](double v, double e, double lo, double hi) {
    if (!(std::isfinite(v) && std::isfinite(e))) {
      std::ostringstream ss;
      ss << "integrate_adaptive: integrand produced non-finite values on [" << lo << ", " << hi
         << "]; the integral does not converge";
      fail(ErrorKind::integrability, ss.str());
    }
  };
  auto [v0, e0] = gk15(f, a, b);
  ensure_finite(v0, e0, a, b);
  std::vector<Interval> stack{{a, b, v0, e0}};
  double total = v0, total_err = e0;
  int evals = 15;
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (static_cast<int>(stack.size()) >= max_intervals)
      fail(ErrorKind::integrability,
           "integrate_adaptive: interval budget exhausted, integral may not converge");
    // Split the interval with the largest error estimate.
    auto worst = std::max_element(stack.begin(), stack.end(),
                                  [](const Interval& u, const Interval& v) { return u.error < v.error; });
    Interval iv = *worst;
    stack.erase(worst);
    const double mid = 0.5 * (iv.a + iv.b);
    if (!(mid > iv.a && mid < iv.b))
      fail(ErrorKind::integrability, "integrate_adaptive: interval collapsed below machine width");
    auto [vl, el] = gk15(f, iv.a, mid);
    auto [vr, er] = gk15(f, mid, iv.b);
    ensure_finite(vl, el, iv.a, mid);
    ensure_finite(vr, er, mid, iv.b);
    evals += 30;
    total += vl + vr - iv.value;
    total_err += el + er - iv.error;
    stack.push_back({iv.a, mid, vl, el});
    stack.push_back({mid, iv.b, vr, er});
  }
  return {total, total_err, evals};
}

} // namespace bcslab
