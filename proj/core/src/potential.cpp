#include "bcslab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "bcslab/constants.hpp"
#include "bcslab/error.hpp"
#include "bcslab/quadrature.hpp"

namespace bcslab {

namespace {

// Fritsch-Carlson monotone slopes for a piecewise cubic Hermite interpolant.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  std::vector<double> d(n, 0.0);
  if (n == 1) return d;
  std::vector<double> h(n - 1), delta(n - 1);
  for (int i = 0; i < n - 1; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (int i = 1; i < n - 1; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return s;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

} // namespace

Potential Potential::square_well(double depth, double radius) {
  if (!(radius > 0.0)) fail(ErrorKind::domain, "square_well: radius must be positive");
  Potential p;
  p.kind_ = PotentialKind::square_well;
  p.p1_ = depth;
  p.p2_ = radius;
  p.sign_ = depth > 0.0 ? -1 : (depth < 0.0 ? +1 : -1);
  return p;
}

Potential Potential::gaussian(double depth, double width) {
  if (!(width > 0.0)) fail(ErrorKind::domain, "gaussian: width must be positive");
  Potential p;
  p.kind_ = PotentialKind::gaussian;
  p.p1_ = depth;
  p.p2_ = width;
  p.sign_ = depth > 0.0 ? -1 : (depth < 0.0 ? +1 : -1);
  return p;
}

Potential Potential::exponential(double depth, double range) {
  if (!(range > 0.0)) fail(ErrorKind::domain, "exponential: range must be positive");
  Potential p;
  p.kind_ = PotentialKind::exponential;
  p.p1_ = depth;
  p.p2_ = range;
  p.sign_ = depth > 0.0 ? -1 : (depth < 0.0 ? +1 : -1);
  return p;
}

Potential Potential::tabulated(std::vector<double> r, std::vector<double> v) {
  if (r.size() != v.size() || r.size() < 2)
    fail(ErrorKind::domain, "tabulated: need at least two (r, V) samples");
  for (size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !std::isfinite(v[i]))
      fail(ErrorKind::domain, "tabulated: knots must have r > 0 and finite V");
    if (i > 0 && !(r[i] > r[i - 1]))
      fail(ErrorKind::domain, "tabulated: knots must be strictly increasing in r");
  }
  Potential p;
  p.kind_ = PotentialKind::tabulated;
  p.tab_d_ = pchip_slopes(r, v);
  p.tab_r_ = std::move(r);
  p.tab_v_ = std::move(v);
  // pchip stays within the range of adjacent knot values, so knot signs
  // determine sign-definiteness.
  bool any_pos = false, any_neg = false;
  for (double val : p.tab_v_) {
    if (val > 0.0) any_pos = true;
    if (val < 0.0) any_neg = true;
  }
  p.sign_ = (any_pos && any_neg) ? 0 : (any_pos ? +1 : -1);
  return p;
}

Potential Potential::tabulated_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "tabulated_from_file: cannot open " + path);
  std::vector<double> r, v;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double ri, vi;
    if (!(ss >> ri)) continue; // blank or comment-only line
    if (!(ss >> vi))
      fail(ErrorKind::io, "tabulated_from_file: " + path + ":" + std::to_string(lineno) +
                              ": expected two columns (r, V)");
    std::string extra;
    if (ss >> extra)
      fail(ErrorKind::io, "tabulated_from_file: " + path + ":" + std::to_string(lineno) +
                              ": trailing token '" + extra + "'");
    r.push_back(ri);
    v.push_back(vi);
  }
  if (r.size() < 2) fail(ErrorKind::io, "tabulated_from_file: " + path + ": fewer than two samples");
  return tabulated(std::move(r), std::move(v));
}

double Potential::eval_tabulated(double r) const {
  if (r >= tab_r_.back()) return 0.0;
  if (r <= tab_r_.front()) return tab_v_.front(); // constant extension toward the origin
  const auto it = std::upper_bound(tab_r_.begin(), tab_r_.end(), r);
  const int i = static_cast<int>(it - tab_r_.begin()) - 1;
  const double h = tab_r_[i + 1] - tab_r_[i];
  const double t = (r - tab_r_[i]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * tab_v_[i] + h10 * h * tab_d_[i] + h01 * tab_v_[i + 1] + h11 * h * tab_d_[i + 1];
}

double Potential::operator()(double r) const {
  if (!(r > 0.0)) fail(ErrorKind::domain, "Potential: evaluation requires r > 0");
  switch (kind_) {
    case PotentialKind::square_well:
      return r < p2_ ? -p1_ : 0.0;
    case PotentialKind::gaussian: {
      const double z = r / p2_;
      return -p1_ * std::exp(-z * z);
    }
    case PotentialKind::exponential:
      return -p1_ * std::exp(-r / p2_);
    case PotentialKind::tabulated:
      return eval_tabulated(r);
  }
  return 0.0;
}

double Potential::sqrt_signed(double r) const {
  const double v = (*this)(r);
  return v >= 0.0 ? std::sqrt(v) : -std::sqrt(-v);
}

double Potential::sqrt_abs(double r) const { return std::sqrt(std::abs((*this)(r))); }

double Potential::characteristic_length() const {
  switch (kind_) {
    case PotentialKind::square_well:
    case PotentialKind::gaussian:
    case PotentialKind::exponential:
      return p2_;
    case PotentialKind::tabulated:
      return tab_r_.back() / 8.0;
  }
  return 1.0;
}

std::vector<double> Potential::breakpoints() const {
  switch (kind_) {
    case PotentialKind::square_well:
      return {p2_};
    case PotentialKind::gaussian:
    case PotentialKind::exponential:
      return {};
    case PotentialKind::tabulated:
      return {tab_r_.back()};
  }
  return {};
}

double Potential::suggested_r_max(double tail_fraction) const {
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0))
    fail(ErrorKind::domain, "suggested_r_max: tail_fraction must be in (0, 1)");
  // Compactly supported kinds: the support edge is exact.
  if (kind_ == PotentialKind::square_well) return p2_;
  if (kind_ == PotentialKind::tabulated) return tab_r_.back();
  auto w = [this](double r) { return std::abs((*this)(r)) * (1.0 + r) * r * r; };
  // Accumulate dyadic segments until the running total stabilizes.
  const double L = 4.0 * characteristic_length();
  std::vector<std::pair<double, double>> segs; // (right edge, segment integral)
  double a = 0.0, b = L, total = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double s = integrate_adaptive(w, a, b, 1e-12, 1e-300).value;
    segs.emplace_back(b, s);
    total += s;
    if (k > 2 && s <= 1e-18 * std::max(total, 1e-300)) break;
    a = b;
    b = 2.0 * b;
  }
  if (total <= 0.0) return L;
  // Walk from the right until the tail exceeds the budget, then bisect inside.
  const double budget = tail_fraction * total;
  double tail = 0.0;
  for (int i = static_cast<int>(segs.size()) - 1; i >= 0; --i) {
    const double lo = i == 0 ? 0.0 : segs[i - 1].first;
    if (tail + segs[i].second <= budget) {
      tail += segs[i].second;
      continue;
    }
    double rl = lo, rr = segs[i].first;
    for (int it = 0; it < 80 && (rr - rl) > 1e-12 * rr; ++it) {
      const double mid = 0.5 * (rl + rr);
      const double t = tail + integrate_adaptive(w, mid, segs[i].first, 1e-10, 1e-300).value;
      (t <= budget ? rr : rl) = mid;
    }
    return rr;
  }
  return segs.front().first;
}

Potential Potential::rescaled(double s) const {
  if (!(s > 0.0)) fail(ErrorKind::domain, "rescaled: scale must be positive");
  switch (kind_) {
    case PotentialKind::square_well:
      return square_well(s * s * p1_, p2_ / s);
    case PotentialKind::gaussian:
      return gaussian(s * s * p1_, p2_ / s);
    case PotentialKind::exponential:
      return exponential(s * s * p1_, p2_ / s);
    case PotentialKind::tabulated: {
      std::vector<double> r(tab_r_), v(tab_v_);
      for (auto& x : r) x /= s;
      for (auto& y : v) y *= s * s;
      return tabulated(std::move(r), std::move(v));
    }
  }
  fail(ErrorKind::domain, "rescaled: unknown kind");
}

std::string Potential::describe() const {
  std::ostringstream ss;
  switch (kind_) {
    case PotentialKind::square_well:
      ss << "square_well(depth=" << p1_ << ",radius=" << p2_ << ")";
      break;
    case PotentialKind::gaussian:
      ss << "gaussian(depth=" << p1_ << ",width=" << p2_ << ")";
      break;
    case PotentialKind::exponential:
      ss << "exponential(depth=" << p1_ << ",range=" << p2_ << ")";
      break;
    case PotentialKind::tabulated:
      ss << "tabulated(" << tab_r_.size() << " knots, r<=" << tab_r_.back() << ")";
      break;
  }
  return ss.str();
}

Moments moments(const Potential& pot) {
  const double r_inf = pot.suggested_r_max(1e-14);
  std::vector<double> edges{0.0};
  for (double b : pot.breakpoints())
    if (b > 0.0 && b < r_inf) edges.push_back(b);
  edges.push_back(r_inf);
  auto piecewise = [&edges](const std::function<double(double)>& f) {
    double total = 0.0;
    for (size_t i = 0; i + 1 < edges.size(); ++i)
      total += integrate_adaptive(f, edges[i], edges[i + 1], 1e-10, 1e-300).value;
    return total;
  };
  Moments m{};
  m.norm_l1 = 4.0 * kPi * piecewise([&pot](double r) { return std::abs(pot(r)) * r * r; });
  m.weighted_l1 =
      4.0 * kPi * piecewise([&pot](double r) { return std::abs(pot(r)) * (1.0 + r) * r * r; });
  const double l32 =
      4.0 * kPi * piecewise([&pot](double r) { return std::pow(std::abs(pot(r)), 1.5) * r * r; });
  m.norm_l32 = std::pow(l32, 2.0 / 3.0);
  return m;
}

} // namespace bcslab
