#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace bcslab {

// Gauss-Legendre nodes and weights on [-1, 1], cached per order.
// Nodes are roots of P_n found by Newton iteration from the Chebyshev guess.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order);

// Composite Gauss-Legendre rule over consecutive panels [edges[i], edges[i+1]].
struct PanelRule {
  Eigen::ArrayXd x;
  Eigen::ArrayXd w;
};
PanelRule panel_rule(const std::vector<double>& edges, int order);

// Adaptive Gauss-Kronrod (G7, K15) with interval bisection.
// Throws Error{integrability} if the subdivision budget is exhausted before
// the requested tolerance is met.
struct QuadResult {
  double value;
  double error;
  int evaluations;
};
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rel_tol = 1e-12, double abs_tol = 1e-300,
                              int max_intervals = 4000);

} // namespace bcslab
