#include <doctest.h>

#include <cmath>
#include <vector>

#include "bcslab/constants.hpp"
#include "bcslab/error.hpp"
#include "bcslab/quadrature.hpp"

using namespace bcslab;

TEST_CASE("gauss_legendre nodes and weights have the defining properties") {
  for (int order : {4, 8, 16, 32}) {
    const auto& [x, w] = gauss_legendre(order);
    REQUIRE(static_cast<int>(x.size()) == order);
    REQUIRE(static_cast<int>(w.size()) == order);

    double wsum = 0.0;
    for (int i = 0; i < order; ++i) {
      CHECK(x[i] > -1.0);
      CHECK(x[i] < 1.0);
      CHECK(w[i] > 0.0);
      wsum += w[i];
      if (i > 0) CHECK(x[i] > x[i - 1]); // ascending
      // symmetry of the rule about 0
      CHECK(std::abs(x[i] + x[order - 1 - i]) < 1e-14);
      CHECK(std::abs(w[i] - w[order - 1 - i]) < 1e-14);
    }
    CHECK(std::abs(wsum - 2.0) < 1e-13); // integrates 1 exactly
  }
}

TEST_CASE("gauss_legendre(n) integrates monomials up to degree 2n-1 exactly") {
  const auto& [x, w] = gauss_legendre(16);
  // int_{-1}^{1} t^k dt = 2/(k+1) for even k, 0 for odd k; exact through k = 31.
  for (int k : {0, 2, 10, 20, 30, 31}) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], k);
    const double want = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    CHECK(std::abs(s - want) < 1e-13);
  }
  // Degree 2n is NOT integrated exactly: the defect is the rule's signature.
  double s32 = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s32 += w[i] * std::pow(x[i], 32);
  CHECK(std::abs(s32 - 2.0 / 33) > 1e-12);
}

TEST_CASE("panel_rule stitches panels and matches analytic integrals") {
  const std::vector<double> edges = {0.0, 0.5, 2.0};
  const PanelRule rule = panel_rule(edges, 8);
  REQUIRE(rule.x.size() == 16);
  double s_cos = 0.0, s_one = 0.0;
  for (int i = 0; i < rule.x.size(); ++i) {
    CHECK(rule.x[i] > 0.0);
    CHECK(rule.x[i] < 2.0);
    s_cos += rule.w[i] * std::cos(rule.x[i]);
    s_one += rule.w[i];
  }
  CHECK(std::abs(s_cos - std::sin(2.0)) < 1e-14);
  CHECK(std::abs(s_one - 2.0) < 1e-14);
}

TEST_CASE("integrate_adaptive reproduces closed forms and reports honest errors") {
  const QuadResult r1 = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, kPi);
  CHECK(std::abs(r1.value - 2.0) < 1e-12);
  CHECK(std::abs(r1.value - 2.0) <= std::max(r1.error * 100, 1e-13));
  CHECK(r1.evaluations >= 15);

  const QuadResult r2 = integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(std::abs(r2.value - (std::exp(1.0) - 1.0)) < 1e-13);

  // Integrable endpoint singularity: the bisection cascade must dig it out.
  const QuadResult r3 =
      integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10);
  CHECK(std::abs(r3.value - 2.0) < 1e-8);
}

TEST_CASE("integrate_adaptive flags a divergent integrand instead of returning junk") {
  CHECK_THROWS_AS(integrate_adaptive([](double x) { return 1.0 / x; }, 0.0, 1.0),
                  Error);
  try {
    integrate_adaptive([](double x) { return 1.0 / x; }, 0.0, 1.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::integrability);
  }
}
