#pragma once

#include <string>
#include <vector>

namespace bcslab {

struct RadialGrid; // defined in grids.hpp

enum class PotentialKind { square_well, gaussian, exponential, tabulated };

// Radial pair potential V(r). Sign convention: depth > 0 is attractive,
// i.e. square_well(1, 1) evaluates to -1 inside the well. Energy units
// follow hbar = 2m = 1 (see constants.hpp), so depths are inverse lengths
// squared and are never multiplied by 2 anywhere in the library.
class Potential {
public:
  static Potential square_well(double depth, double radius);
  static Potential gaussian(double depth, double width);
  static Potential exponential(double depth, double range);
  // Knots must be strictly increasing with r > 0; V is the monotone piecewise
  // cubic through the samples, held constant below the first knot and exactly
  // 0 beyond the last knot.
  static Potential tabulated(std::vector<double> r, std::vector<double> v);
  // Two-column whitespace-separated text (r, V), '#' starts a comment.
  static Potential tabulated_from_file(const std::string& path);

  double operator()(double r) const;  // V(r); throws Error{domain} for r <= 0
  double sqrt_signed(double r) const; // sgn(V) |V|^{1/2}
  double sqrt_abs(double r) const;    // |V|^{1/2}

  PotentialKind kind() const { return kind_; }
  // +1 if V >= 0 everywhere, -1 if V <= 0 everywhere, 0 if sign-changing.
  int sign() const { return sign_; }
  // Length scale of the fastest variation (well radius, gaussian width, ...).
  double characteristic_length() const;
  // Points where V or its derivatives jump; quadrature panels and the ODE
  // integrator must not straddle them.
  std::vector<double> breakpoints() const;
  // Smallest R with int_R^inf |V|(1+r) r^2 dr <= tail_fraction * total.
  double suggested_r_max(double tail_fraction) const;
  // V_s(r) = s^2 V(s r); scattering length maps a -> a/s, coupling invariant.
  Potential rescaled(double s) const;
  std::string describe() const;

private:
  Potential() = default;
  double eval_tabulated(double r) const;

  PotentialKind kind_ = PotentialKind::square_well;
  double p1_ = 0.0, p2_ = 0.0; // (depth, radius|width|range) for closed-form kinds
  std::vector<double> tab_r_, tab_v_, tab_d_; // knots, values, pchip slopes
  int sign_ = -1;
};

// 4pi int |V| r^2 dr,  4pi int |V| (1+r) r^2 dr,  (4pi int |V|^{3/2} r^2 dr)^{2/3}.
struct Moments {
  double norm_l1;
  double weighted_l1;
  double norm_l32;
};
Moments moments(const Potential& pot);

// Assumption audit for the critical-temperature machinery: coupling margin
// lambda = -1/min_eig of the zero-energy Birman-Schwinger operator (+inf for
// V = 0), scattering length, spectrum_ok = (spectrum of BS0 inside (-1, inf)),
// and the upper-bound constant D = 1/(2(lambda-1)).
struct AssumptionReport {
  double lambda;
  double scattering_length; // NaN when spectrum_ok is false
  bool spectrum_ok;
  Moments moments;
  double d_constant; // NaN when lambda <= 1
};
AssumptionReport validate_assumptions(const Potential& pot, const RadialGrid& grid);

} // namespace bcslab
