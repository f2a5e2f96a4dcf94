// Pre-solve sanity report: integrability moments, coupling strength, spectral
// admissibility of the zero-energy Birman-Schwinger operator, and the derived
// scattering length / bracket constant used by the critical-temperature solver.
#include <cmath>
#include <limits>

#include "bcslab/grids.hpp"
#include "bcslab/kernels.hpp"
#include "bcslab/potential.hpp"
#include "bcslab/scattering.hpp"
#include "bcslab/spectral.hpp"

namespace bcslab {

AssumptionReport validate_assumptions(const Potential& pot, const RadialGrid& grid) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  AssumptionReport rep;
  rep.moments = moments(pot);

  const KernelMatrix bs0 = assemble_bs_zero_sym(pot, grid);
  const double e0 = min_eig_value(bs0);
  rep.lambda = e0 < 0.0 ? -1.0 / e0 : std::numeric_limits<double>::infinity();
  rep.spectrum_ok = e0 > -1.0;
  rep.scattering_length = rep.spectrum_ok ? scattering_length_bs(pot, grid).a : nan;
  rep.d_constant = rep.lambda > 1.0 ? 1.0 / (2.0 * (rep.lambda - 1.0)) : nan;
  return rep;
}

} // namespace bcslab
