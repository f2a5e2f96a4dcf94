#pragma once

#include <cmath>
#include <numbers>

// Unit convention used throughout: hbar = 2m = 1, so the kinetic symbol is
// exactly p^2 and the zero-energy Schroedinger equation reads -u'' + V u = 0.
// All lengths are in units of the potential's length scale, all energies in
// inverse length squared.
namespace bcslab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240;

// ln(mu/Tc) + pi/(2 sqrt(mu) a) -> 2 - gamma - ln(8/pi) in the dilute limit;
// the same constant with opposite sign enters the m_mu(T) asymptotic.
inline double universal_offset() { return 2.0 - kEulerGamma - std::log(8.0 / kPi); }

// Prefactor of the asymptotic critical temperature, (8/pi) e^{gamma - 2}.
inline double tc_prefactor() { return (8.0 / kPi) * std::exp(kEulerGamma - 2.0); }

} // namespace bcslab
