#pragma once

#include "slab/types.hpp"

namespace slab {

/// Affine equilibrium temperature profile theta_eq(x3) = a + b (x3 + d).
/// Satisfies the Robin wall conditions exactly in every coefficient regime;
/// for beta = (0, 0) the profile is the constant C (a = C, b = 0).
struct EquilibriumProfile {
    double a = 0.0;
    double b = 0.0;
    double C = 0.0; // the arbitrary constant of the pure-Neumann regime
    double d = 1.0;
    BetaRegime regime = BetaRegime::both_finite;

    double value(double x3) const { return a + b * (x3 + d); }
    double slope() const { return b; }
    double top_value() const { return a + b * d; }
    double bottom_value() const { return a; }
};

/// The equilibrium profile for the given coefficients; C is used only when
/// beta = (0, 0).  Mixed infinite/finite regimes use the explicit limit
/// formulas rather than numerically large beta.
EquilibriumProfile equilibrium_profile(const BoundaryCoefficients& bc, double C = 0.0);

/// d3 theta_eq, the constant slope b (0 when beta = (0,0) or theta_bar = 0).
double equilibrium_gradient(const BoundaryCoefficients& bc);

/// Residuals of the Robin conditions at each wall for a given profile
/// (zero to machine precision for equilibrium_profile output).  For a
/// Dirichlet wall the residual is the trace mismatch.
double robin_residual_top(const BoundaryCoefficients& bc, const EquilibriumProfile& p);
double robin_residual_bottom(const BoundaryCoefficients& bc, const EquilibriumProfile& p);

} // namespace slab
