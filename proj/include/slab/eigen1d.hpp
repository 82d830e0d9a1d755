#pragma once

#include "slab/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace slab {

/// Finite beta above this threshold is answered by the corresponding
/// Dirichlet closed form / limit regime; the characteristic root and the
/// switch-point values agree to ~1e-13 relative (tested).
inline constexpr double kDirichletSwitch = 1e12;

/// Principal eigenvalue mu of the 1D Robin problem
///   -kappa zeta'' = mu zeta on (-d, 0),
///   kappa zeta'(0) + beta_plus zeta(0) = 0,
///   -kappa zeta'(-d) + beta_minus zeta(-d) = 0,
/// with Dirichlet reinterpretation where beta = inf.
struct EigenResult {
    double mu = 0.0;
    /// Eigenfunction on nz uniform nodes over [-d, 0] (bottom first),
    /// normalized to unit trapezoidal L2 norm.
    std::vector<double> zeta;
    double d = 1.0;
    /// Which characteristic case applied.
    std::string characteristic_case;
    /// Bisection bracket in the variable x = d sqrt(mu/kappa); equal values
    /// for closed-form cases.
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

EigenResult principal_eigenvalue(const BoundaryCoefficients& bc, int nz = 257);

/// The closed-form lower-bound table for mu:
///   beta in (0,inf)^2            -> min{kappa pi^2/4d^2, b+ b-/kappa}
///   one side 0, other finite >0  -> (4d^2/(kappa pi^2) + d/beta)^{-1}
///   one side inf                 -> kappa pi^2/(4 d^2)
///   both inf                     -> kappa pi^2/d^2
///   (0,0)                        -> 0
/// Equality holds for beta in {0, inf}^2.
double eigenvalue_lower_bound(const BoundaryCoefficients& bc);

/// Discrete Rayleigh quotient D_beta[zeta]/||zeta||^2 for a grid function on
/// [-d, 0]: interval differences for the gradient term, trapezoidal mass,
/// endpoint boundary terms.  Endpoint zeros are required where beta = inf.
double rayleigh_quotient_1d(std::span<const double> zeta, const BoundaryCoefficients& bc);

/// Smallest eigenvalue of the dense symmetric tridiagonal discretization
/// (P1 stiffness + Robin terms, lumped trapezoidal mass) by inverse
/// iteration.  Independent cross-check oracle for principal_eigenvalue.
double dense_rayleigh_minimum(const BoundaryCoefficients& bc, int nz);

} // namespace slab
