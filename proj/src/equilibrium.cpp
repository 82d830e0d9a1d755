#include "slab/equilibrium.hpp"

#include <cmath>

namespace slab {

EquilibriumProfile equilibrium_profile(const BoundaryCoefficients& bc, double C) {
    bc.validate();
    EquilibriumProfile p;
    p.d = bc.d;
    p.regime = bc.regime();
    const double bp = bc.beta_plus, bm = bc.beta_minus;
    const double kappa = bc.kappa, d = bc.d, tb = bc.theta_bar;

    switch (p.regime) {
    case BetaRegime::both_dirichlet:
        // theta_eq = theta_bar (x3 + d)/d
        p.a = 0.0;
        p.b = tb / d;
        break;
    case BetaRegime::top_dirichlet:
        // theta_eq = theta_bar + beta_minus theta_bar x3/(kappa + beta_minus d)
        p.b = bm * tb / (kappa + bm * d);
        p.a = tb - p.b * d;
        break;
    case BetaRegime::bottom_dirichlet:
        // theta_eq = beta_plus theta_bar (x3 + d)/(kappa + beta_plus d)
        p.a = 0.0;
        p.b = bp * tb / (kappa + bp * d);
        break;
    case BetaRegime::both_finite:
        if (bc.is_neumann()) {
            p.a = C;
            p.b = 0.0;
            p.C = C;
        } else {
            const double den = kappa * (bp + bm) + bp * bm * d;
            p.a = kappa * bp * tb / den;
            p.b = bp * bm * tb / den;
        }
        break;
    }
    return p;
}

double equilibrium_gradient(const BoundaryCoefficients& bc) {
    return equilibrium_profile(bc).slope();
}

double robin_residual_top(const BoundaryCoefficients& bc, const EquilibriumProfile& p) {
    if (bc.top_is_dirichlet()) return p.top_value() - bc.theta_bar;
    return bc.kappa * p.b - bc.beta_plus * (bc.theta_bar - p.top_value());
}

double robin_residual_bottom(const BoundaryCoefficients& bc, const EquilibriumProfile& p) {
    if (bc.bottom_is_dirichlet()) return p.bottom_value();
    return bc.kappa * p.b - bc.beta_minus * p.bottom_value();
}

} // namespace slab
