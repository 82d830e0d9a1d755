#pragma once

#include "slab/eigen1d.hpp"
#include "slab/geometry.hpp"
#include "slab/grid.hpp"
#include "slab/types.hpp"

namespace slab {

/// One evaluation of a dissipation functional, broken into its parts.
/// value = volume_term + top_term + bottom_term; ratio = value / weighted
/// squared norm (plain L2 for the rigid functionals, J-weighted for the
/// moving one).
struct DissipationReport {
    double value = 0.0;
    double volume_term = 0.0;
    double top_term = 0.0;
    double bottom_term = 0.0;
    double weighted_norm2 = 0.0;
    double ratio = 0.0;
    bool jacobian_weighted = false;
};

/// D_beta[phi] = kappa int |grad phi|^2 + beta_+ int_{Sigma+} phi^2
///             + beta_- int_{Sigma-} phi^2 (finite-beta terms only).
/// Quadrature: spectral horizontally, trapezoidal vertically.  Throws if a
/// wall trace is nonzero where beta = inf.
DissipationReport dissipation_rigid(const Field3& phi, const BoundaryCoefficients& bc,
                                    const SlabGrid& grid);

/// The vertical part V_beta: only d3 phi in the gradient term.
DissipationReport dissipation_vertical(const Field3& phi, const BoundaryCoefficients& bc,
                                       const SlabGrid& grid);

/// M^t_beta[phi] = kappa int J |grad_A phi|^2 + beta_+ int_{Sigma+} phi^2 |N|
///               + beta_- int_{Sigma-} phi^2 K.
DissipationReport dissipation_moving(const Field3& phi, const BoundaryCoefficients& bc,
                                     const GeometryTensors& g, const SlabGrid& grid);

/// mu_bar_0 = kappa pi^2 min{1/d^2, 4/L1^2, 4/L2^2}, the Neumann spectral gap
/// of the periodic box.  proxy_warning is set for the truncated-infinite
/// horizontal kind (the continuum gap closes as the box grows; the value is
/// only the current box's closed form).
struct NeumannGap {
    double value = 0.0;
    bool proxy_warning = false;
};
NeumannGap neumann_gap(const SlabDomain& domain, double kappa);

/// Second-smallest eigenvalue of the discrete Neumann Laplacian on the grid
/// (spectral horizontal + finite-volume vertical wall rows), by shifted
/// inverse iteration with explicit deflation of the constant mode.
double neumann_gap_discrete(const SlabGrid& grid, double kappa);

enum class AuditCase { rigid_robin, rigid_neumann, moving_robin, moving_neumann };

inline const char* to_string(AuditCase c) {
    switch (c) {
    case AuditCase::rigid_robin: return "rigid_robin";
    case AuditCase::rigid_neumann: return "rigid_neumann";
    case AuditCase::moving_robin: return "moving_robin";
    case AuditCase::moving_neumann: return "moving_neumann";
    }
    return "?";
}

/// Observed Rayleigh ratio of the appropriate dissipation functional against
/// the theoretical floor it must dominate:
///   rigid robin    -> mu_beta,
///   rigid Neumann  -> mu_bar_0 (mean-zero phi required),
///   moving robin   -> mu_beta / c0^2,
///   moving Neumann -> mu_bar_0 / (c0 c1) (J-weighted mean-zero phi required).
/// pass allows relative slack for the O(h^2) discretization error.
struct CoercivityAudit {
    AuditCase audit_case = AuditCase::rigid_robin;
    double ratio = 0.0;
    double floor_value = 0.0;
    double c0 = 1.0;
    double c1 = 1.0;
    bool pass = false;
    bool proxy_warning = false;
};
CoercivityAudit coercivity_audit(const Field3& phi, const BoundaryCoefficients& bc,
                                 const GeometryTensors* g, const SlabGrid& grid,
                                 double rel_slack = 1e-3);

} // namespace slab
