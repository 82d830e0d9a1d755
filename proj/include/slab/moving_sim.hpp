#pragma once

#include "slab/coercivity.hpp"
#include "slab/moving_flow.hpp"
#include "slab/rigid_sim.hpp"

namespace slab {

/// Full state of the moving-domain problem on the flattened grid.  The
/// geometry tensors are always the ones computed from the stored surface.
struct MovingState {
    ScalarState scalar;
    SurfaceFunction eta;
    GeometryTensors geometry;
    GeometryBounds bounds;

    double time() const { return scalar.time; }
};

MovingState make_moving_state(const SlabGrid& grid, const BoundaryCoefficients& bc,
                              const Field3& w0, const SurfaceFunction& eta0,
                              const FlowSource* source, bool frozen_surface,
                              double t0 = 0.0, double eq_constant = 0.0);

/// Advances the surface by RK2 on the kinematic equation dt_eta = u.N and
/// stores the realized slope (eta_next - eta)/dt as the time derivative.
/// Throws NumericalError when the advanced surface violates the smallness
/// bounds (the decay estimates' hypotheses no longer hold) or collapses the
/// flattening map.  geometry_out, when given, receives the tensors of the
/// advanced surface.
SurfaceFunction evolve_surface(const SurfaceFunction& eta, const FlowSource& flow, double t,
                               double dt, const SlabGrid& grid,
                               GeometryTensors* geometry_out = nullptr,
                               GeometryBounds* bounds_out = nullptr);

/// Terms of the moving energy identity evaluated at the step midpoint:
/// residual = (E_after - E_before)/dt + M - RHS1 - RHS2, with
/// E = 1/2 int |w|^2 J, M = M^t_beta[w_mid],
/// RHS1 = d3(theta_eq) int w_mid {dt_eta_bar dtilde - u_j J Acal_j3
///        + kappa J Acal_jl dl Acal_j3},
/// RHS2 = F_t(w_mid) = beta_+ int_{Sigma+} (theta_bar - theta_eq) |N|
///        (1 - K |N|) w_mid.
struct MovingEnergyReport {
    double time = 0.0;
    double energy = 0.0;
    double dissipation = 0.0;
    double rhs1 = 0.0;
    double rhs2 = 0.0;
    double residual = 0.0;
};

struct MovingStepResult {
    MovingState state;
    MovingEnergyReport ledger;
};

/// Semi-implicit integrator for the flattened moving-boundary scalar system.
/// The equation is advanced in the conservative variable q = J w:
///   dt(J w) = d3[c d3 w]  (implicit Crank-Nicolson; c = kappa (1+A^2+B^2)K)
///           + horizontal flat diffusion of q (exact per-mode factor)
///           + explicit geometric cross fluxes, conservative advection and
///             equilibrium source (AB2, RK2 bootstrap),
/// with the wall rows carrying the Robin fluxes directly (finite-volume
/// form), so the Neumann-regime J-weighted mean is conserved to roundoff and
/// the eta = 0 operators reduce exactly to the rigid scheme.
/// The surface advances first within the step (RK2 on dt_eta = u.N); the
/// geometry is evaluated at the half step for the ledger midpoint.
class MovingStepper {
public:
    MovingStepper(const SlabGrid& grid, const BoundaryCoefficients& bc, double dt,
                  bool freeze_surface = false);

    MovingStepResult step(const MovingState& state, const FlowSource& source);

    void reset_history() { have_history_ = false; }
    double dt() const { return dt_; }
    bool frozen() const { return freeze_surface_; }

private:
    Field3 explicit_terms(const Field3& w, const FlowSample& flow,
                          const GeometryTensors& g) const;
    Field3 solve_columns(const Field3& rhs, const GeometryTensors& g_mid,
                         const Field3& j_next) const;
    Field3 apply_vertical_cn(const Field3& w, const GeometryTensors& g_mid) const;

    SlabGrid grid_;
    BoundaryCoefficients bc_;
    EquilibriumProfile eq_;
    double dt_;
    bool freeze_surface_;
    SpectralOps ops_;
    std::vector<double> efull_, ehalf_;
    bool have_history_ = false;
    Field3 n_prev_;
};

/// Standalone ledger for two consecutive states (midpoint geometry and flow
/// are rebuilt from the stored surfaces).
MovingEnergyReport energy_ledger_moving(const MovingState& before, const MovingState& after,
                                        const FlowSource& source, double dt);

/// The bracket {dt_eta_bar dtilde - u_j J Acal_j3 + kappa J Acal_jl dl Acal_j3}
/// shared by the stepper's equilibrium source and the ledger RHS1.
Field3 equilibrium_bracket(const FlowSample& flow, const GeometryTensors& g, double kappa);

/// J-weighted average (int w J)/(int J) of the deviation.
double weighted_average(const MovingState& state);

/// int (w - theta_avg) J; constant zero along beta = (0,0) trajectories when
/// theta_avg is the initial J-weighted average.
double weighted_mean(const MovingState& state, double theta_avg);

} // namespace slab
