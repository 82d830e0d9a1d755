#include "slab/rigid_sim.hpp"

#include "slab/coercivity.hpp"

#include <cmath>

namespace slab {

Field3 ScalarState::theta() const {
    Field3 t = w;
    for (int i1 = 0; i1 < grid.N1; ++i1)
        for (int i2 = 0; i2 < grid.N2; ++i2)
            for (int k = 0; k < grid.Nz; ++k)
                t.at(i1, i2, k) += eq.value(grid.x3(k));
    return t;
}

ScalarState make_scalar_state(const SlabGrid& grid, const BoundaryCoefficients& bc,
                              const Field3& w0, double t0, double eq_constant) {
    grid.validate();
    bc.validate();
    if (!w0.grid().same_layout(grid)) throw ConfigError("w0 grid mismatch");
    if (bc.d != grid.domain.d) throw ConfigError("bc depth and grid depth differ");
    ScalarState s;
    s.grid = grid;
    s.time = t0;
    s.w = w0;
    s.bc = bc;
    s.eq = equilibrium_profile(bc, eq_constant);
    // The deviation vanishes identically on Dirichlet walls.
    if (bc.top_is_dirichlet())
        for (int i1 = 0; i1 < grid.N1; ++i1)
            for (int i2 = 0; i2 < grid.N2; ++i2) s.w.at(i1, i2, grid.Nz - 1) = 0.0;
    if (bc.bottom_is_dirichlet())
        for (int i1 = 0; i1 < grid.N1; ++i1)
            for (int i2 = 0; i2 < grid.N2; ++i2) s.w.at(i1, i2, 0) = 0.0;
    return s;
}

RigidStepper::RigidStepper(const SlabGrid& grid, const BoundaryCoefficients& bc, double dt)
    : grid_(grid), bc_(bc), eq_(equilibrium_profile(bc)), dt_(dt), ops_(grid) {
    grid.validate();
    bc.validate();
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (bc.d != grid.domain.d) throw ConfigError("bc depth and grid depth differ");

    const int nz = grid.Nz;
    const double h = grid.hz();
    const double a = 0.5 * dt * bc.kappa; // dt/2 * kappa
    p_lower_.assign(nz - 1, a / (h * h));
    p_upper_.assign(nz - 1, a / (h * h));
    p_diag_.assign(nz, -2.0 * a / (h * h));

    if (bc.bottom_is_dirichlet()) {
        p_diag_[0] = 0.0;
        p_upper_[0] = 0.0;
    } else {
        p_diag_[0] = -2.0 * a / (h * h) - dt * bc.beta_minus / h;
        p_upper_[0] = 2.0 * a / (h * h);
    }
    if (bc.top_is_dirichlet()) {
        p_diag_[nz - 1] = 0.0;
        p_lower_[nz - 2] = 0.0;
    } else {
        p_diag_[nz - 1] = -2.0 * a / (h * h) - dt * bc.beta_plus / h;
        p_lower_[nz - 2] = 2.0 * a / (h * h);
    }

    std::vector<double> m_diag(nz), m_lower(nz - 1), m_upper(nz - 1);
    for (int k = 0; k < nz; ++k) m_diag[k] = 1.0 - p_diag_[k];
    for (int k = 0; k < nz - 1; ++k) {
        m_lower[k] = -p_lower_[k];
        m_upper[k] = -p_upper_[k];
    }
    implicit_lu_.factor(m_lower, m_diag, m_upper);

    efull_.resize(grid.horizontal_nodes());
    ehalf_.resize(grid.horizontal_nodes());
    for (int i1 = 0; i1 < grid.N1; ++i1) {
        for (int i2 = 0; i2 < grid.N2; ++i2) {
            const double k2 = ops_.k_squared(i1, i2);
            const std::size_t m = static_cast<std::size_t>(i1) * grid.N2 + i2;
            efull_[m] = std::exp(-bc.kappa * k2 * dt);
            ehalf_[m] = std::exp(-bc.kappa * k2 * dt * 0.5);
        }
    }
}

namespace {

// Vertical divergence of the half-point flux (f_k + f_{k+1})/2 with the wall
// values of f themselves as the wall fluxes; the trapezoid-weighted column
// sum telescopes to f_top - f_bottom exactly.
void flux_divergence_column(std::span<const double> f, std::span<double> out, double h) {
    const int n = static_cast<int>(f.size());
    out[0] = (f[1] - f[0]) / h;
    for (int k = 1; k < n - 1; ++k) out[k] = (f[k + 1] - f[k - 1]) / (2.0 * h);
    out[n - 1] = (f[n - 1] - f[n - 2]) / h;
}

} // namespace

SpectralField3 RigidStepper::advection_modes(const Field3& w, const VelocitySample& u) const {
    Field3 f1(grid_), f2(grid_), f3(grid_);
    for (std::size_t i = 0; i < w.size(); ++i) {
        f1.data()[i] = u.u1.data()[i] * w.data()[i];
        f2.data()[i] = u.u2.data()[i] * w.data()[i];
        f3.data()[i] = u.u3.data()[i] * w.data()[i];
    }
    Field3 n = ops_.dx1(f1);
    Field3 d2 = ops_.dx2(f2);
    const double h = grid_.hz();
    Field3 d3(grid_);
    for (int i1 = 0; i1 < grid_.N1; ++i1)
        for (int i2 = 0; i2 < grid_.N2; ++i2)
            flux_divergence_column(f3.column(i1, i2), d3.column(i1, i2), h);
    const double b = eq_.slope();
    for (std::size_t i = 0; i < n.size(); ++i)
        n.data()[i] = -(n.data()[i] + d2.data()[i] + d3.data()[i]) - b * u.u3.data()[i];
    return ops_.to_modes(n);
}

Field3 RigidStepper::solve_update(const Field3& w, const SpectralField3& nstar) const {
    SpectralField3 what = ops_.to_modes(w);
    const int nz = grid_.Nz;
    std::vector<cplx> col(nz), rhs(nz);
    for (int i1 = 0; i1 < grid_.N1; ++i1) {
        for (int i2 = 0; i2 < grid_.N2; ++i2) {
            const std::size_t m = static_cast<std::size_t>(i1) * grid_.N2 + i2;
            for (int k = 0; k < nz; ++k) col[k] = what.at(i1, i2, k);
            // (I + dt/2 kappa D2) w
            rhs[0] = col[0] + p_diag_[0] * col[0] + p_upper_[0] * col[1];
            for (int k = 1; k < nz - 1; ++k)
                rhs[k] = col[k] + p_lower_[k - 1] * col[k - 1] + p_diag_[k] * col[k] +
                         p_upper_[k] * col[k + 1];
            rhs[nz - 1] = col[nz - 1] + p_lower_[nz - 2] * col[nz - 2] + p_diag_[nz - 1] * col[nz - 1];
            for (int k = 0; k < nz; ++k)
                rhs[k] = efull_[m] * rhs[k] + dt_ * ehalf_[m] * nstar.at(i1, i2, k);
            if (bc_.bottom_is_dirichlet()) rhs[0] = 0.0;
            if (bc_.top_is_dirichlet()) rhs[nz - 1] = 0.0;
            implicit_lu_.solve(std::span<cplx>(rhs));
            for (int k = 0; k < nz; ++k) what.at(i1, i2, k) = rhs[k];
        }
    }
    Field3 out = ops_.to_physical(what);
    if (bc_.bottom_is_dirichlet())
        for (int i1 = 0; i1 < grid_.N1; ++i1)
            for (int i2 = 0; i2 < grid_.N2; ++i2) out.at(i1, i2, 0) = 0.0;
    if (bc_.top_is_dirichlet())
        for (int i1 = 0; i1 < grid_.N1; ++i1)
            for (int i2 = 0; i2 < grid_.N2; ++i2) out.at(i1, i2, grid_.Nz - 1) = 0.0;
    return out;
}

ScalarState RigidStepper::step(const ScalarState& state, const VelocitySample& u_now,
                               const VelocitySample* u_next) {
    if (!state.grid.same_layout(grid_)) throw ConfigError("state grid mismatch");
    if (!u_now.grid.same_layout(grid_)) throw ConfigError("velocity grid mismatch");
    if (std::abs(u_now.time - state.time) > 1e-9 * std::max(1.0, std::abs(state.time)))
        throw ConfigError("velocity sample time does not match state time");
    if (u_now.max_component > 0.0) {
        const double bound = 0.5 * grid_.min_spacing() / u_now.max_component;
        if (dt_ > bound)
            throw NumericalError("advective stability bound violated: dt=" +
                                 std::to_string(dt_) + " > " + std::to_string(bound));
    }

    Field3 wnew;
    SpectralField3 n0 = advection_modes(state.w, u_now);
    if (!have_history_) {
        Field3 w_prov = solve_update(state.w, n0);
        SpectralField3 n1 = advection_modes(w_prov, u_next ? *u_next : u_now);
        SpectralField3 nstar(grid_);
        for (std::size_t i = 0; i < nstar.data().size(); ++i)
            nstar.data()[i] = 0.5 * (n0.data()[i] + n1.data()[i]);
        wnew = solve_update(state.w, nstar);
        have_history_ = true;
    } else {
        SpectralField3 nstar(grid_);
        for (std::size_t i = 0; i < nstar.data().size(); ++i)
            nstar.data()[i] = 1.5 * n0.data()[i] - 0.5 * n_prev_.data()[i];
        wnew = solve_update(state.w, nstar);
    }
    n_prev_ = std::move(n0);

    if (has_non_finite(wnew)) throw NumericalError("rigid step produced a non-finite value");

    ScalarState out = state;
    out.time = state.time + dt_;
    out.w = std::move(wnew);
    return out;
}

EnergyReport energy_ledger_rigid(const ScalarState& before, const ScalarState& after,
                                 const VelocitySample& u_mid, double dt) {
    if (std::abs(after.time - before.time - dt) > 1e-9 * std::max(1.0, std::abs(after.time)))
        throw ConfigError("ledger states are not dt apart");
    const double t_mid = before.time + 0.5 * dt;
    if (std::abs(u_mid.time - t_mid) > 1e-9 * std::max(1.0, std::abs(t_mid)))
        throw ConfigError("ledger velocity sample is not at the midpoint time");

    Field3 wmid(before.grid);
    for (std::size_t i = 0; i < wmid.size(); ++i)
        wmid.data()[i] = 0.5 * (before.w.data()[i] + after.w.data()[i]);

    const double nb = l2_norm_volume(before.w);
    const double na = l2_norm_volume(after.w);
    const double e_before = 0.5 * nb * nb;
    const double e_after = 0.5 * na * na;

    DissipationReport diss = dissipation_rigid(wmid, before.bc, before.grid);

    Field3 wu(before.grid);
    for (std::size_t i = 0; i < wu.size(); ++i)
        wu.data()[i] = wmid.data()[i] * u_mid.u3.data()[i];
    const double rhs = -before.eq.slope() * integral_volume(wu);

    EnergyReport rep;
    rep.time = t_mid;
    rep.energy = 0.5 * (e_before + e_after);
    rep.dissipation = diss.value;
    rep.rhs = rhs;
    rep.residual = (e_after - e_before) / dt + diss.value - rhs;
    return rep;
}

double conserved_mean_rigid(const ScalarState& state) {
    if (!state.bc.is_neumann())
        throw ConfigError("conserved_mean_rigid requires beta = (0,0)");
    return integral_volume(state.w);
}

} // namespace slab
