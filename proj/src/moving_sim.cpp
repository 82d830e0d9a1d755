#include "slab/moving_sim.hpp"

#include "slab/tridiag.hpp"

#include <cmath>

namespace slab {

namespace {

SurfaceFunction surface_with(const SlabGrid& grid, std::vector<double> values,
                             std::vector<double> speed, double time) {
    SurfaceFunction s(grid);
    s.values = std::move(values);
    s.time_derivative = std::move(speed);
    s.time = time;
    return s;
}

// Vertical half-point diffusion coefficient c = kappa (1 + A^2 + B^2) K.
double vertical_coeff(const GeometryTensors& g, double kappa, int i1, int i2, int k) {
    const double A = g.A.at(i1, i2, k);
    const double B = g.B.at(i1, i2, k);
    return kappa * (1.0 + A * A + B * B) * g.K.at(i1, i2, k);
}

} // namespace

Field3 equilibrium_bracket(const FlowSample& flow, const GeometryTensors& g, double kappa) {
    const SlabGrid& grid = g.grid;
    SpectralOps ops(grid);
    // X = J Acal_jl dl Acal_j3 with Acal columns built from (A, B, K).
    Field3 AK(grid), BK(grid);
    for (std::size_t i = 0; i < AK.size(); ++i) {
        AK.data()[i] = g.A.data()[i] * g.K.data()[i];
        BK.data()[i] = g.B.data()[i] * g.K.data()[i];
    }
    Field3 ak1 = ops.dx1(AK), bk2 = ops.dx2(BK);
    Field3 ak3 = d_dz(AK), bk3 = d_dz(BK), k3 = d_dz(g.K);

    Field3 out(grid);
    for (int i1 = 0; i1 < grid.N1; ++i1) {
        for (int i2 = 0; i2 < grid.N2; ++i2) {
            for (int k = 0; k < grid.Nz; ++k) {
                const std::size_t i = out.index(i1, i2, k);
                const double J = g.J.data()[i];
                const double K = g.K.data()[i];
                const double X =
                    J * (-ak1.data()[i] - bk2.data()[i] + AK.data()[i] * ak3.data()[i] +
                         BK.data()[i] * bk3.data()[i] + K * k3.data()[i]);
                const double uJA3 = flow.u3.data()[i] - g.A.data()[i] * flow.u1.data()[i] -
                                    g.B.data()[i] * flow.u2.data()[i];
                double dteta_term = 0.0;
                if (g.has_surface_velocity)
                    dteta_term = g.deta_bar_dt.data()[i] * grid.dtilde(k);
                out.data()[i] = dteta_term - uJA3 + kappa * X;
            }
        }
    }
    return out;
}

MovingState make_moving_state(const SlabGrid& grid, const BoundaryCoefficients& bc,
                              const Field3& w0, const SurfaceFunction& eta0,
                              const FlowSource* source, bool frozen_surface, double t0,
                              double eq_constant) {
    MovingState st;
    st.scalar = make_scalar_state(grid, bc, w0, t0, eq_constant);
    st.eta = eta0;
    st.eta.grid = grid;
    st.eta.time = t0;
    if (frozen_surface || source == nullptr)
        st.eta.time_derivative.assign(grid.horizontal_nodes(), 0.0);
    else
        st.eta.time_derivative = source->kinematic_speed(t0, st.eta);
    st.geometry = compute_geometry(st.eta, grid);
    st.bounds = geometry_bounds(st.geometry);
    return st;
}

SurfaceFunction evolve_surface(const SurfaceFunction& eta, const FlowSource& flow, double t,
                               double dt, const SlabGrid& grid, GeometryTensors* geometry_out,
                               GeometryBounds* bounds_out) {
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    auto k1 = flow.kinematic_speed(t, eta);
    SurfaceFunction pred = surface_with(grid, eta.values, {}, t + dt);
    for (std::size_t i = 0; i < pred.values.size(); ++i) pred.values[i] += dt * k1[i];
    auto k2 = flow.kinematic_speed(t + dt, pred);
    SurfaceFunction next = surface_with(grid, eta.values, {}, t + dt);
    for (std::size_t i = 0; i < next.values.size(); ++i)
        next.values[i] += 0.5 * dt * (k1[i] + k2[i]);
    next.time_derivative = flow.kinematic_speed(t + dt, next);
    GeometryTensors g = compute_geometry(next, grid);
    GeometryBounds b = geometry_bounds(g);
    if (!b.smallness_ok)
        throw NumericalError(
            "surface smallness bounds violated; the run left the smallness regime");
    if (geometry_out) *geometry_out = std::move(g);
    if (bounds_out) *bounds_out = b;
    return next;
}

MovingStepper::MovingStepper(const SlabGrid& grid, const BoundaryCoefficients& bc, double dt,
                             bool freeze_surface)
    : grid_(grid), bc_(bc), eq_(equilibrium_profile(bc)), dt_(dt),
      freeze_surface_(freeze_surface), ops_(grid) {
    grid.validate();
    bc.validate();
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (bc.d != grid.domain.d) throw ConfigError("bc depth and grid depth differ");
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

// Divergence of half-point fluxes with prescribed wall fluxes:
// interior (F_{k+1/2} - F_{k-1/2})/h, wall rows over half cells h/2.
void half_flux_divergence(std::span<const double> fhalf, double flux_bottom, double flux_top,
                          std::span<double> out, double h) {
    const int n = static_cast<int>(out.size());
    out[0] = (fhalf[0] - flux_bottom) / (0.5 * h);
    for (int k = 1; k < n - 1; ++k) out[k] = (fhalf[k] - fhalf[k - 1]) / h;
    out[n - 1] = (flux_top - fhalf[n - 2]) / (0.5 * h);
}

} // namespace

Field3 MovingStepper::explicit_terms(const Field3& w, const FlowSample& flow,
                                     const GeometryTensors& g) const {
    const int nz = grid_.Nz;
    const double h = grid_.hz();
    const double kappa = bc_.kappa;
    const double b = eq_.slope();

    Field3 w1 = ops_.dx1(w), w2 = ops_.dx2(w), w3 = d_dz(w);
    Field3 J1 = ops_.dx1(g.J), J2 = ops_.dx2(g.J);

    // Horizontal advective fluxes -d1(J u1 w) - d2(J u2 w) and the explicit
    // horizontal diffusion remainder d1(-kappa(A w3 + w d1 J)) + d2(...).
    Field3 h1(grid_), h2(grid_);
    for (std::size_t i = 0; i < h1.size(); ++i) {
        const double Jw = g.J.data()[i] * w.data()[i];
        h1.data()[i] = -flow.u1.data()[i] * Jw -
                       kappa * (g.A.data()[i] * w3.data()[i] + w.data()[i] * J1.data()[i]);
        h2.data()[i] = -flow.u2.data()[i] * Jw -
                       kappa * (g.B.data()[i] * w3.data()[i] + w.data()[i] * J2.data()[i]);
    }
    Field3 out = ops_.dx1(h1);
    Field3 d2h = ops_.dx2(h2);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += d2h.data()[i];

    // Vertical explicit fluxes: -(V w) transport with
    // V = u3 - A u1 - B u2 - dt_eta_bar dtilde, plus the diffusive cross part
    // kappa(-A w1 - B w2), both averaged to half points.  Wall fluxes are the
    // exact kinematic/no-slip zeros; the Robin wall fluxes live in the
    // implicit operator and force term.
    std::vector<double> node_flux(nz), fhalf(nz - 1), div(nz);
    Field3 eqb = equilibrium_bracket(flow, g, kappa);
    for (int i1 = 0; i1 < grid_.N1; ++i1) {
        for (int i2 = 0; i2 < grid_.N2; ++i2) {
            for (int k = 0; k < nz; ++k) {
                const std::size_t i = w.index(i1, i2, k);
                double V = flow.u3.data()[i] - g.A.data()[i] * flow.u1.data()[i] -
                           g.B.data()[i] * flow.u2.data()[i];
                if (g.has_surface_velocity)
                    V -= g.deta_bar_dt.data()[i] * grid_.dtilde(k);
                node_flux[k] = -V * w.data()[i] +
                               kappa * (-g.A.data()[i] * w1.data()[i] -
                                        g.B.data()[i] * w2.data()[i]);
            }
            for (int k = 0; k < nz - 1; ++k) fhalf[k] = 0.5 * (node_flux[k] + node_flux[k + 1]);
            half_flux_divergence(fhalf, 0.0, 0.0, div, h);
            for (int k = 0; k < nz; ++k) out.at(i1, i2, k) += div[k];
        }
    }

    // Equilibrium source b {dt_eta_bar dtilde - u_j J Acal_j3 + kappa X}.
    if (b != 0.0)
        for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b * eqb.data()[i];
    return out;
}

Field3 MovingStepper::apply_vertical_cn(const Field3& w, const GeometryTensors& g_mid) const {
    const int nz = grid_.Nz;
    const double h = grid_.hz();
    Field3 out(grid_);
    std::vector<double> chalf(nz - 1);
    for (int i1 = 0; i1 < grid_.N1; ++i1) {
        for (int i2 = 0; i2 < grid_.N2; ++i2) {
            for (int k = 0; k < nz - 1; ++k)
                chalf[k] = 0.5 * (vertical_coeff(g_mid, bc_.kappa, i1, i2, k) +
                                  vertical_coeff(g_mid, bc_.kappa, i1, i2, k + 1));
            auto col = w.column(i1, i2);
            auto o = out.column(i1, i2);
            // Interior diffusive fluxes.
            double flux_bottom = 0.0, flux_top = 0.0;
            if (!bc_.bottom_is_dirichlet())
                flux_bottom = bc_.beta_minus * g_mid.K.at(i1, i2, 0) * col[0];
            if (!bc_.top_is_dirichlet())
                flux_top = -bc_.beta_plus * g_mid.nmag_at(i1, i2) * col[nz - 1];
            o[0] = (chalf[0] * (col[1] - col[0]) / h - flux_bottom) / (0.5 * h);
            for (int k = 1; k < nz - 1; ++k)
                o[k] = (chalf[k] * (col[k + 1] - col[k]) / h -
                        chalf[k - 1] * (col[k] - col[k - 1]) / h) /
                       h;
            o[nz - 1] = (flux_top - chalf[nz - 2] * (col[nz - 1] - col[nz - 2]) / h) / (0.5 * h);
            if (bc_.bottom_is_dirichlet()) o[0] = 0.0;
            if (bc_.top_is_dirichlet()) o[nz - 1] = 0.0;
        }
    }
    return out;
}

Field3 MovingStepper::solve_columns(const Field3& rhs, const GeometryTensors& g_mid,
                                    const Field3& j_next) const {
    const int nz = grid_.Nz;
    const double h = grid_.hz();
    const double a = 0.5 * dt_;
    Field3 out(grid_);
    std::vector<double> chalf(nz - 1), diag(nz), lower(nz - 1), upper(nz - 1), r(nz);
    TridiagLU lu;
    for (int i1 = 0; i1 < grid_.N1; ++i1) {
        for (int i2 = 0; i2 < grid_.N2; ++i2) {
            for (int k = 0; k < nz - 1; ++k)
                chalf[k] = 0.5 * (vertical_coeff(g_mid, bc_.kappa, i1, i2, k) +
                                  vertical_coeff(g_mid, bc_.kappa, i1, i2, k + 1));
            for (int k = 0; k < nz; ++k) diag[k] = j_next.at(i1, i2, k);
            // diag(J+) - (dt/2) Dv
            diag[0] += a * (chalf[0] / h) / (0.5 * h);
            upper[0] = -a * (chalf[0] / h) / (0.5 * h);
            if (!bc_.bottom_is_dirichlet())
                diag[0] += a * bc_.beta_minus * g_mid.K.at(i1, i2, 0) / (0.5 * h);
            for (int k = 1; k < nz - 1; ++k) {
                diag[k] += a * (chalf[k] + chalf[k - 1]) / (h * h);
                lower[k - 1] = -a * chalf[k - 1] / (h * h);
                upper[k] = -a * chalf[k] / (h * h);
            }
            diag[nz - 1] += a * (chalf[nz - 2] / h) / (0.5 * h);
            lower[nz - 2] = -a * (chalf[nz - 2] / h) / (0.5 * h);
            if (!bc_.top_is_dirichlet())
                diag[nz - 1] += a * bc_.beta_plus * g_mid.nmag_at(i1, i2) / (0.5 * h);
            if (bc_.bottom_is_dirichlet()) {
                diag[0] = 1.0;
                upper[0] = 0.0;
            }
            if (bc_.top_is_dirichlet()) {
                diag[nz - 1] = 1.0;
                lower[nz - 2] = 0.0;
            }
            lu.factor(lower, diag, upper);
            auto src = rhs.column(i1, i2);
            for (int k = 0; k < nz; ++k) r[k] = src[k];
            if (bc_.bottom_is_dirichlet()) r[0] = 0.0;
            if (bc_.top_is_dirichlet()) r[nz - 1] = 0.0;
            lu.solve(std::span<double>(r));
            auto o = out.column(i1, i2);
            for (int k = 0; k < nz; ++k) o[k] = r[k];
        }
    }
    return out;
}

MovingStepResult MovingStepper::step(const MovingState& state, const FlowSource& source) {
    if (!state.scalar.grid.same_layout(grid_)) throw ConfigError("state grid mismatch");
    const double t = state.time();
    const int nz = grid_.Nz;
    const double h = grid_.hz();

    // 1. Surface advance (RK2 on dt_eta = u.N), geometry at half and full step.
    const SurfaceFunction& eta_n = state.eta;
    SurfaceFunction eta_next;
    GeometryTensors g_next;
    GeometryBounds bounds_next;
    if (freeze_surface_) {
        eta_next = surface_with(grid_, eta_n.values,
                                std::vector<double>(grid_.horizontal_nodes(), 0.0), t + dt_);
        g_next = state.geometry;
        bounds_next = state.bounds;
    } else {
        eta_next = evolve_surface(eta_n, source, t, dt_, grid_, &g_next, &bounds_next);
    }

    std::vector<double> eta_mid_vals(grid_.horizontal_nodes());
    std::vector<double> dteta_mid(grid_.horizontal_nodes());
    for (std::size_t i = 0; i < eta_mid_vals.size(); ++i) {
        eta_mid_vals[i] = 0.5 * (eta_n.values[i] + eta_next.values[i]);
        dteta_mid[i] = (eta_next.values[i] - eta_n.values[i]) / dt_;
    }
    SurfaceFunction eta_mid = surface_with(grid_, eta_mid_vals, dteta_mid, t + 0.5 * dt_);
    GeometryTensors g_mid = compute_geometry(eta_mid, grid_);

    // 2. Explicit terms with AB2 (RK2 bootstrap on the first step).
    FlowSample flow_n = source.sample(t, state.geometry);
    if (flow_n.max_component > 0.0) {
        const double bound = 0.5 * grid_.min_spacing() / flow_n.max_component;
        if (dt_ > bound)
            throw NumericalError("advective stability bound violated: dt=" +
                                 std::to_string(dt_) + " > " + std::to_string(bound));
    }

    Field3 q(grid_);
    for (std::size_t i = 0; i < q.size(); ++i)
        q.data()[i] = state.geometry.J.data()[i] * state.scalar.w.data()[i];
    Field3 cn_part = apply_vertical_cn(state.scalar.w, g_mid);

    // Robin force on Sigma_+ (midpoint geometry), explicit.
    Field3 force(grid_);
    if (!bc_.top_is_dirichlet() && bc_.beta_plus > 0.0) {
        const double gap = bc_.theta_bar - eq_.top_value();
        for (int i1 = 0; i1 < grid_.N1; ++i1) {
            for (int i2 = 0; i2 < grid_.N2; ++i2) {
                const double nmag = g_mid.nmag_at(i1, i2);
                const double Ktop = g_mid.K.at(i1, i2, nz - 1);
                force.at(i1, i2, nz - 1) =
                    bc_.beta_plus * gap * nmag * (1.0 - Ktop * nmag) / (0.5 * h);
            }
        }
    }

    auto assemble_and_solve = [&](const Field3& nstar) {
        SpectralField3 base(grid_);
        {
            Field3 tmp(grid_);
            for (std::size_t i = 0; i < tmp.size(); ++i)
                tmp.data()[i] = q.data()[i] + 0.5 * dt_ * cn_part.data()[i];
            base = ops_.to_modes(tmp);
        }
        Field3 forcing(grid_);
        for (std::size_t i = 0; i < forcing.size(); ++i)
            forcing.data()[i] = dt_ * (nstar.data()[i] + force.data()[i]);
        SpectralField3 fm = ops_.to_modes(forcing);
        for (int i1 = 0; i1 < grid_.N1; ++i1) {
            for (int i2 = 0; i2 < grid_.N2; ++i2) {
                const std::size_t m = static_cast<std::size_t>(i1) * grid_.N2 + i2;
                for (int k = 0; k < nz; ++k)
                    base.at(i1, i2, k) = efull_[m] * base.at(i1, i2, k) +
                                         ehalf_[m] * fm.at(i1, i2, k);
            }
        }
        Field3 rhs = ops_.to_physical(base);
        Field3 w = solve_columns(rhs, g_mid, g_next.J);
        if (bc_.bottom_is_dirichlet())
            for (int i1 = 0; i1 < grid_.N1; ++i1)
                for (int i2 = 0; i2 < grid_.N2; ++i2) w.at(i1, i2, 0) = 0.0;
        if (bc_.top_is_dirichlet())
            for (int i1 = 0; i1 < grid_.N1; ++i1)
                for (int i2 = 0; i2 < grid_.N2; ++i2) w.at(i1, i2, nz - 1) = 0.0;
        return w;
    };

    Field3 n0 = explicit_terms(state.scalar.w, flow_n, state.geometry);
    Field3 wnew;
    if (!have_history_) {
        Field3 w_prov = assemble_and_solve(n0);
        FlowSample flow_next = source.sample(t + dt_, g_next);
        Field3 n1 = explicit_terms(w_prov, flow_next, g_next);
        Field3 nstar(grid_);
        for (std::size_t i = 0; i < nstar.size(); ++i)
            nstar.data()[i] = 0.5 * (n0.data()[i] + n1.data()[i]);
        wnew = assemble_and_solve(nstar);
        have_history_ = true;
    } else {
        Field3 nstar(grid_);
        for (std::size_t i = 0; i < nstar.size(); ++i)
            nstar.data()[i] = 1.5 * n0.data()[i] - 0.5 * n_prev_.data()[i];
        wnew = assemble_and_solve(nstar);
    }
    n_prev_ = std::move(n0);

    if (has_non_finite(wnew)) throw NumericalError("moving step produced a non-finite value");

    MovingStepResult res;
    res.state.scalar = state.scalar;
    res.state.scalar.time = t + dt_;
    res.state.scalar.w = std::move(wnew);
    res.state.eta = std::move(eta_next);
    res.state.geometry = std::move(g_next);
    res.state.bounds = bounds_next;

    // 3. Midpoint ledger.
    FlowSample flow_mid = source.sample(t + 0.5 * dt_, g_mid);
    Field3 wmid(grid_);
    for (std::size_t i = 0; i < wmid.size(); ++i)
        wmid.data()[i] = 0.5 * (state.scalar.w.data()[i] + res.state.scalar.w.data()[i]);

    Field3 jw2(grid_);
    for (std::size_t i = 0; i < jw2.size(); ++i) {
        const double wb = state.scalar.w.data()[i];
        jw2.data()[i] = state.geometry.J.data()[i] * wb * wb;
    }
    const double e_before = 0.5 * integral_volume(jw2);
    for (std::size_t i = 0; i < jw2.size(); ++i) {
        const double wa = res.state.scalar.w.data()[i];
        jw2.data()[i] = res.state.geometry.J.data()[i] * wa * wa;
    }
    const double e_after = 0.5 * integral_volume(jw2);

    DissipationReport m = dissipation_moving(wmid, bc_, g_mid, grid_);
    Field3 bracket = equilibrium_bracket(flow_mid, g_mid, bc_.kappa);
    for (std::size_t i = 0; i < bracket.size(); ++i) bracket.data()[i] *= wmid.data()[i];
    const double rhs1 = eq_.slope() * integral_volume(bracket);

    double rhs2 = 0.0;
    if (!bc_.top_is_dirichlet() && bc_.beta_plus > 0.0) {
        const double gap = bc_.theta_bar - eq_.top_value();
        std::vector<double> integ(grid_.horizontal_nodes());
        for (int i1 = 0; i1 < grid_.N1; ++i1) {
            for (int i2 = 0; i2 < grid_.N2; ++i2) {
                const double nmag = g_mid.nmag_at(i1, i2);
                const double Ktop = g_mid.K.at(i1, i2, nz - 1);
                integ[static_cast<std::size_t>(i1) * grid_.N2 + i2] =
                    bc_.beta_plus * gap * nmag * (1.0 - Ktop * nmag) * wmid.at(i1, i2, nz - 1);
            }
        }
        rhs2 = integral_surface(grid_, integ);
    }

    res.ledger.time = t + 0.5 * dt_;
    res.ledger.energy = 0.5 * (e_before + e_after);
    res.ledger.dissipation = m.value;
    res.ledger.rhs1 = rhs1;
    res.ledger.rhs2 = rhs2;
    res.ledger.residual = (e_after - e_before) / dt_ + m.value - rhs1 - rhs2;
    return res;
}

MovingEnergyReport energy_ledger_moving(const MovingState& before, const MovingState& after,
                                        const FlowSource& source, double dt) {
    if (std::abs(after.time() - before.time() - dt) >
        1e-9 * std::max(1.0, std::abs(after.time())))
        throw ConfigError("ledger states are not dt apart");
    const SlabGrid& grid = before.scalar.grid;
    const BoundaryCoefficients& bc = before.scalar.bc;
    const double t_mid = before.time() + 0.5 * dt;

    std::vector<double> eta_mid_vals(grid.horizontal_nodes());
    std::vector<double> dteta(grid.horizontal_nodes());
    for (std::size_t i = 0; i < eta_mid_vals.size(); ++i) {
        eta_mid_vals[i] = 0.5 * (before.eta.values[i] + after.eta.values[i]);
        dteta[i] = (after.eta.values[i] - before.eta.values[i]) / dt;
    }
    SurfaceFunction eta_mid = surface_with(grid, eta_mid_vals, dteta, t_mid);
    GeometryTensors g_mid = compute_geometry(eta_mid, grid);
    FlowSample flow_mid = source.sample(t_mid, g_mid);

    Field3 wmid(grid);
    for (std::size_t i = 0; i < wmid.size(); ++i)
        wmid.data()[i] = 0.5 * (before.scalar.w.data()[i] + after.scalar.w.data()[i]);

    Field3 jw2(grid);
    for (std::size_t i = 0; i < jw2.size(); ++i) {
        const double wb = before.scalar.w.data()[i];
        jw2.data()[i] = before.geometry.J.data()[i] * wb * wb;
    }
    const double e_before = 0.5 * integral_volume(jw2);
    for (std::size_t i = 0; i < jw2.size(); ++i) {
        const double wa = after.scalar.w.data()[i];
        jw2.data()[i] = after.geometry.J.data()[i] * wa * wa;
    }
    const double e_after = 0.5 * integral_volume(jw2);

    DissipationReport m = dissipation_moving(wmid, bc, g_mid, grid);
    EquilibriumProfile eq = before.scalar.eq;
    Field3 bracket = equilibrium_bracket(flow_mid, g_mid, bc.kappa);
    for (std::size_t i = 0; i < bracket.size(); ++i) bracket.data()[i] *= wmid.data()[i];
    const double rhs1 = eq.slope() * integral_volume(bracket);

    double rhs2 = 0.0;
    if (!bc.top_is_dirichlet() && bc.beta_plus > 0.0) {
        const double gap = bc.theta_bar - eq.top_value();
        std::vector<double> integ(grid.horizontal_nodes());
        const int top = grid.Nz - 1;
        for (int i1 = 0; i1 < grid.N1; ++i1) {
            for (int i2 = 0; i2 < grid.N2; ++i2) {
                const double nmag = g_mid.nmag_at(i1, i2);
                const double Ktop = g_mid.K.at(i1, i2, top);
                integ[static_cast<std::size_t>(i1) * grid.N2 + i2] =
                    bc.beta_plus * gap * nmag * (1.0 - Ktop * nmag) * wmid.at(i1, i2, top);
            }
        }
        rhs2 = integral_surface(grid, integ);
    }

    MovingEnergyReport rep;
    rep.time = t_mid;
    rep.energy = 0.5 * (e_before + e_after);
    rep.dissipation = m.value;
    rep.rhs1 = rhs1;
    rep.rhs2 = rhs2;
    rep.residual = (e_after - e_before) / dt + m.value - rhs1 - rhs2;
    return rep;
}

double weighted_average(const MovingState& state) {
    Field3 jw(state.scalar.grid);
    for (std::size_t i = 0; i < jw.size(); ++i)
        jw.data()[i] = state.geometry.J.data()[i] * state.scalar.w.data()[i];
    const double num = integral_volume(jw);
    const double den = integral_volume(state.geometry.J);
    return num / den;
}

double weighted_mean(const MovingState& state, double theta_avg) {
    if (!state.scalar.bc.is_neumann())
        throw ConfigError("weighted_mean requires beta = (0,0)");
    Field3 jw(state.scalar.grid);
    for (std::size_t i = 0; i < jw.size(); ++i)
        jw.data()[i] =
            state.geometry.J.data()[i] * (state.scalar.w.data()[i] - theta_avg);
    return integral_volume(jw);
}

} // namespace slab
