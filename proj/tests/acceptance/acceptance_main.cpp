// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Each criterion carries its own runtime budget.

#include "slab/coercivity.hpp"
#include "slab/decay.hpp"
#include "slab/eigen1d.hpp"
#include "slab/equilibrium.hpp"
#include "slab/experiments.hpp"
#include "slab/geometry.hpp"
#include "slab/moving_sim.hpp"
#include "slab/rigid_sim.hpp"
#include "slab/rng.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace slab;

namespace {

int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int index, const std::string& name, bool pass, double runtime, double budget,
            const std::string& detail) {
    const bool in_budget = runtime < budget;
    const bool ok = pass && in_budget;
    if (!ok) ++g_failures;
    std::printf("[%s] C%-2d %s (%s; %.2fs of %.0fs budget)\n", ok ? "PASS" : "FAIL", index,
                name.c_str(), detail.c_str(), runtime, budget);
    std::fflush(stdout);
}

SlabGrid make_grid(int N1, int N2, int Nz, double L1 = 1.0, double L2 = 1.0, double d = 1.0) {
    SlabGrid g;
    g.domain.L1 = L1;
    g.domain.L2 = L2;
    g.domain.d = d;
    g.N1 = N1;
    g.N2 = N2;
    g.Nz = Nz;
    return g;
}

BoundaryCoefficients bc_of(double bp, double bm, double kappa = 1.0, double d = 1.0,
                           double tb = 0.0) {
    BoundaryCoefficients bc;
    bc.beta_plus = bp;
    bc.beta_minus = bm;
    bc.kappa = kappa;
    bc.d = d;
    bc.theta_bar = tb;
    return bc;
}

struct Trajectory {
    DecaySeries series;
    ScalarState final_state;
    double max_residual = 0.0;
};

Trajectory run_rigid(const SlabGrid& g, const BoundaryCoefficients& bc, const Field3& w0,
                     VelocityFamily family, const VelocityParams& vp, double dt, int steps,
                     int stride, bool ledger = false) {
    RigidStepper stepper(g, bc, dt);
    ScalarState st = make_scalar_state(g, bc, w0);
    Trajectory out;
    out.series.t.push_back(0.0);
    out.series.norm.push_back(l2_norm_volume(st.w));
    out.series.forcing.push_back(make_velocity_rigid(family, vp, 0.0, g).l2_norm);
    for (int i = 0; i < steps; ++i) {
        const double t = i * dt;
        VelocitySample u = make_velocity_rigid(family, vp, t, g);
        ScalarState nx;
        if (i == 0) {
            VelocitySample un = make_velocity_rigid(family, vp, t + dt, g);
            nx = stepper.step(st, u, &un);
        } else {
            nx = stepper.step(st, u);
        }
        if (ledger) {
            VelocitySample um = make_velocity_rigid(family, vp, t + 0.5 * dt, g);
            EnergyReport rep = energy_ledger_rigid(st, nx, um, dt);
            out.max_residual = std::max(out.max_residual, std::abs(rep.residual));
        }
        st = std::move(nx);
        if ((i + 1) % stride == 0 || i + 1 == steps) {
            out.series.t.push_back(st.time);
            out.series.norm.push_back(l2_norm_volume(st.w));
            out.series.forcing.push_back(make_velocity_rigid(family, vp, st.time, g).l2_norm);
        }
    }
    out.final_state = std::move(st);
    return out;
}

// ---------------------------------------------------------------------------

void c1_eigen_closed_forms() {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    const double pi2 = M_PI * M_PI;
    struct Case {
        double bp, bm, kappa, d, expect;
    } cases[] = {
        {kInf, kInf, 1.0, 1.0, pi2},
        {kInf, 0.0, 1.0, 1.0, pi2 / 4.0},
        {0.0, kInf, 1.0, 1.0, pi2 / 4.0},
        {0.0, 0.0, 1.0, 1.0, 0.0},
        {kInf, kInf, 0.7, 1.3, 0.7 * pi2 / (1.3 * 1.3)},
    };
    const int reps = 200;
    int evals = 0;
    for (auto& c : cases) {
        BoundaryCoefficients bc = bc_of(c.bp, c.bm, c.kappa, c.d);
        for (int r = 0; r < reps; ++r) {
            const double mu = principal_eigenvalue(bc, 17).mu;
            ++evals;
            const double err =
                c.expect == 0.0 ? std::abs(mu) : std::abs(mu - c.expect) / c.expect;
            if (err > 1e-12) pass = false;
        }
    }
    const double rt = seconds_since(t0);
    const double per_eval_ms = rt / evals * 1e3;
    if (per_eval_ms >= 1.0) pass = false;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "rel err <= 1e-12, %.4f ms/eval", per_eval_ms);
    report(1, "eigenvalue closed forms", pass, rt, 10.0, buf);
}

void c2_transcendental_consistency() {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    CounterRng rng{2024};
    double worst_rel = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double bp = std::pow(10.0, -2.0 + 5.0 * rng.uniform(2 * trial));
        const double bm = std::pow(10.0, -2.0 + 5.0 * rng.uniform(2 * trial + 1));
        BoundaryCoefficients bc = bc_of(bp, bm);
        const double mu = principal_eigenvalue(bc).mu;
        if (mu < eigenvalue_lower_bound(bc) - 1e-12) pass = false;
        const double dense = dense_rayleigh_minimum(bc, 2049);
        const double rel = std::abs(dense - mu) / mu;
        worst_rel = std::max(worst_rel, rel);
        if (rel > 1e-6) pass = false;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "50 pairs, worst dense mismatch %.2e", worst_rel);
    report(2, "transcendental consistency", pass, seconds_since(t0), 10.0, buf);
}

void c3_neumann_gap() {
    auto t0 = std::chrono::steady_clock::now();
    SlabGrid g = make_grid(16, 16, 33);
    const double exact = neumann_gap(g.domain, 1.0).value;
    const double disc = neumann_gap_discrete(g, 1.0);
    const double rel = std::abs(disc - exact) / exact;
    SlabGrid g2 = make_grid(16, 16, 65);
    const double disc2 = neumann_gap_discrete(g2, 1.0);
    const double ratio = std::abs(disc - exact) / std::abs(disc2 - exact);
    const bool pass = rel < 0.01 && ratio > 3.5 && ratio < 4.5;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "closed form %.6f, discrete err %.2e, ratio %.2f", exact,
                  rel, ratio);
    report(3, "Neumann spectral gap", pass, seconds_since(t0), 5.0, buf);
}

void c4_rigid_ledger_refinement() {
    auto t0 = std::chrono::steady_clock::now();
    BoundaryCoefficients bc = bc_of(1.0, 0.5, 0.25, 1.0, 2.0);
    VelocityParams vp;
    vp.amplitude = 0.4;
    vp.decay_rate = 0.3;
    double residuals[2];
    for (int level = 0; level < 2; ++level) {
        const int scale = level + 1;
        SlabGrid g = make_grid(16 * scale, 16 * scale, level == 0 ? 33 : 65);
        EigenResult er = principal_eigenvalue(bc, g.Nz);
        Field3 w0(g);
        for (int i1 = 0; i1 < g.N1; ++i1)
            for (int i2 = 0; i2 < g.N2; ++i2)
                for (int k = 0; k < g.Nz; ++k)
                    w0.at(i1, i2, k) = er.zeta[k] * (1.0 + 0.7 * std::cos(2.0 * M_PI * g.x1(i1)) +
                                                     0.4 * std::sin(2.0 * M_PI * g.x2(i2)));
        const double dt = level == 0 ? 4e-3 : 2e-3;
        const int steps = level == 0 ? 60 : 120;
        Trajectory tr = run_rigid(g, bc, w0, VelocityFamily::cellular, vp, dt, steps, steps, true);
        residuals[level] = tr.max_residual;
    }
    const double factor = residuals[0] / residuals[1];
    const bool pass = factor >= 3.0 && factor <= 5.0;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max residual %.3e -> %.3e, factor %.2f", residuals[0],
                  residuals[1], factor);
    report(4, "rigid energy identity closure", pass, seconds_since(t0), 60.0, buf);
}

void c5_moving_ledger_refinement() {
    auto t0 = std::chrono::steady_clock::now();
    BoundaryCoefficients bc = bc_of(1.0, 0.5, 0.25, 1.0, 2.0);
    double residuals[2];
    for (int level = 0; level < 2; ++level) {
        const int scale = level + 1;
        SlabGrid g = make_grid(16 * scale, 4 * scale, level == 0 ? 33 : 65, 2.0 * M_PI);
        ManufacturedFlowParams p;
        p.amplitude = 0.15;
        p.decay_rate = 0.4;
        p.envelope_c = 1.0;
        ManufacturedFlow flow(p, g);
        EigenResult er = principal_eigenvalue(bc, g.Nz);
        Field3 w0(g);
        for (int i1 = 0; i1 < g.N1; ++i1)
            for (int i2 = 0; i2 < g.N2; ++i2)
                for (int k = 0; k < g.Nz; ++k)
                    w0.at(i1, i2, k) = er.zeta[k] * (1.0 + 0.6 * std::cos(g.x1(i1)));
        SurfaceFunction eta(g);
        for (int i1 = 0; i1 < g.N1; ++i1)
            for (int i2 = 0; i2 < g.N2; ++i2) eta.at(i1, i2) = 0.03 * std::cos(g.x1(i1));
        MovingState ms = make_moving_state(g, bc, w0, eta, &flow, false);
        const double dt = level == 0 ? 4e-3 : 2e-3;
        const int steps = level == 0 ? 40 : 80;
        MovingStepper stepper(g, bc, dt, false);
        double maxr = 0.0;
        for (int i = 0; i < steps; ++i) {
            MovingStepResult res = stepper.step(ms, flow);
            maxr = std::max(maxr, std::abs(res.ledger.residual));
            ms = std::move(res.state);
        }
        residuals[level] = maxr;
    }
    const double factor = residuals[0] / residuals[1];
    const bool pass = factor >= 3.0 && factor <= 5.0;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max residual %.3e -> %.3e, factor %.2f", residuals[0],
                  residuals[1], factor);
    report(5, "moving energy identity closure", pass, seconds_since(t0), 120.0, buf);
}

void c6_geometric_identities() {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    double worst34 = 0.0;
    CounterRng rng{99};
    for (int trial = 0; trial < 6; ++trial) {
        SlabGrid g = make_grid(16, 8, 17);
        SurfaceFunction eta(g);
        for (int i1 = 0; i1 < g.N1; ++i1)
            for (int i2 = 0; i2 < g.N2; ++i2)
                eta.at(i1, i2) =
                    0.02 * std::cos(2.0 * M_PI * g.x1(i1) + 2.0 * M_PI * rng.uniform(trial)) +
                    0.01 * std::sin(2.0 * M_PI * (g.x1(i1) + g.x2(i2)));
        eta.time_derivative.assign(g.horizontal_nodes(), 0.0);
        for (std::size_t i = 0; i < eta.time_derivative.size(); ++i)
            eta.time_derivative[i] = 0.05 * eta.values[i];
        GeometryTensors t = compute_geometry(eta, g);
        GeometryIdentityReport r = verify_geometric_identities(t);
        worst34 = std::max({worst34, r.id3, r.id4});
        if (r.id3 > 1e-12 || r.id4 > 1e-12) pass = false;
    }
    double prev1 = 0.0, prev2 = 0.0, ratio1 = 0.0, ratio2 = 0.0;
    for (int level = 0; level < 2; ++level) {
        SlabGrid g = make_grid(16, 4, level == 0 ? 33 : 65);
        SurfaceFunction eta(g);
        for (int i1 = 0; i1 < g.N1; ++i1)
            for (int i2 = 0; i2 < g.N2; ++i2)
                eta.at(i1, i2) = 0.08 * std::sin(2.0 * M_PI * g.x1(i1));
        eta.time_derivative.assign(g.horizontal_nodes(), 0.0);
        for (int i1 = 0; i1 < g.N1; ++i1)
            for (int i2 = 0; i2 < g.N2; ++i2)
                eta.time_derivative[static_cast<std::size_t>(i1) * g.N2 + i2] =
                    0.03 * std::cos(4.0 * M_PI * g.x1(i1));
        GeometryIdentityReport r = verify_geometric_identities(compute_geometry(eta, g));
        if (level == 0) {
            prev1 = r.id1;
            prev2 = r.id2;
        } else {
            ratio1 = prev1 / r.id1;
            ratio2 = prev2 / r.id2;
        }
    }
    if (!(ratio1 > 3.0 && ratio1 < 5.0 && ratio2 > 3.0 && ratio2 < 5.0)) pass = false;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "id3/id4 <= %.1e, id1 ratio %.2f, id2 ratio %.2f", worst34,
                  ratio1, ratio2);
    report(6, "geometric identities", pass, seconds_since(t0), 10.0, buf);
}

void c7_sharp_rigid_decay() {
    auto t0 = std::chrono::steady_clock::now();
    SlabGrid g = make_grid(4, 4, 257);
    BoundaryCoefficients bc = bc_of(kInf, kInf, 1.0, 1.0, 0.0);
    const double mu = M_PI * M_PI;
    Field3 w0(g);
    for (int i1 = 0; i1 < g.N1; ++i1)
        for (int i2 = 0; i2 < g.N2; ++i2)
            for (int k = 0; k < g.Nz; ++k)
                w0.at(i1, i2, k) = std::sin(M_PI * (g.x3(k) + 1.0));
    Trajectory tr = run_rigid(g, bc, w0, VelocityFamily::zero, {}, 1.5e-3, 2000, 10);
    RateFit fit = fit_decay_rate(tr.series);
    const double rate_err = std::abs(fit.rate - mu) / mu;
    std::vector<double> env = envelope_rigid(tr.series.norm[0], mu, 0.0, {}, tr.series.t);
    EnvelopeCheck chk = check_envelope(tr.series, env);
    double worst_gap = 0.0;
    for (std::size_t i = 0; i < env.size(); ++i)
        worst_gap = std::max(worst_gap, (env[i] - tr.series.norm[i]) / env[i]);
    const bool pass = rate_err < 5e-3 && chk.pass && worst_gap < 0.01;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "rate err %.2e, envelope pass %d, tightness %.2e",
                  rate_err, chk.pass ? 1 : 0, worst_gap);
    report(7, "sharp rigid decay (Dirichlet eigenmode)", pass, seconds_since(t0), 30.0, buf);
}

void c8_forced_rigid_decay() {
    auto t0 = std::chrono::steady_clock::now();
    SlabGrid g = make_grid(4, 4, 257);
    BoundaryCoefficients bc = bc_of(kInf, kInf, 1.0, 1.0, 1.0); // grad_eq = 1
    const double mu = M_PI * M_PI;
    const double grad = equilibrium_gradient(bc);
    Field3 w0(g);
    for (int i1 = 0; i1 < g.N1; ++i1)
        for (int i2 = 0; i2 < g.N2; ++i2)
            for (int k = 0; k < g.Nz; ++k)
                w0.at(i1, i2, k) = std::sin(M_PI * (g.x3(k) + 1.0));
    bool pass = true;
    std::string detail;
    {
        VelocityParams vp;
        vp.amplitude = 0.5;
        vp.decay_rate = 2.0;
        Trajectory tr = run_rigid(g, bc, w0, VelocityFamily::shear, vp, 1.5e-3, 2000, 10);
        std::vector<double> env =
            envelope_rigid(tr.series.norm[0], mu, grad, tr.series.forcing, tr.series.t);
        EnvelopeCheck chk = check_envelope(tr.series, env);
        RateFit fit = fit_decay_rate(tr.series);
        const double floor = std::min(mu, vp.decay_rate);
        if (!(chk.pass && fit.rate >= floor * 0.99)) pass = false;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "a!=mu margin %.2e", chk.margin);
        detail += buf;
    }
    {
        VelocityParams vp;
        vp.amplitude = 0.5;
        vp.decay_rate = mu;
        Trajectory tr = run_rigid(g, bc, w0, VelocityFamily::shear, vp, 1.5e-3, 2000, 10);
        std::vector<double> env =
            envelope_rigid(tr.series.norm[0], mu, grad, tr.series.forcing, tr.series.t);
        EnvelopeCheck chk = check_envelope(tr.series, env);
        RateFit fit = fit_decay_rate(tr.series, 0.3);
        const double rate_err = std::abs(fit.rate - mu) / mu;
        // The envelope itself exhibits the (1+t)-modulated profile.
        const std::size_t mid = env.size() / 2;
        const double expect =
            std::exp(-mu * tr.series.t[mid]) *
            (tr.series.norm[0] + grad * tr.series.forcing[0] * tr.series.t[mid]);
        const double env_err = std::abs(env[mid] - expect) / expect;
        if (!(chk.pass && rate_err < 0.05 && env_err < 1e-3)) pass = false;
        char buf[64];
        std::snprintf(buf, sizeof(buf), ", a=mu rate err %.2e", rate_err);
        detail += buf;
    }
    report(8, "forced rigid decay envelopes", pass, seconds_since(t0), 60.0, detail);
}

void c9_mean_conservation() {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    double rigid_drift = 0.0, moving_drift = 0.0;
    {
        SlabGrid g = make_grid(16, 4, 17);
        BoundaryCoefficients bc = bc_of(0.0, 0.0, 0.05);
        Field3 w0(g);
        for (int i1 = 0; i1 < g.N1; ++i1)
            for (int i2 = 0; i2 < g.N2; ++i2)
                for (int k = 0; k < g.Nz; ++k)
                    w0.at(i1, i2, k) = 0.7 + std::sin(2.0 * M_PI * g.x1(i1)) *
                                                 std::cos(M_PI * (g.x3(k) + 1.0));
        VelocityParams vp;
        vp.amplitude = 0.5;
        RigidStepper stepper(g, bc, 2e-3);
        ScalarState st = make_scalar_state(g, bc, w0);
        const double mean0 = conserved_mean_rigid(st);
        for (int i = 0; i < 1000; ++i) {
            const double t = i * 2e-3;
            VelocitySample u = make_velocity_rigid(VelocityFamily::cellular, vp, t, g);
            if (i == 0) {
                VelocitySample un =
                    make_velocity_rigid(VelocityFamily::cellular, vp, t + 2e-3, g);
                st = stepper.step(st, u, &un);
            } else {
                st = stepper.step(st, u);
            }
        }
        rigid_drift = std::abs(conserved_mean_rigid(st) - mean0) / std::abs(mean0);
        if (rigid_drift >= 1e-7) pass = false;
    }
    {
        SlabGrid g = make_grid(16, 4, 17, 2.0 * M_PI);
        BoundaryCoefficients bc = bc_of(0.0, 0.0, 0.1);
        ManufacturedFlowParams p;
        p.amplitude = 0.08;
        p.decay_rate = 0.5;
        p.envelope_c = 1.0;
        ManufacturedFlow flow(p, g);
        Field3 w0(g);
        for (int i1 = 0; i1 < g.N1; ++i1)
            for (int i2 = 0; i2 < g.N2; ++i2)
                for (int k = 0; k < g.Nz; ++k)
                    w0.at(i1, i2, k) = 0.5 + std::cos(g.x1(i1)) *
                                                 std::cos(M_PI * (g.x3(k) + 1.0));
        SurfaceFunction eta(g);
        for (int i1 = 0; i1 < g.N1; ++i1)
            for (int i2 = 0; i2 < g.N2; ++i2) eta.at(i1, i2) = 0.05 * std::cos(g.x1(i1));
        MovingState ms = make_moving_state(g, bc, w0, eta, &flow, false);
        const double theta_avg = weighted_average(ms);
        const double jvol = integral_volume(ms.geometry.J);
        MovingStepper stepper(g, bc, 2e-3, false);
        for (int i = 0; i < 1000; ++i) ms = stepper.step(ms, flow).state;
        moving_drift = std::abs(weighted_mean(ms, theta_avg)) / jvol;
        if (moving_drift >= 1e-7) pass = false;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "rigid drift %.2e, moving J-weighted drift %.2e",
                  rigid_drift, moving_drift);
    report(9, "mean conservation over 1000 steps", pass, seconds_since(t0), 60.0, buf);
}

void c10_moving_decay_floors() {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    double fitted = 0.0, floor = 0.0, margin = 0.0;
    // Frozen small-eta geometry, u = 0, beta = (inf, inf): decay2 rate floor.
    {
        SlabGrid g = make_grid(16, 4, 33);
        BoundaryCoefficients bc = bc_of(kInf, kInf, 1.0);
        ManufacturedFlowParams p;
        ManufacturedFlow flow(p, g);
        SurfaceFunction eta(g);
        for (int i1 = 0; i1 < g.N1; ++i1)
            for (int i2 = 0; i2 < g.N2; ++i2)
                eta.at(i1, i2) = 0.03 * std::cos(2.0 * M_PI * g.x1(i1));
        EigenResult er = principal_eigenvalue(bc, g.Nz);
        Field3 w0(g);
        for (int i1 = 0; i1 < g.N1; ++i1)
            for (int i2 = 0; i2 < g.N2; ++i2)
                for (int k = 0; k < g.Nz; ++k) w0.at(i1, i2, k) = er.zeta[k];
        MovingState ms = make_moving_state(g, bc, w0, eta, &flow, true);
        floor = er.mu / (ms.bounds.c0 * ms.bounds.c0);
        MovingStepper stepper(g, bc, 2e-3, true);
        DecaySeries series;
        auto jnorm = [&](const MovingState& st) {
            Field3 jw2(g);
            for (std::size_t i = 0; i < jw2.size(); ++i)
                jw2.data()[i] = st.geometry.J.data()[i] * st.scalar.w.data()[i] *
                                st.scalar.w.data()[i];
            return std::sqrt(integral_volume(jw2));
        };
        series.t.push_back(0.0);
        series.norm.push_back(jnorm(ms));
        for (int i = 0; i < 500; ++i) {
            ms = stepper.step(ms, flow).state;
            series.t.push_back(ms.time());
            series.norm.push_back(jnorm(ms));
        }
        RateFit fit = fit_decay_rate(series);
        fitted = fit.rate;
        if (fitted < floor) pass = false;
    }
    // Moving Neumann run against the decay0 envelope at rate mu0/(c0 c1).
    {
        SlabGrid g = make_grid(16, 4, 17, 2.0 * M_PI);
        BoundaryCoefficients bc = bc_of(0.0, 0.0, 0.2);
        ManufacturedFlowParams p;
        p.amplitude = 0.08;
        p.decay_rate = 0.5;
        p.envelope_c = 1.0;
        ManufacturedFlow flow(p, g);
        Field3 w0(g);
        for (int i1 = 0; i1 < g.N1; ++i1)
            for (int i2 = 0; i2 < g.N2; ++i2)
                for (int k = 0; k < g.Nz; ++k)
                    w0.at(i1, i2, k) = std::cos(g.x1(i1)) * std::cos(M_PI * (g.x3(k) + 1.0)) +
                                       0.5 * std::cos(M_PI * (g.x3(k) + 1.0));
        SurfaceFunction eta(g);
        for (int i1 = 0; i1 < g.N1; ++i1)
            for (int i2 = 0; i2 < g.N2; ++i2) eta.at(i1, i2) = 0.04 * std::cos(g.x1(i1));
        MovingState ms = make_moving_state(g, bc, w0, eta, &flow, false);
        const double theta_avg = weighted_average(ms);
        MovingStepper stepper(g, bc, 2e-3, false);
        auto devnorm = [&](const MovingState& st) {
            Field3 jw2(g);
            for (std::size_t i = 0; i < jw2.size(); ++i) {
                const double dev = st.scalar.w.data()[i] - theta_avg;
                jw2.data()[i] = st.geometry.J.data()[i] * dev * dev;
            }
            return std::sqrt(integral_volume(jw2));
        };
        DecaySeries series;
        series.t.push_back(0.0);
        series.norm.push_back(devnorm(ms));
        double c0 = ms.bounds.c0, c1 = ms.bounds.c1;
        for (int i = 0; i < 1000; ++i) {
            MovingStepResult res = stepper.step(ms, flow);
            ms = std::move(res.state);
            c0 = std::max(c0, ms.bounds.c0);
            c1 = std::max(c1, ms.bounds.c1);
            if (i % 5 == 4) {
                series.t.push_back(ms.time());
                series.norm.push_back(devnorm(ms));
            }
        }
        MovingEnvelopeInputs in;
        in.initial_norm = series.norm[0];
        in.c0 = c0;
        in.c1 = c1;
        in.mu_bar0 = neumann_gap(g.domain, bc.kappa).value;
        std::vector<double> env =
            envelope_moving(MovingEnvelopeKind::neumann_periodic, in, series.t);
        EnvelopeCheck chk = check_envelope(series, env);
        margin = chk.margin;
        if (!chk.pass) pass = false;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "frozen fitted %.4f >= floor %.4f; decay0 margin %.2e",
                  fitted, floor, margin);
    report(10, "moving decay floors", pass, seconds_since(t0), 240.0, buf);
}

void c11_non_coercivity() {
    auto t0 = std::chrono::steady_clock::now();
    const double kappa = 0.05;
    std::vector<double> rates;
    for (double L : {1.0, 2.0, 4.0, 8.0}) {
        SlabGrid g = make_grid(static_cast<int>(16 * L), 4, 9, L, 1.0, 1.0);
        g.domain.horizontal_kind = HorizontalKind::truncated_infinite;
        BoundaryCoefficients bc = bc_of(0.0, 0.0, kappa);
        Field3 w0(g);
        std::vector<double> bump(g.N1);
        double mean = 0.0;
        for (int i1 = 0; i1 < g.N1; ++i1) {
            const double r = std::sin(M_PI * (g.x1(i1) - 0.5 * L) / L) * L / M_PI;
            bump[i1] = std::exp(-r * r / (2.0 * 0.15 * 0.15));
            mean += bump[i1];
        }
        mean /= g.N1;
        for (int i1 = 0; i1 < g.N1; ++i1)
            for (int i2 = 0; i2 < g.N2; ++i2)
                for (int k = 0; k < g.Nz; ++k) w0.at(i1, i2, k) = bump[i1] - mean;
        const double expected_rate = 4.0 * M_PI * M_PI * kappa / (L * L);
        const double T = 3.0 / expected_rate;
        const int steps = 300;
        Trajectory tr = run_rigid(g, bc, w0, VelocityFamily::zero, {}, T / steps, steps, 3);
        RateFit fit = fit_decay_rate(tr.series);
        rates.push_back(fit.rate);
    }
    bool pass = true;
    for (std::size_t i = 1; i < rates.size(); ++i)
        if (!(rates[i] < rates[i - 1])) pass = false;
    if (!(rates.back() < 0.1 * rates.front())) pass = false;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "fitted rates %.3f, %.3f, %.3f, %.4f (monotone toward 0)",
                  rates[0], rates[1], rates[2], rates[3]);
    report(11, "non-coercivity under box growth", pass, seconds_since(t0), 120.0, buf);
}

void c12_reduction_equivalence() {
    auto t0 = std::chrono::steady_clock::now();
    SlabGrid g = make_grid(8, 8, 9);
    BoundaryCoefficients bc = bc_of(1.0, 2.0, 0.2, 1.0, 1.5);
    const double dt = 2e-3;
    const int steps = 100;
    Field3 w0(g);
    for (int i1 = 0; i1 < g.N1; ++i1)
        for (int i2 = 0; i2 < g.N2; ++i2)
            for (int k = 0; k < g.Nz; ++k)
                w0.at(i1, i2, k) = std::cos(2.0 * M_PI * g.x1(i1)) *
                                       std::sin(M_PI * (g.x3(k) + 1.0)) +
                                   0.4 * std::sin(2.0 * M_PI * g.x2(i2)) * g.x3(k);
    VelocityParams vp;
    vp.amplitude = 0.5;
    vp.decay_rate = 0.3;
    Trajectory tr = run_rigid(g, bc, w0, VelocityFamily::cellular, vp, dt, steps, steps);
    RigidFamilyFlow flow(VelocityFamily::cellular, vp, g);
    MovingState ms = make_moving_state(g, bc, w0, SurfaceFunction(g, 0.0), &flow, true);
    MovingStepper stepper(g, bc, dt, true);
    for (int i = 0; i < steps; ++i) ms = stepper.step(ms, flow).state;
    double diff = 0.0;
    for (std::size_t i = 0; i < w0.size(); ++i)
        diff = std::max(diff, std::abs(ms.scalar.w.data()[i] - tr.final_state.w.data()[i]));
    const bool pass = diff <= 1e-12;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max deviation %.2e over %d steps", diff, steps);
    report(12, "moving/rigid reduction equivalence", pass, seconds_since(t0), 10.0, buf);
}

} // namespace

int main() {
    std::printf("slablab acceptance suite\n");
    c1_eigen_closed_forms();
    c2_transcendental_consistency();
    c3_neumann_gap();
    c4_rigid_ledger_refinement();
    c5_moving_ledger_refinement();
    c6_geometric_identities();
    c7_sharp_rigid_decay();
    c8_forced_rigid_decay();
    c9_mean_conservation();
    c10_moving_decay_floors();
    c11_non_coercivity();
    c12_reduction_equivalence();
    if (g_failures == 0)
        std::printf("all 12 criteria passed\n");
    else
        std::printf("%d criterion(s) FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
