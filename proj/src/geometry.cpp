#include "slab/geometry.hpp"

#include <cmath>
#include <limits>

namespace slab {

namespace {

struct SurfaceModes {
    std::vector<cplx> modes; // Nyquist lines zeroed
    SpectralOps ops;

    SurfaceModes(const SurfaceFunction& f, const SlabGrid& grid) : ops(grid) {
        if (!f.grid.same_horizontal(grid))
            throw ConfigError("surface function and grid have mismatched horizontal layout");
        modes = ops.surface_to_modes(f.values);
        for (int i1 = 0; i1 < grid.N1; ++i1)
            for (int i2 = 0; i2 < grid.N2; ++i2)
                if (Fourier2D::is_nyquist(i1, grid.N1) || Fourier2D::is_nyquist(i2, grid.N2))
                    modes[static_cast<std::size_t>(i1) * grid.N2 + i2] = 0.0;
    }
};

// Evaluates sum_n m(n) g(n) e^{|k(n)| x3} e^{2 pi i n.x'} on every grid node,
// where g is a per-mode complex factor (1, i k1, |k|, ...).
template <typename ModeFactor>
Field3 evaluate_extension(const SurfaceModes& sm, const SlabGrid& grid, ModeFactor factor) {
    const SpectralOps& ops = sm.ops;
    SpectralField3 s(grid);
    for (int i1 = 0; i1 < grid.N1; ++i1) {
        for (int i2 = 0; i2 < grid.N2; ++i2) {
            const cplx m = sm.modes[static_cast<std::size_t>(i1) * grid.N2 + i2];
            if (m == cplx(0.0)) continue;
            const double kmag = std::sqrt(ops.k_squared(i1, i2));
            const cplx c = m * factor(i1, i2, kmag);
            for (int k = 0; k < grid.Nz; ++k)
                s.at(i1, i2, k) = c * std::exp(kmag * grid.x3(k));
        }
    }
    return ops.to_physical(s);
}

} // namespace

Field3 poisson_extend(const SurfaceFunction& f, const SlabGrid& grid) {
    SurfaceModes sm(f, grid);
    return evaluate_extension(sm, grid, [](int, int, double) { return cplx(1.0); });
}

GeometryTensors compute_geometry(const SurfaceFunction& eta, const SlabGrid& grid) {
    SurfaceModes sm(eta, grid);
    const SpectralOps& ops = sm.ops;

    GeometryTensors g;
    g.grid = grid;
    g.time = eta.time;
    g.eta_bar = evaluate_extension(sm, grid, [](int, int, double) { return cplx(1.0); });
    Field3 d1 = evaluate_extension(sm, grid,
                                   [&](int i1, int, double) { return cplx(0.0, ops.k1(i1)); });
    Field3 d2 = evaluate_extension(sm, grid,
                                   [&](int, int i2, double) { return cplx(0.0, ops.k2(i2)); });
    Field3 d3 = evaluate_extension(sm, grid, [](int, int, double kmag) { return cplx(kmag); });

    g.A = Field3(grid);
    g.B = Field3(grid);
    g.J = Field3(grid);
    g.K = Field3(grid);
    const double d = grid.domain.d;
    for (int i1 = 0; i1 < grid.N1; ++i1) {
        for (int i2 = 0; i2 < grid.N2; ++i2) {
            for (int k = 0; k < grid.Nz; ++k) {
                const double dt = grid.dtilde(k);
                g.A.at(i1, i2, k) = d1.at(i1, i2, k) * dt;
                g.B.at(i1, i2, k) = d2.at(i1, i2, k) * dt;
                const double J = 1.0 + g.eta_bar.at(i1, i2, k) / d + d3.at(i1, i2, k) * dt;
                if (!(J > 0.0))
                    throw NumericalError("flattening map is not a diffeomorphism: J <= 0 at a node");
                g.J.at(i1, i2, k) = J;
                g.K.at(i1, i2, k) = 1.0 / J;
            }
        }
    }

    g.surf_eta = eta.values;
    auto de1 = ops.surface_dx1(eta.values);
    auto de2 = ops.surface_dx2(eta.values);
    const std::size_t hn = grid.horizontal_nodes();
    g.N_1.resize(hn);
    g.N_2.resize(hn);
    g.N_mag.resize(hn);
    for (std::size_t i = 0; i < hn; ++i) {
        g.N_1[i] = -de1[i];
        g.N_2[i] = -de2[i];
        g.N_mag[i] = std::sqrt(1.0 + de1[i] * de1[i] + de2[i] * de2[i]);
    }

    if (eta.has_time_derivative()) {
        g.has_surface_velocity = true;
        g.surf_deta_dt = eta.time_derivative;
        SurfaceFunction dte(grid);
        dte.values = eta.time_derivative;
        SurfaceModes smd(dte, grid);
        g.deta_bar_dt = evaluate_extension(smd, grid, [](int, int, double) { return cplx(1.0); });
        Field3 d3t = evaluate_extension(smd, grid, [](int, int, double kmag) { return cplx(kmag); });
        g.dJ_dt = Field3(grid);
        for (int i1 = 0; i1 < grid.N1; ++i1)
            for (int i2 = 0; i2 < grid.N2; ++i2)
                for (int k = 0; k < grid.Nz; ++k)
                    g.dJ_dt.at(i1, i2, k) = g.deta_bar_dt.at(i1, i2, k) / d +
                                            d3t.at(i1, i2, k) * grid.dtilde(k);
    }
    return g;
}

GeometryIdentityReport verify_geometric_identities(const GeometryTensors& g) {
    const SlabGrid& grid = g.grid;
    SpectralOps ops(grid);
    GeometryIdentityReport r;

    // id1: d1 J = d3 A and d2 J = d3 B; the remaining row is d3(JK) = 0.
    Field3 J1 = ops.dx1(g.J);
    Field3 J2 = ops.dx2(g.J);
    Field3 A3 = d_dz(g.A);
    Field3 B3 = d_dz(g.B);
    for (std::size_t i = 0; i < g.J.size(); ++i) {
        r.id1 = std::max(r.id1, std::abs(J1.data()[i] - A3.data()[i]));
        r.id1 = std::max(r.id1, std::abs(J2.data()[i] - B3.data()[i]));
    }

    // id2: dt_J = d3(dt_eta_bar dtilde), discrete vertical derivative.
    if (g.has_surface_velocity) {
        Field3 f(grid);
        for (int i1 = 0; i1 < grid.N1; ++i1)
            for (int i2 = 0; i2 < grid.N2; ++i2)
                for (int k = 0; k < grid.Nz; ++k)
                    f.at(i1, i2, k) = g.deta_bar_dt.at(i1, i2, k) * grid.dtilde(k);
        Field3 f3 = d_dz(f);
        for (std::size_t i = 0; i < f3.size(); ++i)
            r.id2 = std::max(r.id2, std::abs(g.dJ_dt.data()[i] - f3.data()[i]));
    } else {
        r.id2 = std::numeric_limits<double>::quiet_NaN();
    }

    // id3 on Sigma_+: J Acal_.3 = (-A, -B, 1) must equal N = (-d1 eta, -d2 eta, 1).
    const int top = grid.Nz - 1;
    for (int i1 = 0; i1 < grid.N1; ++i1) {
        for (int i2 = 0; i2 < grid.N2; ++i2) {
            const std::size_t h = static_cast<std::size_t>(i1) * grid.N2 + i2;
            r.id3 = std::max(r.id3, std::abs(-g.A.at(i1, i2, top) - g.N_1[h]));
            r.id3 = std::max(r.id3, std::abs(-g.B.at(i1, i2, top) - g.N_2[h]));
            const double jk = g.J.at(i1, i2, top) * g.K.at(i1, i2, top);
            r.id3 = std::max(r.id3, std::abs(jk - 1.0));
        }
    }

    // id4 on Sigma_-: J Acal_.3 = e3.
    for (int i1 = 0; i1 < grid.N1; ++i1) {
        for (int i2 = 0; i2 < grid.N2; ++i2) {
            r.id4 = std::max(r.id4, std::abs(g.A.at(i1, i2, 0)));
            r.id4 = std::max(r.id4, std::abs(g.B.at(i1, i2, 0)));
            const double jk = g.J.at(i1, i2, 0) * g.K.at(i1, i2, 0);
            r.id4 = std::max(r.id4, std::abs(jk - 1.0));
        }
    }
    return r;
}

void jata_eigen_range(double A, double B, double J, double& lmin, double& lmax) {
    // J Acal^T Acal = [[J,0,-A],[0,J,-B],[-A,-B,(1+A^2+B^2)/J]].
    // Vectors horizontal and orthogonal to (A,B) give eigenvalue J; the
    // remaining 2x2 block [[J,-r],[-r,(1+r^2)/J]], r^2 = A^2+B^2, has unit
    // determinant, so its eigenvalues are a reciprocal pair.
    const double r2 = A * A + B * B;
    const double other = (1.0 + r2) / J;
    const double half_tr = 0.5 * (J + other);
    const double disc = std::sqrt(std::max(0.0, half_tr * half_tr - 1.0));
    const double ep = half_tr + disc;
    const double em = (ep > 0.0) ? 1.0 / ep : half_tr - disc;
    lmin = std::min(J, em);
    lmax = std::max(J, ep);
}

GeometryBounds geometry_bounds(const GeometryTensors& g) {
    GeometryBounds b;
    const SlabGrid& grid = g.grid;
    for (std::size_t i = 0; i < g.J.size(); ++i) {
        const double J = g.J.data()[i];
        const double A = g.A.data()[i];
        const double B = g.B.data()[i];
        b.c0 = std::max(b.c0, std::max(J, 1.0 / J));
        double lmin, lmax;
        jata_eigen_range(A, B, J, lmin, lmax);
        b.c1 = std::max(b.c1, std::max(lmax, 1.0 / lmin));
        b.sup_J_minus_1 = std::max(b.sup_J_minus_1, std::abs(J - 1.0));
        b.sup_A = std::max(b.sup_A, std::abs(A));
        b.sup_B = std::max(b.sup_B, std::abs(B));
        b.sup_K_minus_1 = std::max(b.sup_K_minus_1, std::abs(g.K.data()[i] - 1.0));
    }
    for (std::size_t i = 0; i < grid.horizontal_nodes(); ++i) {
        const double dn = std::hypot(g.N_1[i], g.N_2[i]);
        b.sup_N_minus_e3 = std::max(b.sup_N_minus_e3, dn);
    }
    b.smallness_ok = b.sup_J_minus_1 <= 0.5 && b.sup_A <= 0.5 && b.sup_B <= 0.5 &&
                     b.sup_N_minus_e3 <= 0.5 && b.sup_K_minus_1 <= 0.5;
    return b;
}

} // namespace slab
