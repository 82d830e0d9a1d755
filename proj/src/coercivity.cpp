#include "slab/coercivity.hpp"

#include "slab/tridiag.hpp"

#include <cmath>

namespace slab {

namespace {

void check_admissible(const Field3& phi, const BoundaryCoefficients& bc) {
    double amax = max_abs(phi);
    const double tol = 1e-13 * (1.0 + amax);
    const SlabGrid& g = phi.grid();
    if (bc.top_is_dirichlet()) {
        for (int i1 = 0; i1 < g.N1; ++i1)
            for (int i2 = 0; i2 < g.N2; ++i2)
                if (std::abs(phi.at(i1, i2, g.Nz - 1)) > tol)
                    throw ConfigError("phi has a nonzero top trace but beta_plus = inf");
    }
    if (bc.bottom_is_dirichlet()) {
        for (int i1 = 0; i1 < g.N1; ++i1)
            for (int i2 = 0; i2 < g.N2; ++i2)
                if (std::abs(phi.at(i1, i2, 0)) > tol)
                    throw ConfigError("phi has a nonzero bottom trace but beta_minus = inf");
    }
}

double wall_quadratic(const Field3& phi, bool top, const std::vector<double>* weight) {
    const SlabGrid& g = phi.grid();
    const int k = top ? g.Nz - 1 : 0;
    double s = 0.0;
    for (int i1 = 0; i1 < g.N1; ++i1) {
        for (int i2 = 0; i2 < g.N2; ++i2) {
            const double v = phi.at(i1, i2, k);
            const double w = weight ? (*weight)[static_cast<std::size_t>(i1) * g.N2 + i2] : 1.0;
            s += v * v * w;
        }
    }
    return s * g.domain.L1 * g.domain.L2 / (static_cast<double>(g.N1) * g.N2);
}

DissipationReport assemble(double volume, double top, double bottom, double norm2,
                           bool jweight) {
    DissipationReport r;
    r.volume_term = volume;
    r.top_term = top;
    r.bottom_term = bottom;
    r.value = volume + top + bottom;
    r.weighted_norm2 = norm2;
    r.ratio = norm2 > 0.0 ? r.value / norm2 : 0.0;
    r.jacobian_weighted = jweight;
    return r;
}

} // namespace

DissipationReport dissipation_rigid(const Field3& phi, const BoundaryCoefficients& bc,
                                    const SlabGrid& grid) {
    if (!phi.grid().same_layout(grid)) throw ConfigError("phi grid mismatch");
    bc.validate();
    check_admissible(phi, bc);
    SpectralOps ops(grid);
    Field3 g1 = ops.dx1(phi), g2 = ops.dx2(phi), g3 = d_dz(phi);
    Field3 sq(grid);
    for (std::size_t i = 0; i < sq.size(); ++i) {
        const double a = g1.data()[i], b = g2.data()[i], c = g3.data()[i];
        sq.data()[i] = a * a + b * b + c * c;
    }
    const double volume = bc.kappa * integral_volume(sq);
    const double top = bc.top_is_dirichlet() ? 0.0 : bc.beta_plus * wall_quadratic(phi, true, nullptr);
    const double bottom =
        bc.bottom_is_dirichlet() ? 0.0 : bc.beta_minus * wall_quadratic(phi, false, nullptr);
    double n = l2_norm_volume(phi);
    return assemble(volume, top, bottom, n * n, false);
}

DissipationReport dissipation_vertical(const Field3& phi, const BoundaryCoefficients& bc,
                                       const SlabGrid& grid) {
    if (!phi.grid().same_layout(grid)) throw ConfigError("phi grid mismatch");
    bc.validate();
    check_admissible(phi, bc);
    Field3 g3 = d_dz(phi);
    Field3 sq(grid);
    for (std::size_t i = 0; i < sq.size(); ++i) sq.data()[i] = g3.data()[i] * g3.data()[i];
    const double volume = bc.kappa * integral_volume(sq);
    const double top = bc.top_is_dirichlet() ? 0.0 : bc.beta_plus * wall_quadratic(phi, true, nullptr);
    const double bottom =
        bc.bottom_is_dirichlet() ? 0.0 : bc.beta_minus * wall_quadratic(phi, false, nullptr);
    double n = l2_norm_volume(phi);
    return assemble(volume, top, bottom, n * n, false);
}

DissipationReport dissipation_moving(const Field3& phi, const BoundaryCoefficients& bc,
                                     const GeometryTensors& g, const SlabGrid& grid) {
    if (!phi.grid().same_layout(grid) || !g.grid.same_layout(grid))
        throw ConfigError("phi/geometry grid mismatch");
    bc.validate();
    check_admissible(phi, bc);
    SpectralOps ops(grid);
    Field3 g1 = ops.dx1(phi), g2 = ops.dx2(phi), g3 = d_dz(phi);
    Field3 sq(grid), jphi2(grid);
    for (std::size_t i = 0; i < sq.size(); ++i) {
        const double K = g.K.data()[i];
        const double dz = g3.data()[i];
        const double a = g1.data()[i] - g.A.data()[i] * K * dz;
        const double b = g2.data()[i] - g.B.data()[i] * K * dz;
        const double c = K * dz;
        sq.data()[i] = g.J.data()[i] * (a * a + b * b + c * c);
        jphi2.data()[i] = g.J.data()[i] * phi.data()[i] * phi.data()[i];
    }
    const double volume = bc.kappa * integral_volume(sq);
    const double top =
        bc.top_is_dirichlet() ? 0.0 : bc.beta_plus * wall_quadratic(phi, true, &g.N_mag);
    std::vector<double> kbot(grid.horizontal_nodes());
    for (int i1 = 0; i1 < grid.N1; ++i1)
        for (int i2 = 0; i2 < grid.N2; ++i2)
            kbot[static_cast<std::size_t>(i1) * grid.N2 + i2] = g.K.at(i1, i2, 0);
    const double bottom =
        bc.bottom_is_dirichlet() ? 0.0 : bc.beta_minus * wall_quadratic(phi, false, &kbot);
    return assemble(volume, top, bottom, integral_volume(jphi2), true);
}

NeumannGap neumann_gap(const SlabDomain& domain, double kappa) {
    domain.validate();
    if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
    NeumannGap r;
    const double d2 = 1.0 / (domain.d * domain.d);
    const double l1 = 4.0 / (domain.L1 * domain.L1);
    const double l2 = 4.0 / (domain.L2 * domain.L2);
    r.value = kappa * M_PI * M_PI * std::min({d2, l1, l2});
    r.proxy_warning = domain.horizontal_kind == HorizontalKind::truncated_infinite;
    return r;
}

namespace {

// Applies the discrete Neumann Laplacian (times -kappa): spectral
// horizontally, finite-volume vertical rows with zero-flux walls.
Field3 apply_neumann_operator(const Field3& v, double kappa, const SpectralOps& ops) {
    const SlabGrid& g = v.grid();
    const double h = g.hz();
    SpectralField3 s = ops.to_modes(v);
    for (int i1 = 0; i1 < g.N1; ++i1) {
        for (int i2 = 0; i2 < g.N2; ++i2) {
            const double k2 = ops.k_squared(i1, i2);
            std::vector<cplx> col(g.Nz), lap(g.Nz);
            for (int k = 0; k < g.Nz; ++k) col[k] = s.at(i1, i2, k);
            lap[0] = 2.0 * (col[1] - col[0]) / (h * h);
            for (int k = 1; k < g.Nz - 1; ++k)
                lap[k] = (col[k - 1] - 2.0 * col[k] + col[k + 1]) / (h * h);
            lap[g.Nz - 1] = 2.0 * (col[g.Nz - 2] - col[g.Nz - 1]) / (h * h);
            for (int k = 0; k < g.Nz; ++k)
                s.at(i1, i2, k) = kappa * (k2 * col[k] - lap[k]);
        }
    }
    return ops.to_physical(s);
}

void deflate_constant(Field3& v) {
    const SlabGrid& g = v.grid();
    const double mean = integral_volume(v) / (g.domain.L1 * g.domain.L2 * g.domain.d);
    for (auto& x : v.data()) x -= mean;
}

} // namespace

double neumann_gap_discrete(const SlabGrid& grid, double kappa) {
    grid.validate();
    SpectralOps ops(grid);
    const double shift = 0.5 * neumann_gap(grid.domain, kappa).value;
    const double h = grid.hz();

    // Per-mode factorizations of (kappa(|k|^2 - D2) + shift).
    std::vector<TridiagLU> lus(grid.horizontal_nodes());
    for (int i1 = 0; i1 < grid.N1; ++i1) {
        for (int i2 = 0; i2 < grid.N2; ++i2) {
            const double k2 = ops.k_squared(i1, i2);
            std::vector<double> diag(grid.Nz), lower(grid.Nz - 1), upper(grid.Nz - 1);
            for (int k = 0; k < grid.Nz; ++k)
                diag[k] = kappa * (k2 + 2.0 / (h * h)) + shift;
            for (int k = 0; k < grid.Nz - 1; ++k) {
                lower[k] = -kappa / (h * h);
                upper[k] = -kappa / (h * h);
            }
            // FV wall rows couple to the single neighbor with weight 2/h^2.
            upper[0] = -2.0 * kappa / (h * h);
            lower[grid.Nz - 2] = -2.0 * kappa / (h * h);
            lus[static_cast<std::size_t>(i1) * grid.N2 + i2].factor(lower, diag, upper);
        }
    }

    Field3 v(grid);
    unsigned long long s = 0x853c49e6748fea9bULL;
    for (auto& x : v.data()) {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        x = (static_cast<double>(s % 100000ULL) / 100000.0) - 0.5;
    }
    deflate_constant(v);

    double lam = 0.0, lam_old = -1.0;
    for (int it = 0; it < 500 && std::abs(lam - lam_old) > 1e-13 * std::max(1.0, lam); ++it) {
        lam_old = lam;
        // Solve (A + shift) x = v per mode.
        SpectralField3 sm = ops.to_modes(v);
        std::vector<cplx> col(grid.Nz);
        for (int i1 = 0; i1 < grid.N1; ++i1) {
            for (int i2 = 0; i2 < grid.N2; ++i2) {
                for (int k = 0; k < grid.Nz; ++k) col[k] = sm.at(i1, i2, k);
                lus[static_cast<std::size_t>(i1) * grid.N2 + i2].solve(std::span<cplx>(col));
                for (int k = 0; k < grid.Nz; ++k) sm.at(i1, i2, k) = col[k];
            }
        }
        Field3 x = ops.to_physical(sm);
        deflate_constant(x);
        const double nrm = l2_norm_volume(x);
        for (auto& y : x.data()) y /= nrm;
        Field3 ax = apply_neumann_operator(x, kappa, ops);
        Field3 prod(grid);
        for (std::size_t i = 0; i < prod.size(); ++i)
            prod.data()[i] = x.data()[i] * ax.data()[i];
        const double n2 = l2_norm_volume(x);
        lam = integral_volume(prod) / (n2 * n2);
        v = x;
    }
    return lam;
}

CoercivityAudit coercivity_audit(const Field3& phi, const BoundaryCoefficients& bc,
                                 const GeometryTensors* g, const SlabGrid& grid,
                                 double rel_slack) {
    bc.validate();
    CoercivityAudit a;
    const bool neumann = bc.is_neumann();
    const double n = l2_norm_volume(phi);
    if (n == 0.0) throw ConfigError("coercivity_audit: phi must be nonzero");

    if (g == nullptr) {
        DissipationReport rep = dissipation_rigid(phi, bc, grid);
        a.ratio = rep.ratio;
        if (neumann) {
            a.audit_case = AuditCase::rigid_neumann;
            const double mean = integral_volume(phi);
            if (std::abs(mean) > 1e-10 * std::sqrt(grid.domain.L1 * grid.domain.L2 * grid.domain.d) * n)
                throw ConfigError("rigid Neumann audit requires a mean-zero phi");
            NeumannGap gap = neumann_gap(grid.domain, bc.kappa);
            a.floor_value = gap.value;
            a.proxy_warning = gap.proxy_warning;
        } else {
            a.audit_case = AuditCase::rigid_robin;
            a.floor_value = principal_eigenvalue(bc).mu;
        }
    } else {
        GeometryBounds b = geometry_bounds(*g);
        a.c0 = b.c0;
        a.c1 = b.c1;
        DissipationReport rep = dissipation_moving(phi, bc, *g, grid);
        a.ratio = rep.ratio;
        if (neumann) {
            a.audit_case = AuditCase::moving_neumann;
            Field3 jphi(grid);
            for (std::size_t i = 0; i < jphi.size(); ++i)
                jphi.data()[i] = g->J.data()[i] * phi.data()[i];
            const double jmean = integral_volume(jphi);
            if (std::abs(jmean) >
                1e-10 * std::sqrt(grid.domain.L1 * grid.domain.L2 * grid.domain.d) * n * b.c0)
                throw ConfigError("moving Neumann audit requires a J-weighted mean-zero phi");
            NeumannGap gap = neumann_gap(grid.domain, bc.kappa);
            a.floor_value = gap.value / (b.c0 * b.c1);
            a.proxy_warning = gap.proxy_warning;
        } else {
            a.audit_case = AuditCase::moving_robin;
            a.floor_value = principal_eigenvalue(bc).mu / (b.c0 * b.c0);
        }
    }
    a.pass = a.ratio >= a.floor_value * (1.0 - rel_slack) - 1e-12;
    return a;
}

} // namespace slab
