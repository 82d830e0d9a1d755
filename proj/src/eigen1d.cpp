#include "slab/eigen1d.hpp"

#include "slab/tridiag.hpp"

#include <algorithm>
#include <cmath>

namespace slab {

namespace {

// Effective coefficients after the large-beta switch.
struct EffectiveBeta {
    double bp, bm;
    bool top_inf, bot_inf;
};

EffectiveBeta effective(const BoundaryCoefficients& bc) {
    EffectiveBeta e{};
    e.top_inf = std::isinf(bc.beta_plus) || bc.beta_plus > kDirichletSwitch;
    e.bot_inf = std::isinf(bc.beta_minus) || bc.beta_minus > kDirichletSwitch;
    e.bp = e.top_inf ? kInf : bc.beta_plus;
    e.bm = e.bot_inf ? kInf : bc.beta_minus;
    return e;
}

// Phase form of the characteristic equation in x = d sqrt(mu/kappa):
//   x = atan(c_plus/x) + atan(c_minus/x),  c = beta d / kappa,
// with atan(inf/x) = pi/2 at a Dirichlet wall.  The left-minus-right
// function below is strictly increasing on (0, pi), so the principal root
// is the unique sign change.
double phase_gap(double x, double cp, double cm) {
    const double top = std::isinf(cp) ? M_PI / 2.0 : std::atan2(cp, x);
    const double bot = std::isinf(cm) ? M_PI / 2.0 : std::atan2(cm, x);
    return x - top - bot;
}

std::vector<double> reconstruct_zeta(double mu, const BoundaryCoefficients& bc,
                                     const EffectiveBeta& e, int nz) {
    std::vector<double> z(nz);
    const double d = bc.d;
    const double h = d / (nz - 1);
    if (mu == 0.0) {
        std::fill(z.begin(), z.end(), 1.0 / std::sqrt(d));
        return z;
    }
    const double omega = std::sqrt(mu / bc.kappa);
    // Bottom condition fixes the phase: zeta = cos(omega (x3 + d) + phi).
    double phi;
    if (e.bot_inf)
        phi = -M_PI / 2.0;
    else
        phi = -std::atan2(e.bm, bc.kappa * omega);
    for (int k = 0; k < nz; ++k) {
        const double x3 = -d + k * h;
        z[k] = std::cos(omega * (x3 + d) + phi);
    }
    if (e.bot_inf) z[0] = 0.0;
    if (e.top_inf) z[nz - 1] = 0.0;
    // Unit trapezoidal L2 norm.
    double mass = 0.5 * (z[0] * z[0] + z[nz - 1] * z[nz - 1]);
    for (int k = 1; k < nz - 1; ++k) mass += z[k] * z[k];
    mass *= h;
    const double scale = 1.0 / std::sqrt(mass);
    for (auto& v : z) v *= scale;
    return z;
}

} // namespace

EigenResult principal_eigenvalue(const BoundaryCoefficients& bc, int nz) {
    bc.validate();
    if (nz < 3) throw ConfigError("nz must be >= 3");
    const EffectiveBeta e = effective(bc);
    const double kappa = bc.kappa, d = bc.d;

    EigenResult res;
    res.d = d;

    // Closed forms for beta in {0, inf}^2.
    if (!e.top_inf && e.bp == 0.0 && !e.bot_inf && e.bm == 0.0) {
        res.mu = 0.0;
        res.characteristic_case = "closed_form_neumann";
        res.zeta = reconstruct_zeta(res.mu, bc, e, nz);
        return res;
    }
    if (e.top_inf && e.bot_inf) {
        res.mu = kappa * M_PI * M_PI / (d * d);
        res.characteristic_case = "closed_form_dirichlet_both";
        res.bracket_lo = res.bracket_hi = M_PI;
        res.zeta = reconstruct_zeta(res.mu, bc, e, nz);
        return res;
    }
    if ((e.top_inf && e.bm == 0.0) || (e.bot_inf && e.bp == 0.0)) {
        res.mu = kappa * M_PI * M_PI / (4.0 * d * d);
        res.characteristic_case = "closed_form_dirichlet_insulated";
        res.bracket_lo = res.bracket_hi = M_PI / 2.0;
        res.zeta = reconstruct_zeta(res.mu, bc, e, nz);
        return res;
    }

    // Transcendental case: scan (1e-8, pi) for the sign change of the
    // monotone phase function, then bisect to 1e-14 relative tolerance.
    const double cp = e.top_inf ? kInf : e.bp * d / kappa;
    const double cm = e.bot_inf ? kInf : e.bm * d / kappa;
    const int scan_points = 10000;
    const double x_lo_limit = 1e-8, x_hi_limit = M_PI;
    double lo = 0.0, hi = 0.0;
    double prev_x = x_lo_limit, prev_f = phase_gap(prev_x, cp, cm);
    bool bracketed = prev_f >= 0.0; // root at/below the scan floor (huge beta)
    if (bracketed) {
        lo = hi = prev_x;
    } else {
        for (int i = 1; i <= scan_points; ++i) {
            const double x = x_lo_limit + (x_hi_limit - x_lo_limit) * i / scan_points;
            const double f = phase_gap(x, cp, cm);
            if (f >= 0.0) {
                lo = prev_x;
                hi = x;
                bracketed = true;
                break;
            }
            prev_x = x;
            prev_f = f;
        }
    }
    if (!bracketed)
        throw NumericalError("eigenvalue root finder failed to bracket on (0, pi); "
                             "beta=(" + std::to_string(bc.beta_plus) + "," +
                             std::to_string(bc.beta_minus) + ")");
    res.bracket_lo = lo;
    res.bracket_hi = hi;
    while (hi - lo > 1e-14 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (phase_gap(mid, cp, cm) >= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    const double x = 0.5 * (lo + hi);
    res.mu = kappa * x * x / (d * d);
    res.characteristic_case = "transcendental_phase";
    res.zeta = reconstruct_zeta(res.mu, bc, e, nz);
    return res;
}

double eigenvalue_lower_bound(const BoundaryCoefficients& bc) {
    bc.validate();
    const EffectiveBeta e = effective(bc);
    const double kappa = bc.kappa, d = bc.d;
    const double quarter = kappa * M_PI * M_PI / (4.0 * d * d);
    if (e.top_inf && e.bot_inf) return kappa * M_PI * M_PI / (d * d);
    if (e.top_inf || e.bot_inf) return quarter;
    if (e.bp == 0.0 && e.bm == 0.0) return 0.0;
    if (e.bp == 0.0) return 1.0 / (4.0 * d * d / (kappa * M_PI * M_PI) + d / e.bm);
    if (e.bm == 0.0) return 1.0 / (4.0 * d * d / (kappa * M_PI * M_PI) + d / e.bp);
    return std::min(quarter, e.bp * e.bm / kappa);
}

double rayleigh_quotient_1d(std::span<const double> zeta, const BoundaryCoefficients& bc) {
    bc.validate();
    const int nz = static_cast<int>(zeta.size());
    if (nz < 3) throw ConfigError("zeta must have at least 3 nodes");
    double amax = 0.0;
    for (double v : zeta) amax = std::max(amax, std::abs(v));
    if (amax == 0.0) throw ConfigError("rayleigh_quotient_1d: zero function");
    const double trace_tol = 1e-13 * amax;
    if (bc.bottom_is_dirichlet() && std::abs(zeta[0]) > trace_tol)
        throw ConfigError("zeta must vanish at x3=-d when beta_minus = inf");
    if (bc.top_is_dirichlet() && std::abs(zeta[nz - 1]) > trace_tol)
        throw ConfigError("zeta must vanish at x3=0 when beta_plus = inf");

    const double h = bc.d / (nz - 1);
    double grad = 0.0;
    for (int k = 0; k + 1 < nz; ++k) {
        const double s = (zeta[k + 1] - zeta[k]) / h;
        grad += s * s * h;
    }
    double value = bc.kappa * grad;
    if (!bc.top_is_dirichlet()) value += bc.beta_plus * zeta[nz - 1] * zeta[nz - 1];
    if (!bc.bottom_is_dirichlet()) value += bc.beta_minus * zeta[0] * zeta[0];

    double mass = 0.5 * (zeta[0] * zeta[0] + zeta[nz - 1] * zeta[nz - 1]);
    for (int k = 1; k < nz - 1; ++k) mass += zeta[k] * zeta[k];
    mass *= h;
    return value / mass;
}

double dense_rayleigh_minimum(const BoundaryCoefficients& bc, int nz) {
    bc.validate();
    if (nz < 3) throw ConfigError("nz must be >= 3");
    const EffectiveBeta e = effective(bc);
    if (e.bp == 0.0 && e.bm == 0.0 && !e.top_inf && !e.bot_inf) return 0.0;

    const double h = bc.d / (nz - 1);
    const double kh = bc.kappa / h;
    const int lo = e.bot_inf ? 1 : 0;
    const int hi = e.top_inf ? nz - 2 : nz - 1;
    const int n = hi - lo + 1;

    std::vector<double> diag(n), off(n - 1, -kh), mass(n);
    for (int i = 0; i < n; ++i) {
        const int k = lo + i;
        const bool phys_bot = (k == 0), phys_top = (k == nz - 1);
        diag[i] = kh * ((phys_bot || phys_top) ? 1.0 : 2.0);
        if (phys_bot) diag[i] += e.bm;
        if (phys_top) diag[i] += e.bp;
        mass[i] = (phys_bot || phys_top) ? 0.5 * h : h;
    }

    TridiagLU lu;
    lu.factor(off, diag, off);

    // Inverse iteration with a fixed deterministic start.
    std::vector<double> v(n), x(n);
    unsigned long long s = 0x9e3779b97f4a7c15ULL;
    for (int i = 0; i < n; ++i) {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        v[i] = (static_cast<double>(s % 10000ULL) / 10000.0) - 0.5;
    }
    double lam = 0.0, lam_old = -1.0;
    for (int it = 0; it < 2000 && std::abs(lam - lam_old) > 1e-15 * std::max(1.0, lam); ++it) {
        lam_old = lam;
        for (int i = 0; i < n; ++i) x[i] = mass[i] * v[i];
        lu.solve(std::span<double>(x));
        double nrm2 = 0.0;
        for (int i = 0; i < n; ++i) nrm2 += mass[i] * x[i] * x[i];
        const double inv = 1.0 / std::sqrt(nrm2);
        for (int i = 0; i < n; ++i) v[i] = x[i] * inv;
        // Rayleigh quotient v'Sv / v'Mv.
        double sv = 0.0;
        for (int i = 0; i < n; ++i) {
            double row = diag[i] * v[i];
            if (i > 0) row -= kh * v[i - 1];
            if (i + 1 < n) row -= kh * v[i + 1];
            sv += v[i] * row;
        }
        double mv = 0.0;
        for (int i = 0; i < n; ++i) mv += mass[i] * v[i] * v[i];
        lam = sv / mv;
    }
    return lam;
}

} // namespace slab
