#include "slab/eigen1d.hpp"

#include "slab/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace slab;

namespace {

BoundaryCoefficients bc_of(double bp, double bm, double kappa = 1.0, double d = 1.0) {
    BoundaryCoefficients bc;
    bc.beta_plus = bp;
    bc.beta_minus = bm;
    bc.kappa = kappa;
    bc.d = d;
    return bc;
}

// Frozen before the main build by an independent bisection on
// tan(sqrt(mu)) = 2 sqrt(mu)/(mu - 1)  (beta=(1,1), kappa=d=1).
constexpr double kMu11 = 1.70705297555092248;
// Same oracle for beta=(0,1).
constexpr double kMu01 = 0.74017388439496704;

double ode_residual(const EigenResult& er, const BoundaryCoefficients& bc) {
    const int nz = static_cast<int>(er.zeta.size());
    const double h = bc.d / (nz - 1);
    double r = 0.0;
    for (int k = 1; k < nz - 1; ++k) {
        const double lap = (er.zeta[k - 1] - 2.0 * er.zeta[k] + er.zeta[k + 1]) / (h * h);
        r = std::max(r, std::abs(-bc.kappa * lap - er.mu * er.zeta[k]));
    }
    return r;
}

double endpoint_residual(const EigenResult& er, const BoundaryCoefficients& bc) {
    const int nz = static_cast<int>(er.zeta.size());
    const double h = bc.d / (nz - 1);
    double r = 0.0;
    if (bc.bottom_is_dirichlet()) {
        r = std::max(r, std::abs(er.zeta[0]));
    } else {
        const double dz = (-3.0 * er.zeta[0] + 4.0 * er.zeta[1] - er.zeta[2]) / (2.0 * h);
        r = std::max(r, std::abs(-bc.kappa * dz + bc.beta_minus * er.zeta[0]));
    }
    if (bc.top_is_dirichlet()) {
        r = std::max(r, std::abs(er.zeta[nz - 1]));
    } else {
        const double dz =
            (3.0 * er.zeta[nz - 1] - 4.0 * er.zeta[nz - 2] + er.zeta[nz - 3]) / (2.0 * h);
        r = std::max(r, std::abs(bc.kappa * dz + bc.beta_plus * er.zeta[nz - 1]));
    }
    return r;
}

} // namespace

TEST_CASE("closed forms for beta in {0, inf}^2") {
    CHECK(principal_eigenvalue(bc_of(kInf, kInf)).mu ==
          doctest::Approx(M_PI * M_PI).epsilon(1e-13));
    CHECK(principal_eigenvalue(bc_of(0.0, 0.0)).mu == 0.0);
    CHECK(principal_eigenvalue(bc_of(kInf, 0.0)).mu ==
          doctest::Approx(M_PI * M_PI / 4.0).epsilon(1e-13));
    CHECK(principal_eigenvalue(bc_of(0.0, kInf)).mu ==
          doctest::Approx(M_PI * M_PI / 4.0).epsilon(1e-13));
    // Scaling: mu = kappa pi^2/d^2.
    CHECK(principal_eigenvalue(bc_of(kInf, kInf, 0.3, 2.0)).mu ==
          doctest::Approx(0.3 * M_PI * M_PI / 4.0).epsilon(1e-13));
}

TEST_CASE("transcendental case matches the frozen bisection oracle") {
    CHECK(principal_eigenvalue(bc_of(1.0, 1.0)).mu == doctest::Approx(kMu11).epsilon(1e-12));
    CHECK(principal_eigenvalue(bc_of(0.0, 1.0)).mu == doctest::Approx(kMu01).epsilon(1e-12));
    // Symmetry in the two coefficients.
    CHECK(principal_eigenvalue(bc_of(1.0, 0.0)).mu == doctest::Approx(kMu01).epsilon(1e-12));
}

TEST_CASE("eigenfunction: unit norm, ODE and endpoint residuals") {
    const double betas[][2] = {{1.0, 1.0}, {0.0, 2.0}, {kInf, 0.5}, {3.0, kInf}, {kInf, kInf}};
    for (auto& b : betas) {
        BoundaryCoefficients bc = bc_of(b[0], b[1], 0.7, 1.3);
        double prev_ode = 0.0, prev_end = 0.0;
        for (int level = 0; level < 2; ++level) {
            const int nz = level == 0 ? 129 : 257;
            EigenResult er = principal_eigenvalue(bc, nz);
            const double h = bc.d / (nz - 1);
            double mass = 0.5 * (er.zeta[0] * er.zeta[0] + er.zeta[nz - 1] * er.zeta[nz - 1]);
            for (int k = 1; k < nz - 1; ++k) mass += er.zeta[k] * er.zeta[k];
            mass *= h;
            CHECK(std::abs(mass - 1.0) < 1e-12);
            const double r_ode = ode_residual(er, bc);
            const double r_end = endpoint_residual(er, bc);
            if (level == 0) {
                prev_ode = r_ode;
                prev_end = r_end;
            } else {
                if (prev_ode > 1e-12) CHECK(prev_ode / r_ode > 3.0);
                if (prev_end > 1e-10) CHECK(prev_end / r_end > 3.0);
            }
        }
    }
}

TEST_CASE("lower bound table") {
    CHECK(eigenvalue_lower_bound(bc_of(2.0, 3.0)) ==
          doctest::Approx(std::min(M_PI * M_PI / 4.0, 6.0)).epsilon(1e-14));
    CHECK(eigenvalue_lower_bound(bc_of(0.0, 1.0)) ==
          doctest::Approx(1.0 / (4.0 / (M_PI * M_PI) + 1.0)).epsilon(1e-14));
    CHECK(eigenvalue_lower_bound(bc_of(1.0, 0.0)) ==
          doctest::Approx(1.0 / (4.0 / (M_PI * M_PI) + 1.0)).epsilon(1e-14));
    CHECK(eigenvalue_lower_bound(bc_of(0.0, 0.0)) == 0.0);
    CHECK(eigenvalue_lower_bound(bc_of(kInf, 3.0)) ==
          doctest::Approx(M_PI * M_PI / 4.0).epsilon(1e-14));
    CHECK(eigenvalue_lower_bound(bc_of(kInf, kInf)) ==
          doctest::Approx(M_PI * M_PI).epsilon(1e-14));
}

TEST_CASE("mu dominates the lower bound; equality on {0, inf}^2") {
    CounterRng rng{11};
    for (int trial = 0; trial < 60; ++trial) {
        const double bp = std::pow(10.0, 3.0 * rng.symmetric(2 * trial));
        const double bm = std::pow(10.0, 3.0 * rng.symmetric(2 * trial + 1));
        BoundaryCoefficients bc = bc_of(bp, bm, 0.9, 1.2);
        const double mu = principal_eigenvalue(bc).mu;
        CHECK(mu >= eigenvalue_lower_bound(bc) - 1e-12);
    }
    for (double bp : {0.0, kInf})
        for (double bm : {0.0, kInf}) {
            BoundaryCoefficients bc = bc_of(bp, bm, 1.7, 0.8);
            CHECK(principal_eigenvalue(bc).mu ==
                  doctest::Approx(eigenvalue_lower_bound(bc)).epsilon(1e-13));
        }
}

TEST_CASE("mu is nondecreasing in each coefficient") {
    const double grid_vals[] = {0.0, 0.1, 1.0, 5.0, 50.0, kInf};
    double prev;
    for (double bm : grid_vals) {
        prev = -1.0;
        for (double bp : grid_vals) {
            const double mu = principal_eigenvalue(bc_of(bp, bm)).mu;
            CHECK(mu >= prev - 1e-12);
            prev = mu;
        }
    }
    for (double bp : grid_vals) {
        prev = -1.0;
        for (double bm : grid_vals) {
            const double mu = principal_eigenvalue(bc_of(bp, bm)).mu;
            CHECK(mu >= prev - 1e-12);
            prev = mu;
        }
    }
}

TEST_CASE("rayleigh quotient of the eigenfunction approaches mu") {
    BoundaryCoefficients bc = bc_of(1.0, 1.0);
    EigenResult er = principal_eigenvalue(bc, 513);
    const double q = rayleigh_quotient_1d(er.zeta, bc);
    CHECK(q == doctest::Approx(er.mu).epsilon(1e-4));
}

TEST_CASE("rayleigh quotient: constant is zero for the Neumann regime") {
    BoundaryCoefficients bc = bc_of(0.0, 0.0);
    std::vector<double> z(65, 2.0);
    CHECK(rayleigh_quotient_1d(z, bc) == 0.0);
}

TEST_CASE("random admissible functions dominate mu (1d coercivity)") {
    CounterRng rng{23};
    const double betas[][2] = {{1.0, 1.0}, {0.3, 7.0}, {kInf, 2.0}, {kInf, kInf}};
    for (auto& b : betas) {
        BoundaryCoefficients bc = bc_of(b[0], b[1]);
        const double mu = principal_eigenvalue(bc).mu;
        const int nz = 257;
        const double h = bc.d / (nz - 1);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> z(nz);
            for (int j = 0; j < 4; ++j) {
                const double a = rng.symmetric(100 * trial + j);
                const double ph = M_PI * rng.uniform(100 * trial + 10 + j);
                for (int k = 0; k < nz; ++k)
                    z[k] += a * std::cos(j * M_PI * (k * h) / bc.d + ph);
            }
            if (bc.bottom_is_dirichlet()) {
                const double z0 = z[0];
                for (int k = 0; k < nz; ++k) z[k] -= z0 * (1.0 - k * h / bc.d);
                z[0] = 0.0;
            }
            if (bc.top_is_dirichlet()) {
                const double zt = z[nz - 1];
                for (int k = 0; k < nz; ++k) z[k] -= zt * (k * h / bc.d);
                z[nz - 1] = 0.0;
            }
            const double q = rayleigh_quotient_1d(z, bc);
            CHECK(q >= mu - 5e-3 * std::max(1.0, mu)); // O(h^2) slack
        }
    }
}

TEST_CASE("rayleigh quotient rejects bad inputs") {
    BoundaryCoefficients bc = bc_of(kInf, 0.0);
    std::vector<double> z(33, 1.0);
    CHECK_THROWS_AS(rayleigh_quotient_1d(z, bc), ConfigError); // nonzero top trace
    std::vector<double> zero(33, 0.0);
    CHECK_THROWS_AS(rayleigh_quotient_1d(zero, bc_of(1.0, 1.0)), ConfigError);
}

TEST_CASE("dense minimizer agrees with the root to 1e-6 at Nz=2049") {
    CounterRng rng{31};
    for (int trial = 0; trial < 8; ++trial) {
        const double bp = std::pow(10.0, 2.5 * rng.symmetric(2 * trial));
        const double bm = std::pow(10.0, 2.5 * rng.symmetric(2 * trial + 1));
        BoundaryCoefficients bc = bc_of(bp, bm);
        const double mu = principal_eigenvalue(bc).mu;
        const double md = dense_rayleigh_minimum(bc, 2049);
        CHECK(std::abs(md - mu) / mu < 1e-6);
    }
}

TEST_CASE("very large finite beta is continuous across the Dirichlet switch") {
    BoundaryCoefficients below = bc_of(0.999e12, 2.0);
    BoundaryCoefficients above = bc_of(1.001e12, 2.0);
    const double mu_b = principal_eigenvalue(below).mu;
    const double mu_a = principal_eigenvalue(above).mu;
    CHECK(std::abs(mu_a - mu_b) / mu_a < 1e-10);
}

TEST_CASE("bracket metadata is recorded for the transcendental case") {
    EigenResult er = principal_eigenvalue(bc_of(1.0, 1.0));
    CHECK(er.bracket_lo > 0.0);
    CHECK(er.bracket_hi <= M_PI);
    CHECK(er.characteristic_case == "transcendental_phase");
}
