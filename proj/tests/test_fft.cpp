#include "slab/grid.hpp"

#include <doctest.h>

#include <cmath>

using namespace slab;

namespace {

SlabGrid small_grid(int N1 = 8, int N2 = 8, int Nz = 5, double L1 = 1.0, double L2 = 2.0) {
    SlabGrid g;
    g.domain.L1 = L1;
    g.domain.L2 = L2;
    g.domain.d = 1.0;
    g.N1 = N1;
    g.N2 = N2;
    g.Nz = Nz;
    return g;
}

} // namespace

TEST_CASE("forward/inverse transforms round-trip") {
    SlabGrid g = small_grid(8, 6, 4); // 6 exercises the non-power-of-two path
    SpectralOps ops(g);
    Field3 f(g);
    for (int i1 = 0; i1 < g.N1; ++i1)
        for (int i2 = 0; i2 < g.N2; ++i2)
            for (int k = 0; k < g.Nz; ++k)
                f.at(i1, i2, k) = std::sin(1.0 + i1) * std::cos(2.0 + i2) + 0.1 * k;
    Field3 back = ops.to_physical(ops.to_modes(f));
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(back.data()[i] == doctest::Approx(f.data()[i]).epsilon(1e-13));
}

TEST_CASE("single mode transforms to a unit coefficient") {
    SlabGrid g = small_grid();
    SpectralOps ops(g);
    Field3 f(g);
    for (int i1 = 0; i1 < g.N1; ++i1)
        for (int i2 = 0; i2 < g.N2; ++i2)
            for (int k = 0; k < g.Nz; ++k)
                f.at(i1, i2, k) = std::cos(2.0 * M_PI * g.x1(i1) / g.domain.L1);
    SpectralField3 s = ops.to_modes(f);
    CHECK(std::abs(s.at(1, 0, 0) - cplx(0.5)) < 1e-14);
    CHECK(std::abs(s.at(g.N1 - 1, 0, 0) - cplx(0.5)) < 1e-14);
    CHECK(std::abs(s.at(0, 0, 0)) < 1e-14);
}

TEST_CASE("spectral derivatives are exact for band-limited data") {
    SlabGrid g = small_grid(16, 8, 4, 2.0, 1.5);
    SpectralOps ops(g);
    Field3 f(g), df_exact(g);
    const double k1 = 2.0 * M_PI * 3 / g.domain.L1;
    const double k2 = 2.0 * M_PI * 2 / g.domain.L2;
    for (int i1 = 0; i1 < g.N1; ++i1) {
        for (int i2 = 0; i2 < g.N2; ++i2) {
            for (int k = 0; k < g.Nz; ++k) {
                f.at(i1, i2, k) = std::sin(k1 * g.x1(i1)) * std::cos(k2 * g.x2(i2));
                df_exact.at(i1, i2, k) = k1 * std::cos(k1 * g.x1(i1)) * std::cos(k2 * g.x2(i2));
            }
        }
    }
    Field3 df = ops.dx1(f);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(df.data()[i] == doctest::Approx(df_exact.data()[i]).epsilon(1e-11));
}

TEST_CASE("vertical derivative is second order") {
    double prev_err = 0.0;
    for (int level = 0; level < 2; ++level) {
        SlabGrid g = small_grid(2, 2, level == 0 ? 17 : 33);
        Field3 f(g), exact(g);
        for (int i1 = 0; i1 < g.N1; ++i1) {
            for (int i2 = 0; i2 < g.N2; ++i2) {
                for (int k = 0; k < g.Nz; ++k) {
                    f.at(i1, i2, k) = std::exp(g.x3(k)) * std::sin(2.0 * g.x3(k));
                    exact.at(i1, i2, k) = std::exp(g.x3(k)) *
                                          (std::sin(2.0 * g.x3(k)) + 2.0 * std::cos(2.0 * g.x3(k)));
                }
            }
        }
        Field3 df = d_dz(f);
        double err = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            err = std::max(err, std::abs(df.data()[i] - exact.data()[i]));
        if (level == 0)
            prev_err = err;
        else
            CHECK(prev_err / err == doctest::Approx(4.0).epsilon(0.2));
    }
}

TEST_CASE("volume quadrature integrates band-limited fields exactly") {
    SlabGrid g = small_grid(8, 8, 33);
    Field3 f(g, 1.0);
    CHECK(integral_volume(f) ==
          doctest::Approx(g.domain.L1 * g.domain.L2 * g.domain.d).epsilon(1e-14));
    // cos mode integrates to zero.
    for (int i1 = 0; i1 < g.N1; ++i1)
        for (int i2 = 0; i2 < g.N2; ++i2)
            for (int k = 0; k < g.Nz; ++k)
                f.at(i1, i2, k) = std::cos(2.0 * M_PI * g.x1(i1) / g.domain.L1);
    CHECK(std::abs(integral_volume(f)) < 1e-14);
}
