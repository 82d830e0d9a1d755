#include "slab/grid.hpp"

#include <cmath>

namespace slab {

SpectralOps::SpectralOps(const SlabGrid& g) : grid_(g), plan_(g.N1, g.N2) {}

double SpectralOps::k1(int i1) const {
    return 2.0 * M_PI * Fourier2D::freq(i1, grid_.N1) / grid_.domain.L1;
}

double SpectralOps::k2(int i2) const {
    return 2.0 * M_PI * Fourier2D::freq(i2, grid_.N2) / grid_.domain.L2;
}

double SpectralOps::k_squared(int i1, int i2) const {
    const double a = k1(i1), b = k2(i2);
    return a * a + b * b;
}

SpectralField3 SpectralOps::to_modes(const Field3& f) const {
    SpectralField3 s(grid_);
    std::vector<cplx> plane(grid_.horizontal_nodes());
    for (int k = 0; k < grid_.Nz; ++k) {
        for (int i1 = 0; i1 < grid_.N1; ++i1)
            for (int i2 = 0; i2 < grid_.N2; ++i2)
                plane[static_cast<std::size_t>(i1) * grid_.N2 + i2] = f.at(i1, i2, k);
        plan_.forward(plane);
        for (int i1 = 0; i1 < grid_.N1; ++i1)
            for (int i2 = 0; i2 < grid_.N2; ++i2)
                s.at(i1, i2, k) = plane[static_cast<std::size_t>(i1) * grid_.N2 + i2];
    }
    return s;
}

Field3 SpectralOps::to_physical(const SpectralField3& s) const {
    Field3 f(grid_);
    std::vector<cplx> plane(grid_.horizontal_nodes());
    for (int k = 0; k < grid_.Nz; ++k) {
        for (int i1 = 0; i1 < grid_.N1; ++i1)
            for (int i2 = 0; i2 < grid_.N2; ++i2)
                plane[static_cast<std::size_t>(i1) * grid_.N2 + i2] = s.at(i1, i2, k);
        plan_.inverse(plane);
        for (int i1 = 0; i1 < grid_.N1; ++i1)
            for (int i2 = 0; i2 < grid_.N2; ++i2)
                f.at(i1, i2, k) = plane[static_cast<std::size_t>(i1) * grid_.N2 + i2].real();
    }
    return f;
}

std::vector<cplx> SpectralOps::surface_to_modes(std::span<const double> values) const {
    std::vector<cplx> plane(values.begin(), values.end());
    plan_.forward(plane);
    return plane;
}

std::vector<double> SpectralOps::surface_to_physical(std::span<const cplx> modes) const {
    std::vector<cplx> plane(modes.begin(), modes.end());
    plan_.inverse(plane);
    std::vector<double> out(plane.size());
    for (std::size_t i = 0; i < plane.size(); ++i) out[i] = plane[i].real();
    return out;
}

namespace {

// Multiply mode (i1, i2) by i*k, zeroing the unpaired Nyquist line so the
// derivative of real data stays real and symmetric.
template <typename ModeFn>
void apply_ik(std::vector<cplx>& plane, int N1, int N2, ModeFn kof, bool along_first) {
    for (int i1 = 0; i1 < N1; ++i1) {
        for (int i2 = 0; i2 < N2; ++i2) {
            const int idx = along_first ? i1 : i2;
            const int n = along_first ? N1 : N2;
            cplx& c = plane[static_cast<std::size_t>(i1) * N2 + i2];
            if (Fourier2D::is_nyquist(idx, n))
                c = 0.0;
            else
                c *= cplx(0.0, kof(along_first ? i1 : i2));
        }
    }
}

} // namespace

Field3 SpectralOps::dx1(const Field3& f) const {
    Field3 g(grid_);
    std::vector<cplx> plane(grid_.horizontal_nodes());
    for (int k = 0; k < grid_.Nz; ++k) {
        for (int i1 = 0; i1 < grid_.N1; ++i1)
            for (int i2 = 0; i2 < grid_.N2; ++i2)
                plane[static_cast<std::size_t>(i1) * grid_.N2 + i2] = f.at(i1, i2, k);
        plan_.forward(plane);
        apply_ik(plane, grid_.N1, grid_.N2, [this](int i) { return k1(i); }, true);
        plan_.inverse(plane);
        for (int i1 = 0; i1 < grid_.N1; ++i1)
            for (int i2 = 0; i2 < grid_.N2; ++i2)
                g.at(i1, i2, k) = plane[static_cast<std::size_t>(i1) * grid_.N2 + i2].real();
    }
    return g;
}

Field3 SpectralOps::dx2(const Field3& f) const {
    Field3 g(grid_);
    std::vector<cplx> plane(grid_.horizontal_nodes());
    for (int k = 0; k < grid_.Nz; ++k) {
        for (int i1 = 0; i1 < grid_.N1; ++i1)
            for (int i2 = 0; i2 < grid_.N2; ++i2)
                plane[static_cast<std::size_t>(i1) * grid_.N2 + i2] = f.at(i1, i2, k);
        plan_.forward(plane);
        apply_ik(plane, grid_.N1, grid_.N2, [this](int i) { return k2(i); }, false);
        plan_.inverse(plane);
        for (int i1 = 0; i1 < grid_.N1; ++i1)
            for (int i2 = 0; i2 < grid_.N2; ++i2)
                g.at(i1, i2, k) = plane[static_cast<std::size_t>(i1) * grid_.N2 + i2].real();
    }
    return g;
}

std::vector<double> SpectralOps::surface_dx1(std::span<const double> values) const {
    std::vector<cplx> plane(values.begin(), values.end());
    plan_.forward(plane);
    apply_ik(plane, grid_.N1, grid_.N2, [this](int i) { return k1(i); }, true);
    plan_.inverse(plane);
    std::vector<double> out(plane.size());
    for (std::size_t i = 0; i < plane.size(); ++i) out[i] = plane[i].real();
    return out;
}

std::vector<double> SpectralOps::surface_dx2(std::span<const double> values) const {
    std::vector<cplx> plane(values.begin(), values.end());
    plan_.forward(plane);
    apply_ik(plane, grid_.N1, grid_.N2, [this](int i) { return k2(i); }, false);
    plan_.inverse(plane);
    std::vector<double> out(plane.size());
    for (std::size_t i = 0; i < plane.size(); ++i) out[i] = plane[i].real();
    return out;
}

void d_dz_column(std::span<const double> col, std::span<double> out, double h) {
    const int n = static_cast<int>(col.size());
    out[0] = (-3.0 * col[0] + 4.0 * col[1] - col[2]) / (2.0 * h);
    for (int k = 1; k < n - 1; ++k) out[k] = (col[k + 1] - col[k - 1]) / (2.0 * h);
    out[n - 1] = (3.0 * col[n - 1] - 4.0 * col[n - 2] + col[n - 3]) / (2.0 * h);
}

Field3 d_dz(const Field3& f) {
    const SlabGrid& g = f.grid();
    Field3 out(g);
    const double h = g.hz();
    for (int i1 = 0; i1 < g.N1; ++i1)
        for (int i2 = 0; i2 < g.N2; ++i2)
            d_dz_column(f.column(i1, i2), out.column(i1, i2), h);
    return out;
}

double integral_volume(const Field3& f) {
    const SlabGrid& g = f.grid();
    const double h = g.hz();
    double total = 0.0;
    for (int i1 = 0; i1 < g.N1; ++i1) {
        for (int i2 = 0; i2 < g.N2; ++i2) {
            auto col = f.column(i1, i2);
            double s = 0.5 * (col[0] + col[g.Nz - 1]);
            for (int k = 1; k < g.Nz - 1; ++k) s += col[k];
            total += s * h;
        }
    }
    return total * g.domain.L1 * g.domain.L2 / (static_cast<double>(g.N1) * g.N2);
}

double integral_surface(const SlabGrid& g, std::span<const double> values) {
    double s = 0.0;
    for (double v : values) s += v;
    return s * g.domain.L1 * g.domain.L2 / (static_cast<double>(g.N1) * g.N2);
}

double integral_wall(const Field3& f, bool top) {
    const SlabGrid& g = f.grid();
    const int k = top ? g.Nz - 1 : 0;
    double s = 0.0;
    for (int i1 = 0; i1 < g.N1; ++i1)
        for (int i2 = 0; i2 < g.N2; ++i2) s += f.at(i1, i2, k);
    return s * g.domain.L1 * g.domain.L2 / (static_cast<double>(g.N1) * g.N2);
}

double l2_norm_volume(const Field3& f) {
    const SlabGrid& g = f.grid();
    const double h = g.hz();
    double total = 0.0;
    for (int i1 = 0; i1 < g.N1; ++i1) {
        for (int i2 = 0; i2 < g.N2; ++i2) {
            auto col = f.column(i1, i2);
            double s = 0.5 * (col[0] * col[0] + col[g.Nz - 1] * col[g.Nz - 1]);
            for (int k = 1; k < g.Nz - 1; ++k) s += col[k] * col[k];
            total += s * h;
        }
    }
    return std::sqrt(total * g.domain.L1 * g.domain.L2 / (static_cast<double>(g.N1) * g.N2));
}

double l2_norm_surface(const SlabGrid& g, std::span<const double> values) {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s * g.domain.L1 * g.domain.L2 / (static_cast<double>(g.N1) * g.N2));
}

double max_abs(const Field3& f) {
    double m = 0.0;
    for (double v : f.data()) m = std::max(m, std::abs(v));
    return m;
}

bool has_non_finite(const Field3& f) {
    for (double v : f.data())
        if (!std::isfinite(v)) return true;
    return false;
}

} // namespace slab
