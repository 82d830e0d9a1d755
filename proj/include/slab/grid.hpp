#pragma once

#include "slab/fft.hpp"
#include "slab/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace slab {

enum class HorizontalKind {
    periodic,
    /// Large periodic box used as a proxy for an infinite cross section in
    /// box-growth studies.  Never a claim of true infinite extent.
    truncated_infinite,
};

/// The slab Omega = Gamma x (-d, 0) with Gamma a periodic rectangle of
/// periods L1 x L2.
struct SlabDomain {
    double L1 = 1.0;
    double L2 = 1.0;
    double d = 1.0;
    HorizontalKind horizontal_kind = HorizontalKind::periodic;

    void validate() const {
        if (!(L1 > 0.0) || !(L2 > 0.0)) throw ConfigError("horizontal periods must be positive");
        if (!(d > 0.0)) throw ConfigError("slab depth must be positive");
    }
};

/// Tensor-product grid: N1 x N2 uniform horizontal nodes (Fourier collocation)
/// and Nz uniform vertical nodes on [-d, 0], bottom node at x3 = -d (k = 0),
/// top node at x3 = 0 (k = Nz - 1).
struct SlabGrid {
    SlabDomain domain;
    int N1 = 8;
    int N2 = 8;
    int Nz = 9;

    void validate() const {
        domain.validate();
        if (N1 <= 0 || N1 % 2 != 0) throw ConfigError("N1 must be a positive even integer");
        if (N2 <= 0 || N2 % 2 != 0) throw ConfigError("N2 must be a positive even integer");
        if (Nz < 3) throw ConfigError("Nz must be >= 3");
    }

    double hz() const { return domain.d / (Nz - 1); }
    double x1(int i1) const { return domain.L1 * i1 / N1; }
    double x2(int i2) const { return domain.L2 * i2 / N2; }
    // Computed so the endpoints are exact: x3(0) = -d, x3(Nz-1) = 0.
    double x3(int k) const { return -domain.d * (Nz - 1 - k) / (Nz - 1); }
    double dtilde(int k) const { return 1.0 + x3(k) / domain.d; }

    std::size_t horizontal_nodes() const { return static_cast<std::size_t>(N1) * N2; }
    std::size_t nodes() const { return horizontal_nodes() * Nz; }

    double min_spacing() const {
        double h = hz();
        if (domain.L1 / N1 < h) h = domain.L1 / N1;
        if (domain.L2 / N2 < h) h = domain.L2 / N2;
        return h;
    }

    bool same_layout(const SlabGrid& o) const {
        return N1 == o.N1 && N2 == o.N2 && Nz == o.Nz && domain.L1 == o.domain.L1 &&
               domain.L2 == o.domain.L2 && domain.d == o.domain.d;
    }
    bool same_horizontal(const SlabGrid& o) const {
        return N1 == o.N1 && N2 == o.N2 && domain.L1 == o.domain.L1 && domain.L2 == o.domain.L2;
    }
};

/// Real grid function on a SlabGrid.  Storage has the vertical index fastest,
/// so vertical columns are contiguous.
class Field3 {
public:
    Field3() = default;
    explicit Field3(const SlabGrid& g, double fill = 0.0)
        : grid_(g), v_(g.nodes(), fill) {}

    const SlabGrid& grid() const { return grid_; }

    double& at(int i1, int i2, int k) { return v_[index(i1, i2, k)]; }
    double at(int i1, int i2, int k) const { return v_[index(i1, i2, k)]; }
    std::size_t index(int i1, int i2, int k) const {
        return (static_cast<std::size_t>(i1) * grid_.N2 + i2) * grid_.Nz + k;
    }

    std::span<double> column(int i1, int i2) {
        return {v_.data() + index(i1, i2, 0), static_cast<std::size_t>(grid_.Nz)};
    }
    std::span<const double> column(int i1, int i2) const {
        return {v_.data() + index(i1, i2, 0), static_cast<std::size_t>(grid_.Nz)};
    }

    std::vector<double>& data() { return v_; }
    const std::vector<double>& data() const { return v_; }
    std::size_t size() const { return v_.size(); }

private:
    SlabGrid grid_;
    std::vector<double> v_;
};

/// Real function on the horizontal cross section Gamma (one value per
/// horizontal node), with an optional time stamp.
struct SurfaceFunction {
    SlabGrid grid; // only the horizontal part is meaningful
    std::vector<double> values;
    std::vector<double> time_derivative; // empty when unknown
    double time = 0.0;

    SurfaceFunction() = default;
    explicit SurfaceFunction(const SlabGrid& g, double fill = 0.0)
        : grid(g), values(g.horizontal_nodes(), fill) {}

    double& at(int i1, int i2) { return values[static_cast<std::size_t>(i1) * grid.N2 + i2]; }
    double at(int i1, int i2) const { return values[static_cast<std::size_t>(i1) * grid.N2 + i2]; }
    bool has_time_derivative() const { return !time_derivative.empty(); }
};

// ---------------------------------------------------------------------------
// Spectral / finite-difference machinery shared by every module.
// Horizontal derivatives are spectral (exact for band-limited data, Nyquist
// modes dropped in odd derivatives); vertical derivatives of generic fields
// are second-order centered with one-sided second-order stencils at the walls.
// ---------------------------------------------------------------------------

/// Horizontal Fourier coefficients of every z-level of a field, same layout
/// as Field3 but complex.
class SpectralField3 {
public:
    SpectralField3() = default;
    explicit SpectralField3(const SlabGrid& g) : grid_(g), v_(g.nodes()) {}

    const SlabGrid& grid() const { return grid_; }
    cplx& at(int i1, int i2, int k) { return v_[index(i1, i2, k)]; }
    cplx at(int i1, int i2, int k) const { return v_[index(i1, i2, k)]; }
    std::size_t index(int i1, int i2, int k) const {
        return (static_cast<std::size_t>(i1) * grid_.N2 + i2) * grid_.Nz + k;
    }
    std::vector<cplx>& data() { return v_; }
    const std::vector<cplx>& data() const { return v_; }

private:
    SlabGrid grid_;
    std::vector<cplx> v_;
};

class SpectralOps {
public:
    explicit SpectralOps(const SlabGrid& g);

    SpectralField3 to_modes(const Field3& f) const;
    Field3 to_physical(const SpectralField3& s) const;

    std::vector<cplx> surface_to_modes(std::span<const double> values) const;
    std::vector<double> surface_to_physical(std::span<const cplx> modes) const;

    /// Spectral horizontal derivatives (Nyquist modes zeroed).
    Field3 dx1(const Field3& f) const;
    Field3 dx2(const Field3& f) const;
    std::vector<double> surface_dx1(std::span<const double> values) const;
    std::vector<double> surface_dx2(std::span<const double> values) const;

    /// Angular wavenumbers 2*pi*n/L of mode index.
    double k1(int i1) const;
    double k2(int i2) const;
    /// |k|^2 with Nyquist included (used for diffusion factors).
    double k_squared(int i1, int i2) const;

    const SlabGrid& grid() const { return grid_; }

private:
    SlabGrid grid_;
    Fourier2D plan_;
};

/// Second-order vertical derivative of a grid column (centered interior,
/// one-sided at the walls).
void d_dz_column(std::span<const double> col, std::span<double> out, double h);
Field3 d_dz(const Field3& f);

// Quadrature: spectral horizontally (uniform weights, exact for band-limited
// integrands), trapezoidal vertically.

double integral_volume(const Field3& f);
/// Integral over Gamma of a horizontal node array.
double integral_surface(const SlabGrid& g, std::span<const double> values);
/// Integral over a wall plane of a volume field (k = Nz-1 top, k = 0 bottom).
double integral_wall(const Field3& f, bool top);

double l2_norm_volume(const Field3& f);
double l2_norm_surface(const SlabGrid& g, std::span<const double> values);

/// Trapezoid weight of vertical node k.
inline double z_weight(const SlabGrid& g, int k) {
    const double h = g.hz();
    return (k == 0 || k == g.Nz - 1) ? 0.5 * h : h;
}

double max_abs(const Field3& f);
bool has_non_finite(const Field3& f);

} // namespace slab
