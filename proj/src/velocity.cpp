#include "slab/velocity.hpp"

#include <cmath>

namespace slab {

VelocityFamily velocity_family_from_string(const std::string& s) {
    if (s == "zero") return VelocityFamily::zero;
    if (s == "shear") return VelocityFamily::shear;
    if (s == "cellular") return VelocityFamily::cellular;
    throw ConfigError("unknown velocity family: " + s);
}

const char* to_string(VelocityFamily f) {
    switch (f) {
    case VelocityFamily::zero: return "zero";
    case VelocityFamily::shear: return "shear";
    case VelocityFamily::cellular: return "cellular";
    }
    return "?";
}

Field3 discrete_divergence(const Field3& u1, const Field3& u2, const Field3& u3) {
    SpectralOps ops(u1.grid());
    Field3 div = ops.dx1(u1);
    Field3 d2 = ops.dx2(u2);
    Field3 d3 = d_dz(u3);
    for (std::size_t i = 0; i < div.size(); ++i) div.data()[i] += d2.data()[i] + d3.data()[i];
    return div;
}

VelocitySample make_velocity_rigid(VelocityFamily family, const VelocityParams& params,
                                   double t, const SlabGrid& grid) {
    grid.validate();
    if (params.amplitude < 0.0) throw ConfigError("velocity amplitude must be >= 0");
    if (params.decay_rate < 0.0) throw ConfigError("velocity decay rate must be >= 0");

    VelocitySample v;
    v.grid = grid;
    v.time = t;
    v.u1 = Field3(grid);
    v.u2 = Field3(grid);
    v.u3 = Field3(grid);

    const double amp = params.amplitude * std::exp(-params.decay_rate * t);
    const double d = grid.domain.d;
    const double L1 = grid.domain.L1;

    switch (family) {
    case VelocityFamily::zero:
        break;
    case VelocityFamily::shear:
        for (int i1 = 0; i1 < grid.N1; ++i1)
            for (int i2 = 0; i2 < grid.N2; ++i2)
                for (int k = 0; k < grid.Nz; ++k)
                    v.u1.at(i1, i2, k) = amp * std::sin(M_PI * grid.x3(k) / d);
        break;
    case VelocityFamily::cellular:
        for (int i1 = 0; i1 < grid.N1; ++i1) {
            const double c1 = std::cos(2.0 * M_PI * grid.x1(i1) / L1);
            const double s1 = std::sin(2.0 * M_PI * grid.x1(i1) / L1);
            for (int i2 = 0; i2 < grid.N2; ++i2) {
                for (int k = 0; k < grid.Nz; ++k) {
                    const bool wall = (k == 0 || k == grid.Nz - 1);
                    const double cz = std::cos(M_PI * grid.x3(k) / d);
                    const double sz = wall ? 0.0 : std::sin(M_PI * grid.x3(k) / d);
                    v.u1.at(i1, i2, k) = -amp * (M_PI / d) * s1 * cz;
                    v.u3.at(i1, i2, k) = amp * (2.0 * M_PI / L1) * c1 * sz;
                }
            }
        }
        break;
    }

    Field3 div = discrete_divergence(v.u1, v.u2, v.u3);
    v.divergence_residual = max_abs(div);
    for (int i1 = 0; i1 < grid.N1; ++i1)
        for (int i2 = 0; i2 < grid.N2; ++i2)
            v.wall_trace_residual =
                std::max({v.wall_trace_residual, std::abs(v.u3.at(i1, i2, 0)),
                          std::abs(v.u3.at(i1, i2, grid.Nz - 1))});
    Field3 sq(grid);
    for (std::size_t i = 0; i < sq.size(); ++i) {
        const double a = v.u1.data()[i], b = v.u2.data()[i], c = v.u3.data()[i];
        sq.data()[i] = a * a + b * b + c * c;
        v.max_component = std::max({v.max_component, std::abs(a), std::abs(b), std::abs(c)});
    }
    v.l2_norm = std::sqrt(integral_volume(sq));
    return v;
}

} // namespace slab
