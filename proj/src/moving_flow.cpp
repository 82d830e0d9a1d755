#include "slab/moving_flow.hpp"

#include <cmath>

namespace slab {

Field3 discrete_div_A(const Field3& u1, const Field3& u2, const Field3& u3,
                      const GeometryTensors& g) {
    // div_A u = A_ij dj u_i = d1 u1 + d2 u2 + K(d3 u3 - A d3 u1 - B d3 u2).
    SpectralOps ops(u1.grid());
    Field3 out = ops.dx1(u1);
    Field3 d2 = ops.dx2(u2);
    Field3 z1 = d_dz(u1), z2 = d_dz(u2), z3 = d_dz(u3);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double K = g.K.data()[i];
        out.data()[i] += d2.data()[i] +
                         K * (z3.data()[i] - g.A.data()[i] * z1.data()[i] -
                              g.B.data()[i] * z2.data()[i]);
    }
    return out;
}

namespace {

void fill_diagnostics(FlowSample& v, const GeometryTensors& g) {
    const SlabGrid& grid = v.grid;
    Field3 div = discrete_div_A(v.u1, v.u2, v.u3, g);
    v.div_A_residual = max_abs(div);
    for (int i1 = 0; i1 < grid.N1; ++i1)
        for (int i2 = 0; i2 < grid.N2; ++i2)
            v.bottom_trace_residual =
                std::max(v.bottom_trace_residual, std::abs(v.u3.at(i1, i2, 0)));
    Field3 sq(grid);
    for (std::size_t i = 0; i < sq.size(); ++i) {
        const double a = v.u1.data()[i], b = v.u2.data()[i], c = v.u3.data()[i];
        sq.data()[i] = a * a + b * b + c * c;
        v.max_component = std::max({v.max_component, std::abs(a), std::abs(b), std::abs(c)});
    }
    v.l2_norm = std::sqrt(integral_volume(sq));
}

} // namespace

ManufacturedFlow::ManufacturedFlow(const ManufacturedFlowParams& params, const SlabGrid& grid)
    : params_(params), grid_(grid) {
    grid.validate();
    params.validate(grid.domain.d);
}

double ManufacturedFlow::psi_y3(double t, double y1, double y3) const {
    const double d = grid_.domain.d;
    const double amp = params_.amplitude * std::exp(-params_.decay_rate * t);
    const double f = std::sin(2.0 * M_PI * params_.mode * y1 / grid_.domain.L1);
    // rho'(y3) = 2(y3+d)(c-y3) - (y3+d)^2
    const double rho_p = 2.0 * (y3 + d) * (params_.envelope_c - y3) - (y3 + d) * (y3 + d);
    return amp * f * rho_p;
}

double ManufacturedFlow::psi_y1(double t, double y1, double y3) const {
    const double d = grid_.domain.d;
    const double amp = params_.amplitude * std::exp(-params_.decay_rate * t);
    const double fp = (2.0 * M_PI * params_.mode / grid_.domain.L1) *
                      std::cos(2.0 * M_PI * params_.mode * y1 / grid_.domain.L1);
    const double rho = (y3 + d) * (y3 + d) * (params_.envelope_c - y3);
    return amp * fp * rho;
}

FlowSample ManufacturedFlow::sample(double t, const GeometryTensors& g) const {
    if (!g.grid.same_layout(grid_)) throw ConfigError("flow/geometry grid mismatch");
    FlowSample v;
    v.grid = grid_;
    v.time = t;
    v.u1 = Field3(grid_);
    v.u2 = Field3(grid_);
    v.u3 = Field3(grid_);
    for (int i1 = 0; i1 < grid_.N1; ++i1) {
        const double y1 = grid_.x1(i1);
        for (int i2 = 0; i2 < grid_.N2; ++i2) {
            for (int k = 0; k < grid_.Nz; ++k) {
                const double x3 = grid_.x3(k);
                const double y3 = x3 + g.eta_bar.at(i1, i2, k) * grid_.dtilde(k);
                v.u1.at(i1, i2, k) = psi_y3(t, y1, y3);
                v.u3.at(i1, i2, k) = (k == 0) ? 0.0 : -psi_y1(t, y1, y3);
            }
        }
    }
    // Kinematic speed on Sigma_+: u.N with the sampled top traces.
    const int top = grid_.Nz - 1;
    v.surface_speed.resize(grid_.horizontal_nodes());
    for (int i1 = 0; i1 < grid_.N1; ++i1) {
        for (int i2 = 0; i2 < grid_.N2; ++i2) {
            const std::size_t h = static_cast<std::size_t>(i1) * grid_.N2 + i2;
            v.surface_speed[h] = v.u1.at(i1, i2, top) * g.N_1[h] +
                                 v.u2.at(i1, i2, top) * g.N_2[h] + v.u3.at(i1, i2, top);
        }
    }
    fill_diagnostics(v, g);
    return v;
}

std::vector<double> ManufacturedFlow::kinematic_speed(double t, const SurfaceFunction& eta) const {
    if (!eta.grid.same_horizontal(grid_)) throw ConfigError("flow/surface grid mismatch");
    SpectralOps ops(grid_);
    auto de1 = ops.surface_dx1(eta.values);
    auto de2 = ops.surface_dx2(eta.values);
    std::vector<double> speed(grid_.horizontal_nodes());
    for (int i1 = 0; i1 < grid_.N1; ++i1) {
        const double y1 = grid_.x1(i1);
        for (int i2 = 0; i2 < grid_.N2; ++i2) {
            const std::size_t h = static_cast<std::size_t>(i1) * grid_.N2 + i2;
            const double y3 = eta.values[h]; // top trace: x3 = 0, dtilde = 1
            const double u1 = psi_y3(t, y1, y3);
            const double u3 = -psi_y1(t, y1, y3);
            speed[h] = -u1 * de1[h] + u3; // u2 = 0
        }
    }
    return speed;
}

FlowSample RigidFamilyFlow::sample(double t, const GeometryTensors& g) const {
    VelocitySample r = make_velocity_rigid(family_, params_, t, grid_);
    FlowSample v;
    v.grid = grid_;
    v.time = t;
    v.u1 = std::move(r.u1);
    v.u2 = std::move(r.u2);
    v.u3 = std::move(r.u3);
    v.surface_speed.assign(grid_.horizontal_nodes(), 0.0);
    fill_diagnostics(v, g);
    return v;
}

std::vector<double> RigidFamilyFlow::kinematic_speed(double, const SurfaceFunction&) const {
    return std::vector<double>(grid_.horizontal_nodes(), 0.0);
}

} // namespace slab
