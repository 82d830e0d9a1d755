#pragma once

#include "slab/geometry.hpp"
#include "slab/grid.hpp"
#include "slab/velocity.hpp"

#include <memory>

namespace slab {

/// A velocity snapshot in flattened coordinates together with the kinematic
/// surface speed u.N on Sigma_+ (zero for flows used with a frozen surface).
struct FlowSample {
    SlabGrid grid;
    double time = 0.0;
    Field3 u1, u2, u3;
    std::vector<double> surface_speed; // dt_eta = u.N on Gamma
    double div_A_residual = 0.0;       // discrete div_A u
    double bottom_trace_residual = 0.0;
    double l2_norm = 0.0;
    double max_component = 0.0;
};

/// Source of the prescribed flow driving the moving-domain scalar problem.
class FlowSource {
public:
    virtual ~FlowSource() = default;
    /// Velocity in flattened coordinates for the given geometry snapshot.
    virtual FlowSample sample(double t, const GeometryTensors& g) const = 0;
    /// u.N on Sigma_+ as a function of the surface alone (used to advance the
    /// kinematic equation without rebuilding volume tensors).
    virtual std::vector<double> kinematic_speed(double t, const SurfaceFunction& eta) const = 0;
};

/// Stream-function flow built in moving coordinates y and pulled back through
/// the flattening map, so div_A u = 0 holds analytically:
///   psi(t, y) = amplitude e^{-a t} sin(2 pi mode y1 / L1) rho(y3),
///   U = (d_{y3} psi, 0, -d_{y1} psi),
///   rho(y3) = (y3 + d)^2 (envelope_c - y3)  [rho(-d) = rho'(-d) = 0].
/// The bottom is a no-slip wall; u3 vanishes there identically.
struct ManufacturedFlowParams {
    double amplitude = 0.0;
    double decay_rate = 0.0;
    int mode = 1;
    double envelope_c = 1.0;

    void validate(double d) const {
        if (amplitude < 0.0) throw ConfigError("flow amplitude must be >= 0");
        if (decay_rate < 0.0) throw ConfigError("flow decay rate must be >= 0");
        if (mode < 1) throw ConfigError("flow mode must be >= 1");
        if (!(envelope_c > -d)) throw ConfigError("flow envelope root must satisfy c > -d");
    }
};

class ManufacturedFlow final : public FlowSource {
public:
    ManufacturedFlow(const ManufacturedFlowParams& params, const SlabGrid& grid);

    FlowSample sample(double t, const GeometryTensors& g) const override;
    std::vector<double> kinematic_speed(double t, const SurfaceFunction& eta) const override;

    const ManufacturedFlowParams& params() const { return params_; }

private:
    double psi_y3(double t, double y1, double y3) const;  // d psi / d y3
    double psi_y1(double t, double y1, double y3) const;  // d psi / d y1
    ManufacturedFlowParams params_;
    SlabGrid grid_;
};

/// Adapter exposing a rigid prescribed family as a flow source; the surface
/// speed is identically zero (valid for frozen-surface runs where the family
/// satisfies u3 = 0 on Sigma_+).
class RigidFamilyFlow final : public FlowSource {
public:
    RigidFamilyFlow(VelocityFamily family, const VelocityParams& params, const SlabGrid& grid)
        : family_(family), params_(params), grid_(grid) {}

    FlowSample sample(double t, const GeometryTensors& g) const override;
    std::vector<double> kinematic_speed(double t, const SurfaceFunction& eta) const override;

private:
    VelocityFamily family_;
    VelocityParams params_;
    SlabGrid grid_;
};

/// Discrete div_A u residual field for diagnostics.
Field3 discrete_div_A(const Field3& u1, const Field3& u2, const Field3& u3,
                      const GeometryTensors& g);

} // namespace slab
