#pragma once

#include "slab/grid.hpp"

namespace slab {

enum class VelocityFamily { zero, shear, cellular };

VelocityFamily velocity_family_from_string(const std::string& s);
const char* to_string(VelocityFamily f);

struct VelocityParams {
    double amplitude = 0.0;
    double decay_rate = 0.0; // temporal factor e^{-decay_rate * t}
};

/// A prescribed divergence-free velocity snapshot with u3 = 0 on both walls.
struct VelocitySample {
    SlabGrid grid;
    double time = 0.0;
    Field3 u1, u2, u3;
    double divergence_residual = 0.0; // max |div u| (spectral+FD derivatives)
    double wall_trace_residual = 0.0; // max |u3| on the walls
    double l2_norm = 0.0;
    double max_component = 0.0; // sup-norm over components, for CFL checks
};

/// Prescribed families:
///  zero     -> u = 0;
///  shear    -> u = (amplitude e^{-a t} sin(pi x3 / d), 0, 0);
///  cellular -> the stream-function cell
///              psi = amplitude e^{-a t} sin(2 pi x1/L1) sin(pi x3/d),
///              u = (-d3 psi, 0, d1 psi), so u3 vanishes at both walls.
VelocitySample make_velocity_rigid(VelocityFamily family, const VelocityParams& params,
                                   double t, const SlabGrid& grid);

/// Discrete divergence (spectral horizontal, second-order FD vertical).
Field3 discrete_divergence(const Field3& u1, const Field3& u2, const Field3& u3);

} // namespace slab
