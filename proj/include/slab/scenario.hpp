#pragma once

#include "slab/grid.hpp"
#include "slab/moving_flow.hpp"
#include "slab/types.hpp"
#include "slab/velocity.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace slab {

enum class ExperimentKind {
    trajectory,
    eigen_sweep,
    coercivity_audit,
    envelope_check,
    refinement_study,
};

const char* to_string(ExperimentKind k);

enum class Theta0Preset { equilibrium, vertical_eigenmode, random_band_limited, spreading_bump };

const char* to_string(Theta0Preset p);

struct Theta0Spec {
    Theta0Preset preset = Theta0Preset::equilibrium;
    double amplitude = 1.0;
    double width = 0.25; // horizontal bump width (spreading_bump)
};

struct SurfaceSpec {
    double amplitude = 0.0;
    int mode1 = 1;
    int mode2 = 0;
};

struct RunSpec {
    double T = 1.0;
    double dt = 0.01;
    int output_stride = 1;
};

struct SweepSpec {
    std::vector<double> beta_plus;  // entries may be kInf
    std::vector<double> beta_minus;
};

struct AuditSpec {
    int trials = 100;
};

/// Fully resolved experiment description.  Deterministic given (file, seed).
struct Scenario {
    ExperimentKind experiment = ExperimentKind::trajectory;
    bool moving = false;
    SlabDomain domain;
    SlabGrid grid;
    BoundaryCoefficients bc;
    double eq_constant = 0.0;
    VelocityFamily velocity_family = VelocityFamily::zero;
    VelocityParams velocity_params;
    ManufacturedFlowParams flow_params;
    bool frozen_surface = false;
    SurfaceSpec surface;
    Theta0Spec theta0;
    RunSpec run;
    SweepSpec sweep;
    AuditSpec audit;
    std::uint64_t seed = 0;
};

/// Parses and validates the JSON scenario text: defaults filled, "inf"
/// accepted for beta entries, unknown keys rejected with field paths.
Scenario parse_scenario(const std::string& text);

/// Serializes the resolved scenario back to JSON; parse(resolve(s)) == s.
std::string resolved_config(const Scenario& s);

} // namespace slab
