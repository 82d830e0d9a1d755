#pragma once

#include "slab/decay.hpp"
#include "slab/moving_sim.hpp"
#include "slab/rigid_sim.hpp"
#include "slab/scenario.hpp"

#include <string>

namespace slab {

/// Outcome of one experiment invocation.  exit_code: 0 pass, 1 envelope
/// gate failure (config and numerical failures surface as exceptions and are
/// mapped to 2 / 3 by the CLI).
struct ExperimentResult {
    int exit_code = 0;
    std::string summary_json;
    std::vector<std::string> output_files;
};

ExperimentResult run_experiment(const Scenario& s, const std::string& out_dir, int threads = 1);

/// Initial deviation field for the scenario's theta0 preset (deterministic
/// given the scenario seed).
Field3 build_theta0(const Scenario& s);

/// Initial surface: amplitude cos(2 pi (m1 x1/L1 + m2 x2/L2)).
SurfaceFunction build_surface0(const Scenario& s);

/// Random admissible band-limited deviation field (test/audit helper):
/// modes |n| <= N/4, three vertical polynomial shapes per mode with
/// Dirichlet-wall factors where beta = inf.
Field3 random_band_limited(const SlabGrid& grid, const BoundaryCoefficients& bc,
                           double amplitude, std::uint64_t seed);

/// Sobolev norm ||f||_{H^s(Gamma)} via the mode sum.
double surface_sobolev_norm(const SlabGrid& grid, std::span<const double> values, double s);
/// ||grad_* f||_{H^s(Gamma)}.
double surface_grad_sobolev_norm(const SlabGrid& grid, std::span<const double> values, double s);

} // namespace slab
