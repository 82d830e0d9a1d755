#pragma once

#include "slab/types.hpp"

#include <span>
#include <vector>

namespace slab {

/// Norm history of a trajectory: ||w|| (rigid) or ||w sqrt(J)|| (moving),
/// with the forcing samples used by the envelope and the floor metadata.
struct DecaySeries {
    std::vector<double> t;
    std::vector<double> norm;
    std::vector<double> forcing; // g(t_i) or h(t_i); may be empty
    double mu_floor = 0.0;
    double c0 = 1.0;
    double c1 = 1.0;

    void validate() const {
        if (t.size() != norm.size()) throw ConfigError("series time/norm size mismatch");
        if (!forcing.empty() && forcing.size() != t.size())
            throw ConfigError("series forcing size mismatch");
        for (std::size_t i = 1; i < t.size(); ++i)
            if (!(t[i] > t[i - 1])) throw ConfigError("series times must be strictly increasing");
        for (double n : norm)
            if (n < 0.0) throw ConfigError("series norms must be nonnegative");
    }
};

/// Least-squares slope of log(norm) over the trailing window.  The rate is
/// refused (low_confidence) when R^2 < 0.999; curvature_flag is set when
/// the two half-window rates disagree by more than 1% (the borderline
/// e^{-mu t}(1+t) profile triggers it while a clean exponential does not).
struct RateFit {
    double rate = 0.0;
    double r_squared = 1.0;
    bool low_confidence = false;
    bool curvature_flag = false;
    int samples_used = 0;
};
RateFit fit_decay_rate(const DecaySeries& series, double window_fraction = 0.5);

/// e^{-mu t}||theta_0|| + |grad_eq| int_0^t e^{-mu(t-s)} g(s) ds on the
/// sample grid (trapezoidal exponential convolution, O(dt^2)).
std::vector<double> envelope_rigid(double theta0_norm, double mu, double grad_eq,
                                   std::span<const double> g, std::span<const double> t);

enum class MovingEnvelopeKind { neumann_periodic, dirichlet_top, general };

/// Inputs for the moving envelopes.  The estimates' unquantified universal
/// constants are treated as the fit parameter C (rate-only checks set C = 1 and only gate
/// on the rate; calibrated checks fit C on early samples).
struct MovingEnvelopeInputs {
    double initial_norm = 0.0; // ||w sqrt(J(0))||; squared internally for `general`
    double c0 = 1.0;
    double c1 = 1.0;
    double mu_beta = 0.0;
    double mu_bar0 = 0.0;
    double grad_eq = 0.0;
    double beta_plus = 0.0;
    double theta_gap = 0.0; // |theta_bar - theta_eq| on Sigma_+
    double C = 1.0;
    std::vector<double> forcing; // g for dirichlet_top, h for general
};

/// Envelope values per time stamp.  Kinds:
///  neumann_periodic -> e^{-mu_bar0/(c0 c1) t} * initial_norm (no forcing);
///  dirichlet_top    -> rate mu_beta/c0^2 with C |grad_eq| * (g convolution);
///  general          -> envelopes the SQUARED norm at rate mu_beta/(2 c0^2)
///                      with forcing C (grad_eq^2 c0^2/mu_beta +
///                      beta_+/2 theta_gap^2) * (h^2 convolution).
std::vector<double> envelope_moving(MovingEnvelopeKind kind, const MovingEnvelopeInputs& in,
                                    std::span<const double> t);

/// Pointwise domination check: observed <= envelope + 1e-9 + 1e-3 envelope.
struct EnvelopeCheck {
    std::vector<double> envelope;
    double margin = 0.0;       // min over stamps of (envelope - observed)
    double worst_time = 0.0;
    bool pass = false;
};
EnvelopeCheck check_envelope(const DecaySeries& series, std::span<const double> envelope);

} // namespace slab
