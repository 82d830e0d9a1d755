#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace slab {

/// Invalid scenario/configuration input (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Runtime numerical failure: NaN, non-diffeomorphic geometry, CFL violation
/// (CLI exit code 3).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Which of the four trace-constraint cases of the solution space applies.
enum class BetaRegime {
    both_finite,      // beta in [0,inf)^2
    top_dirichlet,    // beta_plus = inf, beta_minus finite
    bottom_dirichlet, // beta_minus = inf, beta_plus finite
    both_dirichlet,   // beta = (inf, inf)
};

inline const char* to_string(BetaRegime r) {
    switch (r) {
    case BetaRegime::both_finite: return "both_finite";
    case BetaRegime::top_dirichlet: return "top_dirichlet";
    case BetaRegime::bottom_dirichlet: return "bottom_dirichlet";
    case BetaRegime::both_dirichlet: return "both_dirichlet";
    }
    return "?";
}

/// Heat-transfer coefficients beta = (beta_plus, beta_minus), each a
/// nonnegative extended real (infinity = perfectly conducting wall,
/// 0 = insulating wall), plus diffusivity, depth and the external
/// temperature difference theta_bar.
struct BoundaryCoefficients {
    double beta_plus = 0.0;
    double beta_minus = 0.0;
    double kappa = 1.0;
    double d = 1.0;
    double theta_bar = 0.0;

    BetaRegime regime() const {
        const bool top = std::isinf(beta_plus);
        const bool bot = std::isinf(beta_minus);
        if (top && bot) return BetaRegime::both_dirichlet;
        if (top) return BetaRegime::top_dirichlet;
        if (bot) return BetaRegime::bottom_dirichlet;
        return BetaRegime::both_finite;
    }

    bool is_neumann() const { return beta_plus == 0.0 && beta_minus == 0.0; }
    bool top_is_dirichlet() const { return std::isinf(beta_plus); }
    bool bottom_is_dirichlet() const { return std::isinf(beta_minus); }

    void validate() const {
        if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
        if (!(d > 0.0)) throw ConfigError("depth d must be positive");
        if (std::isnan(beta_plus) || beta_plus < 0.0)
            throw ConfigError("beta_plus must be >= 0 or inf");
        if (std::isnan(beta_minus) || beta_minus < 0.0)
            throw ConfigError("beta_minus must be >= 0 or inf");
        if (std::isnan(theta_bar) || std::isinf(theta_bar))
            throw ConfigError("theta_bar must be finite");
    }
};

} // namespace slab
