#include "slab/decay.hpp"

#include <cmath>

namespace slab {

namespace {

struct LineFit {
    double slope = 0.0;
    double r2 = 1.0;
};

LineFit least_squares_log(std::span<const double> t, std::span<const double> logn) {
    const int n = static_cast<int>(t.size());
    double tm = 0.0, ym = 0.0;
    for (int i = 0; i < n; ++i) {
        tm += t[i];
        ym += logn[i];
    }
    tm /= n;
    ym /= n;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        stt += (t[i] - tm) * (t[i] - tm);
        sty += (t[i] - tm) * (logn[i] - ym);
        syy += (logn[i] - ym) * (logn[i] - ym);
    }
    LineFit f;
    f.slope = sty / stt;
    if (syy > 0.0) {
        const double ss_res = syy - sty * sty / stt;
        f.r2 = 1.0 - std::max(0.0, ss_res) / syy;
    }
    return f;
}

// Second-order recursion for I(t) = int_0^t e^{-mu (t-s)} g(s) ds.
std::vector<double> exp_convolution(double mu, std::span<const double> g,
                                    std::span<const double> t) {
    std::vector<double> out(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double dt = t[i] - t[i - 1];
        const double e = std::exp(-mu * dt);
        out[i] = e * out[i - 1] + 0.5 * dt * (e * g[i - 1] + g[i]);
    }
    return out;
}

} // namespace

RateFit fit_decay_rate(const DecaySeries& series, double window_fraction) {
    series.validate();
    if (!(window_fraction > 0.0 && window_fraction <= 1.0))
        throw ConfigError("window fraction must lie in (0, 1]");
    const int n = static_cast<int>(series.t.size());
    const int start = static_cast<int>(std::floor(n * (1.0 - window_fraction)));
    const int m = n - start;
    if (m < 10) throw ConfigError("rate fit needs at least 10 samples in the window");

    std::vector<double> tt(m), ln(m);
    for (int i = 0; i < m; ++i) {
        const double v = series.norm[start + i];
        if (!(v > 0.0)) throw ConfigError("rate fit window contains a nonpositive norm");
        tt[i] = series.t[start + i];
        ln[i] = std::log(v);
    }

    LineFit full = least_squares_log(tt, ln);
    RateFit fit;
    fit.rate = -full.slope;
    fit.r_squared = full.r2;
    fit.samples_used = m;
    fit.low_confidence = full.r2 < 0.999;

    if (m >= 8) {
        const int half = m / 2;
        LineFit a = least_squares_log(std::span<const double>(tt).subspan(0, half),
                                      std::span<const double>(ln).subspan(0, half));
        LineFit b = least_squares_log(std::span<const double>(tt).subspan(half),
                                      std::span<const double>(ln).subspan(half));
        const double scale = std::max({std::abs(a.slope), std::abs(b.slope), 1e-30});
        fit.curvature_flag = std::abs(a.slope - b.slope) > 0.01 * scale;
    }
    return fit;
}

std::vector<double> envelope_rigid(double theta0_norm, double mu, double grad_eq,
                                   std::span<const double> g, std::span<const double> t) {
    if (!(mu > 0.0)) throw ConfigError("envelope_rigid requires mu > 0");
    std::vector<double> env(t.size());
    std::vector<double> conv;
    if (!g.empty()) {
        if (g.size() != t.size()) throw ConfigError("forcing/time size mismatch");
        conv = exp_convolution(mu, g, t);
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        env[i] = std::exp(-mu * (t[i] - t[0])) * theta0_norm;
        if (!conv.empty()) env[i] += std::abs(grad_eq) * conv[i];
    }
    return env;
}

std::vector<double> envelope_moving(MovingEnvelopeKind kind, const MovingEnvelopeInputs& in,
                                    std::span<const double> t) {
    std::vector<double> env(t.size());
    switch (kind) {
    case MovingEnvelopeKind::neumann_periodic: {
        if (!(in.mu_bar0 > 0.0)) throw ConfigError("neumann envelope requires mu_bar0 > 0");
        const double rate = in.mu_bar0 / (in.c0 * in.c1);
        for (std::size_t i = 0; i < t.size(); ++i)
            env[i] = std::exp(-rate * (t[i] - t[0])) * in.initial_norm;
        break;
    }
    case MovingEnvelopeKind::dirichlet_top: {
        if (!(in.mu_beta > 0.0)) throw ConfigError("dirichlet envelope requires mu_beta > 0");
        const double rate = in.mu_beta / (in.c0 * in.c0);
        std::vector<double> conv;
        if (!in.forcing.empty()) {
            if (in.forcing.size() != t.size()) throw ConfigError("forcing/time size mismatch");
            conv = exp_convolution(rate, in.forcing, t);
        }
        for (std::size_t i = 0; i < t.size(); ++i) {
            env[i] = std::exp(-rate * (t[i] - t[0])) * in.initial_norm;
            if (!conv.empty()) env[i] += in.C * std::abs(in.grad_eq) * conv[i];
        }
        break;
    }
    case MovingEnvelopeKind::general: {
        if (!(in.mu_beta > 0.0)) throw ConfigError("general envelope requires mu_beta > 0");
        // Envelopes the squared weighted norm with h^2 forcing.
        const double rate = in.mu_beta / (2.0 * in.c0 * in.c0);
        const double coeff = in.C * (in.grad_eq * in.grad_eq * in.c0 * in.c0 / in.mu_beta +
                                     0.5 * in.beta_plus * in.theta_gap * in.theta_gap);
        std::vector<double> conv;
        if (!in.forcing.empty()) {
            if (in.forcing.size() != t.size()) throw ConfigError("forcing/time size mismatch");
            std::vector<double> h2(in.forcing.size());
            for (std::size_t i = 0; i < h2.size(); ++i) h2[i] = in.forcing[i] * in.forcing[i];
            conv = exp_convolution(rate, h2, t);
        }
        for (std::size_t i = 0; i < t.size(); ++i) {
            env[i] = std::exp(-rate * (t[i] - t[0])) * in.initial_norm * in.initial_norm;
            if (!conv.empty()) env[i] += coeff * conv[i];
        }
        break;
    }
    }
    return env;
}

EnvelopeCheck check_envelope(const DecaySeries& series, std::span<const double> envelope) {
    series.validate();
    if (envelope.size() != series.t.size())
        throw ConfigError("envelope/series grid mismatch");
    EnvelopeCheck chk;
    chk.envelope.assign(envelope.begin(), envelope.end());
    chk.pass = true;
    chk.margin = kInf;
    for (std::size_t i = 0; i < envelope.size(); ++i) {
        const double slack = 1e-9 + 1e-3 * envelope[i];
        const double margin = envelope[i] - series.norm[i];
        if (margin < chk.margin) {
            chk.margin = margin;
            chk.worst_time = series.t[i];
        }
        if (series.norm[i] > envelope[i] + slack) chk.pass = false;
    }
    return chk;
}

} // namespace slab
