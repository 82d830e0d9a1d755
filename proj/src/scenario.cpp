#include "slab/scenario.hpp"

#include <json.hpp>

#include <set>

namespace slab {

using nlohmann::json;

const char* to_string(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::trajectory: return "trajectory";
    case ExperimentKind::eigen_sweep: return "eigen-sweep";
    case ExperimentKind::coercivity_audit: return "coercivity-audit";
    case ExperimentKind::envelope_check: return "envelope-check";
    case ExperimentKind::refinement_study: return "refinement-study";
    }
    return "?";
}

const char* to_string(Theta0Preset p) {
    switch (p) {
    case Theta0Preset::equilibrium: return "equilibrium";
    case Theta0Preset::vertical_eigenmode: return "vertical-eigenmode";
    case Theta0Preset::random_band_limited: return "random-band-limited";
    case Theta0Preset::spreading_bump: return "spreading-bump";
    }
    return "?";
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError("config error at " + path + ": " + msg);
}

void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& known) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) fail(path + "." + it.key(), "unknown key");
}

double get_number(const json& j, const std::string& path, const std::string& key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number()) fail(path + "." + key, "expected a number");
    return j[key].get<double>();
}

int get_int(const json& j, const std::string& path, const std::string& key, int dflt) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number_integer()) fail(path + "." + key, "expected an integer");
    return j[key].get<int>();
}

std::string get_string(const json& j, const std::string& path, const std::string& key,
                       const std::string& dflt) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_string()) fail(path + "." + key, "expected a string");
    return j[key].get<std::string>();
}

bool get_bool(const json& j, const std::string& path, const std::string& key, bool dflt) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_boolean()) fail(path + "." + key, "expected a boolean");
    return j[key].get<bool>();
}

// beta entries accept a nonnegative number or the literal "inf".
double get_beta(const json& j, const std::string& path, const std::string& key, double dflt) {
    if (!j.contains(key)) return dflt;
    const json& v = j[key];
    double b;
    if (v.is_string()) {
        if (v.get<std::string>() != "inf") fail(path + "." + key, "expected a number or \"inf\"");
        b = kInf;
    } else if (v.is_number()) {
        b = v.get<double>();
    } else {
        fail(path + "." + key, "expected a number or \"inf\"");
    }
    if (b < 0.0) fail(path + "." + key, "beta must be >= 0");
    return b;
}

std::vector<double> get_beta_list(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers / \"inf\"");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        json wrap;
        wrap["v"] = j[i];
        out.push_back(get_beta(wrap, path + "[" + std::to_string(i) + "]", "v", 0.0));
    }
    return out;
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown(j, "$",
                   {"experiment", "regime", "domain", "grid", "bc", "velocity", "flow", "surface",
                    "theta0", "run", "sweep", "audit", "seed"});

    Scenario s;
    const std::string kind = get_string(j, "$", "experiment", "trajectory");
    if (kind == "trajectory")
        s.experiment = ExperimentKind::trajectory;
    else if (kind == "eigen-sweep")
        s.experiment = ExperimentKind::eigen_sweep;
    else if (kind == "coercivity-audit")
        s.experiment = ExperimentKind::coercivity_audit;
    else if (kind == "envelope-check")
        s.experiment = ExperimentKind::envelope_check;
    else if (kind == "refinement-study")
        s.experiment = ExperimentKind::refinement_study;
    else
        fail("$.experiment", "unknown experiment kind: " + kind);

    const std::string regime = get_string(j, "$", "regime", "rigid");
    if (regime == "rigid")
        s.moving = false;
    else if (regime == "moving")
        s.moving = true;
    else
        fail("$.regime", "expected \"rigid\" or \"moving\"");

    if (j.contains("domain")) {
        const json& d = j["domain"];
        reject_unknown(d, "$.domain", {"L1", "L2", "d", "horizontal"});
        s.domain.L1 = get_number(d, "$.domain", "L1", 1.0);
        s.domain.L2 = get_number(d, "$.domain", "L2", 1.0);
        s.domain.d = get_number(d, "$.domain", "d", 1.0);
        const std::string h = get_string(d, "$.domain", "horizontal", "periodic");
        if (h == "periodic")
            s.domain.horizontal_kind = HorizontalKind::periodic;
        else if (h == "truncated_infinite")
            s.domain.horizontal_kind = HorizontalKind::truncated_infinite;
        else
            fail("$.domain.horizontal", "expected \"periodic\" or \"truncated_infinite\"");
    }
    s.domain.validate();

    s.grid.domain = s.domain;
    if (j.contains("grid")) {
        const json& g = j["grid"];
        reject_unknown(g, "$.grid", {"N1", "N2", "Nz"});
        s.grid.N1 = get_int(g, "$.grid", "N1", 16);
        s.grid.N2 = get_int(g, "$.grid", "N2", 16);
        s.grid.Nz = get_int(g, "$.grid", "Nz", 17);
    } else {
        s.grid.N1 = 16;
        s.grid.N2 = 16;
        s.grid.Nz = 17;
    }
    s.grid.validate();

    s.bc.d = s.domain.d;
    if (j.contains("bc")) {
        const json& b = j["bc"];
        reject_unknown(b, "$.bc", {"beta_plus", "beta_minus", "kappa", "theta_bar", "eq_constant"});
        s.bc.beta_plus = get_beta(b, "$.bc", "beta_plus", 0.0);
        s.bc.beta_minus = get_beta(b, "$.bc", "beta_minus", 0.0);
        s.bc.kappa = get_number(b, "$.bc", "kappa", 1.0);
        s.bc.theta_bar = get_number(b, "$.bc", "theta_bar", 0.0);
        s.eq_constant = get_number(b, "$.bc", "eq_constant", 0.0);
    }
    s.bc.validate();

    if (j.contains("velocity")) {
        const json& v = j["velocity"];
        reject_unknown(v, "$.velocity", {"family", "amplitude", "decay_rate"});
        s.velocity_family =
            velocity_family_from_string(get_string(v, "$.velocity", "family", "zero"));
        s.velocity_params.amplitude = get_number(v, "$.velocity", "amplitude", 0.0);
        s.velocity_params.decay_rate = get_number(v, "$.velocity", "decay_rate", 0.0);
        if (s.velocity_params.amplitude < 0.0) fail("$.velocity.amplitude", "must be >= 0");
        if (s.velocity_params.decay_rate < 0.0) fail("$.velocity.decay_rate", "must be >= 0");
    }

    s.flow_params.envelope_c = s.domain.d;
    if (j.contains("flow")) {
        const json& f = j["flow"];
        reject_unknown(f, "$.flow",
                       {"amplitude", "decay_rate", "mode", "envelope_c", "frozen_surface"});
        s.flow_params.amplitude = get_number(f, "$.flow", "amplitude", 0.0);
        s.flow_params.decay_rate = get_number(f, "$.flow", "decay_rate", 0.0);
        s.flow_params.mode = get_int(f, "$.flow", "mode", 1);
        s.flow_params.envelope_c = get_number(f, "$.flow", "envelope_c", s.domain.d);
        s.frozen_surface = get_bool(f, "$.flow", "frozen_surface", false);
        s.flow_params.validate(s.domain.d);
    }

    if (j.contains("surface")) {
        const json& f = j["surface"];
        reject_unknown(f, "$.surface", {"amplitude", "mode1", "mode2"});
        s.surface.amplitude = get_number(f, "$.surface", "amplitude", 0.0);
        s.surface.mode1 = get_int(f, "$.surface", "mode1", 1);
        s.surface.mode2 = get_int(f, "$.surface", "mode2", 0);
    }

    if (j.contains("theta0")) {
        const json& t = j["theta0"];
        reject_unknown(t, "$.theta0", {"preset", "amplitude", "width"});
        const std::string p = get_string(t, "$.theta0", "preset", "equilibrium");
        if (p == "equilibrium")
            s.theta0.preset = Theta0Preset::equilibrium;
        else if (p == "vertical-eigenmode")
            s.theta0.preset = Theta0Preset::vertical_eigenmode;
        else if (p == "random-band-limited")
            s.theta0.preset = Theta0Preset::random_band_limited;
        else if (p == "spreading-bump")
            s.theta0.preset = Theta0Preset::spreading_bump;
        else
            fail("$.theta0.preset", "unknown preset: " + p);
        s.theta0.amplitude = get_number(t, "$.theta0", "amplitude", 1.0);
        s.theta0.width = get_number(t, "$.theta0", "width", 0.25);
        if (!(s.theta0.width > 0.0)) fail("$.theta0.width", "must be positive");
    }

    if (j.contains("run")) {
        const json& r = j["run"];
        reject_unknown(r, "$.run", {"T", "dt", "output_stride"});
        s.run.T = get_number(r, "$.run", "T", 1.0);
        s.run.dt = get_number(r, "$.run", "dt", 0.01);
        s.run.output_stride = get_int(r, "$.run", "output_stride", 1);
    }
    if (!(s.run.dt > 0.0)) fail("$.run.dt", "dt must be positive");
    if (!(s.run.T > 0.0)) fail("$.run.T", "run length must be positive");
    if (s.run.output_stride < 1) fail("$.run.output_stride", "stride must be >= 1");

    if (j.contains("sweep")) {
        const json& w = j["sweep"];
        reject_unknown(w, "$.sweep", {"beta_plus", "beta_minus"});
        if (w.contains("beta_plus")) s.sweep.beta_plus = get_beta_list(w["beta_plus"], "$.sweep.beta_plus");
        if (w.contains("beta_minus"))
            s.sweep.beta_minus = get_beta_list(w["beta_minus"], "$.sweep.beta_minus");
    }
    if (s.experiment == ExperimentKind::eigen_sweep &&
        (s.sweep.beta_plus.empty() || s.sweep.beta_minus.empty()))
        fail("$.sweep", "eigen-sweep requires beta_plus and beta_minus lists");

    if (j.contains("audit")) {
        const json& a = j["audit"];
        reject_unknown(a, "$.audit", {"trials"});
        s.audit.trials = get_int(a, "$.audit", "trials", 100);
        if (s.audit.trials < 1) fail("$.audit.trials", "must be >= 1");
    }

    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() &&
            !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
            fail("$.seed", "expected a nonnegative integer");
        s.seed = j["seed"].get<std::uint64_t>();
    }
    return s;
}

namespace {

json beta_json(double b) {
    if (std::isinf(b)) return json("inf");
    return json(b);
}

} // namespace

std::string resolved_config(const Scenario& s) {
    json j;
    j["experiment"] = to_string(s.experiment);
    j["regime"] = s.moving ? "moving" : "rigid";
    j["domain"] = {{"L1", s.domain.L1},
                   {"L2", s.domain.L2},
                   {"d", s.domain.d},
                   {"horizontal", s.domain.horizontal_kind == HorizontalKind::periodic
                                      ? "periodic"
                                      : "truncated_infinite"}};
    j["grid"] = {{"N1", s.grid.N1}, {"N2", s.grid.N2}, {"Nz", s.grid.Nz}};
    j["bc"] = {{"beta_plus", beta_json(s.bc.beta_plus)},
               {"beta_minus", beta_json(s.bc.beta_minus)},
               {"kappa", s.bc.kappa},
               {"theta_bar", s.bc.theta_bar},
               {"eq_constant", s.eq_constant}};
    j["velocity"] = {{"family", to_string(s.velocity_family)},
                     {"amplitude", s.velocity_params.amplitude},
                     {"decay_rate", s.velocity_params.decay_rate}};
    j["flow"] = {{"amplitude", s.flow_params.amplitude},
                 {"decay_rate", s.flow_params.decay_rate},
                 {"mode", s.flow_params.mode},
                 {"envelope_c", s.flow_params.envelope_c},
                 {"frozen_surface", s.frozen_surface}};
    j["surface"] = {{"amplitude", s.surface.amplitude},
                    {"mode1", s.surface.mode1},
                    {"mode2", s.surface.mode2}};
    j["theta0"] = {{"preset", to_string(s.theta0.preset)},
                   {"amplitude", s.theta0.amplitude},
                   {"width", s.theta0.width}};
    j["run"] = {{"T", s.run.T}, {"dt", s.run.dt}, {"output_stride", s.run.output_stride}};
    if (!s.sweep.beta_plus.empty()) {
        json bp = json::array(), bm = json::array();
        for (double b : s.sweep.beta_plus) bp.push_back(beta_json(b));
        for (double b : s.sweep.beta_minus) bm.push_back(beta_json(b));
        j["sweep"] = {{"beta_plus", bp}, {"beta_minus", bm}};
    }
    j["audit"] = {{"trials", s.audit.trials}};
    j["seed"] = s.seed;
    return j.dump(2);
}

} // namespace slab
