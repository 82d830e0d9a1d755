#include "slab/experiments.hpp"
#include "slab/io.hpp"
#include "slab/rng.hpp"
#include "slab/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace slab;

TEST_CASE("minimal rigid config fills defaults") {
    Scenario s = parse_scenario("{}");
    CHECK(s.experiment == ExperimentKind::trajectory);
    CHECK_FALSE(s.moving);
    CHECK(s.bc.kappa == 1.0);
    CHECK(s.bc.d == 1.0);
    CHECK(s.domain.L1 == 1.0);
    CHECK(s.domain.L2 == 1.0);
    CHECK(s.velocity_family == VelocityFamily::zero);
    CHECK(s.grid.N1 == 16);
    CHECK(s.run.dt == 0.01);
}

TEST_CASE("inf literals select the mixed regime") {
    Scenario s = parse_scenario(R"({"bc": {"beta_plus": "inf", "beta_minus": 0}})");
    CHECK(std::isinf(s.bc.beta_plus));
    CHECK(s.bc.beta_minus == 0.0);
    CHECK(s.bc.regime() == BetaRegime::top_dirichlet);
    // The regime selects the (inf, 0) limit profile: theta_eq = theta_bar + 0 x3.
    Scenario s2 = parse_scenario(
        R"({"bc": {"beta_plus": "inf", "beta_minus": 0, "theta_bar": 2.0}})");
    EquilibriumProfile p = equilibrium_profile(s2.bc);
    CHECK(p.slope() == doctest::Approx(0.0));
    CHECK(p.top_value() == doctest::Approx(2.0));
}

TEST_CASE("schema violations carry field paths") {
    CHECK_THROWS_WITH_AS(parse_scenario(R"({"bc": {"beta_plus": -1}})"),
                         doctest::Contains("$.bc.beta_plus"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario(R"({"run": {"dt": -0.1}})"),
                         doctest::Contains("$.run.dt"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario(R"({"grid": {"N1": 7}})"), doctest::Contains("N1"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario(R"({"mystery": 1})"), doctest::Contains("$.mystery"),
                         ConfigError);
    CHECK_THROWS_AS(parse_scenario("not json"), ConfigError);
}

TEST_CASE("resolved config round-trips to an equal scenario") {
    const std::string text = R"({
        "experiment": "trajectory",
        "regime": "moving",
        "domain": {"L1": 2.0, "L2": 1.5, "d": 0.8},
        "grid": {"N1": 8, "N2": 4, "Nz": 9},
        "bc": {"beta_plus": "inf", "beta_minus": 0.25, "kappa": 0.3, "theta_bar": 1.0},
        "flow": {"amplitude": 0.1, "decay_rate": 0.4},
        "surface": {"amplitude": 0.02},
        "theta0": {"preset": "vertical-eigenmode", "amplitude": 0.5},
        "run": {"T": 0.25, "dt": 0.005, "output_stride": 5},
        "seed": 42
    })";
    Scenario a = parse_scenario(text);
    Scenario b = parse_scenario(resolved_config(a));
    CHECK(resolved_config(a) == resolved_config(b));
    CHECK(b.moving == a.moving);
    CHECK(b.seed == a.seed);
    CHECK(std::isinf(b.bc.beta_plus));
    CHECK(b.run.output_stride == 5);
}

TEST_CASE("counter rng is stateless and order-independent") {
    CounterRng a{123}, b{123}, c{124};
    CHECK(a.uniform(7) == b.uniform(7));
    CHECK(a.uniform(7) != c.uniform(7));
    const double later = a.uniform(1000);
    (void)a.uniform(3);
    CHECK(a.uniform(1000) == later);
    for (std::uint64_t i = 0; i < 100; ++i) {
        const double u = a.uniform(i);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("grid function serialization round-trips bit-exactly") {
    SlabGrid g;
    g.domain.L1 = 1.25;
    g.domain.L2 = 0.75;
    g.domain.d = 2.0;
    g.N1 = 4;
    g.N2 = 6;
    g.Nz = 5;
    Field3 f(g);
    CounterRng rng{9};
    for (std::size_t i = 0; i < f.size(); ++i) f.data()[i] = rng.symmetric(i) * 1e3;
    std::stringstream ss;
    write_grid_function(ss, f, 1.5);
    GridFunctionFile back = read_grid_function(ss);
    CHECK(back.time == 1.5);
    CHECK(back.field.grid().same_layout(g));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(back.field.data()[i] == f.data()[i]);
}

TEST_CASE("theta0 presets are deterministic given the seed") {
    Scenario s = parse_scenario(
        R"({"theta0": {"preset": "random-band-limited", "amplitude": 1.0}, "seed": 5})");
    Field3 a = build_theta0(s);
    Field3 b = build_theta0(s);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.data()[i] == b.data()[i]);
    Scenario s2 = s;
    s2.seed = 6;
    Field3 c = build_theta0(s2);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        diff = std::max(diff, std::abs(a.data()[i] - c.data()[i]));
    CHECK(diff > 0.0);
}

TEST_CASE("run_experiment: tiny rigid trajectory produces deterministic outputs") {
    const std::string text = R"({
        "experiment": "trajectory",
        "bc": {"beta_plus": "inf", "beta_minus": "inf", "theta_bar": 1.0},
        "grid": {"N1": 4, "N2": 4, "Nz": 33},
        "theta0": {"preset": "vertical-eigenmode"},
        "run": {"T": 0.2, "dt": 0.002, "output_stride": 10}
    })";
    Scenario s = parse_scenario(text);
    ExperimentResult r1 = run_experiment(s, "/tmp/slablab_test/run1");
    ExperimentResult r2 = run_experiment(s, "/tmp/slablab_test/run2");
    CHECK(r1.exit_code == 0);
    auto slurp = [](const std::string& p) {
        std::ifstream is(p);
        std::stringstream ss;
        ss << is.rdbuf();
        return ss.str();
    };
    CHECK(slurp("/tmp/slablab_test/run1/trajectory.csv") ==
          slurp("/tmp/slablab_test/run2/trajectory.csv"));
    CHECK(r1.summary_json.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("run_experiment: eigen sweep CSV with monotonicity verified") {
    const std::string text = R"({
        "experiment": "eigen-sweep",
        "sweep": {"beta_plus": [0, 1, 10, "inf"], "beta_minus": [0, 1, 10, "inf"]}
    })";
    Scenario s = parse_scenario(text);
    ExperimentResult r = run_experiment(s, "/tmp/slablab_test/sweep", 2);
    CHECK(r.exit_code == 0);
    std::ifstream is("/tmp/slablab_test/sweep/eigen_sweep.csv");
    std::string header;
    std::getline(is, header);
    CHECK(header == "beta_plus,beta_minus,kappa,d,mu,lower_bound,regime");
    int rows = 0;
    for (std::string line; std::getline(is, line);) ++rows;
    CHECK(rows == 16);
}

TEST_CASE("run_experiment: coercivity audit passes its floor") {
    const std::string text = R"({
        "experiment": "coercivity-audit",
        "bc": {"beta_plus": 1.0, "beta_minus": 2.0},
        "grid": {"N1": 8, "N2": 8, "Nz": 17},
        "audit": {"trials": 10}
    })";
    Scenario s = parse_scenario(text);
    ExperimentResult r = run_experiment(s, "/tmp/slablab_test/audit", 2);
    CHECK(r.exit_code == 0);
}
