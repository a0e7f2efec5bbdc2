#include "doctest.h"

#include "support/support.hpp"

#include "stt/errors.hpp"
#include "stt/plant.hpp"

#include <cmath>

using namespace stt;
using namespace stt::testing;

namespace {

// Open-loop omni robot under constant body velocities, integrated exactly.
Vec omni_closed_form(const Vec& x0, const Vec& v, double t)
{
    const double th0 = x0[2];
    const double th = th0 + v[2] * t;
    const double dx = (v[0] * (std::sin(th) - std::sin(th0)) + v[1] * (std::cos(th) - std::cos(th0))) / v[2];
    const double dy = (-v[0] * (std::cos(th) - std::cos(th0)) + v[1] * (std::sin(th) - std::sin(th0))) / v[2];
    return {x0[0] + dx, x0[1] + dy, th};
}

double open_loop_error(double h)
{
    const OmniRobot robot;
    const Vec v{1.0, 0.5, 0.8};
    const Vec w{0.0, 0.0, 0.0};
    Vec x{0.25, 0.25, 0.1};
    const double t_end = 4.0;
    const auto steps = static_cast<int>(std::lround(t_end / h));
    for (int k = 0; k < steps; ++k)
        x = rk4_step(robot, x, v, w, h);
    const Vec ref = omni_closed_form({0.25, 0.25, 0.1}, v, t_end);
    return std::max({std::abs(x[0] - ref[0]), std::abs(x[1] - ref[1]), std::abs(x[2] - ref[2])});
}

}  // namespace

TEST_CASE("omni kinematics")
{
    const OmniRobot r;
    const Vec zero{0, 0, 0};
    Vec d = r.derivative(Vec{0, 0, 0}, Vec{1, 0, 0}, zero);
    CHECK(d[0] == doctest::Approx(1.0));
    CHECK(d[1] == doctest::Approx(0.0));
    CHECK(d[2] == doctest::Approx(0.0));

    d = r.derivative(Vec{0, 0, M_PI / 2}, Vec{1, 0, 0}, zero);
    CHECK(std::abs(d[0]) < 1e-15);
    CHECK(d[1] == doctest::Approx(1.0));

    // Independent matrix-vector product with the embedded rotation.
    const double th = M_PI / 4;
    const double R[3][3] = {{std::cos(th), -std::sin(th), 0}, {std::sin(th), std::cos(th), 0}, {0, 0, 1}};
    const Vec v{1, 1, 0.2}, w{0.01, -0.01, 0};
    d = r.derivative(Vec{3, 4, th}, v, w);
    for (int i = 0; i < 3; ++i) {
        double want = w[i];
        for (int j = 0; j < 3; ++j)
            want += R[i][j] * v[j];
        CHECK(d[i] == doctest::Approx(want).epsilon(1e-14));
    }
    CHECK(d[0] == doctest::Approx(0.01));
    CHECK(d[1] == doctest::Approx(std::sqrt(2.0) - 0.01));
}

TEST_CASE("input gain eigenvalue")
{
    const OmniRobot r;
    CHECK(r.input_gain_min_eig(Vec{0, 0, 0}) == doctest::Approx(1.0));
    CHECK(r.input_gain_min_eig(Vec{0, 0, M_PI / 3}) == doctest::Approx(0.5));
    CHECK(r.input_gain_min_eig(Vec{0, 0, 2.0}) < 0.0);
}

TEST_CASE("disturbance sources")
{
    DisturbanceModel none;
    DisturbanceSource z(none, 3);
    for (double w : z.sample(1.0))
        CHECK(w == 0.0);

    DisturbanceModel uni{DisturbanceKind::Uniform, 0.05, 42};
    DisturbanceSource a(uni, 3), b(uni, 3);
    for (int k = 0; k < 1000; ++k) {
        const Vec wa = a.sample(0.01 * k);
        const Vec wb = b.sample(0.01 * k);
        CHECK(wa == wb);
        for (double w : wa)
            CHECK(std::abs(w) <= 0.05);
    }
    DisturbanceSource c({DisturbanceKind::Uniform, 0.05, 43}, 3);
    DisturbanceSource d(uni, 3);
    CHECK(c.sample(0.0) != d.sample(0.0));

    DisturbanceModel sine{DisturbanceKind::Sinusoidal, 0.05, 0, 0.5, 0.3};
    DisturbanceSource s(sine, 2);
    double peak = 0.0;
    for (int k = 0; k < 1000; ++k)
        for (double w : s.sample(0.01 * k))
            peak = std::max(peak, std::abs(w));
    CHECK(peak <= 0.05);
    CHECK(peak > 0.049);
}

TEST_CASE("disturbance kind names")
{
    CHECK(parse_disturbance_kind("uniform") == DisturbanceKind::Uniform);
    CHECK(to_string(DisturbanceKind::Sinusoidal) == "sinusoidal");
    CHECK_THROWS_AS(parse_disturbance_kind("gaussian"), ConfigError);
}

TEST_CASE("RK4 convergence order on the open-loop robot")
{
    const double e1 = open_loop_error(0.02);
    const double e2 = open_loop_error(0.01);
    const double e3 = open_loop_error(0.005);
    const double order1 = std::log2(e1 / e2);
    const double order2 = std::log2(e2 / e3);
    CHECK(order1 >= 3.5);
    CHECK(order2 >= 3.5);
}

TEST_CASE("case study closed loop")
{
    const Scenario sc = case_study();
    const Synthesis syn = synthesize(sc);
    const SimTrace tr = run_closed_loop(sc, syn, syn.tube);
    CHECK(tr.completed);
    CHECK(tr.reached);
    CHECK(tr.safe);
    CHECK(tr.contained);
    CHECK(tr.stayed);
    CHECK_FALSE(tr.failure);
    CHECK(tr.min_gain_eig > 0.0);
    CHECK(tr.max_disturbance <= 0.05);
    CHECK(tr.t.front() == 0.0);
    CHECK(tr.t.back() == doctest::Approx(100.0));
    REQUIRE(tr.reach_time);
    CHECK(*tr.reach_time <= 80.0);
    // Rows are time-ordered and the active label is set inside each detour.
    for (std::size_t k = 1; k < tr.rows(); ++k)
        REQUIRE(tr.t[k] > tr.t[k - 1]);
    for (std::size_t k = 0; k < tr.rows(); ++k)
        if (tr.t[k] > syn.problem.plans[1].t_in && tr.t[k] < syn.problem.plans[1].t_out)
            CHECK(tr.active[k] == 2);
}

TEST_CASE("symmetric equilibrium stays put")
{
    Scenario sc = case_study();
    sc.task.unsafe.clear();
    sc.task.d_u.clear();
    sc.task.target = sc.task.initial;
    sc.task.eta = sc.task.x0;
    sc.plant.disturbance.kind = DisturbanceKind::None;
    const Synthesis syn = synthesize(sc);
    const SimTrace tr = run_closed_loop(sc, syn, syn.tube);
    CHECK(tr.ok());
    for (std::size_t k = 0; k < tr.rows(); ++k) {
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(std::abs(tr.x[k][i] - sc.plant.initial_state[i]) < 1e-12);
            CHECK(std::abs(tr.u[k][i]) < 1e-9);
        }
    }
}

TEST_CASE("initial state outside the tube is rejected before stepping")
{
    Scenario sc = case_study();
    const Synthesis syn = synthesize(sc);
    sc.plant.initial_state = {0.6, 0.25, 0.0};
    CHECK_THROWS_AS(run_closed_loop(sc, syn, syn.tube), ConfigError);
}

TEST_CASE("a weak controller lets the state escape and the run records it")
{
    Scenario sc = case_study();
    sc.controller.kappa = 1e-4;
    sc.plant.disturbance.bound = 0.5;
    const Synthesis syn = synthesize(sc);
    const SimTrace tr = run_closed_loop(sc, syn, syn.tube);
    CHECK_FALSE(tr.completed);
    CHECK_FALSE(tr.contained);
    CHECK_FALSE(tr.ok());
    REQUIRE(tr.failure);
    CHECK(tr.failure->dim.has_value());
    CHECK(std::abs(*tr.failure->normalized_error) >= 1.0);
    CHECK(tr.failure->time > 0.0);
    CHECK(tr.failure->time < 100.0);
}

TEST_CASE("integrator plant in three task dimensions")
{
    std::mt19937_64 rng(4);
    const RandomScenario rs = [&] {
        for (;;) {
            RandomScenario r = random_scenario(rng);
            if (r.task.dims() == 3)
                return r;
        }
    }();
    const TubeProblem problem = make_problem(rs.task, rs.params);
    const Tube tube = evolve_tube(problem);
    const SingleIntegrator plant(3, -0.2);
    const DisturbanceModel dist{DisturbanceKind::Uniform, 0.05, 9};
    SimOptions opts;
    opts.dt = 0.01;
    opts.stay_horizon = 5.0;
    // The initial band is only as wide as the narrower of S and T, so x0 need not lie in it.
    Vec start;
    for (std::size_t i = 0; i < 3; ++i)
        start.push_back(0.5 * (tube.lower(i, 0) + tube.upper(i, 0)));
    const SimTrace tr = simulate(rs.task, tube, problem.plans, ControllerConfig{}, plant, dist,
                                 start, opts);
    CHECK(tr.ok());
}

TEST_CASE("simulation option checks")
{
    SimOptions o;
    o.dt = 0.0;
    CHECK_THROWS_AS(validate_sim_options(o), ConfigError);
    o.dt = 0.01;
    o.stay_horizon = -1.0;
    CHECK_THROWS_AS(validate_sim_options(o), ConfigError);
    CHECK_THROWS_AS(make_dynamics("omni", 2), ConfigError);
    CHECK_THROWS_AS(make_dynamics("quadrotor", 3), ConfigError);
}
