#include "doctest.h"

#include "support/support.hpp"

#include "stt/errors.hpp"
#include "stt/tube.hpp"

#include <cmath>

using namespace stt;
using namespace stt::testing;

namespace {

ObstaclePlan sample_plan()
{
    ObstaclePlan p;
    p.empty = false;
    p.t_in = 20;
    p.t_out = 30;
    p.t1 = 16;
    p.t2 = 34;
    p.dim = 0;
    p.psi = 2.1;
    p.rho_at_t1 = 1.0;
    p.rho_at_t2 = 3.0;
    return p;
}

TubeParams sample_params()
{
    TubeParams p;
    p.delta = 4;
    p.delta_t = 2;
    p.v = 0.5;
    p.dt = 0.01;
    p.eps_den = 0.005;
    p.track_tau = 0.5;
    return p;
}

RasTask free_task()
{
    RasTask t;
    t.initial = Box{{0, 0.5}, {0, 0.5}};
    t.target = Box{{11, 11.5}, {7, 7.5}};
    t.t_c = 80;
    t.x0 = {0.25, 0.25};
    t.eta = {11.25, 7.25};
    t.d_s = {0.25, 0.25};
    t.d_t = {0.25, 0.25};
    t.workspace = Box{{-1, 12.5}, {-1, 9}};
    t.state_dims = {0, 1};
    return t;
}

}  // namespace

TEST_CASE("smoothstep")
{
    CHECK(smoothstep(0.0, 0.3) == 0.0);
    CHECK(smoothstep(0.3, 0.3) == doctest::Approx(0.38079).epsilon(1e-5));
    CHECK(smoothstep(100.0, 0.3) == doctest::Approx(0.5));
    CHECK(smoothstep(-100.0, 0.3) == doctest::Approx(-0.5));
}

TEST_CASE("activation weights by phase")
{
    const ObstaclePlan p = sample_plan();
    const TubeParams params = sample_params();
    const auto tracking = activation_weights(p, params, 8.0);
    CHECK(tracking.track == doctest::Approx(1.0));
    CHECK(tracking.approach == doctest::Approx(0.0));
    CHECK(tracking.retreat == doctest::Approx(0.0));

    const auto approaching = activation_weights(p, params, 18.0);
    CHECK(approaching.track == doctest::Approx(0.0));
    CHECK(approaching.approach == doctest::Approx(1.0));
    CHECK(approaching.retreat == doctest::Approx(0.0));

    const auto retreating = activation_weights(p, params, 32.0);
    CHECK(retreating.track == doctest::Approx(0.0));
    CHECK(retreating.approach == doctest::Approx(0.0));
    CHECK(retreating.retreat == doctest::Approx(1.0));

    const auto after = activation_weights(p, params, 45.0);
    CHECK(after.track == doctest::Approx(1.0));

    // At t = 0 the leading term tanh(0) is zero, so tracking starts at one half.
    CHECK(activation_weights(p, params, 0.0).track == doctest::Approx(0.5));
}

TEST_CASE("approach target")
{
    const ObstaclePlan p = sample_plan();
    CHECK(approach_target(p, p.t1) == doctest::Approx(p.rho_at_t1));
    CHECK(approach_target(p, p.t1 - 3) == doctest::Approx(p.rho_at_t1));
    CHECK(approach_target(p, p.t_in) == p.psi);
    double prev = approach_target(p, p.t1);
    for (int k = 1; k < 4000; ++k) {
        const double t = p.t1 + (p.t_in - p.t1) * k / 4000.0;
        const double h = approach_target(p, t);
        // Strictly rising until tanh saturates in double precision near t_in.
        if (k < 2000)
            CHECK(h > prev);
        else
            CHECK(h >= prev);
        CHECK(h > 1.0);
        CHECK(h <= 2.1);
        prev = h;
    }
}

TEST_CASE("return target")
{
    const ObstaclePlan p = sample_plan();
    CHECK(return_target(p, p.t_out) == doctest::Approx(p.psi));
    CHECK(return_target(p, p.t2) == p.rho_at_t2);
    CHECK(return_target(p, p.t2 + 5) == p.rho_at_t2);
}

TEST_CASE("shapers")
{
    const ObstaclePlan p = sample_plan();
    const TubeParams params = sample_params();
    CHECK(approach_shaper(p, params, p.t_in, p.psi) == 0.0);
    CHECK(approach_shaper(p, params, p.t_in + 2, p.psi) == 0.0);
    CHECK(approach_shaper(p, params, p.t1, 0.5) ==
          doctest::Approx((p.rho_at_t1 - 0.5) / (p.t_in - p.t1)));
    CHECK(return_shaper(p, params, p.t2, p.rho_at_t2) == 0.0);
    CHECK(return_shaper(p, params, p.t2 + 3, p.rho_at_t2) == 0.0);
    // Denominator floor at and after the window edge.
    CHECK(approach_shaper(p, params, p.t_in, p.psi + 1.0) == doctest::Approx(-1.0 / params.eps_den));
}

TEST_CASE("derivative without detours follows the margin")
{
    const RasTask t = free_task();
    const TubeProblem problem = make_problem(t, TubeParams::defaults(80));
    for (double time : {0.0, 10.0, 40.0, 79.0}) {
        const Vec g{problem.corridor.margin.value(0, time), problem.corridor.margin.value(1, time)};
        const Vec r = gamma_derivative(problem, g, time);
        CHECK(r[0] == doctest::Approx(problem.corridor.margin.rate(0, time)));
        CHECK(r[1] == doctest::Approx(problem.corridor.margin.rate(1, time)));
    }
    const Vec r0 = gamma_derivative(problem, Vec{0.0, 0.0}, 0.0);
    CHECK(r0[0] == doctest::Approx(11.0 / 80.0));
    CHECK(r0[1] == doctest::Approx(7.0 / 80.0));
}

TEST_CASE("derivative holds the detour level inside the window")
{
    const Scenario sc = case_study();
    const TubeProblem problem = make_problem(sc.task, sc.tube);
    for (const auto& p : problem.plans) {
        const double mid = 0.5 * (p.t_in + p.t_out);
        Vec g{problem.corridor.margin.value(0, mid), problem.corridor.margin.value(1, mid)};
        g[p.dim] = p.psi;
        const Vec r = gamma_derivative(problem, g, mid);
        CHECK(std::abs(r[p.dim]) < 1e-9);
    }
}

TEST_CASE("overlapping plans are an assumption violation")
{
    const Scenario sc = case_study();
    TubeProblem problem = make_problem(sc.task, sc.tube);
    problem.plans[1].t1 = problem.plans[0].t_out;  // force the second window into the first
    const double t = problem.plans[0].t_out + 0.01;
    CHECK_THROWS_AS(gamma_derivative(problem, Vec{1.0, 1.0}, t), AssumptionViolation);
}

TEST_CASE("case study tube")
{
    const Scenario sc = case_study();
    const TubeProblem problem = make_problem(sc.task, sc.tube);
    const Tube tube = evolve_tube(problem);
    CHECK(tube.samples() >= 8000);
    CHECK(tube.time(tube.samples() - 1) == doctest::Approx(80.0));
    const VerificationReport r = verify_tube(tube, sc.task);
    CHECK(r.initial.pass);
    CHECK(r.target.pass);
    CHECK(r.avoid.pass);
    CHECK(r.ordering.pass);
    CHECK(r.avoid.worst_margin > 0.0);
    CHECK(r.ordering.worst_margin == doctest::Approx(0.5));

    for (const auto& e : detour_errors(problem, tube))
        CHECK(e.pass());
    CHECK(smoothness_check(tube).flagged() == 0);
}

TEST_CASE("tangent obstacle counts as a hit")
{
    // Tube [0,1] x [0,1] for all t; obstacle touching its right face.
    const Tube tube(0.5, {Vec(3, 0.0), Vec(3, 0.0)}, {Vec(3, 1.0), Vec(3, 1.0)});
    RasTask t = free_task();
    t.initial = Box{{0, 1}, {0, 1}};
    t.target = Box{{0, 1}, {0, 1}};
    t.t_c = 1.0;
    t.unsafe = {Box{{1, 2}, {0, 1}}};
    const VerificationReport r = verify_tube(tube, t);
    CHECK(r.initial.pass);
    CHECK(r.target.pass);
    CHECK_FALSE(r.avoid.pass);
    CHECK(r.avoid.violations == 3);
    CHECK(r.ordering.pass);
}

TEST_CASE("crossed bounds fail the ordering condition")
{
    Vec lo{0.0, 0.0, 0.6}, hi{1.0, 1.0, 0.5};
    const Tube tube(0.5, {lo}, {hi});
    RasTask t;
    t.initial = Box{{0, 1}};
    t.target = Box{{0, 1}};
    t.t_c = 1.0;
    const VerificationReport r = verify_tube(tube, t);
    CHECK_FALSE(r.ordering.pass);
    CHECK(r.ordering.violations == 1);
    REQUIRE(r.ordering.violation_times.size() == 1);
    CHECK(r.ordering.violation_times[0] == doctest::Approx(1.0));
}

TEST_CASE("constant tube has zero rate and no flags")
{
    RasTask t = free_task();
    t.target = t.initial;
    t.eta = t.x0;
    const Tube tube = evolve_tube(make_problem(t, TubeParams::defaults(80)));
    const SmoothnessReport s = smoothness_check(tube);
    for (const auto& d : s.dims)
        CHECK(d.max_rate == 0.0);
    CHECK(s.flagged() == 0);
}

TEST_CASE("frame interpolation and clamping")
{
    const Tube tube(1.0, {Vec{0.0, 2.0, 4.0}}, {Vec{1.0, 3.0, 5.0}});
    CHECK(tube.frame(0.5).lower[0] == doctest::Approx(1.0));
    CHECK(tube.frame(1.25).upper[0] == doctest::Approx(3.5));
    CHECK(tube.frame(-1.0).lower[0] == 0.0);
    CHECK(tube.frame(9.0).upper[0] == 5.0);
    CHECK(tube.frame(0.5).sum(0) == doctest::Approx(3.0));
    CHECK(tube.frame(0.5).width(0) == doctest::Approx(1.0));
    CHECK(tube.lower_rate(0, 0.5) == doctest::Approx(2.0));
    CHECK(tube.lower_rate(0, 9.0) == 0.0);
}

TEST_CASE("embedding into the state space and back")
{
    const Scenario sc = case_study();
    const Tube tube = evolve_tube(make_problem(sc.task, sc.tube));
    const Tube st = embed_tube(tube, 3, {0, 1}, sc.plant.free_bounds);
    CHECK(st.dims() == 3);
    CHECK(st.lower(2, 100) == doctest::Approx(-M_PI / 2));
    CHECK(st.upper(2, 100) == doctest::Approx(M_PI / 2));
    const Tube back = project_tube(st, {0, 1});
    for (std::size_t k = 0; k < tube.samples(); k += 997) {
        CHECK(back.lower(0, k) == tube.lower(0, k));
        CHECK(back.upper(1, k) == tube.upper(1, k));
    }
    CHECK_THROWS_AS(embed_tube(tube, 3, {0, 0}, sc.plant.free_bounds), ConfigError);
}
