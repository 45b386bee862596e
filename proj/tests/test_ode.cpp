#include <doctest.h>

#include <cmath>

#include "sl2r/ode.hpp"
#include "sl2r/translators.hpp"

using namespace sl2r;
using ode::IntegratorConfig;
using ode::OdeSystem;
using ode::Termination;
using ode::Trajectory;

namespace {

OdeSystem exponential_system() {
    OdeSystem sys;
    sys.dim = 1;
    sys.rhs = [](double, const ode::State& y, ode::State& dy) { dy[0] = y[0]; };
    return sys;
}

}  // namespace

TEST_CASE("rk45 integrates the linear test equation") {
    const Trajectory tr = ode::integrate(exponential_system(), {1.0}, 0.0, 1.0, {});
    REQUIRE(tr.reason == Termination::ReachedEnd);
    CHECK(std::abs(tr.states.back()[0] - std::exp(1.0)) < 1e-9);

    // dense output between accepted steps
    for (double s : {0.13, 0.501, 0.87})
        CHECK(std::abs(tr.state_at(s)[0] - std::exp(s)) < 1e-8);
}

TEST_CASE("rk45 integrates backward") {
    const Trajectory tr = ode::integrate(exponential_system(), {1.0}, 0.0, -1.0, {});
    REQUIRE(tr.reason == Termination::ReachedEnd);
    CHECK(std::abs(tr.states.back()[0] - std::exp(-1.0)) < 1e-9);
}

TEST_CASE("fixed rk4 shows fourth-order convergence") {
    auto error_at = [](double h) {
        IntegratorConfig cfg;
        cfg.method = ode::Method::Rk4Fixed;
        cfg.fixed_step = h;
        const Trajectory tr = ode::integrate(exponential_system(), {1.0}, 0.0, 1.0, cfg);
        return std::abs(tr.states.back()[0] - std::exp(1.0));
    };
    const double ratio = error_at(0.05) / error_at(0.025);
    CHECK(ratio > 14.0);
    CHECK(ratio < 18.0);
}

TEST_CASE("autonomous dx system decays monotonically in y") {
    const OdeSystem sys = autonomous_dx_system();
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-13;
    const Trajectory tr = ode::integrate(sys, {1.0, 0.0}, 0.0, 10.0, cfg);
    REQUIRE(tr.reason == Termination::ReachedEnd);
    double prev = tr.states.front()[0];
    bool decreasing = true;
    for (std::size_t i = 1; i < tr.size(); ++i) {
        decreasing = decreasing && tr.states[i][0] < prev + 1e-14;
        prev = tr.states[i][0];
        CHECK(tr.states[i][0] > 0.0);
    }
    CHECK(decreasing);
}

TEST_CASE("rk45 result is stable under tolerance tightening") {
    const OdeSystem sys = autonomous_dx_system();
    IntegratorConfig loose, tight;
    loose.rel_tol = 1e-8;
    loose.abs_tol = 1e-11;
    tight.rel_tol = 1e-10;
    tight.abs_tol = 1e-13;
    const Trajectory a = ode::integrate(sys, {1.0, 0.0}, 0.0, 5.0, loose);
    const Trajectory b = ode::integrate(sys, {1.0, 0.0}, 0.0, 5.0, tight);
    double sup = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double s = 5.0 * i / 100.0;
        const ode::State ua = a.state_at(s), ub = b.state_at(s);
        sup = std::max({sup, std::abs(ua[0] - ub[0]), std::abs(ua[1] - ub[1])});
    }
    CHECK(sup < 1e-7);
}

TEST_CASE("event location at the y = 1e-3 crossing") {
    const OdeSystem sys = autonomous_dx_system();
    ode::EventSpec ev;
    ev.name = "y-floor";
    ev.direction = -1;
    ev.value = [](double, const ode::State& u) { return u[0] - 1e-3; };

    IntegratorConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-13;
    cfg.event_tol = 1e-9;
    const Trajectory tr = ode::integrate(sys, {1.0, 0.0}, 0.0, 400.0, cfg, {ev});
    REQUIRE(tr.reason == Termination::Event);
    CHECK(tr.event_name == "y-floor");
    // the crossing sits far out on the slow 1/(4s) tail
    CHECK(tr.s_end() > 200.0);
    CHECK(tr.s_end() < 300.0);
    CHECK(std::abs(tr.states.back()[0] - 1e-3) < 1e-12);

    // re-locating with a tighter event tolerance moves s* by less than 1e-8
    cfg.event_tol = 1e-12;
    const Trajectory tr2 = ode::integrate(sys, {1.0, 0.0}, 0.0, 400.0, cfg, {ev});
    CHECK(std::abs(tr2.s_end() - tr.s_end()) < 1e-8);
}

TEST_CASE("distinct trajectories stay separated") {
    const OdeSystem sys = autonomous_dx_system();
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-13;
    const Trajectory a = ode::integrate(sys, {1.0, 0.0}, 0.0, 10.0, cfg);
    const Trajectory b = ode::integrate(sys, {2.0, 0.0}, 0.0, 10.0, cfg);
    double min_dist = 1e300;
    for (int i = 0; i <= 400; ++i) {
        const double s = 10.0 * i / 400.0;
        const ode::State ua = a.state_at(s), ub = b.state_at(s);
        min_dist = std::min(min_dist, std::hypot(ua[0] - ub[0], ua[1] - ub[1]));
    }
    CHECK(min_dist > 1e-6);
}

TEST_CASE("step failure near a blow-up") {
    OdeSystem sys;
    sys.dim = 1;
    sys.rhs = [](double, const ode::State& y, ode::State& dy) { dy[0] = y[0] * y[0]; };
    const Trajectory tr = ode::integrate(sys, {1.0}, 0.0, 2.0, {});
    CHECK(tr.reason == Termination::StepFailure);
    CHECK(tr.s_end() < 1.01);
}

TEST_CASE("leaving the domain terminates with an event") {
    OdeSystem sys;
    sys.dim = 1;
    sys.rhs = [](double, const ode::State&, ode::State& dy) { dy[0] = -1.0; };
    sys.in_domain = [](double, const ode::State& y) { return y[0] > 0.0; };
    const Trajectory tr = ode::integrate(sys, {0.5}, 0.0, 2.0, {});
    REQUIRE(tr.reason == Termination::Event);
    CHECK(tr.event_name == "domain");
    CHECK(std::abs(tr.s_end() - 0.5) < 1e-6);
}

TEST_CASE("direction field sampling skips out-of-domain points") {
    const OdeSystem sys = autonomous_dx_system();
    std::vector<ode::State> pts = {{1.0, 0.0}, {-0.5, 0.0}, {1.0, 3.141592653589793}};
    const auto field = ode::sample_direction_field(sys, pts);
    REQUIRE(field.size() == 2);
    // at (1, 0) the normalized direction is (0, -1)
    CHECK(std::abs(field[0].second[0]) < 1e-15);
    CHECK(std::abs(field[0].second[1] + 1.0) < 1e-15);
    // at phi = pi the y-rate vanishes
    CHECK(std::abs(field[1].second[0]) < 1e-12);
}

TEST_CASE("reduction system for the fiber field matches its closed form") {
    // angle system y' = sqrt2 y cos, theta' = sin, phi' = cos + sqrt2 sin
    const TranslatorProblem problem{Family::N, KillingField::Dtheta, +1};
    const ReductionSystem rs = make_reduction_system(problem);
    const double phi0 = std::atan(std::sqrt(2.0));
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-14;
    for (double dir : {3.0, -3.0}) {
        const Trajectory tr = ode::integrate(rs.system, {1.0, 0.0, phi0}, 0.0, dir, cfg);
        REQUIRE(tr.reason == Termination::ReachedEnd);
        for (int i = 0; i <= 60; ++i) {
            const double s = dir * i / 60.0;
            CHECK(std::abs(tr.state_at(s)[2] - ntheta_phi(s)) < 1e-8);
        }
    }
}
