#include "sl2r/families.hpp"

#include <cmath>
#include <stdexcept>

namespace sl2r {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;

void require_regular(double Phi) {
    if (!(Phi > 1e-14)) throw std::domain_error("sl2r: generating curve is not regular here");
}
}  // namespace

const char* to_string(Family f) {
    switch (f) {
        case Family::N: return "N";
        case Family::A: return "A";
        case Family::K: return "K";
    }
    return "?";
}

CurveJet GeneratingCurve::at(double s) const {
    if (s < s_min || s > s_max)
        throw std::domain_error("sl2r: curve parameter outside the validity interval");
    return eval(s);
}

GeneratingCurve make_analytic_curve(Family family, CoordFunction first, CoordFunction second,
                                    double s_min, double s_max) {
    GeneratingCurve curve;
    curve.family = family;
    curve.s_min = s_min;
    curve.s_max = s_max;
    curve.eval = [first = std::move(first), second = std::move(second)](double s) {
        const auto fa = first(s);
        const auto fb = second(s);
        CurveJet j;
        j.a = fa[0];
        j.da = fa[1];
        j.dda = fa[2];
        j.b = fb[0];
        j.db = fb[1];
        j.ddb = fb[2];
        return j;
    };
    return curve;
}

GeneratingCurve curve_from_phi(Family family, const PhiFunction& phi,
                               std::array<double, 2> initial_point, double s_min, double s_max,
                               const ode::IntegratorConfig& config) {
    if (family == Family::A)
        throw std::invalid_argument("sl2r: the A family has no angle-form curves");
    if (s_min > 0.0 || s_max < 0.0)
        throw std::invalid_argument("sl2r: curve_from_phi integrates outward from s = 0");

    // State layout: N family (y, theta), K family (x, y).
    ode::OdeSystem system;
    system.dim = 2;
    const bool is_n = (family == Family::N);
    if (is_n) {
        if (!(initial_point[0] > 0.0)) throw std::domain_error("sl2r: initial y must be positive");
        system.rhs = [phi](double s, const ode::State& u, ode::State& du) {
            const double p = phi(s).first;
            du[0] = kSqrt2 * u[0] * std::cos(p);
            du[1] = std::sin(p);
        };
        system.in_domain = [](double, const ode::State& u) { return u[0] > 0.0; };
    } else {
        if (!(initial_point[1] > 0.0)) throw std::domain_error("sl2r: initial y must be positive");
        system.rhs = [phi](double s, const ode::State& u, ode::State& du) {
            const double p = phi(s).first;
            du[0] = 2.0 * u[1] * std::cos(p);
            du[1] = 2.0 * u[1] * std::sin(p);
        };
        system.in_domain = [](double, const ode::State& u) { return u[1] > 0.0; };
    }

    // Terminate before the y > 0 boundary can starve the integrator.
    ode::EventSpec floor_event;
    floor_event.name = "left domain y>0";
    floor_event.direction = -1;
    floor_event.value = is_n ? std::function<double(double, const ode::State&)>(
                                   [](double, const ode::State& u) { return u[0] - 1e-6; })
                             : [](double, const ode::State& u) { return u[1] - 1e-6; };

    const ode::State u0{initial_point[0], initial_point[1]};
    auto fwd = std::make_shared<ode::Trajectory>(
        ode::integrate(system, u0, 0.0, s_max, config, {floor_event}));
    auto bwd = std::make_shared<ode::Trajectory>(
        ode::integrate(system, u0, 0.0, s_min, config, {floor_event}));
    if (fwd->reason == ode::Termination::StepFailure ||
        bwd->reason == ode::Termination::StepFailure)
        throw std::runtime_error("sl2r: angle-form curve integration failed");

    GeneratingCurve curve;
    curve.family = family;
    curve.angle_form = true;
    curve.s_min = bwd->s_end();
    curve.s_max = fwd->s_end();
    curve.eval = [fwd, bwd, phi, is_n](double s) {
        const ode::Trajectory& tr = (s >= 0.0) ? *fwd : *bwd;
        const ode::State u = tr.state_at(s);
        const auto [p, dp] = phi(s);
        const double cp = std::cos(p), sp = std::sin(p);
        CurveJet j;
        j.has_phi = true;
        j.phi = p;
        j.dphi = dp;
        if (is_n) {
            j.a = u[0];
            j.b = u[1];
            j.da = kSqrt2 * j.a * cp;
            j.db = sp;
            j.dda = kSqrt2 * (j.da * cp - j.a * sp * dp);
            j.ddb = cp * dp;
        } else {
            j.a = u[0];
            j.b = u[1];
            j.da = 2.0 * j.b * cp;
            j.db = 2.0 * j.b * sp;
            j.dda = 2.0 * (j.db * cp - j.b * sp * dp);
            j.ddb = 2.0 * (j.db * sp + j.b * cp * dp);
        }
        return j;
    };
    return curve;
}

Sl2Point surface_position(const InvariantSurface& surface, double s, double t) {
    const CurveJet j = surface.curve.at(s);
    switch (surface.family) {
        case Family::N: return Sl2Point(t, j.a, j.b);
        case Family::A:
            if (!(t > 0.0))
                throw std::domain_error("sl2r: the A-family fiber parameter must be positive");
            return Sl2Point(j.a, t, j.b);
        case Family::K: return Sl2Point(j.a, j.b, t);
    }
    throw std::invalid_argument("sl2r: unknown family");
}

std::function<Sl2Point(double, double)> surface_evaluator(const InvariantSurface& surface) {
    return [surface](double s, double t) { return surface_position(surface, s, t); };
}

int orientation_alignment(Family family) { return family == Family::K ? -1 : +1; }

std::pair<FrameVector, double> closed_form_N_H(const InvariantSurface& surface, double s,
                                               double t, int orientation) {
    const int orient = orientation == 0 ? surface.orientation : orientation;
    const CurveJet j = surface.curve.at(s);
    FrameVector N;
    double H = 0.0;
    switch (surface.family) {
        case Family::N: {
            // curve (y, theta)
            const double y = j.a, dy = j.da, ddy = j.dda, dth = j.db, ddth = j.ddb;
            const double Phi = std::sqrt(dy * dy + 2.0 * y * y * dth * dth);
            require_regular(Phi);
            N = FrameVector{dy / (kSqrt2 * Phi), kSqrt2 * y * dth / Phi, -dy / (kSqrt2 * Phi)};
            H = kSqrt2 * y * y / (Phi * Phi * Phi) *
                (dth * ddy - dy * ddth + 2.0 * y * dth * dth * dth);
            break;
        }
        case Family::A: {
            // curve (x, theta); N and H depend on the fiber parameter t > 0
            if (!(t > 0.0))
                throw std::domain_error("sl2r: the A-family fiber parameter must be positive");
            const double dx = j.da, ddx = j.dda, dth = j.db, ddth = j.ddb;
            const double w = dx + 2.0 * t * dth;
            const double Phi = std::sqrt(w * w + dx * dx);
            require_regular(Phi);
            N = FrameVector{-w / Phi, 0.0, dx / Phi};
            H = 2.0 * t * t / (Phi * Phi * Phi) * (dx * ddth - dth * ddx);
            break;
        }
        case Family::K: {
            // curve (x, y)
            const double dx = j.da, ddx = j.dda, y = j.b, dy = j.db, ddy = j.ddb;
            const double Phi = std::sqrt(dx * dx + dy * dy);
            require_regular(Phi);
            N = FrameVector{-dy / Phi, dx / Phi, 0.0};
            H = (y * (dx * ddy - ddx * dy) + dx * Phi * Phi) / (Phi * Phi * Phi);
            break;
        }
    }
    if (orient < 0) return {-N, -H};
    return {N, H};
}

namespace {

CoordFunction constant_fn(double v) {
    return [v](double) { return std::array<double, 3>{v, 0.0, 0.0}; };
}

CoordFunction linear_fn(double offset = 0.0) {
    return [offset](double s) { return std::array<double, 3>{s + offset, 1.0, 0.0}; };
}

CoordFunction exp_fn(double y0, double rate) {
    return [y0, rate](double s) {
        const double v = y0 * std::exp(rate * s);
        return std::array<double, 3>{v, rate * v, rate * rate * v};
    };
}

}  // namespace

SpecialSurface sigma_x0(double x0) {
    SpecialSurface out;
    out.name = "sigma-x0";
    out.description = "coordinate slice x = x0; Hopf cylinder over a geodesic, minimal and flat";
    out.expected_H = 0.0;
    out.expected_normal = FrameVector{-1.0, 0.0, 0.0};
    // A member: curve (x, theta) = (x0, s); K member: vertical line (x0, e^{2s}).
    out.members.push_back({Family::A, make_analytic_curve(Family::A, constant_fn(x0), linear_fn()),
                           +1});
    GeneratingCurve k = make_analytic_curve(Family::K, constant_fn(x0), exp_fn(1.0, 2.0));
    k.angle_form = true;  // satisfies the angle form with phi = pi/2
    auto base_eval = k.eval;
    k.eval = [base_eval](double s) {
        CurveJet j = base_eval(s);
        j.has_phi = true;
        j.phi = 1.5707963267948966;
        j.dphi = 0.0;
        return j;
    };
    out.members.push_back({Family::K, k, +1});
    return out;
}

SpecialSurface sigma_y0(double y0) {
    if (!(y0 > 0.0)) throw std::domain_error("sl2r: sigma_y0 requires y0 > 0");
    SpecialSurface out;
    out.name = "sigma-y0";
    out.description =
        "coordinate slice y = y0; Hopf cylinder over a circle, flat with mean curvature 1";
    out.expected_H = 1.0;
    out.expected_normal = FrameVector{0.0, 1.0, 0.0};
    // N member: curve (y, theta) = (y0, s); K member: horizontal line (2 y0 s, y0).
    out.members.push_back({Family::N, make_analytic_curve(Family::N, constant_fn(y0), linear_fn()),
                           +1});
    GeneratingCurve k = make_analytic_curve(
        Family::K,
        [y0](double s) {
            return std::array<double, 3>{2.0 * y0 * s, 2.0 * y0, 0.0};
        },
        constant_fn(y0));
    k.angle_form = true;  // phi = 0
    auto base_eval = k.eval;
    k.eval = [base_eval](double s) {
        CurveJet j = base_eval(s);
        j.has_phi = true;
        j.phi = 0.0;
        j.dphi = 0.0;
        return j;
    };
    out.members.push_back({Family::K, k, +1});
    return out;
}

SpecialSurface sigma_theta0(double theta0) {
    SpecialSurface out;
    out.name = "sigma-theta0";
    out.description =
        "coordinate slice theta = theta0; intrinsically the hyperbolic plane of curvature -4, "
        "minimal";
    out.expected_H = 0.0;
    out.expected_normal = FrameVector{1.0 / kSqrt2, 0.0, -1.0 / kSqrt2};
    // A member: curve (x, theta) = (s, theta0); N member: (y, theta) = (e^{sqrt2 s}, theta0).
    // The A member needs orientation -1 to realize the documented normal.
    out.members.push_back({Family::A, make_analytic_curve(Family::A, linear_fn(),
                                                          constant_fn(theta0)),
                           -1});
    GeneratingCurve n = make_analytic_curve(Family::N, exp_fn(1.0, kSqrt2), constant_fn(theta0));
    n.angle_form = true;  // phi = 0 in the N-family angle form
    auto base_eval = n.eval;
    n.eval = [base_eval](double s) {
        CurveJet j = base_eval(s);
        j.has_phi = true;
        j.phi = 0.0;
        j.dphi = 0.0;
        return j;
    };
    out.members.push_back({Family::N, n, +1});
    return out;
}

}  // namespace sl2r
