#include <doctest.h>

#include <cmath>

#include "sl2r/families.hpp"
#include "sl2r/oracle.hpp"

using namespace sl2r;

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kPi = 3.141592653589793;
}  // namespace

TEST_CASE("closed forms on the coordinate slices") {
    const SpecialSurface sy = sigma_y0(1.0);
    for (const auto& member : sy.members) {
        const auto [N, H] = closed_form_N_H(member, 0.3, 1.0);
        CHECK(std::abs(H - 1.0) < 1e-14);
        CHECK(norm(N - FrameVector{0, 1, 0}) < 1e-14);
    }
    const SpecialSurface sx = sigma_x0(0.5);
    for (const auto& member : sx.members) {
        const auto [N, H] = closed_form_N_H(member, 0.3, 1.0);
        CHECK(std::abs(H) < 1e-14);
        CHECK(norm(N - FrameVector{-1, 0, 0}) < 1e-14);
    }
    const SpecialSurface st = sigma_theta0(0.3);
    for (const auto& member : st.members) {
        const auto [N, H] = closed_form_N_H(member, 0.3, 1.0);
        CHECK(std::abs(H) < 1e-14);
        CHECK(norm(N - FrameVector{1.0 / kSqrt2, 0, -1.0 / kSqrt2}) < 1e-14);
    }
}

TEST_CASE("rotational angle form: H = phi'/2 + cos(phi)") {
    // build an angle-form curve numerically and compare both H routes
    PhiFunction phi = [](double s) {
        return std::pair<double, double>{0.4 * std::sin(s) + 0.2, 0.4 * std::cos(s)};
    };
    const GeneratingCurve curve = curve_from_phi(Family::K, phi, {0.0, 1.0}, -2.0, 2.0);
    const InvariantSurface surf{Family::K, curve, +1};
    for (double s : {-1.5, -0.4, 0.0, 0.9, 1.8}) {
        const auto [N, H] = closed_form_N_H(surf, s, 0.0);
        const auto [p, dp] = phi(s);
        CHECK(std::abs(H - (0.5 * dp + std::cos(p))) < 1e-8);
        CHECK(norm(N - FrameVector{-std::sin(p), std::cos(p), 0}) < 1e-8);
        // arclength normalization |alpha'| = 2y
        const CurveJet j = curve.at(s);
        CHECK(std::abs(std::hypot(j.da, j.db) - 2.0 * j.b) < 1e-8);
    }
}

TEST_CASE("angle-form curves satisfy their defining system") {
    PhiFunction phi = [](double s) {
        return std::pair<double, double>{0.3 * s, 0.3};
    };
    const GeneratingCurve n = curve_from_phi(Family::N, phi, {1.0, 0.0}, -1.5, 1.5);
    for (double s : {-1.2, -0.3, 0.5, 1.4}) {
        const CurveJet j = n.at(s);
        CHECK(std::abs(j.da - kSqrt2 * j.a * std::cos(j.phi)) < 1e-9);
        CHECK(std::abs(j.db - std::sin(j.phi)) < 1e-9);
    }
}

TEST_CASE("straight angle-form solutions of the rotational system") {
    // phi = 0: horizontal line (2 c2 s + c1, c2)
    PhiFunction zero = [](double) { return std::pair<double, double>{0.0, 0.0}; };
    const GeneratingCurve flat = curve_from_phi(Family::K, zero, {0.7, 1.3}, -2.0, 2.0);
    for (double s : {-1.5, 0.0, 1.7}) {
        const CurveJet j = flat.at(s);
        CHECK(std::abs(j.a - (2.0 * 1.3 * s + 0.7)) < 1e-9);
        CHECK(std::abs(j.b - 1.3) < 1e-10);
    }

    // constant phi with sin(phi) != 0: exponential ray c2 e^{2 s sin} (cot, 1)
    const double phi0 = 0.9;
    PhiFunction tilt = [phi0](double) { return std::pair<double, double>{phi0, 0.0}; };
    const double c2 = 0.8;
    const GeneratingCurve ray =
        curve_from_phi(Family::K, tilt, {c2 / std::tan(phi0), c2}, -1.0, 1.0);
    for (double s : {-0.8, 0.3, 0.9}) {
        const CurveJet j = ray.at(s);
        const double growth = c2 * std::exp(2.0 * s * std::sin(phi0));
        CHECK(std::abs(j.a - growth / std::tan(phi0)) < 1e-8);
        CHECK(std::abs(j.b - growth) < 1e-8);
    }

    // phi = pi/2 in the N family: constant y, theta = s + theta0
    PhiFunction vertical = [](double) { return std::pair<double, double>{kPi / 2, 0.0}; };
    const GeneratingCurve vn = curve_from_phi(Family::N, vertical, {2.0, 0.4}, -1.0, 1.0);
    for (double s : {-0.9, 0.0, 0.8}) {
        const CurveJet j = vn.at(s);
        CHECK(std::abs(j.a - 2.0) < 1e-10);
        CHECK(std::abs(j.b - (s + 0.4)) < 1e-10);
    }
}

TEST_CASE("the y > 0 floor shortens the validity interval") {
    // phi = -pi/2 drives y = e^{-2s} down to the 1e-6 floor near s = 6.9
    PhiFunction down = [](double) { return std::pair<double, double>{-kPi / 2, 0.0}; };
    const GeneratingCurve c = curve_from_phi(Family::K, down, {0.0, 1.0}, -1.0, 20.0);
    CHECK(c.s_max > 6.0);
    CHECK(c.s_max < 8.0);
    CHECK_THROWS_AS(c.at(15.0), std::domain_error);
    CHECK_THROWS_AS(c.at(-5.0), std::domain_error);
}

TEST_CASE("the x slice is one surface in two parametrizations") {
    const SpecialSurface sx = sigma_x0(1.0);
    const InvariantSurface& a_member = sx.members[0];  // (x0, t, s)
    const InvariantSurface& k_member = sx.members[1];  // (x0, e^{2s}, t)
    double hausdorff = 0.0;
    for (double s : {-0.8, 0.0, 0.7})
        for (double t : {-1.0, 0.3, 1.2}) {
            const Sl2Point pk = surface_position(k_member, s, t);
            // match parameters: A-form needs (s_A, t_A) = (t, y)
            const Sl2Point pa = surface_position(a_member, t, pk.y);
            hausdorff = std::max({hausdorff, std::abs(pk.x - pa.x), std::abs(pk.y - pa.y),
                                  std::abs(pk.theta - pa.theta)});
        }
    CHECK(hausdorff < 1e-9);
}

TEST_CASE("induced metric of the y slice") {
    const SpecialSurface sy = sigma_y0(2.0);
    const FundamentalForms f = fundamental_forms(jet_analytic(sy.members[0], 0.2, -1.0), +1);
    CHECK(std::abs(f.E - 1.0) < 1e-14);
    CHECK(std::abs(f.F - 1.0 / (2.0 * 2.0)) < 1e-14);
    CHECK(std::abs(f.G - 1.0 / (2.0 * 2.0 * 2.0)) < 1e-14);
}

TEST_CASE("family constraints are enforced") {
    CHECK_THROWS_AS(sigma_y0(0.0), std::domain_error);
    CHECK_THROWS_AS(sigma_y0(-2.0), std::domain_error);
    CHECK_THROWS_AS(curve_from_phi(Family::A, [](double) {
                        return std::pair<double, double>{0.0, 0.0};
                    }, {0.0, 1.0}, -1.0, 1.0),
                    std::invalid_argument);

    // an irregular point of a curve is rejected by the closed forms
    const GeneratingCurve cubic = make_analytic_curve(
        Family::A, [](double s) { return std::array<double, 3>{s * s * s, 3 * s * s, 6 * s}; },
        [](double) { return std::array<double, 3>{0.2, 0.0, 0.0}; });
    const InvariantSurface surf{Family::A, cubic, +1};
    CHECK_THROWS_AS(closed_form_N_H(surf, 0.0, 1.0), std::domain_error);
    CHECK_NOTHROW(closed_form_N_H(surf, 0.5, 1.0));
}
