#include "sl2r/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace sl2r {

namespace {

CoordVector scale(const CoordVector& v, double k) { return {k * v.vx, k * v.vy, k * v.vtheta}; }

CoordVector combine(const Sl2Point& pp, const Sl2Point& pm, double w) {
    return {w * (pp.x - pm.x), w * (pp.y - pm.y), w * (pp.theta - pm.theta)};
}

}  // namespace

double fd_step(double s, double t, double h0) {
    return h0 * std::max({1.0, std::abs(s), std::abs(t)});
}

SurfaceJet jet_analytic(const InvariantSurface& surface, double s, double t) {
    const CurveJet j = surface.curve.at(s);
    SurfaceJet out;
    switch (surface.family) {
        case Family::N:
            out.position = Sl2Point(t, j.a, j.b);
            out.d_s = {0.0, j.da, j.db};
            out.d_t = {1.0, 0.0, 0.0};
            out.d_ss = {0.0, j.dda, j.ddb};
            break;
        case Family::A:
            if (!(t > 0.0))
                throw std::domain_error("sl2r: the A-family fiber parameter must be positive");
            out.position = Sl2Point(j.a, t, j.b);
            out.d_s = {j.da, 0.0, j.db};
            out.d_t = {0.0, 1.0, 0.0};
            out.d_ss = {j.dda, 0.0, j.ddb};
            break;
        case Family::K:
            out.position = Sl2Point(j.a, j.b, t);
            out.d_s = {j.da, j.db, 0.0};
            out.d_t = {0.0, 0.0, 1.0};
            out.d_ss = {j.dda, j.ddb, 0.0};
            break;
    }
    return out;
}

SurfaceJet jet_finite_difference(const SurfaceEvaluator& evaluate, double s, double t, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("sl2r: finite-difference step must be positive");
    const Sl2Point p00 = evaluate(s, t);
    const Sl2Point pp0 = evaluate(s + h, t), pm0 = evaluate(s - h, t);
    const Sl2Point p0p = evaluate(s, t + h), p0m = evaluate(s, t - h);
    const Sl2Point ppp = evaluate(s + h, t + h), ppm = evaluate(s + h, t - h);
    const Sl2Point pmp = evaluate(s - h, t + h), pmm = evaluate(s - h, t - h);

    SurfaceJet out;
    out.position = p00;
    out.d_s = combine(pp0, pm0, 1.0 / (2.0 * h));
    out.d_t = combine(p0p, p0m, 1.0 / (2.0 * h));
    const double ih2 = 1.0 / (h * h);
    out.d_ss = {(pp0.x - 2 * p00.x + pm0.x) * ih2, (pp0.y - 2 * p00.y + pm0.y) * ih2,
                (pp0.theta - 2 * p00.theta + pm0.theta) * ih2};
    out.d_tt = {(p0p.x - 2 * p00.x + p0m.x) * ih2, (p0p.y - 2 * p00.y + p0m.y) * ih2,
                (p0p.theta - 2 * p00.theta + p0m.theta) * ih2};
    const double iq = 1.0 / (4.0 * h * h);
    out.d_st = {(ppp.x - ppm.x - pmp.x + pmm.x) * iq, (ppp.y - ppm.y - pmp.y + pmm.y) * iq,
                (ppp.theta - ppm.theta - pmp.theta + pmm.theta) * iq};
    return out;
}

SurfaceJet jet_finite_difference_richardson(const SurfaceEvaluator& evaluate, double s, double t,
                                            double h) {
    const SurfaceJet jh = jet_finite_difference(evaluate, s, t, h);
    const SurfaceJet jh2 = jet_finite_difference(evaluate, s, t, 0.5 * h);
    auto rich = [](const CoordVector& coarse, const CoordVector& fine) {
        return scale(fine, 4.0 / 3.0) + scale(coarse, -1.0 / 3.0);
    };
    SurfaceJet out = jh2;
    out.d_s = rich(jh.d_s, jh2.d_s);
    out.d_t = rich(jh.d_t, jh2.d_t);
    out.d_ss = rich(jh.d_ss, jh2.d_ss);
    out.d_st = rich(jh.d_st, jh2.d_st);
    out.d_tt = rich(jh.d_tt, jh2.d_tt);
    return out;
}

FundamentalForms fundamental_forms(const SurfaceJet& jet, int orientation) {
    const Sl2Point& p = jet.position;
    const FrameVector ds = coord_to_frame(p, jet.d_s);
    const FrameVector dt = coord_to_frame(p, jet.d_t);

    FundamentalForms out;
    out.E = dot(ds, ds);
    out.F = dot(ds, dt);
    out.G = dot(dt, dt);
    const double disc = out.E * out.G - out.F * out.F;
    if (!(disc >= 1e-14)) throw degenerate_jet_error("sl2r: degenerate surface jet");

    // The frame is orthonormal and positively oriented, so the g-cross-product
    // is the Euclidean one in frame components.
    out.unit_normal = normalized(cross(ds, dt)) * static_cast<double>(orientation);

    const FrameVector nss =
        coord_to_frame(p, covariant_derivative(p, jet.d_s, jet.d_s, jet.d_ss));
    const FrameVector nst =
        coord_to_frame(p, covariant_derivative(p, jet.d_s, jet.d_t, jet.d_st));
    const FrameVector ntt =
        coord_to_frame(p, covariant_derivative(p, jet.d_t, jet.d_t, jet.d_tt));
    out.L = dot(nss, out.unit_normal);
    out.M = dot(nst, out.unit_normal);
    out.Nff = dot(ntt, out.unit_normal);
    return out;
}

double mean_curvature_oracle(const SurfaceJet& jet, int orientation) {
    const FundamentalForms f = fundamental_forms(jet, orientation);
    return (f.E * f.Nff - 2.0 * f.F * f.M + f.G * f.L) /
           (2.0 * (f.E * f.G - f.F * f.F));
}

FundamentalForms oriented_forms(const InvariantSurface& surface, double s, double t,
                                int orientation) {
    const int orient = orientation == 0 ? surface.orientation : orientation;
    return fundamental_forms(jet_analytic(surface, s, t),
                             orient * orientation_alignment(surface.family));
}

double oriented_mean_curvature(const InvariantSurface& surface, double s, double t,
                               int orientation) {
    const int orient = orientation == 0 ? surface.orientation : orientation;
    return mean_curvature_oracle(jet_analytic(surface, s, t),
                                 orient * orientation_alignment(surface.family));
}

double gauss_curvature_induced(const InvariantSurface& surface, double s, double t, double h) {
    const double hs = fd_step(s, t, h);
    auto first_form = [&](double si, double ti) {
        const SurfaceJet jet = jet_analytic(surface, si, ti);
        const FrameVector ds = coord_to_frame(jet.position, jet.d_s);
        const FrameVector dt = coord_to_frame(jet.position, jet.d_t);
        return std::array<double, 3>{dot(ds, ds), dot(ds, dt), dot(dt, dt)};
    };

    // E, F, G and their first and second partials on a 3x3 stencil.
    std::array<std::array<std::array<double, 3>, 3>, 3> q{};
    for (int i = -1; i <= 1; ++i)
        for (int jj = -1; jj <= 1; ++jj) q[i + 1][jj + 1] = first_form(s + i * hs, t + jj * hs);

    auto val = [&](int comp) { return q[1][1][comp]; };
    auto d_s = [&](int comp) { return (q[2][1][comp] - q[0][1][comp]) / (2 * hs); };
    auto d_t = [&](int comp) { return (q[1][2][comp] - q[1][0][comp]) / (2 * hs); };
    auto d_ss = [&](int comp) {
        return (q[2][1][comp] - 2 * q[1][1][comp] + q[0][1][comp]) / (hs * hs);
    };
    auto d_tt = [&](int comp) {
        return (q[1][2][comp] - 2 * q[1][1][comp] + q[1][0][comp]) / (hs * hs);
    };
    auto d_st = [&](int comp) {
        return (q[2][2][comp] - q[2][0][comp] - q[0][2][comp] + q[0][0][comp]) / (4 * hs * hs);
    };

    const double E = val(0), F = val(1), G = val(2);
    const double Es = d_s(0), Et = d_t(0), Gs = d_s(2), Gt = d_t(2);
    const double Fs = d_s(1), Ft = d_t(1);
    const double Ett = d_tt(0), Gss = d_ss(2), Fst = d_st(1);

    auto det3 = [](double a11, double a12, double a13, double a21, double a22, double a23,
                   double a31, double a32, double a33) {
        return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
               a13 * (a21 * a32 - a22 * a31);
    };

    const double m1 = det3(-0.5 * Ett + Fst - 0.5 * Gss, 0.5 * Es, Fs - 0.5 * Et,  //
                           Ft - 0.5 * Gs, E, F,                                    //
                           0.5 * Gt, F, G);
    const double m2 = det3(0.0, 0.5 * Et, 0.5 * Gs,  //
                           0.5 * Et, E, F,           //
                           0.5 * Gs, F, G);
    const double disc = E * G - F * F;
    if (!(disc > 1e-14)) throw degenerate_jet_error("sl2r: degenerate induced metric");
    return (m1 - m2) / (disc * disc);
}

}  // namespace sl2r
