#include "sl2r/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sl2r/catalog.hpp"
#include "sl2r/core.hpp"
#include "sl2r/families.hpp"
#include "sl2r/io.hpp"
#include "sl2r/ode.hpp"
#include "sl2r/oracle.hpp"
#include "sl2r/translators.hpp"

namespace sl2r::verify {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kPi = 3.141592653589793;

CheckResult below(const std::string& name, double value, double tol, const std::string& note = "") {
    return {name, value, tol, false, value < tol, note};
}

CheckResult above(const std::string& name, double value, double tol, const std::string& note = "") {
    return {name, value, tol, true, value > tol, note};
}

Sl2Point random_point(std::mt19937& rng, double ylo = 0.05, double yhi = 20.0) {
    std::uniform_real_distribution<double> ux(-5.0, 5.0), uth(-kPi, kPi),
        ul(std::log(ylo), std::log(yhi));
    return Sl2Point(ux(rng), std::exp(ul(rng)), uth(rng));
}

CoordVector random_vector(std::mt19937& rng, double amp = 1.0) {
    std::uniform_real_distribution<double> u(-amp, amp);
    return {u(rng), u(rng), u(rng)};
}

// Smooth random coordinate function a0 + a1 s + b sin(w s + p), jets analytic.
struct TrigCoord {
    double a0, a1, b, w, p;
    std::array<double, 3> operator()(double s) const {
        return {a0 + a1 * s + b * std::sin(w * s + p), a1 + b * w * std::cos(w * s + p),
                -b * w * w * std::sin(w * s + p)};
    }
};

TrigCoord random_trig(std::mt19937& rng, double drift_lo, double drift_hi, double amp_cap,
                      bool signed_drift) {
    std::uniform_real_distribution<double> ua(-0.3, 0.3), ud(drift_lo, drift_hi),
        ub(0.05, amp_cap), uw(0.5, 1.5), up(0.0, 2.0 * kPi);
    std::bernoulli_distribution flip(0.5);
    TrigCoord c;
    c.a0 = ua(rng);
    c.a1 = ud(rng) * (signed_drift && flip(rng) ? -1.0 : 1.0);
    c.w = uw(rng);
    c.b = std::min(ub(rng), amp_cap / c.w);  // keep |b w| below the drift
    c.p = up(rng);
    return c;
}

// Positive coordinate function exp(g(s)) with g a gentle trig polynomial.
CoordFunction random_positive(std::mt19937& rng) {
    const TrigCoord g = random_trig(rng, 0.05, 0.3, 0.25, true);
    return [g](double s) {
        const auto j = g(s);
        const double y = std::exp(j[0]);
        return std::array<double, 3>{y, j[1] * y, (j[2] + j[1] * j[1]) * y};
    };
}

GeneratingCurve random_curve(Family family, std::mt19937& rng) {
    switch (family) {
        case Family::N: {
            const TrigCoord th = random_trig(rng, 0.6, 1.2, 0.25, true);
            return make_analytic_curve(Family::N, random_positive(rng),
                                       [th](double s) { return th(s); });
        }
        case Family::A: {
            const TrigCoord x = random_trig(rng, 0.6, 1.2, 0.25, true);
            const TrigCoord th = random_trig(rng, 0.3, 1.0, 0.4, true);
            return make_analytic_curve(
                Family::A, [x](double s) { return x(s); }, [th](double s) { return th(s); });
        }
        case Family::K: {
            const TrigCoord x = random_trig(rng, 0.6, 1.2, 0.25, true);
            return make_analytic_curve(
                Family::K, [x](double s) { return x(s); }, random_positive(rng));
        }
    }
    throw std::invalid_argument("sl2r: unknown family");
}

std::pair<double, double> family_t_range(Family family) {
    switch (family) {
        case Family::N: return {-3.0, 3.0};
        case Family::A: return {0.3, 3.0};
        case Family::K: return {-3.0, 3.0};
    }
    return {0.0, 1.0};
}

// --- suite 1: frame-metric ----------------------------------------------------

SuiteResult suite_frame_metric() {
    SuiteResult out{"frame-metric", {}, true};
    std::mt19937 rng(101);

    double gram_dev = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const Sl2Point p = random_point(rng, 1e-2, 1e2);
        const auto frame = frame_at(p);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double g = metric_inner(p, frame[i], frame[j]);
                gram_dev = std::max(gram_dev, std::abs(g - (i == j ? 1.0 : 0.0)));
            }
    }
    out.checks.push_back(below("frame orthonormality (1000 random points)", gram_dev, 1e-12));

    double pd_min = std::numeric_limits<double>::infinity();
    double det_dev = 0.0;
    for (int k = 0; k < 500; ++k) {
        const Sl2Point p = random_point(rng, 1e-3, 1e3);
        const Mat3 g = metric_at(p);
        const double m1 = g[0][0];
        const double m2 = g[0][0] * g[1][1] - g[0][1] * g[0][1];
        const double det = m1 * (g[1][1] * g[2][2] - g[1][2] * g[1][2]) -
                           g[0][1] * (g[0][1] * g[2][2] - g[1][2] * g[0][2]) +
                           g[0][2] * (g[0][1] * g[1][2] - g[1][1] * g[0][2]);
        pd_min = std::min({pd_min, m1, m2, det});
        const double expected = 1.0 / (16.0 * std::pow(p.y, 4));
        det_dev = std::max(det_dev, std::abs(det - expected) / expected);
    }
    out.checks.push_back(above("metric positive definite, y in [1e-3,1e3] (min minor)", pd_min, 0.0));
    out.checks.push_back(below("det(g) = 1/(16 y^4), relative", det_dev, 1e-12));

    double rt_dev = 0.0;
    for (int k = 0; k < 500; ++k) {
        const Sl2Point p = random_point(rng);
        const CoordVector v = random_vector(rng, 2.0);
        const CoordVector w = frame_to_coord(p, coord_to_frame(p, v));
        rt_dev = std::max({rt_dev, std::abs(w.vx - v.vx), std::abs(w.vy - v.vy),
                           std::abs(w.vtheta - v.vtheta)});
        const double n2 = metric_inner(p, v, v);
        const FrameVector f = coord_to_frame(p, v);
        rt_dev = std::max(rt_dev, std::abs(n2 - dot(f, f)) / std::max(1.0, n2));
    }
    out.checks.push_back(below("coord/frame round trip and norm agreement", rt_dev, 1e-10));

    for (const auto& c : out.checks) out.pass = out.pass && c.pass;
    return out;
}

// --- suite 2: connection --------------------------------------------------------

SuiteResult suite_connection() {
    SuiteResult out{"connection", {}, true};
    std::mt19937 rng(202);

    double table_dev = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Sl2Point p = random_point(rng, 0.1, 10.0);
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j) {
                const FrameVector got = frame_connection_via_christoffels(p, i, j);
                const FrameVector want = connection_frame(i, j);
                table_dev = std::max(table_dev, norm(got - want));
            }
    }
    out.checks.push_back(below("connection table from Christoffel contraction", table_dev, 1e-9));

    // metric compatibility: d_k g_ij = Gamma^l_ki g_lj + Gamma^l_kj g_il
    double compat_dev = 0.0;
    const double h = 1e-5;
    for (int k = 0; k < 20; ++k) {
        const Sl2Point p = random_point(rng, 0.3, 3.0);
        const Christoffels G = christoffels_at(p);
        const Mat3 g = metric_at(p);
        for (int dir = 0; dir < 3; ++dir) {
            std::array<double, 3> q{p.x, p.y, p.theta};
            auto shift = [&](double d) {
                auto qq = q;
                qq[dir] += d;
                return Sl2Point(qq[0], qq[1], qq[2]);
            };
            const Mat3 gp = metric_at(shift(h)), gm = metric_at(shift(-h));
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const double fd = (gp[i][j] - gm[i][j]) / (2.0 * h);
                    double expand = 0.0;
                    for (int l = 0; l < 3; ++l)
                        expand += G[l][dir][i] * g[l][j] + G[l][dir][j] * g[i][l];
                    compat_dev = std::max(compat_dev, std::abs(fd - expand));
                }
        }
    }
    out.checks.push_back(below("metric compatibility (finite differences)", compat_dev, 1e-5));

    // torsion-free: table difference equals the frame Lie bracket
    double torsion_dev = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Sl2Point p = random_point(rng, 0.3, 3.0);
        auto frame_component = [&](int idx, const Sl2Point& q) -> CoordVector {
            return frame_at(q)[idx];
        };
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                // bracket^k = e_i^l d_l e_j^k - e_j^l d_l e_i^k (finite differences)
                const auto frame = frame_at(p);
                std::array<double, 3> bracket{0.0, 0.0, 0.0};
                for (int l = 0; l < 3; ++l) {
                    std::array<double, 3> q{p.x, p.y, p.theta};
                    auto shift = [&](double d) {
                        auto qq = q;
                        qq[l] += d;
                        return Sl2Point(qq[0], qq[1], qq[2]);
                    };
                    const CoordVector ejp = frame_component(j, shift(h)),
                                      ejm = frame_component(j, shift(-h));
                    const CoordVector eip = frame_component(i, shift(h)),
                                      eim = frame_component(i, shift(-h));
                    const std::array<double, 3> ei{frame[i].vx, frame[i].vy, frame[i].vtheta};
                    const std::array<double, 3> ej{frame[j].vx, frame[j].vy, frame[j].vtheta};
                    bracket[0] += (ei[l] * (ejp.vx - ejm.vx) - ej[l] * (eip.vx - eim.vx)) / (2 * h);
                    bracket[1] += (ei[l] * (ejp.vy - ejm.vy) - ej[l] * (eip.vy - eim.vy)) / (2 * h);
                    bracket[2] += (ei[l] * (ejp.vtheta - ejm.vtheta) -
                                   ej[l] * (eip.vtheta - eim.vtheta)) /
                                  (2 * h);
                }
                const FrameVector br =
                    coord_to_frame(p, CoordVector{bracket[0], bracket[1], bracket[2]});
                const FrameVector table =
                    connection_frame(i + 1, j + 1) - connection_frame(j + 1, i + 1);
                torsion_dev = std::max(torsion_dev, norm(br - table));
            }
    }
    out.checks.push_back(below("torsion-free (frame bracket, finite differences)", torsion_dev, 1e-5));

    // Koszul finite differences against the analytic Christoffels
    double koszul_dev = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Sl2Point p = random_point(rng, 0.3, 3.0);
        const Christoffels G = christoffels_at(p);
        std::array<Mat3, 3> dg;
        for (int dir = 0; dir < 3; ++dir) {
            std::array<double, 3> q{p.x, p.y, p.theta};
            auto shift = [&](double d) {
                auto qq = q;
                qq[dir] += d;
                return Sl2Point(qq[0], qq[1], qq[2]);
            };
            const Mat3 gp = metric_at(shift(h)), gm = metric_at(shift(-h));
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) dg[dir][i][j] = (gp[i][j] - gm[i][j]) / (2.0 * h);
        }
        const Mat3 gi = metric_inverse_at(p);
        for (int kk = 0; kk < 3; ++kk)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    double lower = 0.0;
                    for (int l = 0; l < 3; ++l)
                        lower += gi[kk][l] * 0.5 * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                    koszul_dev = std::max(koszul_dev, std::abs(lower - G[kk][i][j]));
                }
    }
    out.checks.push_back(below("Christoffels vs Koszul finite differences", koszul_dev, 1e-6));

    double sym_dev = 0.0;
    const Sl2Point p = random_point(rng, 0.2, 5.0);
    const Christoffels G = christoffels_at(p);
    for (int kk = 0; kk < 3; ++kk)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                sym_dev = std::max(sym_dev, std::abs(G[kk][i][j] - G[kk][j][i]));
    out.checks.push_back(below("Christoffel lower-index symmetry (exact)", sym_dev, 1e-300));

    for (const auto& c : out.checks) out.pass = out.pass && c.pass;
    return out;
}

// --- suite 3: killing -----------------------------------------------------------

SuiteResult suite_killing() {
    SuiteResult out{"killing", {}, true};
    std::mt19937 rng(303);
    double dev = 0.0;
    double printed_min = std::numeric_limits<double>::infinity();
    std::uniform_real_distribution<double> ux(-2.5, 2.5), uth(-kPi, kPi),
        ul(std::log(0.25), std::log(4.0));
    for (int k = 0; k < 200; ++k) {
        const Sl2Point p(ux(rng), std::exp(ul(rng)), uth(rng));
        const CoordVector u = random_vector(rng), v = random_vector(rng);
        for (KillingField f : {KillingField::Dx, KillingField::Dtheta, KillingField::V})
            dev = std::max(dev, killing_equation_residual(f, p, u, v, 1e-5));
        dev = std::max(dev, killing_equation_residual(
                                [](const Sl2Point& q) { return killing_w_corrected_coord(q); },
                                p, u, v, 1e-5));
    }
    // the e3 coefficient (x^2 - y^2)/2 used by the classification field
    // fails the Killing equation with |(L_W g)_xy| = 1/(4y)
    printed_min = killing_equation_residual(KillingField::W, Sl2Point(0.7, 1.0, 0.3),
                                            CoordVector{1, 0, 0}, CoordVector{0, 1, 0}, 1e-5);
    out.checks.push_back(below(
        "Killing equation, 4 basis fields x 200 random points/vector pairs", dev, 1e-5,
        "fourth field with e3 coefficient (x^2+y^2)/(4y)"));
    out.checks.push_back(above(
        "drift-variant W (e3 coefficient (x^2-y^2)/(4y)): |L_W g|(dx,dy) at y=1", printed_min, 0.1,
        "fails the Killing equation by |(L_W g)_xy| = 1/(4y); kept as the classification field"));
    for (const auto& c : out.checks) out.pass = out.pass && c.pass;
    return out;
}

// --- suite 4: closed-forms ---------------------------------------------------------

SuiteResult suite_closed_forms() {
    SuiteResult out{"closed-forms", {}, true};
    std::mt19937 rng(404);
    for (Family family : {Family::N, Family::A, Family::K}) {
        double h_dev = 0.0, n_dev = 0.0;
        const auto [tlo, thi] = family_t_range(family);
        std::uniform_real_distribution<double> us(-1.2, 1.2), ut(tlo, thi);
        for (int c = 0; c < 50; ++c) {
            InvariantSurface surface{family, random_curve(family, rng), +1};
            for (int k = 0; k < 20; ++k) {
                const double s = us(rng), t = ut(rng);
                const auto [Nc, Hc] = closed_form_N_H(surface, s, t);
                const FundamentalForms f = oriented_forms(surface, s, t);
                const double Ho = (f.E * f.Nff - 2.0 * f.F * f.M + f.G * f.L) /
                                  (2.0 * (f.E * f.G - f.F * f.F));
                h_dev = std::max(h_dev, std::abs(Ho - Hc) / std::max(1.0, std::abs(Hc)));
                n_dev = std::max(n_dev, norm(f.unit_normal - Nc));
            }
        }
        std::string fam(to_string(family));
        out.checks.push_back(below(fam + "-family oracle vs closed-form H (relative)", h_dev, 1e-6));
        out.checks.push_back(below(fam + "-family oracle vs closed-form normal", n_dev, 1e-8));
    }
    for (const auto& c : out.checks) out.pass = out.pass && c.pass;
    return out;
}

// --- suite 5: special-surfaces -------------------------------------------------------

SuiteResult suite_special_surfaces() {
    SuiteResult out{"special-surfaces", {}, true};
    struct Case {
        std::string label;
        SpecialSurface surface;
        double expected_K;
    };
    const std::vector<Case> cases = {
        {"sigma-y0:1", sigma_y0(1.0), 0.0},       {"sigma-y0:2", sigma_y0(2.0), 0.0},
        {"sigma-x0:0.7", sigma_x0(0.7), 0.0},     {"sigma-x0:0", sigma_x0(0.0), 0.0},
        {"sigma-theta0:0.3", sigma_theta0(0.3), -4.0},
    };
    for (const auto& cs : cases) {
        double h_dev = 0.0, k_dev = 0.0, n_dev = 0.0;
        for (const auto& member : cs.surface.members) {
            const auto [tlo, thi] = family_t_range(member.family);
            for (double s : {-0.8, 0.0, 0.8})
                for (double t : {tlo + 0.25 * (thi - tlo), 0.5 * (tlo + thi),
                                 tlo + 0.75 * (thi - tlo)}) {
                    const double Ho = oriented_mean_curvature(member, s, t);
                    h_dev = std::max(h_dev, std::abs(Ho - cs.surface.expected_H));
                    k_dev = std::max(
                        k_dev, std::abs(gauss_curvature_induced(member, s, t) - cs.expected_K));
                    const FundamentalForms f = oriented_forms(member, s, t);
                    n_dev = std::max(n_dev, norm(f.unit_normal - cs.surface.expected_normal));
                }
        }
        out.checks.push_back(below(cs.label + ": |H - expected|", h_dev, 1e-8));
        out.checks.push_back(below(cs.label + ": |K_induced - expected|", k_dev, 1e-4));
        out.checks.push_back(below(cs.label + ": unit normal", n_dev, 1e-10));
    }
    for (const auto& c : out.checks) out.pass = out.pass && c.pass;
    return out;
}

// --- suites 6/7: translator certifications and refutations ----------------------------

GridSpec clipped_grid(const InvariantSurface& surface) { return default_grid(surface); }

SuiteResult suite_translators() {
    SuiteResult out{"translators", {}, true};
    double max_gap = 0.0;
    auto certify = [&](const std::string& label, const std::vector<InvariantSurface>& members,
                       KillingField field) {
        double worst = 0.0;
        bool consistent = true;
        for (const auto& member : members) {
            const TranslatorProblem problem{member.family, field, +1};
            const ResidualReport rep =
                verify_surface(problem, member, clipped_grid(member), 1e-7, label);
            worst = std::max(worst, rep.max_abs_closed);
            consistent = consistent && rep.consistent;
            max_gap = std::max(max_gap, rep.max_inconsistency);
        }
        CheckResult c = below(label + ": max |H - <N,X>| on 30x30", worst, 1e-7);
        c.pass = c.pass && consistent;
        if (!consistent) c.note = "closed-form vs oracle inconsistency";
        out.checks.push_back(c);
    };

    const SpecialSurface st = sigma_theta0(0.3);
    certify("(sigma-theta0, v)", st.members, KillingField::V);
    certify("(sigma-theta0, w)", st.members, KillingField::W);
    for (double x0 : {-1.0, 0.0, 2.0}) {
        std::ostringstream name;
        name << "(sigma-x0:" << x0 << ", dtheta)";
        certify(name.str(), sigma_x0(x0).members, KillingField::Dtheta);
    }
    certify("(sigma-x0:0, v)", sigma_x0(0.0).members, KillingField::V);
    certify("(nx-minimal, dx)", {explicit_solution(SolutionTag::NxMinimal).surface},
            KillingField::Dx);
    certify("(ntheta-cmc, dtheta)", {explicit_solution(SolutionTag::NthetaCmc).surface},
            KillingField::Dtheta);
    certify("(ntheta-general, dtheta)", {explicit_solution(SolutionTag::NthetaGeneral).surface},
            KillingField::Dtheta);
    certify("(nv, v)", {explicit_solution(SolutionTag::Nv).surface}, KillingField::V);
    certify("(rot-line-v, dtheta)", {explicit_solution(SolutionTag::RotLineV).surface},
            KillingField::Dtheta);
    certify("(rot-line-v, v)", {explicit_solution(SolutionTag::RotLineV).surface},
            KillingField::V);

    out.checks.push_back(below("closed form vs oracle agreement over all grids", max_gap, 1e-5));
    for (const auto& c : out.checks) out.pass = out.pass && c.pass;
    return out;
}

SuiteResult suite_non_translators() {
    SuiteResult out{"non-translators", {}, true};

    auto refute = [&](const std::string& label, const InvariantSurface& member,
                      KillingField field) {
        const TranslatorProblem problem{member.family, field, +1};
        const ResidualReport rep = verify_surface(problem, member, clipped_grid(member), 1e-7, label);
        CheckResult c = above(label + ": max |H - <N,X>| on grid", rep.max_abs_closed, 0.1);
        c.pass = c.pass && rep.consistent;
        out.checks.push_back(c);
    };

    const SpecialSurface sy = sigma_y0(1.0);
    for (KillingField f :
         {KillingField::Dx, KillingField::Dtheta, KillingField::V, KillingField::W})
        refute(std::string("(sigma-y0, ") + to_string(f) + ")", sy.members.front(), f);

    const ExplicitSolution line_h = explicit_solution(SolutionTag::RotLineH);
    for (KillingField f :
         {KillingField::Dx, KillingField::Dtheta, KillingField::V, KillingField::W})
        refute(std::string("(rot-line-h, ") + to_string(f) + ")", line_h.surface, f);

    // rotational constant-H profiles against the fourth field
    auto nw_closed = [](double H, double c, double s) {
        if (H < 1.0) {
            const double k = std::sqrt(1.0 - H * H);
            return -0.25 * c * k * std::sinh(2.0 * k * s);
        }
        if (H == 1.0) return 0.0;
        const double k = std::sqrt(H * H - 1.0);
        return 0.25 * c * k * std::sin(2.0 * k * s);
    };
    for (double H : {0.5, 1.0, 2.0}) {
        const double c = H < 1.0 ? -1.0 : 1.0;
        const ExplicitSolution sol =
            explicit_solution(SolutionTag::RotCmc, {{"H", H}, {"c", c}});
        const TranslatorProblem problem{Family::K, KillingField::W, +1};
        const ResidualReport rep =
            verify_surface(problem, sol.surface, clipped_grid(sol.surface), 1e-7, sol.name);
        std::ostringstream label;
        label << "(rot-cmc:" << H << ", w)";
        CheckResult c1 = above(label.str() + ": max residual", rep.max_abs_closed, 0.1);
        c1.pass = c1.pass && rep.consistent;
        out.checks.push_back(c1);

        double nw_dev = 0.0, h_dev = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double s = -2.0 + 4.0 * i / 100.0;
            const auto [N, Hc] = closed_form_N_H(sol.surface, s, 0.0);
            const FrameVector X =
                killing_at(KillingField::W, surface_position(sol.surface, s, 0.0));
            nw_dev = std::max(nw_dev, std::abs(dot(N, X) - nw_closed(H, c, s)));
            h_dev = std::max(h_dev, std::abs(Hc - H));
        }
        out.checks.push_back(below(label.str() + ": computed <N,W> vs closed form", nw_dev, 1e-8));
        out.checks.push_back(below(label.str() + ": |H - " + io::format_double(H) + "| along curve",
                                   h_dev, 1e-8));
    }

    for (const auto& c : out.checks) out.pass = out.pass && c.pass;
    return out;
}

// --- suite 8: cmc ------------------------------------------------------------------

SuiteResult suite_cmc() {
    SuiteResult out{"cmc", {}, true};
    const ExplicitSolution sol = explicit_solution(SolutionTag::NthetaCmc);
    double h_dev = 0.0;
    for (int i = 0; i <= 50; ++i) {
        const double s = -2.0 + 4.0 * i / 50.0;
        const auto [N, H] = closed_form_N_H(sol.surface, s, 0.0);
        h_dev = std::max(h_dev, std::abs(H + 1.0 / kSqrt3));
        h_dev = std::max(h_dev, std::abs(oriented_mean_curvature(sol.surface, s, 0.0) + 1.0 / kSqrt3));
    }
    out.checks.push_back(below("ntheta-cmc: |H + 1/sqrt3|", h_dev, 1e-10));

    int mismatches = 0;
    std::ostringstream detail;
    for (double H : {0.0, 0.25, 0.5, 1.0, 2.0}) {
        const CmcVerdict v = cmc_consistency_check(H);
        const bool expected = (H == 0.0);
        if (v.consistent != expected) ++mismatches;
        detail << "H=" << H << (v.consistent ? " consistent; " : " inconsistent; ");
    }
    CheckResult c = below("constant-H rotational V-translator exists only for H = 0", mismatches,
                          0.5, detail.str());
    out.checks.push_back(c);

    const CmcVerdict half = cmc_consistency_check(0.5);
    out.checks.push_back(above("H = 1/2 overdetermined residual (min over window)",
                               half.generic_min_abs_residual, 0.1));

    for (const auto& cc : out.checks) out.pass = out.pass && cc.pass;
    return out;
}

// --- suite 9: ode -------------------------------------------------------------------

SuiteResult suite_ode() {
    SuiteResult out{"ode", {}, true};
    const ode::OdeSystem sys = autonomous_dx_system();
    ode::IntegratorConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-13;

    double min_y = std::numeric_limits<double>::infinity();
    double worst_end = 0.0;
    for (double y0 : {0.5, 1.0, 2.0}) {
        const ode::Trajectory tr = ode::integrate(sys, {y0, 0.0}, 0.0, 20.0, cfg);
        for (const auto& st : tr.states) min_y = std::min(min_y, st[0]);
        worst_end = std::max(worst_end, tr.states.back()[0]);
    }
    out.checks.push_back(above("autonomous system keeps y > 0 on [0,20] (min y)", min_y, 0.0));
    out.checks.push_back(below("autonomous system reaches y < 1e-3 by s = 20 (max end y)",
                               worst_end, 1e-3,
                               "the profile decays like 1/(4s); the crossing is near s = 250"));

    double phi_dev = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double s = -3.0 + 6.0 * i / 400.0;
        const double phi = ntheta_phi(s);
        const double dphi = kSqrt3 / std::cosh(kSqrt3 * s);
        phi_dev = std::max(phi_dev,
                           std::abs(dphi - (std::cos(phi) + kSqrt2 * std::sin(phi))));
    }
    out.checks.push_back(below("closed-form angle solves phi' = cos(phi) + sqrt2 sin(phi)",
                               phi_dev, 1e-10));

    for (const auto& c : out.checks) out.pass = out.pass && c.pass;
    return out;
}

// --- suite 10: ntheta-psi -------------------------------------------------------------

SuiteResult suite_ntheta_psi() {
    SuiteResult out{"ntheta-psi", {}, true};

    // Direct integration of the angle-form system with the closed-form angle.
    ode::OdeSystem sys;
    sys.dim = 2;
    sys.rhs = [](double s, const ode::State& u, ode::State& du) {
        const double phi = ntheta_phi(s);
        du[0] = kSqrt2 * u[0] * std::cos(phi);
        du[1] = std::sin(phi);
    };
    sys.in_domain = [](double, const ode::State& u) { return u[0] > 0.0; };
    ode::IntegratorConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-13;
    const ode::Trajectory fwd = ode::integrate(sys, {1.0, 0.0}, 0.0, 3.0, cfg);
    const ode::Trajectory bwd = ode::integrate(sys, {1.0, 0.0}, 0.0, -3.0, cfg);

    auto sup_error = [&](PsiVariant variant) {
        double dev = 0.0;
        for (int i = -60; i <= 60; ++i) {
            const double s = i / 20.0;
            const ode::State u = (s >= 0 ? fwd : bwd).state_at(s);
            const auto [yv, tv] = ntheta_general_curve(variant, s, 1.0, 0.0);
            dev = std::max({dev, std::abs(u[0] - yv), std::abs(u[1] - tv)});
        }
        return dev;
    };

    out.checks.push_back(below("psi(s) = -log cosh(sqrt3 s): sup error vs integration",
                               sup_error(PsiVariant::NegLogCosh), 1e-6));
    out.checks.push_back(above("psi = log cosh(sqrt3) (constant): sup error",
                               sup_error(PsiVariant::LiteralConstant), 0.1));
    out.checks.push_back(above("psi(s) = +log cosh(sqrt3 s): sup error",
                               sup_error(PsiVariant::PosLogCosh), 0.1));

    // residual magnitude of the theta-slice surface against the fiber field
    const SpecialSurface st = sigma_theta0(0.3);
    double dev = 0.0;
    for (const auto& member : st.members) {
        const TranslatorProblem problem{member.family, KillingField::Dtheta, +1};
        const GridSpec grid = default_grid(member);
        for (int i = 0; i < grid.ns; i += 3)
            for (int j = 0; j < grid.nt; j += 3) {
                const double s = io::grid_point(grid.s_min, grid.s_max, grid.ns, i);
                const double t = io::grid_point(grid.t_min, grid.t_max, grid.nt, j);
                dev = std::max(dev,
                               std::abs(std::abs(residual(problem, member, s, t)) - 1.0 / kSqrt2));
            }
    }
    out.checks.push_back(below("theta-slice vs fiber field: | |residual| - 1/sqrt2 |", dev, 1e-12,
                               "the slice is minimal but <N, e3> = -/+ 1/sqrt2"));

    for (const auto& c : out.checks) out.pass = out.pass && c.pass;
    return out;
}

// --- suite 11: poly-classification ------------------------------------------------------

SuiteResult suite_poly_classification() {
    SuiteResult out{"poly-classification", {}, true};
    std::mt19937 rng(1111);

    auto max_coeff_along = [](KillingField field, const GeneratingCurve& curve) {
        double mx = 0.0;
        for (int i = 0; i <= 50; ++i) {
            const double s = -1.5 + 3.0 * i / 50.0;
            for (double c : a_family_poly_coeffs(field, curve, s)) mx = std::max(mx, std::abs(c));
        }
        return mx;
    };

    // degenerate families: coefficients vanish identically
    double degen = 0.0;
    const GeneratingCurve theta_const =
        make_analytic_curve(Family::A, [](double s) { return std::array<double, 3>{s, 1.0, 0.0}; },
                            [](double) { return std::array<double, 3>{0.4, 0.0, 0.0}; });
    const GeneratingCurve x_const =
        make_analytic_curve(Family::A, [](double) { return std::array<double, 3>{1.3, 0.0, 0.0}; },
                            [](double s) { return std::array<double, 3>{s, 1.0, 0.0}; });
    const GeneratingCurve x_zero =
        make_analytic_curve(Family::A, [](double) { return std::array<double, 3>{0.0, 0.0, 0.0}; },
                            [](double s) { return std::array<double, 3>{s, 1.0, 0.0}; });
    degen = std::max(degen, max_coeff_along(KillingField::Dx, theta_const));
    degen = std::max(degen, max_coeff_along(KillingField::Dtheta, x_const));
    degen = std::max(degen, max_coeff_along(KillingField::V, theta_const));
    degen = std::max(degen, max_coeff_along(KillingField::V, x_zero));
    degen = std::max(degen, max_coeff_along(KillingField::W, theta_const));
    out.checks.push_back(below("degenerate curves: max |coefficient| along s", degen, 1e-10));

    // random non-degenerate curves: some coefficient stays visibly nonzero
    double weakest = std::numeric_limits<double>::infinity();
    for (int c = 0; c < 100; ++c) {
        const GeneratingCurve curve = random_curve(Family::A, rng);
        for (KillingField f :
             {KillingField::Dx, KillingField::Dtheta, KillingField::V, KillingField::W})
            weakest = std::min(weakest, max_coeff_along(f, curve));
    }
    out.checks.push_back(above("100 random curves: min over fields of max |coefficient|",
                               weakest, 1e-3));

    // normalization: P(t) = n Phi^3 (H - <N, X>)
    double norm_dev = 0.0;
    std::uniform_real_distribution<double> us(-1.2, 1.2), ut(0.3, 3.0);
    for (int c = 0; c < 20; ++c) {
        InvariantSurface surface{Family::A, random_curve(Family::A, rng), +1};
        for (int k = 0; k < 10; ++k) {
            const double s = us(rng), t = ut(rng);
            const CurveJet j = surface.curve.at(s);
            const double w = j.da + 2.0 * t * j.db;
            const double Phi = std::sqrt(w * w + j.da * j.da);
            for (KillingField f :
                 {KillingField::Dx, KillingField::Dtheta, KillingField::V, KillingField::W}) {
                const auto coeffs = a_family_poly_coeffs(f, surface.curve, s);
                double poly = 0.0, tp = 1.0;
                for (double cf : coeffs) {
                    poly += cf * tp;
                    tp *= t;
                }
                const TranslatorProblem problem{Family::A, f, +1};
                const double r = residual(problem, surface, s, t);
                const double predicted = a_family_poly_normalization(f) * Phi * Phi * Phi * r;
                norm_dev = std::max(norm_dev,
                                    std::abs(poly - predicted) / std::max(1.0, std::abs(poly)));
            }
        }
    }
    out.checks.push_back(below("polynomial = normalization * Phi^3 * residual", norm_dev, 1e-8));

    for (const auto& c : out.checks) out.pass = out.pass && c.pass;
    return out;
}

// --- suite 12: formats ---------------------------------------------------------------

SuiteResult suite_formats(const VerifyContext& ctx) {
    SuiteResult out{"formats", {}, true};
    std::mt19937 rng(1212);

    double rt_dev = 0.0, pt_dev = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const Sl2Point p = random_point(rng, 0.05, 20.0);
        const Sl2Matrix m = compose_nak(p);
        const Sl2Point q = decompose_nak(m);
        const Sl2Matrix m2 = compose_nak(q);
        rt_dev = std::max({rt_dev, std::abs(m.a - m2.a), std::abs(m.b - m2.b),
                           std::abs(m.c - m2.c), std::abs(m.d - m2.d)});
        double dth = std::remainder(q.theta - p.theta, 2.0 * kPi);
        pt_dev = std::max({pt_dev, std::abs(q.x - p.x), std::abs(q.y - p.y), std::abs(dth)});
    }
    out.checks.push_back(below("compose/decompose round trip, 1000 matrices", rt_dev, 1e-10));
    out.checks.push_back(below("point round trip (theta mod 2pi)", pt_dev, 1e-10));

    if (ctx.cli_path.empty()) {
        out.checks.push_back({"cmd_solve determinism (byte-identical CSV)", 1.0, 0.5, false, false,
                              "no CLI path provided to the formats suite"});
    } else {
        namespace fs = std::filesystem;
        const fs::path dir = fs::temp_directory_path();
        const std::string tag = std::to_string(
            std::chrono::steady_clock::now().time_since_epoch().count() % 100000000);
        const fs::path f1 = dir / ("sl2r-det-a-" + tag + ".csv");
        const fs::path f2 = dir / ("sl2r-det-b-" + tag + ".csv");
        const std::string base = "\"" + ctx.cli_path +
                                 "\" solve --family K --field dx --ic x=0,y=1,phi=0 "
                                 "--s-range 0:6 --out ";
        const int rc1 = std::system((base + "\"" + f1.string() + "\"").c_str());
        const int rc2 = std::system((base + "\"" + f2.string() + "\"").c_str());
        bool ok = rc1 == 0 && rc2 == 0;
        std::string note;
        if (ok) {
            std::ifstream a(f1, std::ios::binary), b(f2, std::ios::binary);
            std::stringstream sa, sb;
            sa << a.rdbuf();
            sb << b.rdbuf();
            ok = !sa.str().empty() && sa.str() == sb.str();
            if (!ok) note = "outputs differ";
        } else {
            note = "solve invocation failed";
        }
        std::error_code ec;
        fs::remove(f1, ec);
        fs::remove(f2, ec);
        out.checks.push_back({"cmd_solve determinism (byte-identical CSV)", ok ? 0.0 : 1.0, 0.5,
                              false, ok, note});
    }

    for (const auto& c : out.checks) out.pass = out.pass && c.pass;
    return out;
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"frame-metric", "connection",       "killing",        "closed-forms",
            "special-surfaces", "translators",  "non-translators", "cmc",
            "ode",          "ntheta-psi",       "poly-classification", "formats"};
}

SuiteResult run_suite(const std::string& name, const VerifyContext& ctx) {
    if (name == "frame-metric") return suite_frame_metric();
    if (name == "connection") return suite_connection();
    if (name == "killing") return suite_killing();
    if (name == "closed-forms") return suite_closed_forms();
    if (name == "special-surfaces") return suite_special_surfaces();
    if (name == "translators") return suite_translators();
    if (name == "non-translators") return suite_non_translators();
    if (name == "cmc") return suite_cmc();
    if (name == "ode") return suite_ode();
    if (name == "ntheta-psi") return suite_ntheta_psi();
    if (name == "poly-classification") return suite_poly_classification();
    if (name == "formats") return suite_formats(ctx);
    throw std::invalid_argument("sl2r: unknown suite '" + name + "'");
}

std::vector<SuiteResult> run_all_suites(const VerifyContext& ctx) {
    std::vector<SuiteResult> out;
    for (const auto& name : suite_names()) out.push_back(run_suite(name, ctx));
    return out;
}

}  // namespace sl2r::verify
