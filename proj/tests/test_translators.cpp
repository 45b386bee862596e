#include <doctest.h>

#include <cmath>
#include <random>

#include "sl2r/catalog.hpp"
#include "sl2r/ode.hpp"
#include "sl2r/translators.hpp"

using namespace sl2r;

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt3 = 1.7320508075688772;
}  // namespace

TEST_CASE("pointwise residuals of the coordinate slices") {
    const SpecialSurface st = sigma_theta0(0.0);
    for (const auto& member : st.members) {
        const TranslatorProblem pv{member.family, KillingField::V, +1};
        CHECK(std::abs(residual(pv, member, 0.4, 1.3)) < 1e-14);
        const TranslatorProblem pth{member.family, KillingField::Dtheta, +1};
        CHECK(std::abs(std::abs(residual(pth, member, 0.4, 1.3)) - 1.0 / kSqrt2) < 1e-14);
    }
    const SpecialSurface sy = sigma_y0(1.0);
    const TranslatorProblem pdx{Family::N, KillingField::Dx, +1};
    for (double s : {-1.0, 0.5})
        for (double t : {-2.0, 1.0}) CHECK(std::abs(residual(pdx, sy.members[0], s, t) - 1.0) < 1e-14);

    // family mismatch is rejected
    const TranslatorProblem wrong{Family::K, KillingField::Dx, +1};
    CHECK_THROWS_AS(residual(wrong, sy.members[0], 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("polynomial coefficients of the A-family classification") {
    // theta-constant curve: the dx system vanishes identically
    const GeneratingCurve theta_const = make_analytic_curve(
        Family::A, [](double s) { return std::array<double, 3>{s, 1.0, 0.0}; },
        [](double) { return std::array<double, 3>{0.7, 0.0, 0.0}; });
    for (double c : a_family_poly_coeffs(KillingField::Dx, theta_const, 0.3)) CHECK(c == 0.0);

    // x-constant curve: the dtheta system vanishes identically
    const GeneratingCurve x_const = make_analytic_curve(
        Family::A, [](double) { return std::array<double, 3>{2.0, 0.0, 0.0}; },
        [](double s) { return std::array<double, 3>{s, 1.0, 0.0}; });
    for (double c : a_family_poly_coeffs(KillingField::Dtheta, x_const, 0.3)) CHECK(c == 0.0);

    // generic line-line curve: constant coefficient of the dx system is 1
    const GeneratingCurve generic = make_analytic_curve(
        Family::A, [](double s) { return std::array<double, 3>{s, 1.0, 0.0}; },
        [](double s) { return std::array<double, 3>{s, 1.0, 0.0}; });
    const auto coeffs = a_family_poly_coeffs(KillingField::Dx, generic, 0.0);
    REQUIRE(coeffs.size() == 3);
    CHECK(coeffs[0] == 1.0);

    // the w system carries five coefficients, led by the cubic rate term
    const auto wc = a_family_poly_coeffs(KillingField::W, generic, 0.0);
    REQUIRE(wc.size() == 5);
    CHECK(wc[4] == -4.0);

    CHECK_THROWS_AS(a_family_poly_coeffs(KillingField::Dx, sigma_y0(1.0).members[0].curve, 0.0),
                    std::invalid_argument);
}

TEST_CASE("reduction right-hand sides") {
    // autonomous rotational dx system at (y, phi) = (1, 0)
    const TranslatorProblem kdx{Family::K, KillingField::Dx, +1};
    const ode::State d2 = reduction_rhs(kdx, 0.0, {1.0, 0.0});
    CHECK(d2[0] == 0.0);
    CHECK(d2[1] == -2.0);

    // the full (x, y, phi) form
    const ode::State d3 = reduction_rhs(kdx, 0.0, {0.0, 1.0, 0.0});
    CHECK(d3[0] == 2.0);
    CHECK(d3[1] == 0.0);
    CHECK(d3[2] == -2.0);

    // fiber-field angle rate at phi = arctan(sqrt2)
    const TranslatorProblem ndt{Family::N, KillingField::Dtheta, +1};
    const double phi0 = std::atan(kSqrt2);
    const ode::State dn = reduction_rhs(ndt, 0.0, {1.0, 0.0, phi0});
    CHECK(std::abs(dn[2] - kSqrt3) < 1e-14);

    // the constant-angle branch: tan(phi) = -1/sqrt2 makes phi stationary
    const double phic = -std::atan(1.0 / kSqrt2);
    const ode::State dc = reduction_rhs(ndt, 0.0, {1.0, 0.0, phic});
    CHECK(std::abs(dc[2]) < 1e-15);

    CHECK_THROWS_AS(make_reduction_system({Family::N, KillingField::W, +1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_reduction_system({Family::A, KillingField::Dx, +1}),
                    std::invalid_argument);
}

TEST_CASE("explicit solutions satisfy their defining reductions") {
    const std::vector<ExplicitSolution> sols = {
        explicit_solution(SolutionTag::NxMinimal),
        explicit_solution(SolutionTag::NthetaCmc),
        explicit_solution(SolutionTag::NthetaGeneral),
        explicit_solution(SolutionTag::Nv),
        explicit_solution(SolutionTag::RotLineH),
        explicit_solution(SolutionTag::RotLineV),
        explicit_solution(SolutionTag::RotCmc, {{"H", 0.5}}),
        explicit_solution(SolutionTag::RotCmc, {{"H", 1.0}}),
        explicit_solution(SolutionTag::RotCmc, {{"H", 2.0}}),
    };
    for (const auto& sol : sols) {
        const double lo = std::max(sol.surface.curve.s_min, -2.0);
        const double hi = std::min(sol.surface.curve.s_max, 2.0);
        double worst = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double s = lo + (hi - lo) * (i + 0.5) / 201.0;
            worst = std::max(worst, sol.defining_ode_residual(s));
        }
        INFO(sol.name);
        CHECK(worst < 1e-9);
        // every curve keeps y positive on its validity interval
        for (int i = 0; i <= 50; ++i) {
            const double s = lo + (hi - lo) * (i + 0.5) / 51.0;
            const CurveJet j = sol.surface.curve.at(s);
            CHECK((sol.surface.family == Family::N ? j.a : j.b) > 0.0);
        }
    }
}

TEST_CASE("explicit solution curves match their closed forms") {
    // constant-angle profile: y = c1 e^{2s/sqrt3}, theta = -s/sqrt3 + c2
    const ExplicitSolution cmc =
        explicit_solution(SolutionTag::NthetaCmc, {{"c1", 2.0}, {"c2", 0.7}});
    for (double s : {-1.0, 0.0, 1.5}) {
        const CurveJet j = cmc.surface.curve.at(s);
        CHECK(std::abs(j.a - 2.0 * std::exp(2.0 * s / kSqrt3)) < 1e-12 * j.a);
        CHECK(std::abs(j.b - (-s / kSqrt3 + 0.7)) < 1e-14);
    }

    // unit-H rotational profile: x = -2cs/(4s^2+1), y = c/(4s^2+1)
    const ExplicitSolution one = explicit_solution(SolutionTag::RotCmc, {{"H", 1.0}, {"c", 2.0}});
    for (double s : {-0.8, 0.5, 1.2}) {
        const CurveJet j = one.surface.curve.at(s);
        const double q = 4.0 * s * s + 1.0;
        CHECK(std::abs(j.a - (-4.0 * s / q)) < 1e-14);
        CHECK(std::abs(j.a - (-0.5 * 2.0 * std::sin(2.0 * std::atan2(1.0, 2.0 * s)))) < 1e-14);
        CHECK(std::abs(j.b - 2.0 / q) < 1e-14);
    }

    // cosine arch: y = c (1 + cos(sqrt2 (s - s0)))
    const ExplicitSolution nv = explicit_solution(SolutionTag::Nv, {{"c", 0.5}, {"s0", 0.3}});
    const CurveJet j = nv.surface.curve.at(1.0);
    CHECK(std::abs(j.a - 0.5 * (1.0 + std::cos(kSqrt2 * 0.7))) < 1e-14);
    CHECK(j.b == 1.0);
}

TEST_CASE("explicit solution parameter validation") {
    CHECK_THROWS_AS(explicit_solution(SolutionTag::NxMinimal, {{"c1", -1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(explicit_solution(SolutionTag::NthetaCmc, {{"c1", 0.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(explicit_solution(SolutionTag::Nv, {{"c", -0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(explicit_solution(SolutionTag::RotCmc, {}), std::invalid_argument);
    CHECK_THROWS_AS(explicit_solution(SolutionTag::RotCmc, {{"H", 0.5}, {"c", 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(explicit_solution(SolutionTag::RotCmc, {{"H", 2.0}, {"c", -1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(explicit_solution(SolutionTag::RotCmc, {{"H", -0.1}}), std::invalid_argument);

    // evaluation outside the validity interval is refused
    const ExplicitSolution nv = explicit_solution(SolutionTag::Nv);
    CHECK_THROWS_AS(nv.surface.curve.at(3.0), std::domain_error);
}

TEST_CASE("grid verification certifies and refutes") {
    const ExplicitSolution nx = explicit_solution(SolutionTag::NxMinimal);
    const ResidualReport ok =
        verify_solution(nx, {Family::N, KillingField::Dx, +1}, default_grid(nx.surface));
    CHECK(ok.certified);
    CHECK(ok.consistent);
    CHECK(ok.max_abs_closed < 1e-8);
    // minimality and horizontality of the profile
    for (int i = 0; i < 20; ++i) {
        const double s = ok.grid.s_min + (ok.grid.s_max - ok.grid.s_min) * i / 19.0;
        const auto [N, H] = closed_form_N_H(nx.surface, s, 0.0);
        CHECK(std::abs(H) < 1e-8);
        CHECK(std::abs(dot(N, killing_at(KillingField::Dx, surface_position(nx.surface, s, 0.0)))) <
              1e-10);
    }

    const ExplicitSolution nv = explicit_solution(SolutionTag::Nv);
    const ResidualReport nvrep =
        verify_solution(nv, {Family::N, KillingField::V, +1}, default_grid(nv.surface));
    CHECK(nvrep.certified);
    CHECK(nvrep.max_abs_closed < 1e-8);

    // constant-H rotational profile against the quadratic drift: refuted with
    // the residual H - (c/4) sqrt3 sin(2 sqrt3 s)
    const ExplicitSolution rc = explicit_solution(SolutionTag::RotCmc, {{"H", 2.0}, {"c", 1.0}});
    const ResidualReport rep =
        verify_solution(rc, {Family::K, KillingField::W, +1}, default_grid(rc.surface));
    CHECK_FALSE(rep.certified);
    CHECK(rep.consistent);
    for (double s : {-1.0, 0.2, 0.8}) {
        const double r = residual({Family::K, KillingField::W, +1}, rc.surface, s, 0.0);
        CHECK(std::abs(r - (2.0 - 0.25 * kSqrt3 * std::sin(2.0 * kSqrt3 * s))) < 1e-12);
    }
}

TEST_CASE("constant-mean-curvature consistency verdicts") {
    const CmcVerdict v0 = cmc_consistency_check(0.0);
    CHECK(v0.consistent);
    CHECK(v0.constant_branch_residual == 0.0);

    const CmcVerdict vh = cmc_consistency_check(0.5);
    CHECK_FALSE(vh.consistent);
    CHECK(vh.generic_min_abs_residual > 0.1);

    for (double H : {0.25, 1.0, 2.0}) CHECK_FALSE(cmc_consistency_check(H).consistent);
    CHECK_THROWS_AS(cmc_consistency_check(-1.0), std::invalid_argument);

    // the algebraic obstruction at constants: phi = 0 with H = 0 is impossible
    CHECK(std::abs(3.0 * 0.0 - (1.0 + 2.0 * 0.0) * std::cos(0.0)) == 1.0);
}

TEST_CASE("bi-graph diagnostic on the rotational dx trajectory") {
    const TranslatorProblem kdx{Family::K, KillingField::Dx, +1};
    const ReductionSystem rs = make_reduction_system(kdx);
    ode::IntegratorConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-13;
    const ode::Trajectory fwd = ode::integrate(rs.system, {0.0, 1.0, 0.0}, 0.0, 8.0, cfg);
    const BigraphDiagnostic dfwd = bigraph_diagnostic(fwd);
    CHECK(dfwd.is_bigraph);
    CHECK(dfwd.turning_points == 0);  // x grows monotonically forward

    const ode::Trajectory bwd = ode::integrate(rs.system, {0.0, 1.0, 0.0}, 0.0, -4.0, cfg);
    const BigraphDiagnostic dbwd = bigraph_diagnostic(bwd);
    CHECK(dbwd.is_bigraph);
    CHECK(dbwd.turning_points == 1);  // one turn where the angle crosses pi/2
}

TEST_CASE("reduction rows recompute curvature and residual from the state") {
    const TranslatorProblem kv{Family::K, KillingField::V, +1};
    const ReductionSystem rs = make_reduction_system(kv);
    ode::IntegratorConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-14;
    const ode::Trajectory tr = ode::integrate(rs.system, {0.5, 1.0, 0.3}, 0.0, 2.0, cfg);
    for (const SolveRow& row : solve_rows(rs, tr)) {
        REQUIRE(row.residual.has_value());
        CHECK(std::abs(*row.residual) < 1e-9);
        CHECK_FALSE(row.theta.has_value());
        CHECK(row.x.has_value());
    }

    // the N-family V reduction reproduces the cosine profile up to constants
    const TranslatorProblem nv{Family::N, KillingField::V, +1};
    const ReductionSystem rsn = make_reduction_system(nv);
    // start at the crest of y = c (1 + cos(sqrt2 s)) with c = 1/2: y(0) = 1, f(0) = 0
    const ode::Trajectory trn = ode::integrate(rsn.system, {1.0, 0.0}, 0.0, 1.9, cfg);
    double sup = 0.0;
    for (int i = 0; i <= 50; ++i) {
        const double s = 1.9 * i / 50.0;
        sup = std::max(sup, std::abs(trn.state_at(s)[0] - 0.5 * (1.0 + std::cos(kSqrt2 * s))));
    }
    CHECK(sup < 1e-6);
}

TEST_CASE("closed-form and oracle residuals agree for every family/field pair") {
    std::mt19937 rng(47);
    std::uniform_real_distribution<double> ua(-0.2, 0.2), ub(0.05, 0.2), uw(0.5, 1.2),
        up(0.0, 6.28), ud(0.6, 1.0);
    auto trig = [&](double drift) {
        const double a0 = ua(rng), b = ub(rng), w = uw(rng), p = up(rng);
        return [=](double s) {
            return std::array<double, 3>{a0 + drift * s + b * std::sin(w * s + p),
                                         drift + b * w * std::cos(w * s + p),
                                         -b * w * w * std::sin(w * s + p)};
        };
    };
    auto positive = [&]() {
        const double a0 = ua(rng), a1 = ua(rng), b = ub(rng), w = uw(rng), p = up(rng);
        return [=](double s) {
            const double g = a0 + a1 * s + b * std::sin(w * s + p);
            const double dg = a1 + b * w * std::cos(w * s + p);
            const double ddg = -b * w * w * std::sin(w * s + p);
            const double y = std::exp(g);
            return std::array<double, 3>{y, dg * y, (ddg + dg * dg) * y};
        };
    };
    for (Family family : {Family::N, Family::A, Family::K}) {
        for (int c = 0; c < 5; ++c) {
            GeneratingCurve curve;
            switch (family) {
                case Family::N: curve = make_analytic_curve(family, positive(), trig(ud(rng))); break;
                case Family::A: curve = make_analytic_curve(family, trig(ud(rng)), trig(0.4)); break;
                case Family::K: curve = make_analytic_curve(family, trig(ud(rng)), positive()); break;
            }
            const InvariantSurface surface{family, curve, +1};
            const double tlo = family == Family::A ? 0.3 : -2.0;
            for (KillingField f :
                 {KillingField::Dx, KillingField::Dtheta, KillingField::V, KillingField::W}) {
                const TranslatorProblem problem{family, f, +1};
                for (double s : {-0.9, 0.1, 0.8})
                    for (double t : {tlo, tlo + 1.4}) {
                        const double rc = residual(problem, surface, s, t);
                        const double ro = residual_oracle(problem, surface, s, t);
                        CHECK(std::abs(rc - ro) < 1e-5);
                    }
            }
        }
    }
}

TEST_CASE("catalog resolves every listed name") {
    const auto entries = catalog_entries();
    CHECK(entries.size() >= 12);
    for (const auto& e : entries) {
        const ResolvedSurface r = resolve_surface_spec(e.name);
        CHECK_FALSE(r.members.empty());
    }
    CHECK(resolve_surface_spec("sigma-x0:2").members.size() == 2);
    CHECK(resolve_surface_spec("rot-cmc:0.5,-2").solution.has_value());
    CHECK_THROWS_AS(resolve_surface_spec("no-such-surface"), std::invalid_argument);
    CHECK_THROWS_AS(resolve_surface_spec("sigma-y0:bad"), std::invalid_argument);
    CHECK_THROWS_AS(resolve_surface_spec("rot-cmc"), std::invalid_argument);
}
