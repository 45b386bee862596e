#include "sl2r/translators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sl2r {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kPi = 3.141592653589793;

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

Sl2Point reduction_position(Family family, double y, double theta_or_x) {
    if (family == Family::N) return Sl2Point(0.0, y, theta_or_x);
    return Sl2Point(theta_or_x, y, 0.0);  // K family: (x, y, theta irrelevant)
}

}  // namespace

std::pair<FrameVector, double> closed_form_from_jet(Family family, const CurveJet& jet, double t,
                                                    int orientation) {
    InvariantSurface tmp;
    tmp.family = family;
    tmp.orientation = orientation;
    tmp.curve.family = family;
    tmp.curve.eval = [jet](double) { return jet; };
    return closed_form_N_H(tmp, 0.0, t, orientation);
}

double residual(const TranslatorProblem& problem, const InvariantSurface& surface, double s,
                double t) {
    if (problem.family != surface.family)
        throw std::invalid_argument("sl2r: surface family does not match the problem");
    const auto [N, H] = closed_form_N_H(surface, s, t, problem.orientation);
    const FrameVector X = killing_at(problem.field, surface_position(surface, s, t));
    return H - dot(N, X);
}

double residual_oracle(const TranslatorProblem& problem, const InvariantSurface& surface,
                       double s, double t) {
    if (problem.family != surface.family)
        throw std::invalid_argument("sl2r: surface family does not match the problem");
    const FundamentalForms f = oriented_forms(surface, s, t, problem.orientation);
    const double H = (f.E * f.Nff - 2.0 * f.F * f.M + f.G * f.L) /
                     (2.0 * (f.E * f.G - f.F * f.F));
    const FrameVector X = killing_at(problem.field, surface_position(surface, s, t));
    return H - dot(f.unit_normal, X);
}

double a_family_poly_normalization(KillingField field) {
    return field == KillingField::W ? 2.0 : 0.5;
}

std::vector<double> a_family_poly_coeffs(KillingField field, const GeneratingCurve& curve,
                                         double s) {
    if (curve.family != Family::A)
        throw std::invalid_argument("sl2r: polynomial coefficients require an A-family curve");
    const CurveJet j = curve.at(s);
    const double x = j.a, dx = j.da, ddx = j.dda, dth = j.db, ddth = j.ddb;
    const double wr = dx * ddth - dth * ddx;
    switch (field) {
        case KillingField::Dx:
            return {dx * dx * dth, 2.0 * dx * dth * dth, wr + 2.0 * dth * dth * dth};
        case KillingField::Dtheta:
            return {-dx * dx * dx, -2.0 * dx * dx * dth, wr - 2.0 * dx * dth * dth};
        case KillingField::V:
            return {x * dth * dx * dx, 2.0 * x * dx * dth * dth, wr + 2.0 * x * dth * dth * dth};
        case KillingField::W:
            return {2.0 * x * x * dx * dx * dth, 4.0 * x * x * dx * dth * dth,
                    4.0 * wr + 4.0 * x * x * dth * dth * dth - 2.0 * dx * dx * dth,
                    -4.0 * dx * dth * dth, -4.0 * dth * dth * dth};
    }
    throw std::invalid_argument("sl2r: unknown Killing field");
}

// --- reduction ODEs -----------------------------------------------------------

ode::OdeSystem autonomous_dx_system() {
    ode::OdeSystem sys;
    sys.dim = 2;
    sys.rhs = [](double, const ode::State& u, ode::State& du) {
        const double y = u[0], phi = u[1];
        du[0] = 2.0 * y * std::sin(phi);
        du[1] = -std::sin(phi) / y - 2.0 * std::cos(phi);
    };
    sys.in_domain = [](double, const ode::State& u) { return u[0] > 0.0; };
    return sys;
}

ode::State reduction_rhs(const TranslatorProblem& problem, double s, const ode::State& state) {
    if (problem.family == Family::K && problem.field == KillingField::Dx && state.size() == 2)
        return autonomous_dx_system().eval(s, state);
    const ReductionSystem rs = make_reduction_system(problem);
    if (state.size() != static_cast<std::size_t>(rs.system.dim))
        throw std::invalid_argument("sl2r: reduction state dimension mismatch");
    return rs.system.eval(s, state);
}

namespace {

double k_phi_rate(KillingField field, double x, double y, double phi) {
    const double c = std::cos(phi), si = std::sin(phi);
    switch (field) {
        case KillingField::Dx: return -(si + 2.0 * y * c) / y;
        case KillingField::Dtheta: return -2.0 * c;
        case KillingField::V: return -(y * c + x * si) / y;
        case KillingField::W: return (x - 2.0) * c - (x * x - y * y) * si / (2.0 * y);
    }
    throw std::invalid_argument("sl2r: unknown Killing field");
}

}  // namespace

ReductionSystem make_reduction_system(const TranslatorProblem& problem, double theta0, double s0) {
    ReductionSystem rs;
    rs.problem = problem;
    const KillingField field = problem.field;
    const int orient = problem.orientation;

    if (problem.family == Family::K) {
        rs.state_names = {"x", "y", "phi"};
        rs.system.dim = 3;
        rs.system.rhs = [field](double, const ode::State& u, ode::State& du) {
            const double x = u[0], y = u[1], phi = u[2];
            du[0] = 2.0 * y * std::cos(phi);
            du[1] = 2.0 * y * std::sin(phi);
            du[2] = k_phi_rate(field, x, y, phi);
        };
        rs.system.in_domain = [](double, const ode::State& u) { return u[1] > 0.0; };
        rs.row = [field, orient](double s, const ode::State& u) {
            const double x = u[0], y = u[1], phi = u[2];
            CurveJet j;
            j.has_phi = true;
            j.phi = phi;
            j.dphi = k_phi_rate(field, x, y, phi);
            j.a = x;
            j.b = y;
            j.da = 2.0 * y * std::cos(phi);
            j.db = 2.0 * y * std::sin(phi);
            j.dda = 2.0 * (j.db * std::cos(phi) - y * std::sin(phi) * j.dphi);
            j.ddb = 2.0 * (j.db * std::sin(phi) + y * std::cos(phi) * j.dphi);
            const auto [N, H] = closed_form_from_jet(Family::K, j, 0.0, orient);
            const FrameVector X = killing_at(field, reduction_position(Family::K, y, x));
            SolveRow row;
            row.s = s;
            row.x = x;
            row.y = y;
            row.phi = phi;
            row.H = H;
            row.residual = H - dot(N, X);
            return row;
        };
        return rs;
    }

    if (problem.family != Family::N)
        throw std::invalid_argument("sl2r: no reduction ODE for this problem");

    switch (field) {
        case KillingField::Dx: {
            // theta(s) = s up to a constant; minimality gives y'' = -2y.
            rs.state_names = {"y", "dy"};
            rs.system.dim = 2;
            rs.system.rhs = [](double, const ode::State& u, ode::State& du) {
                du[0] = u[1];
                du[1] = -2.0 * u[0];
            };
            rs.system.in_domain = [](double, const ode::State& u) { return u[0] > 0.0; };
            rs.row = [orient, theta0, s0](double s, const ode::State& u) {
                CurveJet j;
                j.a = u[0];
                j.da = u[1];
                j.dda = -2.0 * u[0];
                j.b = theta0 + (s - s0);
                j.db = 1.0;
                j.ddb = 0.0;
                const auto [N, H] = closed_form_from_jet(Family::N, j, 0.0, orient);
                const FrameVector X =
                    killing_at(KillingField::Dx, reduction_position(Family::N, j.a, j.b));
                SolveRow row;
                row.s = s;
                row.y = u[0];
                row.theta = j.b;
                row.H = H;
                row.residual = H - dot(N, X);
                return row;
            };
            return rs;
        }
        case KillingField::Dtheta: {
            rs.state_names = {"y", "theta", "phi"};
            rs.system.dim = 3;
            rs.system.rhs = [](double, const ode::State& u, ode::State& du) {
                const double y = u[0], phi = u[2];
                du[0] = kSqrt2 * y * std::cos(phi);
                du[1] = std::sin(phi);
                du[2] = std::cos(phi) + kSqrt2 * std::sin(phi);
            };
            rs.system.in_domain = [](double, const ode::State& u) { return u[0] > 0.0; };
            rs.row = [orient](double s, const ode::State& u) {
                const double y = u[0], theta = u[1], phi = u[2];
                const double dphi = std::cos(phi) + kSqrt2 * std::sin(phi);
                CurveJet j;
                j.has_phi = true;
                j.phi = phi;
                j.dphi = dphi;
                j.a = y;
                j.da = kSqrt2 * y * std::cos(phi);
                j.dda = kSqrt2 * (j.da * std::cos(phi) - y * std::sin(phi) * dphi);
                j.b = theta;
                j.db = std::sin(phi);
                j.ddb = std::cos(phi) * dphi;
                const auto [N, H] = closed_form_from_jet(Family::N, j, 0.0, orient);
                const FrameVector X =
                    killing_at(KillingField::Dtheta, reduction_position(Family::N, y, theta));
                SolveRow row;
                row.s = s;
                row.y = y;
                row.theta = theta;
                row.phi = phi;
                row.H = H;
                row.residual = H - dot(N, X);
                return row;
            };
            return rs;
        }
        case KillingField::V: {
            // theta(s) = s; y' = f y with 2 f' + f^2 + 2 = 0.
            rs.state_names = {"y", "f"};
            rs.system.dim = 2;
            rs.system.rhs = [](double, const ode::State& u, ode::State& du) {
                du[0] = u[1] * u[0];
                du[1] = -0.5 * (u[1] * u[1] + 2.0);
            };
            rs.system.in_domain = [](double, const ode::State& u) { return u[0] > 0.0; };
            rs.row = [orient, theta0, s0](double s, const ode::State& u) {
                const double y = u[0], f = u[1];
                const double df = -0.5 * (f * f + 2.0);
                CurveJet j;
                j.a = y;
                j.da = f * y;
                j.dda = y * (df + f * f);
                j.b = theta0 + (s - s0);
                j.db = 1.0;
                j.ddb = 0.0;
                const auto [N, H] = closed_form_from_jet(Family::N, j, 0.0, orient);
                const FrameVector X =
                    killing_at(KillingField::V, reduction_position(Family::N, y, j.b));
                SolveRow row;
                row.s = s;
                row.y = y;
                row.theta = j.b;
                row.H = H;
                row.residual = H - dot(N, X);
                return row;
            };
            return rs;
        }
        case KillingField::W:
            throw std::invalid_argument(
                "sl2r: N-invariant W-translators are coordinate slices; no reduction ODE");
    }
    throw std::invalid_argument("sl2r: unknown Killing field");
}

std::vector<SolveRow> solve_rows(const ReductionSystem& rs, const ode::Trajectory& trajectory) {
    std::vector<SolveRow> rows;
    rows.reserve(trajectory.size());
    for (std::size_t i = 0; i < trajectory.size(); ++i)
        rows.push_back(rs.row(trajectory.s[i], trajectory.states[i]));
    return rows;
}

// --- closed-form pieces for the N-invariant dtheta solutions --------------------

double ntheta_Lambda(double s) { return std::atan(std::tanh(0.5 * kSqrt3 * s)); }

double ntheta_psi(PsiVariant variant, double s) {
    switch (variant) {
        case PsiVariant::NegLogCosh: return -std::log(std::cosh(kSqrt3 * s));
        case PsiVariant::LiteralConstant: return std::log(std::cosh(kSqrt3));
        case PsiVariant::PosLogCosh: return std::log(std::cosh(kSqrt3 * s));
    }
    throw std::invalid_argument("sl2r: unknown psi variant");
}

double ntheta_phi(double s) { return std::atan(kSqrt2) + 2.0 * std::atan(std::tanh(0.5 * kSqrt3 * s)); }

std::pair<double, double> ntheta_general_curve(PsiVariant variant, double s, double c1,
                                               double c2) {
    const double u = 2.0 * kSqrt2 / 3.0 * ntheta_Lambda(s) + 2.0 / 3.0 * ntheta_psi(variant, s);
    const double u0 = 2.0 / 3.0 * ntheta_psi(variant, 0.0);
    const double v = 2.0 * kSqrt2 / 3.0 * ntheta_Lambda(s) - 1.0 / 3.0 * ntheta_psi(variant, s);
    const double v0 = -1.0 / 3.0 * ntheta_psi(variant, 0.0);
    return {c1 * std::exp(u - u0), c2 + (v - v0)};
}

// --- explicit solutions ---------------------------------------------------------

namespace {

ExplicitSolution make_nx_minimal(double c1, double c2) {
    if (!(c1 > 0.0)) throw std::invalid_argument("sl2r: nx-minimal requires c1 > 0");
    // y = hypot(c1,c2) cos(sqrt2 s - delta) > 0 around s = 0.
    const double delta = std::atan2(c2, c1);
    ExplicitSolution sol;
    sol.tag = SolutionTag::NxMinimal;
    sol.name = "nx-minimal";
    sol.description = "minimal N-invariant profile y = c1 cos(s sqrt2) + c2 sin(s sqrt2), theta = s";
    sol.params = {{"c1", c1}, {"c2", c2}};
    GeneratingCurve curve = make_analytic_curve(
        Family::N,
        [c1, c2](double s) {
            const double c = std::cos(kSqrt2 * s), si = std::sin(kSqrt2 * s);
            return std::array<double, 3>{c1 * c + c2 * si, kSqrt2 * (-c1 * si + c2 * c),
                                         -2.0 * (c1 * c + c2 * si)};
        },
        [](double s) {
            return std::array<double, 3>{s, 1.0, 0.0};
        },
        (delta - kPi / 2.0) / kSqrt2, (delta + kPi / 2.0) / kSqrt2);
    sol.surface = {Family::N, curve, +1};
    sol.defining_ode_residual = [c1, c2](double s) {
        const double y = c1 * std::cos(kSqrt2 * s) + c2 * std::sin(kSqrt2 * s);
        return std::abs(-2.0 * y + 2.0 * y);
    };
    return sol;
}

ExplicitSolution make_ntheta_cmc(double c1, double c2) {
    if (!(c1 > 0.0)) throw std::invalid_argument("sl2r: ntheta-cmc requires c1 > 0");
    ExplicitSolution sol;
    sol.tag = SolutionTag::NthetaCmc;
    sol.name = "ntheta-cmc";
    sol.description =
        "constant-angle N-invariant profile y = c1 e^{2s/sqrt3}, theta = -s/sqrt3 + c2";
    sol.params = {{"c1", c1}, {"c2", c2}};
    const double phi = -std::atan(1.0 / kSqrt2);  // tan(phi) = -1/sqrt2
    GeneratingCurve curve = make_analytic_curve(
        Family::N,
        [c1](double s) {
            const double y = c1 * std::exp(2.0 * s / kSqrt3);
            const double r = 2.0 / kSqrt3;
            return std::array<double, 3>{y, r * y, r * r * y};
        },
        [c2](double s) {
            return std::array<double, 3>{-s / kSqrt3 + c2, -1.0 / kSqrt3, 0.0};
        },
        -40.0, 40.0);
    curve.angle_form = true;
    auto base = curve.eval;
    curve.eval = [base, phi](double s) {
        CurveJet j = base(s);
        j.has_phi = true;
        j.phi = phi;
        j.dphi = 0.0;
        return j;
    };
    sol.surface = {Family::N, curve, +1};
    sol.defining_ode_residual = [phi, c1](double s) {
        const double y = c1 * std::exp(2.0 * s / kSqrt3);
        const double r1 = std::abs(2.0 / kSqrt3 * y - kSqrt2 * y * std::cos(phi));
        const double r2 = std::abs(-1.0 / kSqrt3 - std::sin(phi));
        const double r3 = std::abs(std::cos(phi) + kSqrt2 * std::sin(phi));
        return r1 + r2 + r3;
    };
    return sol;
}

ExplicitSolution make_ntheta_general(double c1, double c2) {
    if (!(c1 > 0.0)) throw std::invalid_argument("sl2r: ntheta-general requires c1 > 0");
    ExplicitSolution sol;
    sol.tag = SolutionTag::NthetaGeneral;
    sol.name = "ntheta-general";
    sol.description =
        "non-constant-angle N-invariant profile driven by phi(s) = arctan(sqrt2) + gd(s sqrt3)";
    sol.params = {{"c1", c1}, {"c2", c2}};
    auto y_jet = [c1](double s) {
        const double th = std::tanh(kSqrt3 * s), se = 1.0 / std::cosh(kSqrt3 * s);
        // u = (2 sqrt2 / 3) Lambda - (2/3) log cosh(sqrt3 s)
        const double du = kSqrt2 / kSqrt3 * se - 2.0 / kSqrt3 * th;
        const double ddu = -kSqrt2 * se * th - 2.0 * se * se;
        const double u =
            2.0 * kSqrt2 / 3.0 * std::atan(std::tanh(0.5 * kSqrt3 * s)) -
            2.0 / 3.0 * std::log(std::cosh(kSqrt3 * s));
        const double y = c1 * std::exp(u);
        return std::array<double, 3>{y, y * du, y * (ddu + du * du)};
    };
    auto theta_jet = [c2](double s) {
        const double th = std::tanh(kSqrt3 * s), se = 1.0 / std::cosh(kSqrt3 * s);
        const double v = 2.0 * kSqrt2 / 3.0 * std::atan(std::tanh(0.5 * kSqrt3 * s)) +
                         1.0 / 3.0 * std::log(std::cosh(kSqrt3 * s));
        const double dv = kSqrt2 / kSqrt3 * se + 1.0 / kSqrt3 * th;
        const double ddv = -kSqrt2 * se * th + se * se;
        return std::array<double, 3>{v + c2, dv, ddv};
    };
    GeneratingCurve curve = make_analytic_curve(Family::N, y_jet, theta_jet, -100.0, 100.0);
    curve.angle_form = true;
    auto base = curve.eval;
    curve.eval = [base](double s) {
        CurveJet j = base(s);
        j.has_phi = true;
        j.phi = ntheta_phi(s);
        j.dphi = kSqrt3 / std::cosh(kSqrt3 * s);
        return j;
    };
    sol.surface = {Family::N, curve, +1};
    sol.defining_ode_residual = [y_jet, theta_jet](double s) {
        const double phi = ntheta_phi(s);
        const double dphi = kSqrt3 / std::cosh(kSqrt3 * s);
        const auto yj = y_jet(s);
        const auto tj = theta_jet(s);
        return std::abs(yj[1] - kSqrt2 * yj[0] * std::cos(phi)) +
               std::abs(tj[1] - std::sin(phi)) +
               std::abs(dphi - (std::cos(phi) + kSqrt2 * std::sin(phi)));
    };
    return sol;
}

ExplicitSolution make_nv(double c, double s0) {
    if (!(c > 0.0)) throw std::invalid_argument("sl2r: nv requires c > 0");
    ExplicitSolution sol;
    sol.tag = SolutionTag::Nv;
    sol.name = "nv";
    sol.description = "N-invariant profile y = c (1 + cos(sqrt2 (s - s0))), theta = s";
    sol.params = {{"c", c}, {"s0", s0}};
    GeneratingCurve curve = make_analytic_curve(
        Family::N,
        [c, s0](double s) {
            const double u = kSqrt2 * (s - s0);
            return std::array<double, 3>{c * (1.0 + std::cos(u)), -kSqrt2 * c * std::sin(u),
                                         -2.0 * c * std::cos(u)};
        },
        [](double s) {
            return std::array<double, 3>{s, 1.0, 0.0};
        },
        s0 - kPi / kSqrt2, s0 + kPi / kSqrt2);
    sol.surface = {Family::N, curve, +1};
    sol.defining_ode_residual = [c, s0](double s) {
        const double u = kSqrt2 * (s - s0);
        const double y = c * (1.0 + std::cos(u));
        const double dy = -kSqrt2 * c * std::sin(u);
        const double ddy = -2.0 * c * std::cos(u);
        return std::abs(dy * dy - 2.0 * y * (ddy + y));
    };
    return sol;
}

ExplicitSolution make_rot_line_h(double c1, double c2) {
    if (!(c2 > 0.0)) throw std::invalid_argument("sl2r: rot-line-h requires c2 > 0");
    ExplicitSolution sol;
    sol.tag = SolutionTag::RotLineH;
    sol.name = "rot-line-h";
    sol.description = "horizontal-line rotational curve (2 c2 s + c1, c2); phi = 0, H = 1";
    sol.params = {{"c1", c1}, {"c2", c2}};
    GeneratingCurve curve = make_analytic_curve(
        Family::K,
        [c1, c2](double s) {
            return std::array<double, 3>{2.0 * c2 * s + c1, 2.0 * c2, 0.0};
        },
        [c2](double) {
            return std::array<double, 3>{c2, 0.0, 0.0};
        });
    curve.angle_form = true;
    auto base = curve.eval;
    curve.eval = [base](double s) {
        CurveJet j = base(s);
        j.has_phi = true;
        j.phi = 0.0;
        j.dphi = 0.0;
        return j;
    };
    sol.surface = {Family::K, curve, +1};
    sol.defining_ode_residual = [c2](double) {
        return std::abs(2.0 * c2 - 2.0 * c2);  // x' - 2 y cos(0), y' = 0
    };
    return sol;
}

ExplicitSolution make_rot_line_v(double c2) {
    if (!(c2 > 0.0)) throw std::invalid_argument("sl2r: rot-line-v requires c2 > 0");
    ExplicitSolution sol;
    sol.tag = SolutionTag::RotLineV;
    sol.name = "rot-line-v";
    sol.description = "vertical-line rotational curve (0, c2 e^{2s}); phi = pi/2, H = 0";
    sol.params = {{"c2", c2}};
    GeneratingCurve curve = make_analytic_curve(
        Family::K,
        [](double) {
            return std::array<double, 3>{0.0, 0.0, 0.0};
        },
        [c2](double s) {
            const double y = c2 * std::exp(2.0 * s);
            return std::array<double, 3>{y, 2.0 * y, 4.0 * y};
        },
        -300.0, 300.0);
    curve.angle_form = true;
    auto base = curve.eval;
    curve.eval = [base](double s) {
        CurveJet j = base(s);
        j.has_phi = true;
        j.phi = kPi / 2.0;
        j.dphi = 0.0;
        return j;
    };
    sol.surface = {Family::K, curve, +1};
    sol.defining_ode_residual = [c2](double s) {
        const double y = c2 * std::exp(2.0 * s);
        return std::abs(2.0 * y - 2.0 * y);  // y' - 2 y sin(pi/2), x' = 0
    };
    return sol;
}

ExplicitSolution make_rot_cmc(double H, double c_in, bool c_given) {
    if (!(H >= 0.0)) throw std::invalid_argument("sl2r: rot-cmc requires H >= 0");
    const double c = c_given ? c_in : (H < 1.0 ? -1.0 : 1.0);
    ExplicitSolution sol;
    sol.tag = SolutionTag::RotCmc;
    sol.name = "rot-cmc";
    sol.params = {{"H", H}, {"c", c}};

    GeneratingCurve curve;
    std::function<double(double)> ode_residual;

    if (H < 1.0) {
        if (!(c < 0.0))
            throw std::invalid_argument("sl2r: rot-cmc with H < 1 requires c < 0 for y > 0");
        sol.description = "rotational constant-H profile (0 <= H < 1), unbounded generating curve";
        const double k = std::sqrt(1.0 - H * H);
        const double A = (1.0 - H) / k;
        const double s_cap = 300.0 / (2.0 * k);
        auto jet = [H, c, k, A](double s) {
            const double C = std::cosh(2.0 * k * s), S = std::sinh(2.0 * k * s);
            const double D = C + H;
            const double cphi = (1.0 + H * C) / D;
            const double sphi = -k * S / D;
            const double dphi = 2.0 * (H - cphi);
            CurveJet j;
            j.has_phi = true;
            j.phi = -2.0 * std::atan(A * std::tanh(k * s));
            j.dphi = dphi;
            j.a = -c * k * S / D;          // x
            j.b = -c * k * k / D;          // y
            j.da = 2.0 * j.b * cphi;
            j.db = 2.0 * j.b * sphi;
            j.dda = 2.0 * (j.db * cphi - j.b * sphi * dphi);
            j.ddb = 2.0 * (j.db * sphi + j.b * cphi * dphi);
            return j;
        };
        curve.eval = jet;
        curve.s_min = -s_cap;
        curve.s_max = s_cap;
        ode_residual = [H, c, k, A, jet](double s) {
            // first derivatives by direct differentiation of the closed forms
            const double C = std::cosh(2.0 * k * s), S = std::sinh(2.0 * k * s);
            const double D = C + H;
            const double dx = -2.0 * c * k * k * (1.0 + H * C) / (D * D);
            const double dy = 2.0 * c * k * k * k * S / (D * D);
            const double T = std::tanh(k * s), sech = 1.0 / std::cosh(k * s);
            const double dphi_direct = -2.0 * A * k * sech * sech / (1.0 + A * A * T * T);
            const CurveJet j = jet(s);
            return std::abs(dx - j.da) + std::abs(dy - j.db) +
                   std::abs(dphi_direct - 2.0 * (H - std::cos(j.phi)));
        };
    } else if (H == 1.0) {
        if (!(c > 0.0))
            throw std::invalid_argument("sl2r: rot-cmc with H = 1 requires c > 0");
        sol.description =
            "rotational constant-H profile (H = 1): x = -(c/2) sin(2 arccot(2s)), y = c/(4s^2+1)";
        auto jet = [c](double s) {
            const double q = 4.0 * s * s + 1.0;
            const double cphi = (4.0 * s * s - 1.0) / q;
            const double sphi = -4.0 * s / q;
            const double dphi = 2.0 * (1.0 - cphi);
            CurveJet j;
            j.has_phi = true;
            j.phi = -2.0 * std::atan2(1.0, 2.0 * s);
            j.dphi = dphi;
            j.a = -2.0 * c * s / q;
            j.b = c / q;
            j.da = 2.0 * j.b * cphi;
            j.db = 2.0 * j.b * sphi;
            j.dda = 2.0 * (j.db * cphi - j.b * sphi * dphi);
            j.ddb = 2.0 * (j.db * sphi + j.b * cphi * dphi);
            return j;
        };
        curve.eval = jet;
        ode_residual = [c, jet](double s) {
            const double q = 4.0 * s * s + 1.0;
            const double dx = -2.0 * c * (1.0 - 4.0 * s * s) / (q * q);
            const double dy = -8.0 * c * s / (q * q);
            const double dphi_direct = 4.0 / q;
            const CurveJet j = jet(s);
            return std::abs(dx - j.da) + std::abs(dy - j.db) +
                   std::abs(dphi_direct - 2.0 * (1.0 - std::cos(j.phi)));
        };
    } else {
        if (!(c > 0.0))
            throw std::invalid_argument("sl2r: rot-cmc with H > 1 requires c > 0");
        sol.description = "rotational constant-H profile (H > 1), periodic generating curve";
        const double k = std::sqrt(H * H - 1.0);
        const double B = (H - 1.0) / k;
        auto jet = [H, c, k, B](double s) {
            const double C = std::cos(2.0 * k * s), S = std::sin(2.0 * k * s);
            const double D = H + C;
            const double cphi = (1.0 + H * C) / D;
            const double sphi = k * S / D;
            const double dphi = 2.0 * (H - cphi);
            CurveJet j;
            j.has_phi = true;
            j.phi = 2.0 * std::atan2(B * std::sin(k * s), std::cos(k * s));
            j.dphi = dphi;
            j.a = c * k * S / D;
            j.b = c * k * k / D;
            j.da = 2.0 * j.b * cphi;
            j.db = 2.0 * j.b * sphi;
            j.dda = 2.0 * (j.db * cphi - j.b * sphi * dphi);
            j.ddb = 2.0 * (j.db * sphi + j.b * cphi * dphi);
            return j;
        };
        curve.eval = jet;
        ode_residual = [H, c, k, B, jet](double s) {
            const double C = std::cos(2.0 * k * s), S = std::sin(2.0 * k * s);
            const double D = H + C;
            const double dx = 2.0 * c * k * k * (1.0 + H * C) / (D * D);
            const double dy = 2.0 * c * k * k * k * S / (D * D);
            const double cs = std::cos(k * s), sn = std::sin(k * s);
            const double dphi_direct = 2.0 * B * k / (cs * cs + B * B * sn * sn);
            const CurveJet j = jet(s);
            return std::abs(dx - j.da) + std::abs(dy - j.db) +
                   std::abs(dphi_direct - 2.0 * (H - std::cos(j.phi)));
        };
    }

    curve.family = Family::K;
    curve.angle_form = true;
    sol.surface = {Family::K, curve, +1};
    sol.defining_ode_residual = std::move(ode_residual);
    return sol;
}

}  // namespace

ExplicitSolution explicit_solution(SolutionTag tag, const std::map<std::string, double>& params) {
    switch (tag) {
        case SolutionTag::NxMinimal:
            return make_nx_minimal(get_param(params, "c1", 1.0), get_param(params, "c2", 0.0));
        case SolutionTag::NthetaCmc:
            return make_ntheta_cmc(get_param(params, "c1", 1.0), get_param(params, "c2", 0.0));
        case SolutionTag::NthetaGeneral:
            return make_ntheta_general(get_param(params, "c1", 1.0), get_param(params, "c2", 0.0));
        case SolutionTag::Nv:
            return make_nv(get_param(params, "c", 1.0), get_param(params, "s0", 0.0));
        case SolutionTag::RotLineH:
            return make_rot_line_h(get_param(params, "c1", 0.0), get_param(params, "c2", 1.0));
        case SolutionTag::RotLineV:
            return make_rot_line_v(get_param(params, "c2", 1.0));
        case SolutionTag::RotCmc: {
            auto it = params.find("H");
            if (it == params.end())
                throw std::invalid_argument("sl2r: rot-cmc requires the parameter H");
            const bool c_given = params.count("c") > 0;
            return make_rot_cmc(it->second, get_param(params, "c", 0.0), c_given);
        }
    }
    throw std::invalid_argument("sl2r: unknown solution tag");
}

// --- grid verification -----------------------------------------------------------

GridSpec default_grid(const InvariantSurface& surface) {
    GridSpec g;
    double lo = std::max(surface.curve.s_min, -2.0);
    double hi = std::min(surface.curve.s_max, 2.0);
    const double inset = 0.02 * (hi - lo);
    g.s_min = lo + inset;
    g.s_max = hi - inset;
    g.ns = 30;
    g.nt = 30;
    switch (surface.family) {
        case Family::N:
            g.t_min = -3.0;
            g.t_max = 3.0;
            break;
        case Family::A:
            g.t_min = 0.25;
            g.t_max = 3.0;
            break;
        case Family::K:
            g.t_min = -3.14;
            g.t_max = 3.14;
            break;
    }
    return g;
}

namespace {

double grid_value(double lo, double hi, int n, int i) {
    if (n <= 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace

ResidualReport verify_surface(const TranslatorProblem& problem, const InvariantSurface& surface,
                              const GridSpec& grid, double tol_closed,
                              const std::string& surface_name) {
    ResidualReport report;
    report.problem = problem;
    report.surface_name = surface_name;
    report.grid = grid;
    report.tol_closed = tol_closed;

    double best_max = 0.0;
    int best_orient = 0;
    for (int orient : {+1, -1}) {
        TranslatorProblem pr = problem;
        pr.orientation = orient;
        double mx = 0.0;
        for (int i = 0; i < grid.ns; ++i)
            for (int j = 0; j < grid.nt; ++j) {
                const double s = grid_value(grid.s_min, grid.s_max, grid.ns, i);
                const double t = grid_value(grid.t_min, grid.t_max, grid.nt, j);
                mx = std::max(mx, std::abs(residual(pr, surface, s, t)));
            }
        if (best_orient == 0 || mx < best_max) {
            best_max = mx;
            best_orient = orient;
        }
    }

    TranslatorProblem pr = problem;
    pr.orientation = best_orient;
    report.certifying_orientation = best_orient;
    report.samples.reserve(static_cast<std::size_t>(grid.ns) * grid.nt);
    double max_closed = 0.0, max_oracle = 0.0, max_gap = 0.0;
    for (int i = 0; i < grid.ns; ++i)
        for (int j = 0; j < grid.nt; ++j) {
            const double s = grid_value(grid.s_min, grid.s_max, grid.ns, i);
            const double t = grid_value(grid.t_min, grid.t_max, grid.nt, j);
            ResidualSample sample;
            sample.s = s;
            sample.t = t;
            sample.closed = residual(pr, surface, s, t);
            sample.oracle = residual_oracle(pr, surface, s, t);
            max_closed = std::max(max_closed, std::abs(sample.closed));
            max_oracle = std::max(max_oracle, std::abs(sample.oracle));
            max_gap = std::max(max_gap, std::abs(sample.closed - sample.oracle));
            report.samples.push_back(sample);
        }
    report.max_abs_closed = max_closed;
    report.max_abs_oracle = max_oracle;
    report.max_inconsistency = max_gap;
    report.consistent = max_gap < report.tol_consistency;
    report.certified = report.consistent && max_closed < tol_closed;
    return report;
}

ResidualReport verify_solution(const ExplicitSolution& solution, const TranslatorProblem& problem,
                               const GridSpec& grid, double tol_closed) {
    return verify_surface(problem, solution.surface, grid, tol_closed, solution.name);
}

// --- constant-mean-curvature consistency -------------------------------------------

CmcVerdict cmc_consistency_check(double H) {
    if (!(H >= 0.0)) throw std::invalid_argument("sl2r: cmc_consistency_check requires H >= 0");
    CmcVerdict verdict;
    verdict.H = H;

    // Constant-angle branch: cos(phi) = H, line curve through x0 = 0.
    if (H <= 1.0) {
        verdict.constant_branch_applicable = true;
        const double sphi = std::sqrt(1.0 - H * H);
        // along x = cot(phi) y: V-reduction rate is -2H; CMC rate is 0
        verdict.constant_branch_residual = (sphi > 0.0) ? 2.0 * H : 1.0;
    } else {
        verdict.constant_branch_applicable = false;
        verdict.constant_branch_residual = std::numeric_limits<double>::infinity();
    }

    // Generic branch: integrate the constant-H profile and sample the
    // V-reduction residual.
    ode::OdeSystem sys;
    sys.dim = 3;
    sys.rhs = [H](double, const ode::State& u, ode::State& du) {
        const double y = u[1], phi = u[2];
        du[0] = 2.0 * y * std::cos(phi);
        du[1] = 2.0 * y * std::sin(phi);
        du[2] = 2.0 * (H - std::cos(phi));
    };
    sys.in_domain = [](double, const ode::State& u) { return u[1] > 0.0; };
    ode::State u0;
    if (H < 1.0)
        u0 = {0.0, 1.0 - H, 0.0};
    else if (H == 1.0)
        u0 = {0.0, 1.0, -kPi};
    else
        u0 = {0.0, H - 1.0, 0.0};
    ode::IntegratorConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-13;
    const ode::Trajectory tr = ode::integrate(sys, u0, 0.0, 2.5, cfg);
    double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double s = 0.3 + 2.0 * i / 200.0;
        const ode::State u = tr.state_at(s);
        const double x = u[0], y = u[1], phi = u[2];
        const double r = 2.0 * (H - std::cos(phi)) + (y * std::cos(phi) + x * std::sin(phi)) / y;
        mn = std::min(mn, std::abs(r));
        mx = std::max(mx, std::abs(r));
    }
    verdict.generic_min_abs_residual = mn;
    verdict.generic_max_abs_residual = mx;

    const bool constant_ok =
        verdict.constant_branch_applicable && verdict.constant_branch_residual < 1e-9;
    const bool generic_ok = mx < 1e-8;
    verdict.consistent = constant_ok || generic_ok;
    return verdict;
}

BigraphDiagnostic bigraph_diagnostic(const ode::Trajectory& trajectory) {
    BigraphDiagnostic diag;
    if (trajectory.size() < 2 || trajectory.states.front().size() != 3) return diag;
    double prev = std::cos(trajectory.states.front()[2]);
    for (std::size_t i = 1; i < trajectory.size(); ++i) {
        const double cur = std::cos(trajectory.states[i][2]);
        if ((prev <= 0.0) != (cur <= 0.0)) {
            ++diag.turning_points;
            diag.turning_s.push_back(0.5 * (trajectory.s[i - 1] + trajectory.s[i]));
        }
        prev = cur;
    }
    diag.is_bigraph = diag.turning_points <= 1;
    return diag;
}

}  // namespace sl2r
