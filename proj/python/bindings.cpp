// Python module exposing the main operations: NAK round trips, the metric
// stack, curvature oracles, translator residual reports, reduction solving
// and the verification suites.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>

#include "sl2r/catalog.hpp"
#include "sl2r/core.hpp"
#include "sl2r/io.hpp"
#include "sl2r/ode.hpp"
#include "sl2r/oracle.hpp"
#include "sl2r/translators.hpp"
#include "sl2r/verify.hpp"

namespace py = pybind11;
using namespace sl2r;

namespace {

KillingField field_from_name(const std::string& name) {
    if (name == "dx") return KillingField::Dx;
    if (name == "dtheta") return KillingField::Dtheta;
    if (name == "v") return KillingField::V;
    if (name == "w") return KillingField::W;
    throw std::invalid_argument("unknown field '" + name + "' (dx, dtheta, v, w)");
}

Family family_from_name(const std::string& name) {
    if (name == "N" || name == "n") return Family::N;
    if (name == "A" || name == "a") return Family::A;
    if (name == "K" || name == "k") return Family::K;
    throw std::invalid_argument("unknown family '" + name + "' (N, A, K)");
}

InvariantSurface pick_member(const std::string& spec, const std::string& family) {
    const ResolvedSurface resolved = resolve_surface_spec(spec);
    if (family.empty()) return resolved.members.front();
    const Family f = family_from_name(family);
    for (const auto& m : resolved.members)
        if (m.family == f) return m;
    throw std::invalid_argument("surface '" + spec + "' has no such parametrization");
}

py::dict report_to_dict(const ResidualReport& rep) {
    py::dict d;
    d["surface"] = rep.surface_name;
    d["family"] = to_string(rep.problem.family);
    d["field"] = to_string(rep.problem.field);
    d["max_abs_residual_closed"] = rep.max_abs_closed;
    d["max_abs_residual_oracle"] = rep.max_abs_oracle;
    d["max_inconsistency"] = rep.max_inconsistency;
    d["certified"] = rep.certified;
    d["consistent"] = rep.consistent;
    d["certifying_orientation"] = rep.certifying_orientation;
    d["tolerance_closed"] = rep.tol_closed;
    return d;
}

}  // namespace

PYBIND11_MODULE(sl2rlab, m) {
    m.doc() = "geometry of SL(2,R) with its canonical left-invariant metric and the "
              "translating-surface laboratory built on it";

    py::class_<Sl2Point>(m, "Sl2Point")
        .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("theta"))
        .def_readonly("x", &Sl2Point::x)
        .def_readonly("y", &Sl2Point::y)
        .def_readonly("theta", &Sl2Point::theta)
        .def("__repr__", [](const Sl2Point& p) {
            return "Sl2Point(" + io::format_double(p.x) + ", " + io::format_double(p.y) + ", " +
                   io::format_double(p.theta) + ")";
        });

    m.def(
        "compose_nak",
        [](double x, double y, double theta) {
            const Sl2Matrix mtx = compose_nak(Sl2Point(x, y, theta));
            return py::make_tuple(py::make_tuple(mtx.a, mtx.b), py::make_tuple(mtx.c, mtx.d));
        },
        py::arg("x"), py::arg("y"), py::arg("theta"),
        "Matrix n(x) a(y) k(theta) as a nested tuple ((a, b), (c, d)).");

    m.def(
        "decompose_nak",
        [](double a, double b, double c, double d) {
            const Sl2Point p = decompose_nak(Sl2Matrix(a, b, c, d));
            return py::make_tuple(p.x, p.y, p.theta);
        },
        py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"));

    m.def("classify", [](double a, double b, double c, double d) {
        return std::string(to_string(classify_matrix(Sl2Matrix(a, b, c, d))));
    });

    m.def("mobius", [](double a, double b, double c, double d, std::complex<double> z) {
        return mobius_action(Sl2Matrix(a, b, c, d), z);
    });

    m.def("metric", [](double x, double y, double theta) {
        const Mat3 g = metric_at(Sl2Point(x, y, theta));
        std::vector<std::vector<double>> out(3, std::vector<double>(3));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) out[i][j] = g[i][j];
        return out;
    });

    m.def("frame", [](double x, double y, double theta) {
        const auto f = frame_at(Sl2Point(x, y, theta));
        std::vector<std::vector<double>> out;
        for (const auto& e : f) out.push_back({e.vx, e.vy, e.vtheta});
        return out;
    });

    m.def("christoffels", [](double x, double y, double theta) {
        const Christoffels g = christoffels_at(Sl2Point(x, y, theta));
        std::vector<std::vector<std::vector<double>>> out(
            3, std::vector<std::vector<double>>(3, std::vector<double>(3)));
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) out[k][i][j] = g[k][i][j];
        return out;
    });

    m.def(
        "killing",
        [](const std::string& field, double x, double y, double theta) {
            const Sl2Point p(x, y, theta);
            const FrameVector v = field == "w-corrected" ? killing_w_corrected_at(p)
                                                         : killing_at(field_from_name(field), p);
            return py::make_tuple(v.v1, v.v2, v.v3);
        },
        py::arg("field"), py::arg("x"), py::arg("y"), py::arg("theta"),
        "Frame components; field is dx, dtheta, v, w or w-corrected.");

    m.def(
        "killing_equation_residual",
        [](const std::string& field, double x, double y, double theta,
           std::array<double, 3> u, std::array<double, 3> v, double h) {
            const Sl2Point p(x, y, theta);
            const CoordVector cu{u[0], u[1], u[2]}, cv{v[0], v[1], v[2]};
            if (field == "w-corrected")
                return killing_equation_residual(
                    [](const Sl2Point& q) { return killing_w_corrected_coord(q); }, p, cu, cv, h);
            return killing_equation_residual(field_from_name(field), p, cu, cv, h);
        },
        py::arg("field"), py::arg("x"), py::arg("y"), py::arg("theta"), py::arg("u"),
        py::arg("v"), py::arg("h") = 1e-5);

    m.def("catalog", [] {
        py::list out;
        for (const auto& e : catalog_entries()) {
            py::dict d;
            d["name"] = e.name;
            d["kind"] = e.kind;
            d["parameters"] = e.params_help;
            d["description"] = e.description;
            out.append(d);
        }
        return out;
    });

    m.def(
        "surface_mean_curvature",
        [](const std::string& spec, double s, double t, const std::string& family, bool oracle) {
            const InvariantSurface member = pick_member(spec, family);
            if (oracle) return oriented_mean_curvature(member, s, t);
            return closed_form_N_H(member, s, t).second;
        },
        py::arg("spec"), py::arg("s"), py::arg("t"), py::arg("family") = "",
        py::arg("oracle") = false);

    m.def(
        "surface_normal",
        [](const std::string& spec, double s, double t, const std::string& family) {
            const FrameVector n = closed_form_N_H(pick_member(spec, family), s, t).first;
            return py::make_tuple(n.v1, n.v2, n.v3);
        },
        py::arg("spec"), py::arg("s"), py::arg("t"), py::arg("family") = "");

    m.def(
        "gauss_curvature",
        [](const std::string& spec, double s, double t, const std::string& family) {
            return gauss_curvature_induced(pick_member(spec, family), s, t);
        },
        py::arg("spec"), py::arg("s"), py::arg("t"), py::arg("family") = "");

    m.def(
        "residual_report",
        [](const std::string& spec, const std::string& field, const std::string& family,
           std::optional<std::array<double, 6>> grid, double tol) {
            const InvariantSurface member = pick_member(spec, family);
            GridSpec g = default_grid(member);
            if (grid) {
                g.s_min = (*grid)[0];
                g.s_max = (*grid)[1];
                g.ns = static_cast<int>((*grid)[2]);
                g.t_min = (*grid)[3];
                g.t_max = (*grid)[4];
                g.nt = static_cast<int>((*grid)[5]);
            }
            const TranslatorProblem problem{member.family, field_from_name(field), +1};
            return report_to_dict(verify_surface(problem, member, g, tol, spec));
        },
        py::arg("spec"), py::arg("field"), py::arg("family") = "",
        py::arg("grid") = std::nullopt, py::arg("tol") = 1e-7);

    m.def(
        "solve",
        [](const std::string& family, const std::string& field,
           std::map<std::string, double> ic, double s0, double s1, double rtol, double atol) {
            const Family fam = family_from_name(family);
            if (fam == Family::A)
                throw std::invalid_argument("A-family problems are algebraic; use residual_report");
            const TranslatorProblem problem{fam, field_from_name(field), +1};
            const double theta0 = ic.count("theta") ? ic.at("theta") : 0.0;
            const ReductionSystem rs = make_reduction_system(problem, theta0, s0);
            ode::State y0;
            for (const auto& name : rs.state_names) {
                if (ic.count(name)) {
                    y0.push_back(ic.at(name));
                } else if (name == "f" && ic.count("dy") && ic.count("y")) {
                    y0.push_back(ic.at("dy") / ic.at("y"));
                } else if (name == "x" || name == "theta" || name == "dy") {
                    y0.push_back(0.0);
                } else {
                    throw std::invalid_argument("initial condition must set '" + name + "'");
                }
            }
            ode::IntegratorConfig cfg;
            cfg.rel_tol = rtol;
            cfg.abs_tol = atol;
            const ode::Trajectory tr = ode::integrate(rs.system, y0, s0, s1, cfg);
            py::dict out;
            out["termination"] = tr.reason == ode::Termination::ReachedEnd ? "ReachedEnd"
                                 : tr.reason == ode::Termination::Event    ? "Event"
                                                                           : "StepFailure";
            py::list rows;
            for (const SolveRow& row : solve_rows(rs, tr)) {
                py::dict r;
                r["s"] = row.s;
                auto set = [&r](const char* key, const std::optional<double>& v) {
                    if (v) r[key] = *v;
                };
                set("x", row.x);
                set("y", row.y);
                set("theta", row.theta);
                set("phi", row.phi);
                set("H", row.H);
                set("residual", row.residual);
                rows.append(r);
            }
            out["records"] = rows;
            return out;
        },
        py::arg("family"), py::arg("field"), py::arg("ic"), py::arg("s0"), py::arg("s1"),
        py::arg("rtol") = 1e-9, py::arg("atol") = 1e-12);

    m.def(
        "direction_field",
        [](double ymin, double ymax, int ny, double pmin, double pmax, int np) {
            const ode::OdeSystem sys = autonomous_dx_system();
            std::vector<ode::State> pts;
            for (int i = 0; i < ny; ++i)
                for (int j = 0; j < np; ++j)
                    pts.push_back({io::grid_point(ymin, ymax, ny, i),
                                   io::grid_point(pmin, pmax, np, j)});
            py::list out;
            for (const auto& [state, dir] : ode::sample_direction_field(sys, pts))
                out.append(py::make_tuple(state[0], state[1], dir[0], dir[1]));
            return out;
        },
        py::arg("ymin"), py::arg("ymax"), py::arg("ny"), py::arg("pmin"), py::arg("pmax"),
        py::arg("np"));

    m.def("cmc_consistency", [](double H) {
        const CmcVerdict v = cmc_consistency_check(H);
        py::dict d;
        d["H"] = v.H;
        d["consistent"] = v.consistent;
        d["constant_branch_applicable"] = v.constant_branch_applicable;
        d["constant_branch_residual"] = v.constant_branch_residual;
        d["generic_min_abs_residual"] = v.generic_min_abs_residual;
        d["generic_max_abs_residual"] = v.generic_max_abs_residual;
        return d;
    });

    m.def("suite_names", [] { return verify::suite_names(); });

    m.def(
        "run_suite",
        [](const std::string& name) {
            const verify::SuiteResult sr = verify::run_suite(name, {});
            py::dict d;
            d["suite"] = sr.suite;
            d["pass"] = sr.pass;
            py::list checks;
            for (const auto& c : sr.checks) {
                py::dict cd;
                cd["name"] = c.name;
                cd["value"] = c.value;
                cd["tolerance"] = c.tolerance;
                cd["require_above"] = c.require_above;
                cd["pass"] = c.pass;
                cd["note"] = c.note;
                checks.append(cd);
            }
            d["checks"] = checks;
            return d;
        },
        py::arg("name"),
        "Run one verification suite (the formats suite needs the CLI and is not "
        "available here).");
}
