// sl2rlab: verification suites, translator residuals, reduction ODE solving,
// phase portraits and NAK decomposition for surfaces in SL(2,R).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sl2r/catalog.hpp"
#include "sl2r/core.hpp"
#include "sl2r/io.hpp"
#include "sl2r/ode.hpp"
#include "sl2r/translators.hpp"
#include "sl2r/verify.hpp"

namespace {

using namespace sl2r;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::optional<Family> parse_family(const std::string& text) {
    if (text == "N" || text == "n") return Family::N;
    if (text == "A" || text == "a") return Family::A;
    if (text == "K" || text == "k") return Family::K;
    return std::nullopt;
}

std::optional<KillingField> parse_field(const std::string& text) {
    if (text == "dx") return KillingField::Dx;
    if (text == "dtheta") return KillingField::Dtheta;
    if (text == "v") return KillingField::V;
    if (text == "w") return KillingField::W;
    return std::nullopt;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
    os << content;
}

// A configuration value slot: flags that were given on the command line win.
struct ConfigSlot {
    const char* key;
    CLI::Option* option;
    std::function<bool(const std::string&)> assign;
};

ConfigSlot slot(const char* key, CLI::Option* option, std::string& target) {
    return {key, option, [&target](const std::string& v) {
                target = v;
                return true;
            }};
}

ConfigSlot slot(const char* key, CLI::Option* option, double& target) {
    return {key, option, [&target](const std::string& v) {
                try {
                    std::size_t used = 0;
                    target = std::stod(v, &used);
                    return used == v.size();
                } catch (...) {
                    return false;
                }
            }};
}

// Flat "key = value" file; unknown keys are rejected, flags override.
int apply_config(const std::string& path, const std::vector<ConfigSlot>& slots) {
    if (path.empty()) return kExitOk;
    std::ifstream is(path);
    if (!is) {
        std::cerr << "cannot read config file '" << path << "'\n";
        return kExitUsage;
    }
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            std::cerr << path << ":" << lineno << ": expected key = value\n";
            return kExitUsage;
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        const ConfigSlot* found = nullptr;
        for (const auto& s : slots)
            if (key == s.key) found = &s;
        if (!found) {
            std::cerr << path << ":" << lineno << ": unknown key '" << key << "'\n";
            return kExitUsage;
        }
        if (found->option->count() > 0) continue;  // flag wins
        if (!found->assign(value)) {
            std::cerr << path << ":" << lineno << ": bad value for '" << key << "'\n";
            return kExitUsage;
        }
    }
    return kExitOk;
}

int run_verify(const std::string& suite, const std::string& cli_path) {
    verify::VerifyContext ctx{cli_path};
    std::vector<verify::SuiteResult> results;
    if (suite == "all") {
        results = verify::run_all_suites(ctx);
    } else {
        try {
            results.push_back(verify::run_suite(suite, ctx));
        } catch (const std::invalid_argument&) {
            std::cerr << "unknown suite '" << suite << "'; available:";
            for (const auto& n : verify::suite_names()) std::cerr << ' ' << n;
            std::cerr << " all\n";
            return kExitUsage;
        }
    }
    bool all_pass = true;
    for (const auto& sr : results) {
        std::printf("== suite %s ==\n", sr.suite.c_str());
        for (const auto& c : sr.checks) {
            std::printf("  [%s] %-64s  %-12.4g %s %-10.4g%s%s\n", c.pass ? "PASS" : "FAIL",
                        c.name.c_str(), c.value, c.require_above ? ">" : "<", c.tolerance,
                        c.note.empty() ? "" : "  # ", c.note.c_str());
        }
        all_pass = all_pass && sr.pass;
    }
    std::printf("%s\n", all_pass ? "all checks passed" : "some checks FAILED");
    return all_pass ? kExitOk : kExitCheckFailed;
}

struct SolveArgs {
    std::string family, field, ic, s_range, out, format = "csv";
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
};

int run_solve(const SolveArgs& args) {
    if (args.family.empty() || args.field.empty() || args.ic.empty() || args.s_range.empty()) {
        std::cerr << "solve requires --family, --field, --ic and --s-range\n";
        return kExitUsage;
    }
    const auto family = parse_family(args.family);
    const auto field = parse_field(args.field);
    if (!family || !field) {
        std::cerr << "invalid --family/--field\n";
        return kExitUsage;
    }
    if (*family == Family::A) {
        std::cerr << "A-family problems reduce to polynomial systems; use `residual`\n";
        return kExitUsage;
    }
    if (args.format != "csv" && args.format != "json") {
        std::cerr << "--format must be csv or json\n";
        return kExitUsage;
    }

    double s0 = 0.0, s1 = 0.0;
    try {
        const auto colon = args.s_range.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("");
        std::size_t u0 = 0, u1 = 0;
        const std::string a = args.s_range.substr(0, colon), b = args.s_range.substr(colon + 1);
        s0 = std::stod(a, &u0);
        s1 = std::stod(b, &u1);
        if (u0 != a.size() || u1 != b.size()) throw std::invalid_argument("");
    } catch (...) {
        std::cerr << "--s-range must be s0:s1\n";
        return kExitUsage;
    }

    std::map<std::string, double> ic;
    try {
        ic = io::parse_key_values(args.ic);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    TranslatorProblem problem{*family, *field, +1};
    ReductionSystem rs;
    ode::State y0;
    try {
        rs = make_reduction_system(problem, ic.count("theta") ? ic.at("theta") : 0.0, s0);
        auto take = [&ic](const std::string& key) -> std::optional<double> {
            auto it = ic.find(key);
            if (it == ic.end()) return std::nullopt;
            const double v = it->second;
            ic.erase(it);
            return v;
        };
        for (const auto& name : rs.state_names) {
            std::optional<double> v = take(name);
            if (!v && name == "f") {
                // accept dy for the logarithmic-derivative state
                if (auto dy = take("dy"); dy && ic.count("y")) v = *dy / ic.at("y");
            }
            if (!v && name == "y") {
                std::cerr << "initial condition must set y\n";
                return kExitUsage;
            }
            if (!v && name == "phi") {
                std::cerr << "initial condition must set phi\n";
                return kExitUsage;
            }
            if (!v && (name == "theta" || name == "x" || name == "dy" || name == "f")) v = 0.0;
            y0.push_back(*v);
        }
        // theta anchors the reconstructed theta(s) for N-family problems
        if (*family == Family::N) take("theta");
        if (!ic.empty()) {
            std::cerr << "unknown initial-condition key '" << ic.begin()->first << "'\n";
            return kExitUsage;
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    ode::IntegratorConfig config;
    config.rel_tol = args.rel_tol;
    config.abs_tol = args.abs_tol;

    ode::Trajectory tr;
    try {
        tr = ode::integrate(rs.system, y0, s0, s1, config);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    const double covered = std::abs(tr.s_end() - s0);
    if (tr.reason == ode::Termination::StepFailure && covered < 0.1 * std::abs(s1 - s0)) {
        std::cerr << "integration failed after covering " << covered << " of "
                  << std::abs(s1 - s0) << ": " << tr.failure << "\n";
        return kExitCheckFailed;
    }

    const std::vector<SolveRow> rows = solve_rows(rs, tr);
    std::ostringstream content;
    if (args.format == "csv") {
        io::write_solve_csv(content, rows);
    } else {
        std::map<std::string, std::string> meta;
        meta["family"] = to_string(*family);
        meta["field"] = to_string(*field);
        meta["s_range"] = args.s_range;
        meta["rel_tol"] = io::format_double(args.rel_tol);
        meta["abs_tol"] = io::format_double(args.abs_tol);
        meta["termination"] = tr.reason == ode::Termination::ReachedEnd ? "ReachedEnd"
                              : tr.reason == ode::Termination::Event
                                  ? ("Event(" + tr.event_name + ")")
                                  : ("StepFailure(" + tr.failure + ")");
        content << io::solve_json(rows, meta) << "\n";
    }
    write_output(args.out, content.str());
    return kExitOk;
}

struct ResidualArgs {
    std::string family, field, surface, grid, out;
    double tol = 1e-7;
};

int run_residual(const ResidualArgs& args) {
    if (args.field.empty() || args.surface.empty()) {
        std::cerr << "residual requires --field and --surface\n";
        return kExitUsage;
    }
    const auto field = parse_field(args.field);
    if (!field) {
        std::cerr << "invalid --field\n";
        return kExitUsage;
    }
    ResolvedSurface resolved;
    try {
        resolved = resolve_surface_spec(args.surface);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    const InvariantSurface* member = nullptr;
    if (!args.family.empty()) {
        const auto family = parse_family(args.family);
        if (!family) {
            std::cerr << "invalid --family\n";
            return kExitUsage;
        }
        for (const auto& m : resolved.members)
            if (m.family == *family) member = &m;
        if (!member) {
            std::cerr << "surface '" << resolved.canonical << "' has no "
                      << to_string(*family) << "-family parametrization\n";
            return kExitUsage;
        }
    } else {
        member = &resolved.members.front();
    }

    GridSpec grid = default_grid(*member);
    if (!args.grid.empty()) {
        try {
            grid = io::parse_grid2(args.grid);
        } catch (const std::exception& e) {
            std::cerr << e.what() << "\n";
            return kExitUsage;
        }
    }
    TranslatorProblem problem{member->family, *field, +1};
    ResidualReport report;
    try {
        report = verify_surface(problem, *member, grid, args.tol, resolved.canonical);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    write_output(args.out, io::residual_report_json(report) + "\n");
    return report.certified ? kExitOk : kExitCheckFailed;
}

struct PortraitArgs {
    std::string system = "as", grid, out;
};

int run_portrait(const PortraitArgs& args) {
    if (args.system != "as") {
        std::cerr << "unknown system '" << args.system << "' (available: as)\n";
        return kExitUsage;
    }
    if (args.grid.empty()) {
        std::cerr << "portrait requires --grid\n";
        return kExitUsage;
    }
    GridSpec grid;
    try {
        grid = io::parse_grid2(args.grid);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    const ode::OdeSystem sys = autonomous_dx_system();
    std::vector<ode::State> points;
    for (int i = 0; i < grid.ns; ++i)
        for (int j = 0; j < grid.nt; ++j)
            points.push_back({io::grid_point(grid.s_min, grid.s_max, grid.ns, i),
                              io::grid_point(grid.t_min, grid.t_max, grid.nt, j)});
    const auto field = ode::sample_direction_field(sys, points);
    std::ostringstream content;
    content << "y,phi,dy,dphi\n";
    for (const auto& [state, dir] : field)
        content << io::format_double(state[0]) << ',' << io::format_double(state[1]) << ','
                << io::format_double(dir[0]) << ',' << io::format_double(dir[1]) << '\n';
    write_output(args.out, content.str());
    return kExitOk;
}

int run_decompose(const std::string& matrix) {
    std::vector<double> entries;
    std::stringstream ss(matrix);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            entries.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument("");
        } catch (...) {
            std::cerr << "--matrix must be a,b,c,d\n";
            return kExitUsage;
        }
    }
    if (entries.size() != 4) {
        std::cerr << "--matrix must be a,b,c,d\n";
        return kExitUsage;
    }
    const double det = entries[0] * entries[3] - entries[1] * entries[2];
    if (std::abs(det - 1.0) > 1e-9) {
        std::cerr << "determinant " << io::format_double(det) << " is not 1 within 1e-9\n";
        return kExitUsage;
    }
    // rescale to unit determinant so the strict construction tolerance holds
    const double r = 1.0 / std::sqrt(det);
    const Sl2Matrix m(entries[0] * r, entries[1] * r, entries[2] * r, entries[3] * r);
    const Sl2Point p = decompose_nak(m);
    std::printf("x = %s\ny = %s\ntheta = %s\nclass = %s\n", io::format_double(p.x).c_str(),
                io::format_double(p.y).c_str(), io::format_double(p.theta).c_str(),
                to_string(classify_matrix(m)));
    return kExitOk;
}

int run_catalog() {
    std::printf("%-16s %-18s %-34s %s\n", "name", "kind", "parameters", "description");
    for (const auto& e : catalog_entries())
        std::printf("%-16s %-18s %-34s %s\n", e.name.c_str(), e.kind.c_str(),
                    e.params_help.c_str(), e.description.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification laboratory for translating surfaces in SL(2,R)"};
    app.require_subcommand(1);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run named property suites");
    std::string suite = "all";
    verify_cmd->add_option("suite", suite, "suite name or 'all'");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "integrate a translator reduction ODE");
    SolveArgs solve_args;
    std::string solve_config;
    std::vector<ConfigSlot> solve_slots;
    solve_slots.push_back(
        slot("family", solve_cmd->add_option("--family", solve_args.family, "N or K"),
             solve_args.family));
    solve_slots.push_back(
        slot("field", solve_cmd->add_option("--field", solve_args.field, "dx, dtheta, v or w"),
             solve_args.field));
    solve_slots.push_back(slot(
        "ic",
        solve_cmd->add_option("--ic", solve_args.ic, "initial condition, e.g. x=0,y=1,phi=0"),
        solve_args.ic));
    solve_slots.push_back(
        slot("s-range", solve_cmd->add_option("--s-range", solve_args.s_range, "s0:s1"),
             solve_args.s_range));
    solve_slots.push_back(
        slot("tol", solve_cmd->add_option("--tol", solve_args.rel_tol, "relative tolerance"),
             solve_args.rel_tol));
    solve_slots.push_back(slot(
        "abs-tol", solve_cmd->add_option("--abs-tol", solve_args.abs_tol, "absolute tolerance"),
        solve_args.abs_tol));
    solve_slots.push_back(
        slot("out", solve_cmd->add_option("--out", solve_args.out, "output path ('-' = stdout)"),
             solve_args.out));
    solve_slots.push_back(
        slot("format", solve_cmd->add_option("--format", solve_args.format, "csv or json"),
             solve_args.format));
    solve_cmd->add_option("--config", solve_config, "key = value configuration file");

    // residual
    auto* residual_cmd = app.add_subcommand("residual", "translator residual over a grid");
    ResidualArgs residual_args;
    std::string residual_config;
    std::vector<ConfigSlot> residual_slots;
    residual_slots.push_back(slot(
        "family",
        residual_cmd->add_option("--family", residual_args.family,
                                 "pick the N/A/K parametrization (default: canonical)"),
        residual_args.family));
    residual_slots.push_back(slot(
        "field", residual_cmd->add_option("--field", residual_args.field, "dx, dtheta, v or w"),
        residual_args.field));
    residual_slots.push_back(
        slot("surface",
             residual_cmd->add_option("--surface", residual_args.surface,
                                      "catalog name, e.g. sigma-x0:2"),
             residual_args.surface));
    residual_slots.push_back(
        slot("grid",
             residual_cmd->add_option("--grid", residual_args.grid, "slo:shi:ns,tlo:thi:nt"),
             residual_args.grid));
    residual_slots.push_back(
        slot("tol", residual_cmd->add_option("--tol", residual_args.tol, "certification tolerance"),
             residual_args.tol));
    residual_slots.push_back(
        slot("out",
             residual_cmd->add_option("--out", residual_args.out, "output path ('-' = stdout)"),
             residual_args.out));
    residual_cmd->add_option("--config", residual_config, "key = value configuration file");

    // portrait
    auto* portrait_cmd = app.add_subcommand("portrait", "sample a direction field");
    PortraitArgs portrait_args;
    std::string portrait_config;
    std::vector<ConfigSlot> portrait_slots;
    portrait_slots.push_back(
        slot("system", portrait_cmd->add_option("--system", portrait_args.system, "system name (as)"),
             portrait_args.system));
    portrait_slots.push_back(slot(
        "grid",
        portrait_cmd->add_option("--grid", portrait_args.grid, "ymin:ymax:ny,phimin:phimax:nphi"),
        portrait_args.grid));
    portrait_slots.push_back(
        slot("out", portrait_cmd->add_option("--out", portrait_args.out, "output path ('-' = stdout)"),
             portrait_args.out));
    portrait_cmd->add_option("--config", portrait_config, "key = value configuration file");

    // decompose
    auto* decompose_cmd = app.add_subcommand("decompose", "NAK coordinates of a matrix");
    std::string matrix;
    decompose_cmd->add_option("--matrix", matrix, "a,b,c,d")->required();

    // catalog
    app.add_subcommand("catalog", "list named surfaces and explicit solutions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (verify_cmd->parsed()) return run_verify(suite, argv[0]);
        if (solve_cmd->parsed()) {
            if (int rc = apply_config(solve_config, solve_slots); rc != kExitOk) return rc;
            return run_solve(solve_args);
        }
        if (residual_cmd->parsed()) {
            if (int rc = apply_config(residual_config, residual_slots); rc != kExitOk) return rc;
            return run_residual(residual_args);
        }
        if (portrait_cmd->parsed()) {
            if (int rc = apply_config(portrait_config, portrait_slots); rc != kExitOk) return rc;
            return run_portrait(portrait_args);
        }
        if (decompose_cmd->parsed()) return run_decompose(matrix);
        return run_catalog();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
