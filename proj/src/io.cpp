#include "sl2r/io.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sl2r::io {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Grid1D parse_grid1(const std::string& text) {
    Grid1D g;
    std::stringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c, ':'))
        throw std::invalid_argument("sl2r: grid must be lo:hi:n");
    std::string rest;
    if (std::getline(ss, rest, ':')) throw std::invalid_argument("sl2r: grid must be lo:hi:n");
    try {
        std::size_t ua = 0, ub = 0, uc = 0;
        g.lo = std::stod(a, &ua);
        g.hi = std::stod(b, &ub);
        g.n = std::stoi(c, &uc);
        if (ua != a.size() || ub != b.size() || uc != c.size()) throw std::invalid_argument("");
    } catch (...) {
        throw std::invalid_argument("sl2r: malformed grid '" + text + "'");
    }
    if (g.n < 1 || !(g.hi >= g.lo)) throw std::invalid_argument("sl2r: malformed grid '" + text + "'");
    return g;
}

GridSpec parse_grid2(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("sl2r: grid must be slo:shi:ns,tlo:thi:nt");
    const Grid1D gs = parse_grid1(text.substr(0, comma));
    const Grid1D gt = parse_grid1(text.substr(comma + 1));
    GridSpec g;
    g.s_min = gs.lo;
    g.s_max = gs.hi;
    g.ns = gs.n;
    g.t_min = gt.lo;
    g.t_max = gt.hi;
    g.nt = gt.n;
    return g;
}

std::map<std::string, double> parse_key_values(const std::string& text) {
    std::map<std::string, double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("sl2r: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        try {
            std::size_t used = 0;
            const double v = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument("");
            out[key] = v;
        } catch (...) {
            throw std::invalid_argument("sl2r: bad value for '" + key + "'");
        }
    }
    return out;
}

double grid_point(double lo, double hi, int n, int i) {
    if (n <= 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

namespace {
void put_field(std::ostream& os, const std::optional<double>& v, bool last) {
    if (v) os << format_double(*v);
    if (!last) os << ',';
}
}  // namespace

void write_solve_csv(std::ostream& os, const std::vector<SolveRow>& rows) {
    os << "s,x,y,theta,phi,H,residual\n";
    for (const auto& r : rows) {
        os << format_double(r.s) << ',';
        put_field(os, r.x, false);
        put_field(os, r.y, false);
        put_field(os, r.theta, false);
        put_field(os, r.phi, false);
        put_field(os, r.H, false);
        put_field(os, r.residual, true);
        os << '\n';
    }
}

std::string solve_json(const std::vector<SolveRow>& rows,
                       const std::map<std::string, std::string>& metadata) {
    nlohmann::json j;
    j["metadata"] = metadata;
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json rec;
        rec["s"] = r.s;
        auto set = [&rec](const char* key, const std::optional<double>& v) {
            if (v) rec[key] = *v;
        };
        set("x", r.x);
        set("y", r.y);
        set("theta", r.theta);
        set("phi", r.phi);
        set("H", r.H);
        set("residual", r.residual);
        recs.push_back(rec);
    }
    j["records"] = recs;
    return j.dump(2);
}

std::string residual_report_json(const ResidualReport& report) {
    nlohmann::json j;
    j["problem"] = {{"family", to_string(report.problem.family)},
                    {"field", to_string(report.problem.field)}};
    j["surface"] = report.surface_name;
    j["grid"] = {{"s", {report.grid.s_min, report.grid.s_max, report.grid.ns}},
                 {"t", {report.grid.t_min, report.grid.t_max, report.grid.nt}}};
    j["tolerance_closed"] = report.tol_closed;
    j["tolerance_consistency"] = report.tol_consistency;
    j["max_abs_residual_closed"] = report.max_abs_closed;
    j["max_abs_residual_oracle"] = report.max_abs_oracle;
    j["max_inconsistency"] = report.max_inconsistency;
    j["consistent"] = report.consistent;
    j["certified"] = report.certified;
    j["certifying_orientation"] = report.certifying_orientation;
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : report.samples)
        samples.push_back({{"s", s.s}, {"t", s.t}, {"closed", s.closed}, {"oracle", s.oracle}});
    j["samples"] = samples;
    return j.dump(2);
}

}  // namespace sl2r::io
