#include "sl2r/catalog.hpp"

#include <sstream>
#include <stdexcept>

namespace sl2r {

namespace {

std::vector<double> parse_params(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (...) {
            throw std::invalid_argument("sl2r: bad numeric parameter '" + item + "'");
        }
        if (used != item.size())
            throw std::invalid_argument("sl2r: bad numeric parameter '" + item + "'");
        out.push_back(v);
    }
    return out;
}

double opt(const std::vector<double>& p, std::size_t i, double fallback) {
    return i < p.size() ? p[i] : fallback;
}

}  // namespace

std::vector<CatalogEntry> catalog_entries() {
    std::vector<CatalogEntry> out;
    out.push_back({"sigma-x0", "special-surface", "x0 (default 0)",
                   sigma_x0(0.0).description});
    out.push_back({"sigma-y0", "special-surface", "y0 > 0 (default 1)",
                   sigma_y0(1.0).description});
    out.push_back({"sigma-theta0", "special-surface", "theta0 (default 0)",
                   sigma_theta0(0.0).description});
    out.push_back({"nx-minimal", "explicit-solution", "c1 > 0, c2 (default 1, 0)",
                   explicit_solution(SolutionTag::NxMinimal).description});
    out.push_back({"ntheta-cmc", "explicit-solution", "c1 > 0, c2 (default 1, 0)",
                   explicit_solution(SolutionTag::NthetaCmc).description});
    out.push_back({"ntheta-general", "explicit-solution", "c1 > 0, c2 (default 1, 0)",
                   explicit_solution(SolutionTag::NthetaGeneral).description});
    out.push_back({"nv", "explicit-solution", "c > 0, s0 (default 1, 0)",
                   explicit_solution(SolutionTag::Nv).description});
    out.push_back({"rot-line-h", "explicit-solution", "c1, c2 > 0 (default 0, 1)",
                   explicit_solution(SolutionTag::RotLineH).description});
    out.push_back({"rot-line-v", "explicit-solution", "c2 > 0 (default 1)",
                   explicit_solution(SolutionTag::RotLineV).description});
    out.push_back({"rot-cmc-sub", "explicit-solution", "H in [0,1), c < 0 (default 0.5, -1)",
                   explicit_solution(SolutionTag::RotCmc, {{"H", 0.5}}).description});
    out.push_back({"rot-cmc-one", "explicit-solution", "c > 0 (default 1)",
                   explicit_solution(SolutionTag::RotCmc, {{"H", 1.0}}).description});
    out.push_back({"rot-cmc-super", "explicit-solution", "H > 1, c > 0 (default 2, 1)",
                   explicit_solution(SolutionTag::RotCmc, {{"H", 2.0}}).description});
    return out;
}

ResolvedSurface resolve_surface_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::vector<double> p =
        colon == std::string::npos ? std::vector<double>{} : parse_params(spec.substr(colon + 1));

    ResolvedSurface out;
    out.canonical = spec;

    auto from_special = [&](const SpecialSurface& s) { out.members = s.members; };
    auto from_solution = [&](ExplicitSolution sol) {
        out.members = {sol.surface};
        out.solution = std::move(sol);
    };

    if (name == "sigma-x0") {
        from_special(sigma_x0(opt(p, 0, 0.0)));
    } else if (name == "sigma-y0") {
        from_special(sigma_y0(opt(p, 0, 1.0)));
    } else if (name == "sigma-theta0") {
        from_special(sigma_theta0(opt(p, 0, 0.0)));
    } else if (name == "nx-minimal") {
        from_solution(explicit_solution(SolutionTag::NxMinimal,
                                        {{"c1", opt(p, 0, 1.0)}, {"c2", opt(p, 1, 0.0)}}));
    } else if (name == "ntheta-cmc") {
        from_solution(explicit_solution(SolutionTag::NthetaCmc,
                                        {{"c1", opt(p, 0, 1.0)}, {"c2", opt(p, 1, 0.0)}}));
    } else if (name == "ntheta-general") {
        from_solution(explicit_solution(SolutionTag::NthetaGeneral,
                                        {{"c1", opt(p, 0, 1.0)}, {"c2", opt(p, 1, 0.0)}}));
    } else if (name == "nv") {
        from_solution(
            explicit_solution(SolutionTag::Nv, {{"c", opt(p, 0, 1.0)}, {"s0", opt(p, 1, 0.0)}}));
    } else if (name == "rot-line-h") {
        from_solution(explicit_solution(SolutionTag::RotLineH,
                                        {{"c1", opt(p, 0, 0.0)}, {"c2", opt(p, 1, 1.0)}}));
    } else if (name == "rot-line-v") {
        from_solution(explicit_solution(SolutionTag::RotLineV, {{"c2", opt(p, 0, 1.0)}}));
    } else if (name == "rot-cmc" || name == "rot-cmc-sub" || name == "rot-cmc-one" ||
               name == "rot-cmc-super") {
        double H = name == "rot-cmc-sub" ? 0.5 : name == "rot-cmc-one" ? 1.0
                                          : name == "rot-cmc-super"    ? 2.0
                                                                        : 0.0;
        std::map<std::string, double> params;
        if (name == "rot-cmc") {
            if (p.empty()) throw std::invalid_argument("sl2r: rot-cmc needs H, e.g. rot-cmc:0.5");
            H = p[0];
            if (p.size() > 1) params["c"] = p[1];
        } else if (!p.empty()) {
            if (name == "rot-cmc-one") {
                params["c"] = p[0];
            } else {
                H = p[0];
                if (p.size() > 1) params["c"] = p[1];
            }
        }
        params["H"] = H;
        from_solution(explicit_solution(SolutionTag::RotCmc, params));
    } else {
        throw std::invalid_argument("sl2r: unknown surface '" + name + "'");
    }
    return out;
}

}  // namespace sl2r
