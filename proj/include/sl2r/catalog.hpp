#ifndef SL2R_CATALOG_HPP
#define SL2R_CATALOG_HPP

#include <optional>
#include <string>
#include <vector>

#include "sl2r/families.hpp"
#include "sl2r/translators.hpp"

// Named surfaces and explicit solutions addressable from the CLI and the
// python module, e.g. "sigma-x0:2" or "rot-cmc:0.5,-1".

namespace sl2r {

struct CatalogEntry {
    std::string name;
    std::string kind;  // "special-surface" or "explicit-solution"
    std::string params_help;
    std::string description;
};

std::vector<CatalogEntry> catalog_entries();

struct ResolvedSurface {
    std::string canonical;
    std::vector<InvariantSurface> members;
    std::optional<ExplicitSolution> solution;
};

// Accepts "name" or "name:p1[,p2,...]"; throws std::invalid_argument for
// unknown names or out-of-range parameters.
ResolvedSurface resolve_surface_spec(const std::string& spec);

}  // namespace sl2r

#endif
