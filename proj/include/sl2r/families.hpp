#ifndef SL2R_FAMILIES_HPP
#define SL2R_FAMILIES_HPP

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sl2r/core.hpp"
#include "sl2r/ode.hpp"

// Surfaces invariant under the three NAK subgroups, their generating
// curves, closed-form unit normals and mean curvatures, and the three
// coordinate-slice surfaces.

namespace sl2r {

enum class Family { N, A, K };
const char* to_string(Family f);

// Jet of a generating curve at a parameter value.  The coordinate pair
// (a, b) depends on the family: (y, theta) for N, (x, theta) for A,
// (x, y) for K.  Angle-form curves also carry (phi, phi').
struct CurveJet {
    double a = 0.0, da = 0.0, dda = 0.0;
    double b = 0.0, db = 0.0, ddb = 0.0;
    bool has_phi = false;
    double phi = 0.0, dphi = 0.0;
};

struct GeneratingCurve {
    Family family = Family::N;
    std::function<CurveJet(double)> eval;
    double s_min = -1e300;
    double s_max = 1e300;
    bool angle_form = false;

    CurveJet at(double s) const;  // enforces the validity interval
};

// Angle function phi(s) together with its derivative.
using PhiFunction = std::function<std::pair<double, double>(double)>;

// Builds a curve analytically from two coordinate functions returning
// (value, d/ds, d2/ds2).
using CoordFunction = std::function<std::array<double, 3>(double)>;
GeneratingCurve make_analytic_curve(Family family, CoordFunction first, CoordFunction second,
                                    double s_min = -1e300, double s_max = 1e300);

// Integrates the angle-form system for the N or K family from the given
// initial point; derivatives are reconstructed from the right-hand side,
// never by differentiating interpolants.  Stops early with a shortened
// validity interval if the curve approaches y = 0.
GeneratingCurve curve_from_phi(Family family, const PhiFunction& phi,
                               std::array<double, 2> initial_point, double s_min, double s_max,
                               const ode::IntegratorConfig& config = {});

struct InvariantSurface {
    Family family = Family::N;
    GeneratingCurve curve;
    int orientation = +1;
};

// Immersion position: (t, y(s), theta(s)) for N, (x(s), t, theta(s)) for A
// (t > 0), (x(s), y(s), t) for K.
Sl2Point surface_position(const InvariantSurface& surface, double s, double t);

// (s, t) |-> position, for the finite-difference jet path.
std::function<Sl2Point(double, double)> surface_evaluator(const InvariantSurface& surface);

// Closed-form unit normal (frame components) and mean curvature of the
// family, oriented by `orientation`; orientation 0 uses the surface's own.
std::pair<FrameVector, double> closed_form_N_H(const InvariantSurface& surface, double s,
                                               double t, int orientation = 0);

// Sign relating the normalized g-cross-product of (d_s, d_t) to the
// closed-form normal above: +1 for the N and A families, -1 for K.
int orientation_alignment(Family family);

// A coordinate-slice surface listed with every family it belongs to and
// its documented normal and mean curvature.
struct SpecialSurface {
    std::string name;
    std::vector<InvariantSurface> members;
    double expected_H = 0.0;
    FrameVector expected_normal;
    std::string description;
};

SpecialSurface sigma_x0(double x0);
SpecialSurface sigma_y0(double y0);
SpecialSurface sigma_theta0(double theta0);

}  // namespace sl2r

#endif
