#ifndef SL2R_ORACLE_HPP
#define SL2R_ORACLE_HPP

#include <functional>
#include <stdexcept>

#include "sl2r/core.hpp"
#include "sl2r/families.hpp"

// Closed-form-free computation of the unit normal, fundamental forms, mean
// curvature and induced Gauss curvature of a parametrized surface; the
// cross-check oracle for every per-family formula and translator residual.

namespace sl2r {

struct degenerate_jet_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// First and second derivatives of the immersion at a fixed (s, t),
// coordinate components.
struct SurfaceJet {
    Sl2Point position{0.0, 1.0, 0.0};
    CoordVector d_s, d_t;
    CoordVector d_ss, d_st, d_tt;
};

struct FundamentalForms {
    double E = 0.0, F = 0.0, G = 0.0;
    double L = 0.0, M = 0.0, Nff = 0.0;
    FrameVector unit_normal;
};

using SurfaceEvaluator = std::function<Sl2Point(double, double)>;

// Jet from the generating curve's analytic derivatives.
SurfaceJet jet_analytic(const InvariantSurface& surface, double s, double t);

// Jet by central second-order finite differences of an arbitrary evaluator.
SurfaceJet jet_finite_difference(const SurfaceEvaluator& evaluate, double s, double t, double h);

// Default step for finite-difference paths, scaled by max(1, |s|, |t|).
double fd_step(double s, double t, double h0 = 1e-4);

// First form by metric contraction; unit normal = orientation * the
// normalized g-cross-product of (d_s, d_t); second form via the ambient
// covariant derivative.  Throws degenerate_jet_error if EG - F^2 < 1e-14.
FundamentalForms fundamental_forms(const SurfaceJet& jet, int orientation);

// Half the trace of the shape operator for the oriented normal.
double mean_curvature_oracle(const SurfaceJet& jet, int orientation);

// Oracle normal/curvature aligned with the family's closed-form convention:
// orientation here means the same sign as in closed_form_N_H.
FundamentalForms oriented_forms(const InvariantSurface& surface, double s, double t,
                                int orientation = 0);
double oriented_mean_curvature(const InvariantSurface& surface, double s, double t,
                               int orientation = 0);

// Intrinsic Gauss curvature of the induced metric via the Brioschi formula
// with central finite differences of E, F, G (step h, scaled internally).
double gauss_curvature_induced(const InvariantSurface& surface, double s, double t,
                               double h = 1e-3);

// Optional Richardson extrapolation of the finite-difference jet.
SurfaceJet jet_finite_difference_richardson(const SurfaceEvaluator& evaluate, double s, double t,
                                            double h);

}  // namespace sl2r

#endif
