#ifndef SL2R_TRANSLATORS_HPP
#define SL2R_TRANSLATORS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sl2r/core.hpp"
#include "sl2r/families.hpp"
#include "sl2r/ode.hpp"
#include "sl2r/oracle.hpp"

// The translator residual H - <N, X> for every (family, Killing field)
// pair, the reduction ODEs, the explicit solution families, and the
// polynomial coefficient systems of the A-invariant classification.

namespace sl2r {

struct TranslatorProblem {
    Family family = Family::N;
    KillingField field = KillingField::Dx;
    int orientation = +1;
};

// Closed-form normal/curvature route.
double residual(const TranslatorProblem& problem, const InvariantSurface& surface, double s,
                double t);
// Independent route through the immersion oracle (analytic jets).
double residual_oracle(const TranslatorProblem& problem, const InvariantSurface& surface,
                       double s, double t);

// (N, H) of a family evaluated directly from a curve jet; t is the fiber
// parameter (only the A family uses it).
std::pair<FrameVector, double> closed_form_from_jet(Family family, const CurveJet& jet, double t,
                                                    int orientation);

// Coefficients (ascending powers of t) of the polynomial whose vanishing is
// equivalent to the A-invariant translator equation for the given field.
// P(t) = normalization * Phi^3 * residual; the normalization is 1/2 for
// dx, dtheta and V, and 2 for W.
std::vector<double> a_family_poly_coeffs(KillingField field, const GeneratingCurve& curve,
                                         double s);
double a_family_poly_normalization(KillingField field);

// --- reduction ODEs ---------------------------------------------------------

struct SolveRow {
    double s = 0.0;
    std::optional<double> x, y, theta, phi, H, residual;
};

struct ReductionSystem {
    TranslatorProblem problem;
    std::vector<std::string> state_names;
    ode::OdeSystem system;
    std::function<SolveRow(double s, const ode::State&)> row;
};

// Supported problems: (N,dx) state (y,dy); (N,dtheta) state (y,theta,phi);
// (N,v) state (y,f) with f = y'/y; (K,*) state (x,y,phi).  theta0/s0 anchor
// the reconstructed theta(s) = theta0 + (s - s0) where theta is not part of
// the state.
ReductionSystem make_reduction_system(const TranslatorProblem& problem, double theta0 = 0.0,
                                      double s0 = 0.0);

// The planar autonomous (y, phi) system governing rotational dx-translators.
ode::OdeSystem autonomous_dx_system();

// State derivative; (K, dx) dispatches on the state size (2 = autonomous
// (y, phi) form, 3 = full (x, y, phi) form).
ode::State reduction_rhs(const TranslatorProblem& problem, double s, const ode::State& state);

std::vector<SolveRow> solve_rows(const ReductionSystem& rs, const ode::Trajectory& trajectory);

// --- explicit solutions ------------------------------------------------------

enum class SolutionTag { NxMinimal, NthetaCmc, NthetaGeneral, Nv, RotLineH, RotLineV, RotCmc };

struct ExplicitSolution {
    SolutionTag tag = SolutionTag::NxMinimal;
    std::string name;
    std::string description;
    std::map<std::string, double> params;
    InvariantSurface surface;
    // Residual of the defining ODE / reduction, analytic derivatives.
    std::function<double(double)> defining_ode_residual;
};

// Parameters (defaults in parentheses): NxMinimal c1(1) > 0, c2(0);
// NthetaCmc c1(1) > 0, c2(0); NthetaGeneral c1(1) > 0, c2(0);
// Nv c(1) > 0, s0(0); RotLineH c1(0), c2(1) > 0; RotLineV c2(1) > 0;
// RotCmc H (required, >= 0), c (sign fixed by y > 0: negative for H < 1).
ExplicitSolution explicit_solution(SolutionTag tag,
                                   const std::map<std::string, double>& params = {});

// --- grid verification -------------------------------------------------------

struct GridSpec {
    double s_min = -1.0, s_max = 1.0;
    int ns = 30;
    double t_min = 0.5, t_max = 2.0;
    int nt = 30;
};

GridSpec default_grid(const InvariantSurface& surface);

struct ResidualSample {
    double s, t;
    double closed, oracle;
};

struct ResidualReport {
    TranslatorProblem problem;
    std::string surface_name;
    GridSpec grid;
    std::vector<ResidualSample> samples;
    double max_abs_closed = 0.0;
    double max_abs_oracle = 0.0;
    double max_inconsistency = 0.0;
    double tol_closed = 1e-7;
    double tol_consistency = 1e-5;
    bool consistent = false;
    bool certified = false;
    int certifying_orientation = 0;
};

ResidualReport verify_surface(const TranslatorProblem& problem, const InvariantSurface& surface,
                              const GridSpec& grid, double tol_closed = 1e-7,
                              const std::string& surface_name = "");
ResidualReport verify_solution(const ExplicitSolution& solution, const TranslatorProblem& problem,
                               const GridSpec& grid, double tol_closed = 1e-7);

// --- constant-mean-curvature consistency --------------------------------------

// Whether a rotational surface of constant mean curvature H can satisfy the
// V-translator reduction.  The constant-angle branch is decided in closed
// form; the generic branch integrates the constant-H profile and samples the
// V-reduction residual on s in [0.3, 2.3] (the window avoids the isolated
// pointwise zero the overdetermined residual has when cosh(2ks) = 2H).
struct CmcVerdict {
    double H = 0.0;
    bool consistent = false;
    bool constant_branch_applicable = false;
    double constant_branch_residual = 0.0;
    double generic_min_abs_residual = 0.0;
    double generic_max_abs_residual = 0.0;
};

CmcVerdict cmc_consistency_check(double H);

// --- diagnostics ---------------------------------------------------------------

// Counts sign changes of x' = 2 y cos(phi) along a rotational trajectory
// with state (x, y, phi); a generating curve is a bi-graph over y = 0 when
// x is monotone on each side of a single turning point.
struct BigraphDiagnostic {
    bool is_bigraph = false;
    int turning_points = 0;
    std::vector<double> turning_s;
};

BigraphDiagnostic bigraph_diagnostic(const ode::Trajectory& trajectory);

// --- closed-form pieces of the N-invariant dtheta solutions ---------------------

enum class PsiVariant { NegLogCosh, LiteralConstant, PosLogCosh };

double ntheta_Lambda(double s);
double ntheta_psi(PsiVariant variant, double s);
double ntheta_phi(double s);
// (y, theta) of the two-constant closed form under the given psi variant,
// normalized so that y(0) = c1 and theta(0) = c2.
std::pair<double, double> ntheta_general_curve(PsiVariant variant, double s, double c1, double c2);

}  // namespace sl2r

#endif
