#ifndef SL2R_CORE_HPP
#define SL2R_CORE_HPP

#include <array>
#include <complex>
#include <functional>
#include <utility>

// Ambient geometry of SL(2,R) with its canonical left-invariant metric:
// NAK coordinates, matrix round trips, metric, orthonormal frame,
// Levi-Civita connection and the four basis Killing fields.

namespace sl2r {

// Point in global NAK coordinates (x, y, theta), y > 0.  theta is an
// unconstrained real; matrix round trips reduce it modulo 2*pi.
struct Sl2Point {
    double x;
    double y;
    double theta;

    Sl2Point(double x_, double y_, double theta_);
};

// Element of SL(2,R).  Construction checks |ad - bc - 1| <= 1e-12;
// every operation downstream assumes a valid matrix.
struct Sl2Matrix {
    double a, b, c, d;

    Sl2Matrix(double a_, double b_, double c_, double d_);
    double trace() const { return a + d; }
    double det() const { return a * d - b * c; }
};

// Tangent vector in the orthonormal frame {e1, e2, e3}.
struct FrameVector {
    double v1 = 0.0, v2 = 0.0, v3 = 0.0;

    FrameVector() = default;
    FrameVector(double a, double b, double c) : v1(a), v2(b), v3(c) {}

    FrameVector operator+(const FrameVector& o) const { return {v1 + o.v1, v2 + o.v2, v3 + o.v3}; }
    FrameVector operator-(const FrameVector& o) const { return {v1 - o.v1, v2 - o.v2, v3 - o.v3}; }
    FrameVector operator*(double k) const { return {k * v1, k * v2, k * v3}; }
    FrameVector operator-() const { return {-v1, -v2, -v3}; }
};

// Tangent vector in the coordinate basis {dx, dy, dtheta}.
struct CoordVector {
    double vx = 0.0, vy = 0.0, vtheta = 0.0;

    CoordVector() = default;
    CoordVector(double x, double y, double t) : vx(x), vy(y), vtheta(t) {}

    CoordVector operator+(const CoordVector& o) const { return {vx + o.vx, vy + o.vy, vtheta + o.vtheta}; }
    CoordVector operator-(const CoordVector& o) const { return {vx - o.vx, vy - o.vy, vtheta - o.vtheta}; }
    CoordVector operator*(double k) const { return {k * vx, k * vy, k * vtheta}; }
};

enum class MatrixClass { Parabolic, Hyperbolic, Elliptic };

// The four basis Killing fields: dx, dtheta, V = x dx + y dy,
// W = (x^2 - y^2)/2 dx + x y dy.
enum class KillingField { Dx, Dtheta, V, W };

using Mat3 = std::array<std::array<double, 3>, 3>;

// Christoffel symbols Gamma^k_ij in coordinate order (x, y, theta);
// indexed as gamma[k][i][j].
using Christoffels = std::array<Mat3, 3>;

// Euclidean operations in the orthonormal frame.
double dot(const FrameVector& a, const FrameVector& b);
double norm(const FrameVector& a);
FrameVector cross(const FrameVector& a, const FrameVector& b);
FrameVector normalized(const FrameVector& a);

// --- NAK decomposition and the hyperbolic base -----------------------------

Sl2Matrix compose_nak(const Sl2Point& p);
Sl2Point decompose_nak(const Sl2Matrix& m);
MatrixClass classify_matrix(const Sl2Matrix& m);
const char* to_string(MatrixClass c);

// Action on the upper half-plane by linear fractional transformations.
std::complex<double> mobius_action(const Sl2Matrix& m, std::complex<double> z);

// Fiber projection (x, y, theta) -> (x, y) onto H^2(-4).
std::pair<double, double> hyperbolic_projection(const Sl2Point& p);

// --- Metric, frame and connection ------------------------------------------

// Metric components in coordinate order (x, y, theta).
Mat3 metric_at(const Sl2Point& p);
Mat3 metric_inverse_at(const Sl2Point& p);
double metric_inner(const Sl2Point& p, const CoordVector& u, const CoordVector& v);

// Orthonormal frame e1 = 2y dx - dtheta, e2 = 2y dy, e3 = dtheta
// in coordinate components.
std::array<CoordVector, 3> frame_at(const Sl2Point& p);

FrameVector coord_to_frame(const Sl2Point& p, const CoordVector& v);
CoordVector frame_to_coord(const Sl2Point& p, const FrameVector& w);

// Constant frame components of nabla_{e_i} e_j, 1-based indices.
FrameVector connection_frame(int i, int j);

Christoffels christoffels_at(const Sl2Point& p);

// nabla_u w for a vector field w along a curve, given u = velocity,
// w and dw = d/ds of w's coordinate components (both at p).
CoordVector covariant_derivative(const Sl2Point& p, const CoordVector& u,
                                 const CoordVector& w, const CoordVector& dw);

// nabla_{e_i} e_j computed from christoffels_at and the analytic coordinate
// expressions of the frame fields; used to certify the connection table.
FrameVector frame_connection_via_christoffels(const Sl2Point& p, int i, int j);

// --- Killing fields ---------------------------------------------------------

// W here is the drift field used throughout the invariant-surface
// classification, with e3 coefficient (x^2 - y^2)/2.  That coefficient does
// not satisfy the Killing equation; the Killing member of the basis is
// killing_w_corrected_* below.  On rotational surfaces the two variants have
// identical products with the normal (which has no e3 component).
FrameVector killing_at(KillingField k, const Sl2Point& p);
CoordVector killing_coord(KillingField k, const Sl2Point& p);
const char* to_string(KillingField k);

// Fourth basis field of the isometry algebra: the e3 coefficient is
// (x^2 + y^2)/2, equivalently the coordinate field gains (y/2) dtheta.  It
// generates left translations by the lower-triangular unipotent subgroup.
FrameVector killing_w_corrected_at(const Sl2Point& p);
CoordVector killing_w_corrected_coord(const Sl2Point& p);

// Max |(L_X g)(u, v)| over the supplied vectors, all derivatives by central
// finite differences of step h; independent oracle for the Killing property.
double killing_equation_residual(KillingField k, const Sl2Point& p,
                                 const CoordVector& u, const CoordVector& v,
                                 double h = 1e-5);
double killing_equation_residual(const std::function<CoordVector(const Sl2Point&)>& field,
                                 const Sl2Point& p, const CoordVector& u, const CoordVector& v,
                                 double h = 1e-5);

}  // namespace sl2r

#endif
