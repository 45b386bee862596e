#include "sl2r/core.hpp"

#include <cmath>
#include <stdexcept>

namespace sl2r {

namespace {
constexpr double kDetTol = 1e-12;

void require_positive_y(double y) {
    if (!(y > 0.0)) throw std::domain_error("sl2r: y must be strictly positive");
}
}  // namespace

Sl2Point::Sl2Point(double x_, double y_, double theta_) : x(x_), y(y_), theta(theta_) {
    require_positive_y(y);
}

Sl2Matrix::Sl2Matrix(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
    if (std::abs(det() - 1.0) > kDetTol)
        throw std::domain_error("sl2r: matrix determinant differs from 1 beyond tolerance");
}

double dot(const FrameVector& a, const FrameVector& b) {
    return a.v1 * b.v1 + a.v2 * b.v2 + a.v3 * b.v3;
}

double norm(const FrameVector& a) { return std::sqrt(dot(a, a)); }

FrameVector cross(const FrameVector& a, const FrameVector& b) {
    return {a.v2 * b.v3 - a.v3 * b.v2, a.v3 * b.v1 - a.v1 * b.v3, a.v1 * b.v2 - a.v2 * b.v1};
}

FrameVector normalized(const FrameVector& a) {
    double n = norm(a);
    if (n == 0.0) throw std::domain_error("sl2r: cannot normalize the zero vector");
    return a * (1.0 / n);
}

Sl2Matrix compose_nak(const Sl2Point& p) {
    require_positive_y(p.y);
    const double r = std::sqrt(p.y);
    const double ct = std::cos(p.theta), st = std::sin(p.theta);
    // n(x) a(y) k(theta)
    return Sl2Matrix(r * ct - p.x * st / r, r * st + p.x * ct / r, -st / r, ct / r);
}

Sl2Point decompose_nak(const Sl2Matrix& m) {
    const double den = m.c * m.c + m.d * m.d;
    const double y = 1.0 / den;
    const double x = (m.a * m.c + m.b * m.d) * y;
    // cos(theta) = d sqrt(y), sin(theta) = -c sqrt(y); theta in (-pi, pi].
    const double theta = std::atan2(-m.c, m.d);
    return Sl2Point(x, y, theta);
}

MatrixClass classify_matrix(const Sl2Matrix& m) {
    const double t = std::abs(m.trace());
    if (std::abs(t - 2.0) <= kDetTol) return MatrixClass::Parabolic;
    return t > 2.0 ? MatrixClass::Hyperbolic : MatrixClass::Elliptic;
}

const char* to_string(MatrixClass c) {
    switch (c) {
        case MatrixClass::Parabolic: return "Parabolic";
        case MatrixClass::Hyperbolic: return "Hyperbolic";
        case MatrixClass::Elliptic: return "Elliptic";
    }
    return "?";
}

std::complex<double> mobius_action(const Sl2Matrix& m, std::complex<double> z) {
    if (!(z.imag() > 0.0))
        throw std::domain_error("sl2r: mobius_action requires Im(z) > 0");
    return (m.a * z + m.b) / (m.c * z + m.d);
}

std::pair<double, double> hyperbolic_projection(const Sl2Point& p) { return {p.x, p.y}; }

Mat3 metric_at(const Sl2Point& p) {
    const double y = p.y;
    require_positive_y(y);
    Mat3 g{};
    g[0][0] = 1.0 / (2.0 * y * y);
    g[1][1] = 1.0 / (4.0 * y * y);
    g[2][2] = 1.0;
    g[0][2] = g[2][0] = 1.0 / (2.0 * y);
    return g;
}

Mat3 metric_inverse_at(const Sl2Point& p) {
    const double y = p.y;
    require_positive_y(y);
    Mat3 gi{};
    gi[0][0] = 4.0 * y * y;
    gi[1][1] = 4.0 * y * y;
    gi[2][2] = 2.0;
    gi[0][2] = gi[2][0] = -2.0 * y;
    return gi;
}

double metric_inner(const Sl2Point& p, const CoordVector& u, const CoordVector& v) {
    const Mat3 g = metric_at(p);
    const std::array<double, 3> a{u.vx, u.vy, u.vtheta}, b{v.vx, v.vy, v.vtheta};
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += g[i][j] * a[i] * b[j];
    return s;
}

std::array<CoordVector, 3> frame_at(const Sl2Point& p) {
    require_positive_y(p.y);
    return {CoordVector{2.0 * p.y, 0.0, -1.0}, CoordVector{0.0, 2.0 * p.y, 0.0},
            CoordVector{0.0, 0.0, 1.0}};
}

FrameVector coord_to_frame(const Sl2Point& p, const CoordVector& v) {
    require_positive_y(p.y);
    const double a = v.vx / (2.0 * p.y);
    return {a, v.vy / (2.0 * p.y), v.vtheta + a};
}

CoordVector frame_to_coord(const Sl2Point& p, const FrameVector& w) {
    require_positive_y(p.y);
    return {2.0 * p.y * w.v1, 2.0 * p.y * w.v2, w.v3 - w.v1};
}

FrameVector connection_frame(int i, int j) {
    if (i < 1 || i > 3 || j < 1 || j > 3)
        throw std::out_of_range("sl2r: connection_frame indices must be in {1,2,3}");
    static const FrameVector table[3][3] = {
        {{0, 2, 0}, {-2, 0, -1}, {0, 1, 0}},
        {{0, 0, 1}, {0, 0, 0}, {-1, 0, 0}},
        {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}},
    };
    return table[i - 1][j - 1];
}

Christoffels christoffels_at(const Sl2Point& p) {
    const double y = p.y;
    require_positive_y(y);
    Christoffels G{};
    // k = x
    G[0][0][1] = G[0][1][0] = -3.0 / (2.0 * y);
    G[0][1][2] = G[0][2][1] = -1.0;
    // k = y
    G[1][0][0] = 2.0 / y;
    G[1][1][1] = -1.0 / y;
    G[1][0][2] = G[1][2][0] = 1.0;
    // k = theta
    G[2][0][1] = G[2][1][0] = 1.0 / (2.0 * y * y);
    G[2][1][2] = G[2][2][1] = 1.0 / (2.0 * y);
    return G;
}

CoordVector covariant_derivative(const Sl2Point& p, const CoordVector& u,
                                 const CoordVector& w, const CoordVector& dw) {
    const Christoffels G = christoffels_at(p);
    const std::array<double, 3> uu{u.vx, u.vy, u.vtheta}, ww{w.vx, w.vy, w.vtheta};
    std::array<double, 3> out{dw.vx, dw.vy, dw.vtheta};
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) out[k] += G[k][i][j] * uu[i] * ww[j];
    return {out[0], out[1], out[2]};
}

FrameVector frame_connection_via_christoffels(const Sl2Point& p, int i, int j) {
    if (i < 1 || i > 3 || j < 1 || j > 3)
        throw std::out_of_range("sl2r: frame indices must be in {1,2,3}");
    const auto frame = frame_at(p);
    const CoordVector u = frame[i - 1];
    const CoordVector w = frame[j - 1];
    // Directional derivative of the frame components along u.  Only the y
    // coordinate enters: e1 = (2y, 0, -1), e2 = (0, 2y, 0), e3 constant.
    CoordVector dw{0.0, 0.0, 0.0};
    if (j == 1) dw = CoordVector{2.0 * u.vy, 0.0, 0.0};
    if (j == 2) dw = CoordVector{0.0, 2.0 * u.vy, 0.0};
    return coord_to_frame(p, covariant_derivative(p, u, w, dw));
}

FrameVector killing_at(KillingField k, const Sl2Point& p) {
    const double y = p.y, x = p.x;
    require_positive_y(y);
    switch (k) {
        case KillingField::Dx: return {1.0 / (2.0 * y), 0.0, 1.0 / (2.0 * y)};
        case KillingField::Dtheta: return {0.0, 0.0, 1.0};
        case KillingField::V: return {x / (2.0 * y), 0.5, x / (2.0 * y)};
        case KillingField::W: {
            const double q = (x * x - y * y) / (4.0 * y);
            return {q, x / 2.0, q};
        }
    }
    throw std::invalid_argument("sl2r: unknown Killing field");
}

CoordVector killing_coord(KillingField k, const Sl2Point& p) {
    switch (k) {
        case KillingField::Dx: return {1.0, 0.0, 0.0};
        case KillingField::Dtheta: return {0.0, 0.0, 1.0};
        case KillingField::V: return {p.x, p.y, 0.0};
        case KillingField::W: return {0.5 * (p.x * p.x - p.y * p.y), p.x * p.y, 0.0};
    }
    throw std::invalid_argument("sl2r: unknown Killing field");
}

const char* to_string(KillingField k) {
    switch (k) {
        case KillingField::Dx: return "dx";
        case KillingField::Dtheta: return "dtheta";
        case KillingField::V: return "v";
        case KillingField::W: return "w";
    }
    return "?";
}

FrameVector killing_w_corrected_at(const Sl2Point& p) {
    require_positive_y(p.y);
    const double x = p.x, y = p.y;
    return {(x * x - y * y) / (4.0 * y), x / 2.0, (x * x + y * y) / (4.0 * y)};
}

CoordVector killing_w_corrected_coord(const Sl2Point& p) {
    return {0.5 * (p.x * p.x - p.y * p.y), p.x * p.y, 0.5 * p.y};
}

double killing_equation_residual(KillingField k, const Sl2Point& p,
                                 const CoordVector& u, const CoordVector& v, double h) {
    return killing_equation_residual(
        [k](const Sl2Point& q) { return killing_coord(k, q); }, p, u, v, h);
}

double killing_equation_residual(const std::function<CoordVector(const Sl2Point&)>& field,
                                 const Sl2Point& p, const CoordVector& u, const CoordVector& v,
                                 double h) {
    // (L_X g)_ij = X^m d_m g_ij + g_mj d_i X^m + g_im d_j X^m, all partials
    // by central differences; evaluated as a quadratic form on (u, v).
    const std::array<double, 3> base{p.x, p.y, p.theta};
    auto point_shift = [&](int dir, double delta) {
        std::array<double, 3> q = base;
        q[dir] += delta;
        return Sl2Point(q[0], q[1], q[2]);
    };
    auto metric_partial = [&](int dir) {
        const Mat3 gp = metric_at(point_shift(dir, h));
        const Mat3 gm = metric_at(point_shift(dir, -h));
        Mat3 d{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) d[i][j] = (gp[i][j] - gm[i][j]) / (2.0 * h);
        return d;
    };
    auto killing_partial = [&](int dir) {
        const CoordVector Xp = field(point_shift(dir, h));
        const CoordVector Xm = field(point_shift(dir, -h));
        return std::array<double, 3>{(Xp.vx - Xm.vx) / (2.0 * h), (Xp.vy - Xm.vy) / (2.0 * h),
                                     (Xp.vtheta - Xm.vtheta) / (2.0 * h)};
    };

    const Mat3 g = metric_at(p);
    const CoordVector X = field(p);
    const std::array<double, 3> Xc{X.vx, X.vy, X.vtheta};
    std::array<Mat3, 3> dg{metric_partial(0), metric_partial(1), metric_partial(2)};
    std::array<std::array<double, 3>, 3> dX{killing_partial(0), killing_partial(1),
                                            killing_partial(2)};

    Mat3 lie{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int m = 0; m < 3; ++m)
                s += Xc[m] * dg[m][i][j] + g[m][j] * dX[i][m] + g[i][m] * dX[j][m];
            lie[i][j] = s;
        }

    const std::array<double, 3> uu{u.vx, u.vy, u.vtheta}, vv{v.vx, v.vy, v.vtheta};
    double q = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) q += lie[i][j] * uu[i] * vv[j];
    return std::abs(q);
}

}  // namespace sl2r
