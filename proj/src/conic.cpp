#include "conicpose/conic.hpp"

#include <algorithm>

namespace conicpose {

namespace {

void require_spd(const SymMat2& c) {
    if (!(c.trace() > 0.0) || !(c.det() > 0.0))
        throw std::invalid_argument("covariance is not positive definite");
}

}  // namespace

bool contains(const EllipseCov& e, Vec2 p) {
    const double det = e.cov.det();
    if (!(det > 0.0)) throw std::invalid_argument("degenerate ellipse");
    const Vec2 d = p - e.mu;
    // (d^T C^-1 d) with the 2x2 inverse written out
    const double form =
        (e.cov.yy * d.x * d.x - 2.0 * e.cov.xy * d.x * d.y + e.cov.xx * d.y * d.y) / det;
    return form <= 4.0;
}

AxesSpec eigen2(const SymMat2& c) {
    require_spd(c);
    const double half_tr = 0.5 * c.trace();
    const double disc = std::max(0.0, half_tr * half_tr - c.det());
    const double root = std::sqrt(disc);
    AxesSpec ax;
    ax.lambda1 = half_tr + root;
    ax.lambda2 = half_tr - root;
    ax.a1 = 2.0 * std::sqrt(ax.lambda1);
    ax.a2 = 2.0 * std::sqrt(ax.lambda2);
    // Eigenvector of lambda1, picking the numerically larger expression.
    const Vec2 v1{c.xy, ax.lambda1 - c.xx};
    const Vec2 v2{ax.lambda1 - c.yy, c.xy};
    Vec2 v = (v1.norm() >= v2.norm()) ? v1 : v2;
    const double n = v.norm();
    if (n < 1e-12 * std::max(1.0, half_tr)) {
        ax.major_dir = {1.0, 0.0};  // circle: direction is a convention
    } else {
        v = v * (1.0 / n);
        if (v.x < 0.0 || (v.x == 0.0 && v.y < 0.0)) v = v * -1.0;
        ax.major_dir = v;
    }
    return ax;
}

std::array<CircleNormal, 2> circle_normal_from_cov(const SymMat2& c) {
    const AxesSpec ax = eigen2(c);
    const double a1sq = ax.a1 * ax.a1;
    double argx = a1sq - 4.0 * c.xx;
    double argy = a1sq - 4.0 * c.yy;
    const double tol = -1e-9 * std::max(1.0, a1sq);
    if (argx < tol || argy < tol)
        throw std::invalid_argument("covariance is not a projected circle");
    argx = std::max(0.0, argx);
    argy = std::max(0.0, argy);

    const double px = std::sqrt(argx) / ax.a1;
    const double py = std::sqrt(argy) / ax.a1;
    const double pz = -ax.a2 / ax.a1;

    // sign(phi_x phi_y) = -sign(C_xy); zero C_xy emits the mixed-sign pair
    const double sy = (c.xy >= 0.0) ? -1.0 : 1.0;
    // +0.0 keeps negative zeros out of reported components
    CircleNormal first{Vec3{px, sy * py + 0.0, pz}.normalized(), ax.a1};
    CircleNormal second{Vec3{-px + 0.0, -sy * py + 0.0, pz}.normalized(), ax.a1};
    return {first, second};
}

SymMat2 cov_from_normal(Vec3 phi, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    if (std::fabs(phi.norm() - 1.0) > 1e-6)
        throw std::invalid_argument("normal must be a unit vector");
    if (std::fabs(phi.z) < 1e-12)
        throw std::invalid_argument("degenerate projection: circle is edge-on");
    const double s = r * r / 4.0;
    return {s * (1.0 - phi.x * phi.x), s * (-phi.x * phi.y), s * (1.0 - phi.y * phi.y)};
}

double normal_accuracy(double theta, double delta_a2, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    const double d = std::fabs(delta_a2);
    if (d == 0.0) return 0.0;
    const double frontal = std::sqrt(2.0 * d / r);
    // splice where |delta_a2|/(r sin theta) meets the frontal estimate
    const double sin_cross = std::sqrt(d / (2.0 * r));
    if (sin_cross >= 1.0 || std::sin(theta) < sin_cross) return frontal;
    return d / (r * std::sin(theta));
}

}  // namespace conicpose
