#include "conicpose/rot.hpp"

namespace conicpose {

Quat quat_axis_angle(Vec3 u, double alpha) {
    const double n = u.norm();
    if (n < 1e-12) throw std::invalid_argument("rotation axis must be nonzero");
    u = u * (1.0 / n);
    const double h = 0.5 * alpha;
    const double s = std::sin(h);
    return {std::cos(h), u.x * s, u.y * s, u.z * s};
}

Rot3 quat_to_matrix(const Quat& q) {
    if (std::fabs(q.norm() - 1.0) > 1e-6)
        throw std::invalid_argument("quaternion is not unit length");
    const double a = q.a, b = q.b, c = q.c, d = q.d;
    Rot3 r;
    r.m[0][0] = a * a + b * b - c * c - d * d;
    r.m[0][1] = 2 * b * c - 2 * a * d;
    r.m[0][2] = 2 * a * c + 2 * b * d;
    r.m[1][0] = 2 * a * d + 2 * b * c;
    r.m[1][1] = a * a - b * b + c * c - d * d;
    r.m[1][2] = 2 * c * d - 2 * a * b;
    r.m[2][0] = 2 * b * d - 2 * a * c;
    r.m[2][1] = 2 * a * b + 2 * c * d;
    r.m[2][2] = a * a - b * b - c * c + d * d;
    return r;
}

Quat quat_between(Vec3 from, Vec3 to) {
    const double dot = from.dot(to);
    if (1.0 + dot < 1e-9) {
        // half turn about any axis orthogonal to `from`
        Vec3 axis = from.cross({1, 0, 0});
        if (axis.norm() < 1e-9) axis = from.cross({0, 1, 0});
        axis = axis.normalized();
        return {0.0, axis.x, axis.y, axis.z};
    }
    const double a = std::sqrt(0.5 * (1.0 + dot));
    const Vec3 v = from.cross(to) * (1.0 / (2.0 * a));
    return {a, v.x, v.y, v.z};
}

Quat compose(const Quat& q2, const Quat& q1) {
    return {q2.a * q1.a - q2.b * q1.b - q2.c * q1.c - q2.d * q1.d,
            q2.a * q1.b + q2.b * q1.a + q2.c * q1.d - q2.d * q1.c,
            q2.a * q1.c - q2.b * q1.d + q2.c * q1.a + q2.d * q1.b,
            q2.a * q1.d + q2.b * q1.c - q2.c * q1.b + q2.d * q1.a};
}

Vec3 apply(const Rot3& r, Vec3 v) {
    return {r.row(0).dot(v), r.row(1).dot(v), r.row(2).dot(v)};
}

Quat canonical(const Quat& q) {
    const double comps[4] = {q.a, q.b, q.c, q.d};
    for (double v : comps) {
        if (v > 0.0) return q;
        if (v < 0.0) return {-q.a, -q.b, -q.c, -q.d};
    }
    return q;
}

}  // namespace conicpose
