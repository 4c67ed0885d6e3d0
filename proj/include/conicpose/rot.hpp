#pragma once

#include "conicpose/geometry.hpp"

namespace conicpose {

/// Unit quaternion a + bi + cj + dk representing a 3d rotation.
struct Quat {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    double norm() const { return std::sqrt(a * a + b * b + c * c + d * d); }
};

/// Rotation matrix, row-major. Constructors guarantee orthogonality and det +1.
struct Rot3 {
    double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    Vec3 row(int i) const { return {m[i][0], m[i][1], m[i][2]}; }
    Vec3 col(int j) const { return {m[0][j], m[1][j], m[2][j]}; }
};

/// Rotation about unit axis u by angle alpha: cos(alpha/2) + u sin(alpha/2).
/// The axis is renormalized; a zero axis is an error.
Quat quat_axis_angle(Vec3 u, double alpha);

/// Matrix form of a unit quaternion. Throws if the norm is off by more than 1e-6.
Rot3 quat_to_matrix(const Quat& q);

/// Shortest rotation mapping unit vector `from` onto unit vector `to`:
/// a = sqrt((1 + from.to)/2), (b,c,d) = (from x to)/(2a).
/// Antiparallel inputs fall back to a half-turn about a deterministic axis
/// orthogonal to `from` (cross with x-hat, then y-hat).
Quat quat_between(Vec3 from, Vec3 to);

/// Hamilton product q2*q1 (apply q1 first).
Quat compose(const Quat& q2, const Quat& q1);

Vec3 apply(const Rot3& r, Vec3 v);

/// Canonical sign representative of {q, -q}: first nonzero component positive.
Quat canonical(const Quat& q);

inline Quat normalized(const Quat& q) {
    const double n = q.norm();
    if (n == 0.0) throw std::invalid_argument("zero quaternion");
    return {q.a / n, q.b / n, q.c / n, q.d / n};
}

}  // namespace conicpose
