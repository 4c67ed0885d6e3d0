#pragma once

#include <array>

#include "conicpose/geometry.hpp"

namespace conicpose {

/// Solid ellipse E(mu, C) = { p : (p-mu)^T C^-1 (p-mu) <= 4 }, with C the
/// covariance matrix of the uniform distribution over the ellipse.
struct EllipseCov {
    Vec2 mu;
    SymMat2 cov;
};

/// Eigenstructure of a 2x2 covariance: lambda1 >= lambda2, semi-axis lengths
/// a_i = 2*sqrt(lambda_i), and the unit major-axis direction.
struct AxesSpec {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    Vec2 major_dir{1.0, 0.0};
};

/// A 3d circle consistent with a projected ellipse: unit normal with
/// phi.z < 0 and radius in projected pixel units (r = a1).
struct CircleNormal {
    Vec3 phi{0.0, 0.0, -1.0};
    double r = 0.0;
};

/// Point-in-ellipse test: quadratic form <= 4. Throws on singular covariance.
bool contains(const EllipseCov& e, Vec2 p);

/// Closed-form eigendecomposition:
///   lambda_{1,2} = tr C / 2 +- sqrt((tr C / 2)^2 - det C).
/// major_dir is (1,0) by convention when the eigenvalues coincide.
/// Throws unless C is symmetric positive definite.
AxesSpec eigen2(const SymMat2& c);

/// Recover the two candidate 3d circle normals behind an ellipse covariance:
///   phi = (1/a1) (+-sqrt(a1^2 - 4C_xx), +-sqrt(a1^2 - 4C_yy), -a2)
/// The z sign is fixed negative; the remaining two candidates obey
/// sign(phi_x * phi_y) = -sign(C_xy). When C_xy == 0 the candidates carry the
/// (+,-) and (-,+) sign patterns. Radius r = a1.
/// Square-root arguments within -1e-9 of zero are clamped; more negative
/// values indicate a non-ellipse and throw.
std::array<CircleNormal, 2> circle_normal_from_cov(const SymMat2& c);

/// Forward map: covariance of the orthogonal projection of a circle with unit
/// normal phi and radius r:
///   C = (r^2/4) [[1 - phi_x^2, -phi_x phi_y], [-phi_x phi_y, 1 - phi_y^2]]
/// Throws for phi_z == 0 (edge-on circle projects to a segment).
SymMat2 cov_from_normal(Vec3 phi, double r);

/// Estimated angular accuracy of a recovered normal, given the tilt angle
/// theta = acos|phi_z|, the minor-axis measurement accuracy delta_a2, and the
/// circle radius r in pixels. Tilted regime |delta_a2|/(r sin theta); frontal
/// regime sqrt(2|delta_a2|/r); spliced continuously where the two agree.
double normal_accuracy(double theta, double delta_a2, double r);

}  // namespace conicpose
