#pragma once

#include "conicpose/conic.hpp"
#include "conicpose/detect.hpp"
#include "conicpose/model.hpp"
#include "conicpose/rot.hpp"

namespace conicpose {

struct ConsistencyReport {
    /// | a1_front / (sigma * R_front) - 1 |
    double radius_ratio_error = 0.0;
    /// | det(delta, phi_back, phi_front) | / ||delta||
    double coplanarity_residual = 0.0;
    /// | cos^2 beta + sin^2 beta - 1 | before normalization (two-wheel only)
    double beta_defect = 0.0;
};

/// One leaf of the discrete pose ambiguity tree, carrying the similarity
/// transform x' = sigma * Q x + shift (Q = top two rows of the rotation).
struct PoseCandidate {
    Quat rotation;        // canonical sign
    double sigma = 1.0;   // > 0
    Vec2 shift;           // pixels
    int normal_branch = 0;  // which of the two circle normals
    int wheel_order = 0;    // 0: pair as given is (back, front); 1: swapped
    int side = 0;           // 0: left-side model wheels; 1: right-side
    ConsistencyReport consistency;
};

Vec2 project_point(const PoseCandidate& pose, Vec3 x);

/// Single-circle alignment: rotate the model circle's axle onto the selected
/// ellipse normal, spin by the free angle beta around it, scale by a1/R and
/// shift so the centers match.
PoseCandidate align_single(const CircleSpec& circle, const EllipseCov& ellipse,
                           int normal_branch, double beta);

/// Two-wheel alignment: the back wheel fixes the normal; the front-wheel
/// center resolves beta and refines the scale to ||delta|| / ||Delta||, where
/// delta is the image displacement lifted into the back-wheel plane and
/// Delta the rotated model wheelbase.
PoseCandidate align_two_wheels(const CircleSpec& back_wheel, const CircleSpec& front_wheel,
                               const EllipseCov& back_ellipse, Vec2 front_center,
                               int normal_branch);

/// All leaves of the ambiguity tree for a detected wheel pair: 2 normal signs
/// x 2 wheel orderings x 2 vehicle sides. With `upright` the side branch is
/// resolved per ordering: left-side wheels match when the front wheel lies to
/// the image-right of the back wheel (positive delta_x), right-side wheels
/// otherwise; exactly 4 candidates remain.
/// Output order is lexicographic in (normal_branch, wheel_order, side).
std::vector<PoseCandidate> enumerate_candidates(const CircleModel& model, const WheelPair& pair,
                                                bool upright);

/// Diagnostic residuals for ranking candidates; nothing is thresholded here.
ConsistencyReport consistency_checks(const PoseCandidate& candidate, const WheelPair& pair,
                                     const CircleModel& model);

}  // namespace conicpose
