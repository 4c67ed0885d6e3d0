#include "conicpose/pose.hpp"

#include <cmath>

namespace conicpose {

namespace {

Vec2 project_rows(const Rot3& r, double sigma, Vec2 shift, Vec3 x) {
    return Vec2{r.row(0).dot(x), r.row(1).dot(x)} * sigma + shift;
}

}  // namespace

Vec2 project_point(const PoseCandidate& pose, Vec3 x) {
    return project_rows(quat_to_matrix(pose.rotation), pose.sigma, pose.shift, x);
}

PoseCandidate align_single(const CircleSpec& circle, const EllipseCov& ellipse,
                           int normal_branch, double beta) {
    if (normal_branch < 0 || normal_branch > 1)
        throw std::invalid_argument("normal_branch must be 0 or 1");
    const auto normals = circle_normal_from_cov(ellipse.cov);
    const CircleNormal& n = normals[static_cast<size_t>(normal_branch)];

    const Quat q1 = quat_between(circle.axle, n.phi);
    const Quat q2 = quat_axis_angle(n.phi, beta);

    PoseCandidate pose;
    pose.rotation = canonical(compose(q2, q1));
    pose.sigma = n.r / circle.radius;
    pose.normal_branch = normal_branch;
    const Rot3 r = quat_to_matrix(pose.rotation);
    pose.shift = ellipse.mu - project_rows(r, pose.sigma, {0, 0}, circle.center);
    return pose;
}

PoseCandidate align_two_wheels(const CircleSpec& back_wheel, const CircleSpec& front_wheel,
                               const EllipseCov& back_ellipse, Vec2 front_center,
                               int normal_branch) {
    if (normal_branch < 0 || normal_branch > 1)
        throw std::invalid_argument("normal_branch must be 0 or 1");
    const auto normals = circle_normal_from_cov(back_ellipse.cov);
    const Vec3 phi = normals[static_cast<size_t>(normal_branch)].phi;
    if (std::fabs(phi.z) <= 1e-6) throw std::invalid_argument("edge-on wheel");

    const Quat q1 = quat_between(back_wheel.axle, phi);
    const Vec3 wheelbase = front_wheel.center - back_wheel.center;
    const Vec3 big_delta = apply(quat_to_matrix(q1), wheelbase);
    const double nD = big_delta.norm();
    if (nD <= 0.0) throw std::invalid_argument("coincident model wheel centers");

    // image displacement lifted into the wheel plane (delta orthogonal to phi)
    const Vec2 d2 = front_center - back_ellipse.mu;
    const double dz = -(d2.x * phi.x + d2.y * phi.y) / phi.z;
    const Vec3 delta{d2.x, d2.y, dz};
    const double nd = delta.norm();
    if (nd <= 0.0) throw std::invalid_argument("coincident wheel centers in image");

    const double cos_b = delta.dot(big_delta) / (nd * nD);
    const double sin_b = det3(delta, phi, big_delta) / (nd * nD);
    const double beta = std::atan2(sin_b, cos_b);

    PoseCandidate pose;
    pose.rotation = canonical(compose(quat_axis_angle(phi, beta), q1));
    pose.sigma = nd / nD;
    pose.normal_branch = normal_branch;
    pose.consistency.beta_defect = std::fabs(cos_b * cos_b + sin_b * sin_b - 1.0);
    const Rot3 r = quat_to_matrix(pose.rotation);
    pose.shift = back_ellipse.mu - project_rows(r, pose.sigma, {0, 0}, back_wheel.center);
    return pose;
}

std::vector<PoseCandidate> enumerate_candidates(const CircleModel& model, const WheelPair& pair,
                                                bool upright) {
    if (!model.is_vehicle())
        throw std::invalid_argument("pose enumeration requires a four-wheel vehicle model");

    std::vector<PoseCandidate> out;
    for (int normal = 0; normal < 2; ++normal) {
        for (int order = 0; order < 2; ++order) {
            const DetectedEllipse& back_e = order == 0 ? pair.back : pair.front;
            const DetectedEllipse& front_e = order == 0 ? pair.front : pair.back;
            const double delta_x = front_e.mu.x - back_e.mu.x;
            for (int side = 0; side < 2; ++side) {
                if (upright) {
                    // front toward image-right matches the left-side wheels
                    const int resolved = delta_x > 0.0 ? 0 : 1;
                    if (side != resolved) continue;
                }
                const CircleSpec& back_w =
                    model.wheel(side == 0 ? WheelRole::back_left : WheelRole::back_right);
                const CircleSpec& front_w =
                    model.wheel(side == 0 ? WheelRole::front_left : WheelRole::front_right);
                PoseCandidate c = align_two_wheels(back_w, front_w, {back_e.mu, back_e.cov},
                                                   front_e.mu, normal);
                c.wheel_order = order;
                c.side = side;
                const ConsistencyReport full = consistency_checks(c, pair, model);
                c.consistency.radius_ratio_error = full.radius_ratio_error;
                c.consistency.coplanarity_residual = full.coplanarity_residual;
                out.push_back(c);
            }
        }
    }
    return out;
}

ConsistencyReport consistency_checks(const PoseCandidate& candidate, const WheelPair& pair,
                                     const CircleModel& model) {
    const DetectedEllipse& back_e = candidate.wheel_order == 0 ? pair.back : pair.front;
    const DetectedEllipse& front_e = candidate.wheel_order == 0 ? pair.front : pair.back;
    const CircleSpec& front_w =
        model.wheel(candidate.side == 0 ? WheelRole::front_left : WheelRole::front_right);

    ConsistencyReport rep;
    rep.beta_defect = candidate.consistency.beta_defect;
    rep.radius_ratio_error =
        std::fabs(front_e.a1 / (candidate.sigma * front_w.radius) - 1.0);

    // coplanarity of the two wheel normals with the wheelbase direction;
    // the front branch is the candidate closer to the back normal
    const auto back_normals = circle_normal_from_cov(back_e.cov);
    const Vec3 phi = back_normals[static_cast<size_t>(candidate.normal_branch)].phi;
    const auto front_normals = circle_normal_from_cov(front_e.cov);
    const Vec3 phi_f = front_normals[0].phi.dot(phi) >= front_normals[1].phi.dot(phi)
                           ? front_normals[0].phi
                           : front_normals[1].phi;
    const Vec2 d2 = front_e.mu - back_e.mu;
    const double dz = -(d2.x * phi.x + d2.y * phi.y) / phi.z;
    const Vec3 delta{d2.x, d2.y, dz};
    const double nd = delta.norm();
    if (nd > 0.0) rep.coplanarity_residual = std::fabs(det3(delta, phi, phi_f)) / nd;
    return rep;
}

}  // namespace conicpose
