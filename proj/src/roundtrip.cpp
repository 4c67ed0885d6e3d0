#include "conicpose/roundtrip.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "conicpose/pose.hpp"

namespace conicpose {

bool RoundtripReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const RoundtripCheck& c) { return c.pass; });
}

double quat_component_error(const Quat& a, const Quat& b) {
    const double same = std::max({std::fabs(a.a - b.a), std::fabs(a.b - b.b),
                                  std::fabs(a.c - b.c), std::fabs(a.d - b.d)});
    const double flip = std::max({std::fabs(a.a + b.a), std::fabs(a.b + b.b),
                                  std::fabs(a.c + b.c), std::fabs(a.d + b.d)});
    return std::min(same, flip);
}

namespace {

void add_check(RoundtripReport& rep, const std::string& name, double value, double limit) {
    rep.checks.push_back({name, value, limit, value <= limit});
}

void fail_check(RoundtripReport& rep, const std::string& name) {
    rep.checks.push_back({name, 1.0, 0.0, false});
}

void table_roundtrip(RoundtripReport& rep, const DetectConfig& cfg, double ts) {
    const SceneSpec scene = table_fixture();
    const auto [img, truth] = render(scene);
    const auto ellipses = detect_ellipses(img, cfg);
    if (ellipses.empty()) {
        fail_check(rep, "table: ellipse detected");
        return;
    }
    const DetectedEllipse& e = ellipses.front();
    const CircleSpec& circle = scene.model.circles.front();
    const Vec3 true_axle = truth.circles.front().normal;
    const double true_sigma = scene.pose.sigma;
    const Vec2 true_shift = scene.pose.shift;

    double best_axle_err = 1e9, best_sigma = 0.0;
    Vec2 best_shift;
    for (int branch = 0; branch < 2; ++branch) {
        const PoseCandidate pose = align_single(circle, {e.mu, e.cov}, branch, 0.0);
        const Vec3 axle = apply(quat_to_matrix(pose.rotation), circle.axle);
        const double err = std::max({std::fabs(axle.x - true_axle.x),
                                     std::fabs(axle.y - true_axle.y),
                                     std::fabs(axle.z - true_axle.z)});
        if (err < best_axle_err) {
            best_axle_err = err;
            best_sigma = pose.sigma;
            best_shift = pose.shift;
        }
    }
    add_check(rep, "table: axle component error", best_axle_err, 0.04 * ts);
    add_check(rep, "table: scale relative error",
              std::fabs(best_sigma - true_sigma) / true_sigma, 0.02 * ts);
    add_check(rep, "table: shift error [px]", (best_shift - true_shift).norm(), 5.0 * ts);
}

void car_roundtrip(RoundtripReport& rep, const std::string& name, const DetectConfig& cfg,
                   double ts) {
    const SceneSpec scene = car_fixture(name);
    const auto [img, truth] = render(scene);
    const auto ellipses = detect_ellipses(img, cfg);
    const auto pair = select_wheel_pair(ellipses, img.width, img.height, cfg);
    if (!pair) {
        fail_check(rep, name + ": wheel pair detected");
        return;
    }
    const auto candidates = enumerate_candidates(scene.model, *pair, /*upright=*/true);

    const Quat true_q = scene.pose.rotation;
    double best_err = 1e9;
    const PoseCandidate* best = nullptr;
    for (const PoseCandidate& c : candidates) {
        const double err = quat_component_error(c.rotation, true_q);
        if (err < best_err) {
            best_err = err;
            best = &c;
        }
    }
    add_check(rep, name + ": quaternion component error", best_err, 0.03 * ts);
    add_check(rep, name + ": scale relative error",
              std::fabs(best->sigma - scene.pose.sigma) / scene.pose.sigma, 0.03 * ts);
    add_check(rep, name + ": shift error [px]", (best->shift - scene.pose.shift).norm(),
              10.0 * ts);
}

}  // namespace

RoundtripReport run_roundtrip(const std::string& fixture, const DetectConfig& cfg,
                              double tolerance_scale) {
    const auto& names = fixture_names();
    if (std::find(names.begin(), names.end(), fixture) == names.end())
        throw std::invalid_argument("unknown fixture " + fixture);

    RoundtripReport rep;
    rep.fixture = fixture;
    const auto t0 = std::chrono::steady_clock::now();
    if (fixture == "table")
        table_roundtrip(rep, cfg, tolerance_scale);
    else
        car_roundtrip(rep, fixture, cfg, tolerance_scale);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace conicpose
