#pragma once

#include <cstdint>
#include <utility>

#include "conicpose/model.hpp"
#include "conicpose/pose.hpp"
#include "conicpose/raster.hpp"

namespace conicpose {

struct OccluderRect {
    int x = 0, y = 0, w = 0, h = 0;
};

struct ScenePose {
    Quat rotation;
    double sigma = 1.0;
    Vec2 shift;
};

/// Deterministic scene description: a fixed seed yields byte-identical
/// renders regardless of thread count.
struct SceneSpec {
    CircleModel model;
    std::vector<std::string> render_ids;  // empty renders every circle
    ScenePose pose;
    int width = 800;
    int height = 600;
    double foreground = 0.9;
    double background = 0.1;
    double noise_std = 0.0;
    std::vector<OccluderRect> occluders;
    uint64_t seed = 0;
    bool supersample = false;  // 4x4 coverage sampling instead of pixel centers
};

/// Exact projected parameters of one rendered circle. `normal` is the rotated
/// axle normalized to negative z; `normal_alt` is the other sign branch an
/// observer cannot distinguish.
struct CircleTruth {
    std::string id;
    bool visible = false;  // fully inside the image and not edge-on
    Vec2 mu;
    SymMat2 cov;
    double a1 = 0.0;
    double a2 = 0.0;
    Vec3 normal;
    Vec3 normal_alt;
};

struct GroundTruth {
    std::vector<CircleTruth> circles;
};

std::pair<GrayImage, GroundTruth> render(const SceneSpec& scene);

/// Single-circle test scene: a round tabletop under a known tilt.
SceneSpec table_fixture();

/// Two-wheel car scenes at 800x600; rows are named golf-1, golf-2, audi-1,
/// audi-2, bmw-1, bmw-2. Renders the side of the car whose wheels face the
/// camera under that row's pose.
SceneSpec car_fixture(const std::string& name);

CircleModel table_model();
CircleModel car_model();

const std::vector<std::string>& fixture_names();

}  // namespace conicpose
