#pragma once

#include <string>
#include <vector>

#include "conicpose/geometry.hpp"

namespace conicpose {

enum class WheelRole { back_left, front_left, back_right, front_right, generic };

const char* to_string(WheelRole role);
WheelRole wheel_role_from_string(const std::string& s);

/// One circular feature of a 3d model: center, unit axle (the circle-plane
/// normal, pointing from the visible face into the body), and radius, all in
/// model units.
struct CircleSpec {
    std::string id;
    WheelRole role = WheelRole::generic;
    Vec3 center;
    Vec3 axle{0.0, 0.0, -1.0};
    double radius = 1.0;
};

struct CircleModel {
    std::string name;
    double unit_scale = 1.0;  // applied to centers and radii at load time
    std::vector<CircleSpec> circles;

    const CircleSpec& by_id(const std::string& id) const;
    const CircleSpec& wheel(WheelRole role) const;
    /// True when all four wheel roles are present.
    bool is_vehicle() const;

    /// Normalizes axles; for vehicle models additionally checks that each
    /// role appears once and that same-side axles are parallel within 1e-6.
    void validate();
};

}  // namespace conicpose
