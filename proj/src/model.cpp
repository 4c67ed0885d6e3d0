#include "conicpose/model.hpp"

#include <algorithm>
#include <array>

namespace conicpose {

const char* to_string(WheelRole role) {
    switch (role) {
        case WheelRole::back_left: return "back-left";
        case WheelRole::front_left: return "front-left";
        case WheelRole::back_right: return "back-right";
        case WheelRole::front_right: return "front-right";
        case WheelRole::generic: return "generic";
    }
    return "generic";
}

WheelRole wheel_role_from_string(const std::string& s) {
    if (s == "back-left") return WheelRole::back_left;
    if (s == "front-left") return WheelRole::front_left;
    if (s == "back-right") return WheelRole::back_right;
    if (s == "front-right") return WheelRole::front_right;
    if (s == "generic") return WheelRole::generic;
    throw std::invalid_argument("unknown wheel role: " + s);
}

const CircleSpec& CircleModel::by_id(const std::string& id) const {
    for (const CircleSpec& c : circles)
        if (c.id == id) return c;
    throw std::invalid_argument("no circle with id " + id);
}

const CircleSpec& CircleModel::wheel(WheelRole role) const {
    for (const CircleSpec& c : circles)
        if (c.role == role) return c;
    throw std::invalid_argument(std::string("model has no ") + to_string(role) + " wheel");
}

bool CircleModel::is_vehicle() const {
    const std::array<WheelRole, 4> roles = {WheelRole::back_left, WheelRole::front_left,
                                            WheelRole::back_right, WheelRole::front_right};
    for (WheelRole r : roles) {
        if (std::none_of(circles.begin(), circles.end(),
                         [&](const CircleSpec& c) { return c.role == r; }))
            return false;
    }
    return true;
}

void CircleModel::validate() {
    if (circles.empty()) throw std::invalid_argument("model has no circles");
    for (CircleSpec& c : circles) {
        if (!(c.radius > 0.0))
            throw std::invalid_argument("circle " + c.id + " has non-positive radius");
        c.axle = c.axle.normalized();
    }
    for (size_t i = 0; i < circles.size(); ++i)
        for (size_t j = i + 1; j < circles.size(); ++j)
            if (circles[i].id == circles[j].id)
                throw std::invalid_argument("duplicate circle id " + circles[i].id);

    bool any_wheel = false;
    for (const CircleSpec& c : circles) any_wheel |= c.role != WheelRole::generic;
    if (!any_wheel) return;

    if (!is_vehicle())
        throw std::invalid_argument("vehicle model must define all four wheel roles");
    const std::array<WheelRole, 4> roles = {WheelRole::back_left, WheelRole::front_left,
                                            WheelRole::back_right, WheelRole::front_right};
    for (WheelRole r : roles) {
        if (std::count_if(circles.begin(), circles.end(),
                          [&](const CircleSpec& c) { return c.role == r; }) != 1)
            throw std::invalid_argument(std::string("duplicate wheel role ") + to_string(r));
    }
    const auto parallel = [](Vec3 a, Vec3 b) { return a.cross(b).norm() <= 1e-6; };
    if (!parallel(wheel(WheelRole::back_left).axle, wheel(WheelRole::front_left).axle) ||
        !parallel(wheel(WheelRole::back_right).axle, wheel(WheelRole::front_right).axle))
        throw std::invalid_argument("same-side wheel axles must be parallel");
}

}  // namespace conicpose
