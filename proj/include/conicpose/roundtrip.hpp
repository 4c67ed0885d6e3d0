#pragma once

#include <string>

#include "conicpose/detect.hpp"
#include "conicpose/synth.hpp"

namespace conicpose {

struct RoundtripCheck {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool pass = false;
};

struct RoundtripReport {
    std::string fixture;
    std::vector<RoundtripCheck> checks;
    double seconds = 0.0;

    bool all_pass() const;
};

/// Render the named fixture, run detection and pose recovery, and compare
/// against the exact generating pose. Tolerances are fixed per fixture kind
/// (single-circle: axle 0.04 per component, scale 2%, shift 5 px; two-wheel:
/// quaternion 0.03 per component up to sign, scale 3%, shift 10 px), all
/// multiplied by tolerance_scale.
RoundtripReport run_roundtrip(const std::string& fixture, const DetectConfig& cfg,
                              double tolerance_scale = 1.0);

/// Largest per-component difference between the rotations, minimized over the
/// quaternion sign ambiguity.
double quat_component_error(const Quat& a, const Quat& b);

}  // namespace conicpose
