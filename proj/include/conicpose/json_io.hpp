#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "conicpose/detect.hpp"
#include "conicpose/pose.hpp"
#include "conicpose/synth.hpp"

namespace conicpose {

/// Current on-disk schema version. Every document carries {"format": 1};
/// readers reject other versions.
inline constexpr int kFormatVersion = 1;

/// Round to 9 significant digits so emitted numbers are diff-stable.
double round_sig(double v);

nlohmann::json json_envelope();
void require_format(const nlohmann::json& j);

nlohmann::json to_json(const DetectedEllipse& e);
nlohmann::json to_json(const WheelPair& pair);
nlohmann::json to_json(const PoseCandidate& c);
nlohmann::json to_json(const GroundTruth& gt);
nlohmann::json to_json(const CircleModel& m);

CircleModel model_from_json(const nlohmann::json& j);
/// Accepts a path, or "builtin:car" / "builtin:table".
CircleModel load_model(const std::string& path_or_builtin);

nlohmann::json scene_to_json(const SceneSpec& s);
SceneSpec scene_from_json(const nlohmann::json& j);
SceneSpec load_scene(const std::filesystem::path& path);

/// Config file: a flat JSON object; unknown keys are a hard error.
/// Recognized keys: format, window_frac, threshold_sigmas, min_blob_px,
/// mismatch_max, area_consistency_frac, min_area_frac, max_area_frac,
/// orientation_tol_deg, horizontal_tol_deg, upright, seed,
/// roundtrip_tolerance_scale.
struct FileConfig {
    DetectConfig detect;
    bool upright = true;
    uint64_t seed = 0;
    double roundtrip_tolerance_scale = 1.0;
};
FileConfig config_from_json(const nlohmann::json& j);
FileConfig load_config(const std::filesystem::path& path);

nlohmann::json parse_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace conicpose
