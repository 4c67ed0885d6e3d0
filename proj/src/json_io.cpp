#include "conicpose/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace conicpose {

using nlohmann::json;

double round_sig(double v) {
    if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::strtod(buf, nullptr);
}

namespace {

json num(double v) { return json(round_sig(v)); }
json vec2_json(Vec2 v) { return json::array({num(v.x), num(v.y)}); }
json vec3_json(Vec3 v) { return json::array({num(v.x), num(v.y), num(v.z)}); }
json cov_json(const SymMat2& c) {
    return json::array({json::array({num(c.xx), num(c.xy)}),
                        json::array({num(c.xy), num(c.yy)})});
}

Vec2 vec2_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}
Vec3 vec3_from(const json& j) {
    if (!j.is_array() || j.size() != 3) throw std::invalid_argument("expected [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}
void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const char* what) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok |= it.key() == k;
        if (!ok)
            throw std::invalid_argument(std::string("unrecognized ") + what + " key: " +
                                        it.key());
    }
}

}  // namespace

json json_envelope() { return json{{"format", kFormatVersion}}; }

void require_format(const json& j) {
    if (!j.is_object() || !j.contains("format"))
        throw std::invalid_argument("missing format version");
    if (!j["format"].is_number_integer() || j["format"].get<int>() != kFormatVersion)
        throw std::invalid_argument("unsupported format version " + j["format"].dump());
}

json to_json(const DetectedEllipse& e) {
    return json{{"mu", vec2_json(e.mu)},     {"cov", cov_json(e.cov)},
                {"a1", num(e.a1)},           {"a2", num(e.a2)},
                {"orientation", num(e.orientation)}, {"mismatch", num(e.mismatch_ratio)},
                {"area", e.area},            {"label", e.label}};
}

json to_json(const WheelPair& pair) {
    return json{{"back", to_json(pair.back)}, {"front", to_json(pair.front)}};
}

json to_json(const PoseCandidate& c) {
    return json{
        {"quat", json::array({num(c.rotation.a), num(c.rotation.b), num(c.rotation.c),
                              num(c.rotation.d)})},
        {"sigma", num(c.sigma)},
        {"shift", vec2_json(c.shift)},
        {"flags",
         {{"normal_sign", c.normal_branch}, {"wheel_order", c.wheel_order}, {"side", c.side}}},
        {"consistency",
         {{"radius_ratio_error", num(c.consistency.radius_ratio_error)},
          {"coplanarity_residual", num(c.consistency.coplanarity_residual)},
          {"beta_defect", num(c.consistency.beta_defect)}}}};
}

json to_json(const GroundTruth& gt) {
    json circles = json::array();
    for (const CircleTruth& t : gt.circles) {
        circles.push_back(json{{"id", t.id},
                               {"visible", t.visible},
                               {"mu", vec2_json(t.mu)},
                               {"cov", cov_json(t.cov)},
                               {"a1", num(t.a1)},
                               {"a2", num(t.a2)},
                               {"normal", vec3_json(t.normal)},
                               {"normal_alt", vec3_json(t.normal_alt)}});
    }
    return json{{"circles", circles}};
}

json to_json(const CircleModel& m) {
    json circles = json::array();
    for (const CircleSpec& c : m.circles) {
        circles.push_back(json{{"id", c.id},
                               {"role", to_string(c.role)},
                               {"center", vec3_json(c.center)},
                               {"axle", vec3_json(c.axle)},
                               {"radius", num(c.radius)}});
    }
    json j = json_envelope();
    j["name"] = m.name;
    j["unit_scale"] = num(m.unit_scale);
    j["circles"] = circles;
    return j;
}

CircleModel model_from_json(const json& j) {
    require_format(j);
    reject_unknown_keys(j, {"format", "name", "unit_scale", "circles"}, "model");
    CircleModel m;
    m.name = j.value("name", "");
    const double scale = j.value("unit_scale", 1.0);
    if (!(scale > 0.0)) throw std::invalid_argument("unit_scale must be positive");
    m.unit_scale = 1.0;  // scaling is baked into the loaded coordinates
    if (!j.contains("circles") || !j["circles"].is_array() || j["circles"].empty())
        throw std::invalid_argument("model needs a non-empty circles array");
    for (const json& cj : j["circles"]) {
        reject_unknown_keys(cj, {"id", "role", "center", "axle", "radius"}, "circle");
        CircleSpec c;
        c.id = cj.at("id").get<std::string>();
        c.role = wheel_role_from_string(cj.value("role", "generic"));
        c.center = vec3_from(cj.at("center")) * scale;
        c.axle = vec3_from(cj.at("axle"));
        c.radius = cj.at("radius").get<double>() * scale;
        m.circles.push_back(std::move(c));
    }
    m.validate();
    return m;
}

CircleModel load_model(const std::string& path_or_builtin) {
    if (path_or_builtin == "builtin:car") return car_model();
    if (path_or_builtin == "builtin:table") return table_model();
    return model_from_json(parse_json_file(path_or_builtin));
}

json scene_to_json(const SceneSpec& s) {
    json j = json_envelope();
    j["model"] = to_json(s.model);
    if (!s.render_ids.empty()) j["render_circles"] = s.render_ids;
    j["pose"] = {{"quat", json::array({num(s.pose.rotation.a), num(s.pose.rotation.b),
                                       num(s.pose.rotation.c), num(s.pose.rotation.d)})},
                 {"sigma", num(s.pose.sigma)},
                 {"shift", vec2_json(s.pose.shift)}};
    j["width"] = s.width;
    j["height"] = s.height;
    j["foreground"] = num(s.foreground);
    j["background"] = num(s.background);
    j["noise_std"] = num(s.noise_std);
    if (!s.occluders.empty()) {
        json occ = json::array();
        for (const OccluderRect& o : s.occluders)
            occ.push_back(json{{"x", o.x}, {"y", o.y}, {"w", o.w}, {"h", o.h}});
        j["occluders"] = occ;
    }
    j["seed"] = s.seed;
    j["supersample"] = s.supersample;
    return j;
}

SceneSpec scene_from_json(const json& j) {
    require_format(j);
    reject_unknown_keys(j,
                        {"format", "model", "render_circles", "pose", "width", "height",
                         "foreground", "background", "noise_std", "occluders", "seed",
                         "supersample"},
                        "scene");
    SceneSpec s;
    const json& mj = j.at("model");
    s.model = mj.is_string() ? load_model(mj.get<std::string>()) : model_from_json(mj);
    if (j.contains("render_circles"))
        s.render_ids = j["render_circles"].get<std::vector<std::string>>();
    const json& pj = j.at("pose");
    reject_unknown_keys(pj, {"quat", "sigma", "shift"}, "pose");
    const json& qj = pj.at("quat");
    if (!qj.is_array() || qj.size() != 4) throw std::invalid_argument("quat must be [a,b,c,d]");
    s.pose.rotation = normalized({qj[0].get<double>(), qj[1].get<double>(),
                                  qj[2].get<double>(), qj[3].get<double>()});
    s.pose.sigma = pj.at("sigma").get<double>();
    s.pose.shift = vec2_from(pj.at("shift"));
    s.width = j.value("width", 800);
    s.height = j.value("height", 600);
    s.foreground = j.value("foreground", 0.9);
    s.background = j.value("background", 0.1);
    s.noise_std = j.value("noise_std", 0.0);
    if (j.contains("occluders")) {
        for (const json& oj : j["occluders"]) {
            reject_unknown_keys(oj, {"x", "y", "w", "h"}, "occluder");
            s.occluders.push_back({oj.at("x").get<int>(), oj.at("y").get<int>(),
                                   oj.at("w").get<int>(), oj.at("h").get<int>()});
        }
    }
    s.seed = j.value("seed", uint64_t{0});
    s.supersample = j.value("supersample", false);
    return s;
}

SceneSpec load_scene(const std::filesystem::path& path) {
    return scene_from_json(parse_json_file(path));
}

FileConfig config_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    reject_unknown_keys(j,
                        {"format", "window_frac", "threshold_sigmas", "min_blob_px",
                         "mismatch_max", "area_consistency_frac", "min_area_frac",
                         "max_area_frac", "orientation_tol_deg", "horizontal_tol_deg",
                         "upright", "seed", "roundtrip_tolerance_scale"},
                        "config");
    if (j.contains("format")) require_format(j);
    FileConfig c;
    c.detect.window_frac = j.value("window_frac", c.detect.window_frac);
    c.detect.threshold_sigmas = j.value("threshold_sigmas", c.detect.threshold_sigmas);
    c.detect.min_blob_px = j.value("min_blob_px", c.detect.min_blob_px);
    c.detect.mismatch_max = j.value("mismatch_max", c.detect.mismatch_max);
    c.detect.area_consistency_frac =
        j.value("area_consistency_frac", c.detect.area_consistency_frac);
    c.detect.min_area_frac = j.value("min_area_frac", c.detect.min_area_frac);
    c.detect.max_area_frac = j.value("max_area_frac", c.detect.max_area_frac);
    constexpr double deg = std::numbers::pi / 180.0;
    if (j.contains("orientation_tol_deg"))
        c.detect.pair_orientation_tol = j["orientation_tol_deg"].get<double>() * deg;
    if (j.contains("horizontal_tol_deg"))
        c.detect.pair_horizontal_tol = j["horizontal_tol_deg"].get<double>() * deg;
    c.upright = j.value("upright", true);
    c.seed = j.value("seed", uint64_t{0});
    c.roundtrip_tolerance_scale = j.value("roundtrip_tolerance_scale", 1.0);
    if (!(c.roundtrip_tolerance_scale > 0.0))
        throw std::invalid_argument("roundtrip_tolerance_scale must be positive");
    c.detect.validate();
    return c;
}

FileConfig load_config(const std::filesystem::path& path) {
    return config_from_json(parse_json_file(path));
}

json parse_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json j;
    in >> j;
    return j;
}

void write_json_file(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace conicpose
