#include "conicpose/synth.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numbers>

namespace conicpose {

namespace {

// splitmix64; the per-row stream seed is splitmix64(seed ^ golden*(row+1)),
// so rendering is reproducible under any row scheduling
uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct RowRng {
    uint64_t state;
    bool have_spare = false;
    double spare = 0.0;

    RowRng(uint64_t seed, int row) {
        uint64_t s = seed ^ (0x9E3779B97F4A7C15ull * static_cast<uint64_t>(row + 1));
        state = splitmix64(s);
    }
    double uniform() {  // in (0,1]
        return (splitmix64(state) >> 11) * 0x1.0p-53 + 0x1.0p-53;
    }
    double gaussian() {  // Box-Muller
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        const double u = uniform();
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double ang = 2.0 * std::numbers::pi * v;
        spare = r * std::sin(ang);
        have_spare = true;
        return r * std::cos(ang);
    }
};

struct ProjectedCircle {
    EllipseCov ellipse;
    double ext_x, ext_y;  // half extents of the bounding box
};

}  // namespace

std::pair<GrayImage, GroundTruth> render(const SceneSpec& scene) {
    if (!(scene.foreground > scene.background))
        throw std::invalid_argument("foreground must exceed background");
    if (scene.width < 1 || scene.height < 1) throw std::invalid_argument("empty image");
    if (scene.noise_std < 0.0) throw std::invalid_argument("negative noise_std");

    const Rot3 r = quat_to_matrix(normalized(scene.pose.rotation));
    const double sigma = scene.pose.sigma;
    if (!(sigma > 0.0)) throw std::invalid_argument("scale must be positive");

    const auto selected = [&](const std::string& id) {
        if (scene.render_ids.empty()) return true;
        return std::find(scene.render_ids.begin(), scene.render_ids.end(), id) !=
               scene.render_ids.end();
    };

    GroundTruth truth;
    std::vector<ProjectedCircle> visible;
    for (const CircleSpec& c : scene.model.circles) {
        if (!selected(c.id)) continue;
        CircleTruth t;
        t.id = c.id;
        const Vec3 world_axle = apply(r, c.axle);
        t.mu = Vec2{r.row(0).dot(c.center), r.row(1).dot(c.center)} * sigma + scene.pose.shift;
        if (std::fabs(world_axle.z) < 1e-9) {
            t.visible = false;  // edge-on: projects to a segment
            truth.circles.push_back(t);
            continue;
        }
        const Vec3 n = world_axle.z < 0.0 ? world_axle : -world_axle;
        t.normal = n;
        t.normal_alt = {-n.x, -n.y, n.z};
        t.a1 = sigma * c.radius;
        t.a2 = t.a1 * std::fabs(n.z);
        t.cov = cov_from_normal(n, t.a1);
        const double ext_x = 2.0 * std::sqrt(t.cov.xx);
        const double ext_y = 2.0 * std::sqrt(t.cov.yy);
        t.visible = t.mu.x - ext_x >= 0.0 && t.mu.x + ext_x <= scene.width - 1 &&
                    t.mu.y - ext_y >= 0.0 && t.mu.y + ext_y <= scene.height - 1;
        if (t.visible) visible.push_back({{t.mu, t.cov}, ext_x, ext_y});
        truth.circles.push_back(t);
    }

    GrayImage img(scene.width, scene.height, scene.background);
    const double fg = scene.foreground, bg = scene.background;

#pragma omp parallel for schedule(static)
    for (int y = 0; y < scene.height; ++y) {
        RowRng rng(scene.seed, y);
        for (int x = 0; x < scene.width; ++x) {
            double value = bg;
            if (!scene.supersample) {
                for (const ProjectedCircle& pc : visible) {
                    if (std::fabs(x - pc.ellipse.mu.x) > pc.ext_x ||
                        std::fabs(y - pc.ellipse.mu.y) > pc.ext_y)
                        continue;
                    if (contains(pc.ellipse, {static_cast<double>(x), static_cast<double>(y)})) {
                        value = fg;
                        break;
                    }
                }
            } else {
                int covered = 0;
                for (int sy = 0; sy < 4; ++sy) {
                    for (int sx = 0; sx < 4; ++sx) {
                        const Vec2 p{x - 0.5 + (sx + 0.5) / 4.0, y - 0.5 + (sy + 0.5) / 4.0};
                        for (const ProjectedCircle& pc : visible) {
                            if (contains(pc.ellipse, p)) {
                                ++covered;
                                break;
                            }
                        }
                    }
                }
                value = bg + (fg - bg) * covered / 16.0;
            }
            if (scene.noise_std > 0.0) value += scene.noise_std * rng.gaussian();
            img.at(x, y) = std::clamp(value, 0.0, 1.0);
        }
    }

    for (const OccluderRect& o : scene.occluders) {
        const int x0 = std::max(0, o.x), x1 = std::min(scene.width, o.x + o.w);
        const int y0 = std::max(0, o.y), y1 = std::min(scene.height, o.y + o.h);
        for (int y = y0; y < y1; ++y)
            for (int x = x0; x < x1; ++x) img.at(x, y) = bg;
    }
    return {std::move(img), std::move(truth)};
}

namespace {

// Body axes of the bundled car model. Chosen so that every bundled test pose
// is upright in the image with well-conditioned wheel ellipses; wheels are
// placed symmetrically around the body origin.
constexpr Vec3 kCarDown{-0.24555669516067613, 0.55947299712617726, -0.79163872754459108};
constexpr Vec3 kCarForward{-0.91563628690442889, -0.40200768882175286,
                           -9.0730719620346623e-05};
constexpr Vec3 kCarLeft{0.31829561662963179, -0.72483086552301679, -0.61098945720815634};
constexpr double kHalfWheelbase = 1.25;
constexpr double kWheelDrop = 0.4;   // along kCarDown
constexpr double kHalfTrack = 0.75;  // along kCarLeft
constexpr double kWheelRadius = 0.55;

struct CarRow {
    const char* name;
    Quat rotation;  // as published; normalized when the fixture is built
    double sigma;
    Vec2 shift;
};

constexpr CarRow kCarRows[] = {
    {"golf-1", {-0.2162, -0.2162, -0.6053, 0.7350}, 60.0, {400.0, 300.0}},
    {"golf-2", {-0.4417, -0.5522, 0.5522, -0.4417}, 50.0, {380.0, 330.0}},
    {"audi-1", {0.9701, 0.0, 0.2425, 0.0}, 150.0, {400.0, 300.0}},
    {"audi-2", {0.9701, 0.0, -0.2425, 0.0}, 150.0, {400.0, 300.0}},
    {"bmw-1", {0.0948, 0.1896, -0.9481, 0.2370}, 100.0, {400.0, 300.0}},
    {"bmw-2", {0.8729, -0.2182, 0.4364, 0.0}, 100.0, {400.0, 300.0}},
};

CircleSpec car_wheel(const char* id, WheelRole role, double fwd, double side) {
    CircleSpec c;
    c.id = id;
    c.role = role;
    c.center = kCarForward * fwd + kCarDown * kWheelDrop + kCarLeft * side;
    // axle points from the wheel face into the body
    c.axle = side > 0 ? -kCarLeft : kCarLeft;
    c.radius = kWheelRadius;
    return c;
}

}  // namespace

CircleModel table_model() {
    CircleModel m;
    m.name = "table";
    CircleSpec top;
    top.id = "top";
    top.role = WheelRole::generic;
    top.center = {0.0, 0.0, 0.0};
    top.axle = {0.0, 0.0, -1.0};
    top.radius = 10.0;
    m.circles.push_back(top);
    m.validate();
    return m;
}

CircleModel car_model() {
    CircleModel m;
    m.name = "car";
    m.circles = {
        car_wheel("wheel-bl", WheelRole::back_left, -kHalfWheelbase, kHalfTrack),
        car_wheel("wheel-fl", WheelRole::front_left, kHalfWheelbase, kHalfTrack),
        car_wheel("wheel-br", WheelRole::back_right, -kHalfWheelbase, -kHalfTrack),
        car_wheel("wheel-fr", WheelRole::front_right, kHalfWheelbase, -kHalfTrack),
    };
    m.validate();
    return m;
}

SceneSpec table_fixture() {
    SceneSpec s;
    s.model = table_model();
    const Vec3 axle = Vec3{0.7568, 0.3243, -0.5676}.normalized();
    s.pose.rotation = canonical(quat_between({0.0, 0.0, -1.0}, axle));
    s.pose.sigma = 6.0;
    s.pose.shift = {400.0, 340.0};
    s.width = 800;
    s.height = 600;
    s.seed = 1;
    return s;
}

SceneSpec car_fixture(const std::string& name) {
    for (size_t i = 0; i < std::size(kCarRows); ++i) {
        const CarRow& row = kCarRows[i];
        if (name != row.name) continue;
        SceneSpec s;
        s.model = car_model();
        s.pose.rotation = canonical(normalized(row.rotation));
        s.pose.sigma = row.sigma;
        s.pose.shift = row.shift;
        s.width = 800;
        s.height = 600;
        s.seed = 100 + i;
        // render the side whose wheel faces point at the camera
        const Rot3 r = quat_to_matrix(s.pose.rotation);
        const bool left_faces_camera = apply(r, s.model.wheel(WheelRole::back_left).axle).z < 0.0;
        if (left_faces_camera)
            s.render_ids = {"wheel-bl", "wheel-fl"};
        else
            s.render_ids = {"wheel-br", "wheel-fr"};
        return s;
    }
    throw std::invalid_argument("unknown fixture " + name);
}

const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = {"table",  "golf-1", "golf-2", "audi-1",
                                                   "audi-2", "bmw-1",  "bmw-2"};
    return names;
}

}  // namespace conicpose
