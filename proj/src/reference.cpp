#include "conicpose/reference.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <set>

namespace conicpose::reference {

double windowed_mean_direct(const GrayImage& img, int cx, int cy, int half_width) {
    const int side = 2 * half_width + 1;
    if (side > img.width || side > img.height)
        throw std::invalid_argument("window exceeds image");
    const int x0 = std::clamp(cx - half_width, 0, img.width - side);
    const int y0 = std::clamp(cy - half_width, 0, img.height - side);
    double sum = 0.0;
    for (int y = y0; y < y0 + side; ++y)
        for (int x = x0; x < x0 + side; ++x) sum += img.at(x, y);
    return sum / (static_cast<double>(side) * side);
}

GrayImage box_filter(const GrayImage& img, int half_width) {
    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            out.at(x, y) = windowed_mean_direct(img, x, y, half_width);
    return out;
}

double integral_entry_direct(const GrayImage& img, int x, int y) {
    double sum = 0.0;
    for (int yy = 0; yy < y; ++yy)
        for (int xx = 0; xx < x; ++xx) sum += img.at(xx, yy);
    return sum;
}

BinaryImage threshold(const GrayImage& img, const GrayImage& local_mean, double sigmas) {
    if (img.width != local_mean.width || img.height != local_mean.height)
        throw std::invalid_argument("image and local-mean dimensions differ");
    double mean = 0.0;
    for (double v : local_mean.data) mean += v;
    mean /= static_cast<double>(local_mean.size());
    double var = 0.0;
    for (double v : local_mean.data) var += (v - mean) * (v - mean);
    var /= static_cast<double>(local_mean.size());
    const double t = sigmas * std::sqrt(var);

    BinaryImage out(img.width, img.height);
    for (size_t i = 0; i < img.size(); ++i)
        out.data[i] = (img.data[i] - local_mean.data[i] > t) ? 1 : 0;
    return out;
}

std::vector<std::vector<Pixel>> flood_fill_components(const BinaryImage& bin) {
    const int w = bin.width, h = bin.height;
    std::vector<uint8_t> seen(static_cast<size_t>(w) * h, 0);
    std::vector<std::vector<Pixel>> components;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!bin.at(x, y) || seen[static_cast<size_t>(y) * w + x]) continue;
            std::vector<Pixel> comp;
            std::deque<Pixel> queue{{x, y}};
            seen[static_cast<size_t>(y) * w + x] = 1;
            while (!queue.empty()) {
                const Pixel p = queue.front();
                queue.pop_front();
                comp.push_back(p);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = p.x + dx, ny = p.y + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        const size_t idx = static_cast<size_t>(ny) * w + nx;
                        if (!bin.at(nx, ny) || seen[idx]) continue;
                        seen[idx] = 1;
                        queue.push_back({nx, ny});
                    }
                }
            }
            components.push_back(std::move(comp));
        }
    }
    return components;
}

BlobMoments moments_two_pass(std::span<const Pixel> pixels) {
    if (pixels.empty()) throw std::invalid_argument("empty pixel set");
    int64_t n = 0, sx = 0, sy = 0;
    for (const Pixel& p : pixels) {
        ++n;
        sx += p.x;
        sy += p.y;
    }
    __int128 qxx = 0, qxy = 0, qyy = 0;
    for (const Pixel& p : pixels) {
        const __int128 dx = static_cast<__int128>(n) * p.x - sx;
        const __int128 dy = static_cast<__int128>(n) * p.y - sy;
        qxx += dx * dx;
        qxy += dx * dy;
        qyy += dy * dy;
    }
    BlobMoments m;
    m.area = n;
    m.mean = {static_cast<double>(sx) / n, static_cast<double>(sy) / n};
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    // sum((n x - Sx)^2) is exactly divisible by n
    m.cov = {static_cast<double>(qxx / n) / n2, static_cast<double>(qxy / n) / n2,
             static_cast<double>(qyy / n) / n2};
    return m;
}

namespace {

// axis-swap Bresenham variant (deliberately a different formulation from the
// production error-accumulator loop)
void raster_line(std::set<std::pair<int, int>>& out, int x0, int y0, int x1, int y1) {
    const bool steep = std::abs(y1 - y0) > std::abs(x1 - x0);
    if (steep) {
        std::swap(x0, y0);
        std::swap(x1, y1);
    }
    if (x0 > x1) {
        std::swap(x0, x1);
        std::swap(y0, y1);
    }
    const int dx = x1 - x0;
    const int dy = std::abs(y1 - y0);
    const int ystep = y0 < y1 ? 1 : -1;
    int err = dx / 2;
    int y = y0;
    for (int x = x0; x <= x1; ++x) {
        if (steep)
            out.insert({y, x});
        else
            out.insert({x, y});
        err -= dy;
        if (err < 0) {
            y += ystep;
            err += dx;
        }
    }
}

}  // namespace

std::vector<Pixel> line_union(std::span<const Pixel> pixels, Pixel center) {
    std::set<std::pair<int, int>> cells;
    for (const Pixel& p : pixels) raster_line(cells, p.x, p.y, center.x, center.y);
    std::vector<Pixel> out;
    out.reserve(cells.size());
    for (const auto& [x, y] : cells) out.push_back({x, y});
    return out;
}

namespace {

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Must match the renderer's documented noise stream: one splitmix64 stream
// per row, seeded with seed ^ golden*(row+1), Box-Muller pairs along the row.
struct RowRng {
    uint64_t state;
    bool have_spare = false;
    double spare = 0.0;

    RowRng(uint64_t seed, int row) {
        uint64_t s = seed ^ (0x9E3779B97F4A7C15ull * static_cast<uint64_t>(row + 1));
        state = splitmix64(s);
    }
    double uniform() { return (splitmix64(state) >> 11) * 0x1.0p-53 + 0x1.0p-53; }
    double gaussian() {
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

}  // namespace

GrayImage render_serial(const SceneSpec& scene) {
    if (!(scene.foreground > scene.background))
        throw std::invalid_argument("foreground must exceed background");
    const Rot3 r = quat_to_matrix(normalized(scene.pose.rotation));

    struct Drawn {
        EllipseCov e;
    };
    std::vector<Drawn> drawn;
    for (const CircleSpec& c : scene.model.circles) {
        if (!scene.render_ids.empty() &&
            std::find(scene.render_ids.begin(), scene.render_ids.end(), c.id) ==
                scene.render_ids.end())
            continue;
        const Vec3 axle = apply(r, c.axle);
        if (std::fabs(axle.z) < 1e-9) continue;
        const Vec3 n = axle.z < 0.0 ? axle : -axle;
        const Vec2 mu = Vec2{r.row(0).dot(c.center), r.row(1).dot(c.center)} * scene.pose.sigma +
                        scene.pose.shift;
        const SymMat2 cov = cov_from_normal(n, scene.pose.sigma * c.radius);
        const double ex = 2.0 * std::sqrt(cov.xx), ey = 2.0 * std::sqrt(cov.yy);
        const bool visible = mu.x - ex >= 0.0 && mu.x + ex <= scene.width - 1 &&
                             mu.y - ey >= 0.0 && mu.y + ey <= scene.height - 1;
        if (visible) drawn.push_back({{mu, cov}});
    }

    GrayImage img(scene.width, scene.height, scene.background);
    for (int y = 0; y < scene.height; ++y) {
        RowRng rng(scene.seed, y);
        for (int x = 0; x < scene.width; ++x) {
            double value = scene.background;
            if (!scene.supersample) {
                for (const Drawn& d : drawn) {
                    if (contains(d.e, {static_cast<double>(x), static_cast<double>(y)})) {
                        value = scene.foreground;
                        break;
                    }
                }
            } else {
                int covered = 0;
                for (int sy = 0; sy < 4; ++sy)
                    for (int sx = 0; sx < 4; ++sx) {
                        const Vec2 p{x - 0.5 + (sx + 0.5) / 4.0, y - 0.5 + (sy + 0.5) / 4.0};
                        for (const Drawn& d : drawn)
                            if (contains(d.e, p)) {
                                ++covered;
                                break;
                            }
                    }
                value = scene.background + (scene.foreground - scene.background) * covered / 16.0;
            }
            if (scene.noise_std > 0.0) value += scene.noise_std * rng.gaussian();
            img.at(x, y) = std::clamp(value, 0.0, 1.0);
        }
    }
    for (const OccluderRect& o : scene.occluders) {
        const int x0 = std::max(0, o.x), x1 = std::min(scene.width, o.x + o.w);
        const int y0 = std::max(0, o.y), y1 = std::min(scene.height, o.y + o.h);
        for (int y = y0; y < y1; ++y)
            for (int x = x0; x < x1; ++x) img.at(x, y) = scene.background;
    }
    return img;
}

}  // namespace conicpose::reference
