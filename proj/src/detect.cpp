#include "conicpose/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace conicpose {

void DetectConfig::validate() const {
    if (!(window_frac > 0.0 && window_frac < 1.0))
        throw std::invalid_argument("window_frac must be in (0,1)");
    if (!(threshold_sigmas >= 0.0))
        throw std::invalid_argument("threshold_sigmas must be non-negative");
    if (min_blob_px < 1) throw std::invalid_argument("min_blob_px must be positive");
    if (!(mismatch_max > 0.0) || !(area_consistency_frac > 0.0))
        throw std::invalid_argument("mismatch and area thresholds must be positive");
    if (!(min_area_frac > 0.0) || !(min_area_frac < max_area_frac))
        throw std::invalid_argument("min_area_frac must be positive and below max_area_frac");
    if (!(pair_orientation_tol > 0.0) || !(pair_horizontal_tol > 0.0))
        throw std::invalid_argument("pair tolerances must be positive");
}

int smooth_half_width(int width, int height, const DetectConfig& cfg) {
    const int shortest = std::min(width, height);
    const int side = std::max<int>(1, std::lround(cfg.window_frac * shortest));
    return side / 2;
}

GrayImage smooth(const GrayImage& img, const DetectConfig& cfg) {
    const int half = smooth_half_width(img.width, img.height, cfg);
    const IntegralImage ii = build_integral(img);
    GrayImage out(img.width, img.height);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) out.at(x, y) = windowed_mean(ii, x, y, half);
    return out;
}

namespace {

// Deterministic image statistics: per-row sums combined in row order, so the
// result does not depend on the number of threads.
struct MeanStd {
    double mean;
    double stddev;
};

MeanStd image_stats(const GrayImage& img) {
    std::vector<double> row_sum(img.height, 0.0);
    std::vector<double> row_sq(img.height, 0.0);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < img.height; ++y) {
        double s = 0.0, q = 0.0;
        for (int x = 0; x < img.width; ++x) {
            const double v = img.at(x, y);
            s += v;
            q += v * v;
        }
        row_sum[y] = s;
        row_sq[y] = q;
    }
    double s = 0.0, q = 0.0;
    for (int y = 0; y < img.height; ++y) {
        s += row_sum[y];
        q += row_sq[y];
    }
    const double n = static_cast<double>(img.width) * img.height;
    const double mean = s / n;
    const double var = std::max(0.0, q / n - mean * mean);
    return {mean, std::sqrt(var)};
}

}  // namespace

BinaryImage normalize_and_threshold(const GrayImage& img, const GrayImage& local_mean,
                                    const DetectConfig& cfg) {
    if (img.width != local_mean.width || img.height != local_mean.height)
        throw std::invalid_argument("image and local-mean dimensions differ");
    const MeanStd stats = image_stats(local_mean);
    const double threshold = cfg.threshold_sigmas * stats.stddev;

    BinaryImage out(img.width, img.height);
    const int64_t n = static_cast<int64_t>(img.width) * img.height;
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i)
        out.data[i] = (img.data[i] - local_mean.data[i] > threshold) ? 1 : 0;
    return out;
}

int64_t effective_min_blob_px(int width, int height, const DetectConfig& cfg) {
    const double ratio = static_cast<double>(width) * height / (800.0 * 600.0);
    return std::max<int64_t>(1, std::llround(cfg.min_blob_px * ratio));
}

std::vector<Blob> label_components(const BinaryImage& bin, const DetectConfig& cfg) {
    const int w = bin.width, h = bin.height;
    std::vector<int32_t> label(static_cast<size_t>(w) * h, -1);
    std::vector<int32_t> parent;

    auto find = [&](int32_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    };
    auto unite = [&](int32_t a, int32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };

    // pass 1: provisional labels, merging across the four previously seen
    // 8-neighbors
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!bin.at(x, y)) continue;
            const size_t idx = static_cast<size_t>(y) * w + x;
            int32_t current = -1;
            const int nb[4][2] = {{x - 1, y}, {x - 1, y - 1}, {x, y - 1}, {x + 1, y - 1}};
            for (auto& p : nb) {
                if (p[0] < 0 || p[0] >= w || p[1] < 0) continue;
                const int32_t l = label[static_cast<size_t>(p[1]) * w + p[0]];
                if (l < 0) continue;
                if (current < 0)
                    current = l;
                else
                    unite(current, l);
            }
            if (current < 0) {
                current = static_cast<int32_t>(parent.size());
                parent.push_back(current);
            }
            label[idx] = current;
        }
    }

    // pass 2: dense relabel in raster discovery order, gather pixels
    std::vector<int32_t> dense(parent.size(), -1);
    std::vector<std::vector<Pixel>> groups;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int32_t l = label[static_cast<size_t>(y) * w + x];
            if (l < 0) continue;
            const int32_t root = find(l);
            if (dense[root] < 0) {
                dense[root] = static_cast<int32_t>(groups.size());
                groups.emplace_back();
            }
            groups[dense[root]].push_back({x, y});
        }
    }

    const int64_t min_px = effective_min_blob_px(w, h, cfg);
    std::vector<Blob> blobs;
    int next = 0;
    for (auto& g : groups) {
        if (static_cast<int64_t>(g.size()) < min_px) continue;
        Blob b;
        b.label = next++;
        b.moments = blob_moments(g);
        b.pixels = std::move(g);
        blobs.push_back(std::move(b));
    }
    return blobs;
}

namespace {

struct Box {
    int x0, y0, x1, y1;  // inclusive
    int width() const { return x1 - x0 + 1; }
    int height() const { return y1 - y0 + 1; }
};

Box bounding_box(std::span<const Pixel> pixels) {
    Box b{pixels[0].x, pixels[0].y, pixels[0].x, pixels[0].y};
    for (const Pixel& p : pixels) {
        b.x0 = std::min(b.x0, p.x);
        b.y0 = std::min(b.y0, p.y);
        b.x1 = std::max(b.x1, p.x);
        b.y1 = std::max(b.y1, p.y);
    }
    return b;
}

void plot_line(std::vector<uint8_t>& mask, const Box& box, int x0, int y0, int x1, int y1) {
    // Bresenham, all octants; endpoints inclusive
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        mask[static_cast<size_t>(y0 - box.y0) * box.width() + (x0 - box.x0)] = 1;
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

}  // namespace

Blob star_fill(const Blob& blob, int width, int height) {
    if (blob.pixels.empty()) throw std::invalid_argument("empty blob");
    const int cx = static_cast<int>(std::lround(blob.moments.mean.x));
    const int cy = static_cast<int>(std::lround(blob.moments.mean.y));
    if (cx < 0 || cx >= width || cy < 0 || cy >= height)
        throw std::invalid_argument("blob center outside image");

    Box box = bounding_box(blob.pixels);
    box.x0 = std::min(box.x0, cx);
    box.y0 = std::min(box.y0, cy);
    box.x1 = std::max(box.x1, cx);
    box.y1 = std::max(box.y1, cy);

    std::vector<uint8_t> mask(static_cast<size_t>(box.width()) * box.height(), 0);
    for (const Pixel& p : blob.pixels) plot_line(mask, box, p.x, p.y, cx, cy);

    Blob out;
    out.label = blob.label;
    out.pixels.reserve(blob.pixels.size());
    for (int y = box.y0; y <= box.y1; ++y)
        for (int x = box.x0; x <= box.x1; ++x)
            if (mask[static_cast<size_t>(y - box.y0) * box.width() + (x - box.x0)])
                out.pixels.push_back({x, y});
    out.moments = blob_moments(out.pixels);
    return out;
}

BlobMoments blob_moments(std::span<const Pixel> pixels) {
    if (pixels.empty()) throw std::invalid_argument("empty pixel set");
    int64_t n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const Pixel& p : pixels) {
        const int64_t x = p.x, y = p.y;
        ++n;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    BlobMoments m;
    m.area = n;
    m.mean = {static_cast<double>(sx) / n, static_cast<double>(sy) / n};
    // covariance from integer raw moments; n^2 < 2^53 stays exact in double
    const auto num = [&](int64_t sab, int64_t sa, int64_t sb) {
        return static_cast<double>(static_cast<__int128>(n) * sab -
                                   static_cast<__int128>(sa) * sb);
    };
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    m.cov = {num(sxx, sx, sx) / n2, num(sxy, sx, sy) / n2, num(syy, sy, sy) / n2};
    return m;
}

EllipseFilterResult ellipse_filter(const Blob& blob, const DetectConfig& cfg) {
    const BlobMoments& m = blob.moments;
    const double det = m.cov.det();
    if (!(det > 0.0) || !(m.cov.trace() > 0.0)) return {std::nullopt, RejectReason::degenerate};

    const double narea = static_cast<double>(m.area);
    const double ellipse_area = 4.0 * std::numbers::pi * std::sqrt(det);
    if (std::fabs(narea - ellipse_area) > cfg.area_consistency_frac * narea)
        return {std::nullopt, RejectReason::area_inconsistent};

    const AxesSpec axes = eigen2(m.cov);
    const EllipseCov eq{m.mean, m.cov};

    // symmetric difference over the union of the blob's and the ellipse's
    // bounding boxes; the equivalent ellipse is not clipped to the image
    Box box = bounding_box(blob.pixels);
    const double ex = 2.0 * std::sqrt(m.cov.xx);
    const double ey = 2.0 * std::sqrt(m.cov.yy);
    box.x0 = std::min(box.x0, static_cast<int>(std::floor(m.mean.x - ex)));
    box.y0 = std::min(box.y0, static_cast<int>(std::floor(m.mean.y - ey)));
    box.x1 = std::max(box.x1, static_cast<int>(std::ceil(m.mean.x + ex)));
    box.y1 = std::max(box.y1, static_cast<int>(std::ceil(m.mean.y + ey)));

    std::vector<uint8_t> in_blob(static_cast<size_t>(box.width()) * box.height(), 0);
    for (const Pixel& p : blob.pixels)
        in_blob[static_cast<size_t>(p.y - box.y0) * box.width() + (p.x - box.x0)] = 1;

    int64_t mismatch = 0;
    for (int y = box.y0; y <= box.y1; ++y) {
        for (int x = box.x0; x <= box.x1; ++x) {
            const bool in_e = contains(eq, {static_cast<double>(x), static_cast<double>(y)});
            const bool in_b =
                in_blob[static_cast<size_t>(y - box.y0) * box.width() + (x - box.x0)] != 0;
            if (in_e != in_b) ++mismatch;
        }
    }
    const double ratio = static_cast<double>(mismatch) / narea;
    if (ratio > cfg.mismatch_max) return {std::nullopt, RejectReason::mismatch};

    DetectedEllipse e;
    e.label = blob.label;
    e.area = m.area;
    e.mu = m.mean;
    e.cov = m.cov;
    e.a1 = axes.a1;
    e.a2 = axes.a2;
    double ang = std::atan2(axes.major_dir.y, axes.major_dir.x);
    if (ang < 0.0) ang += std::numbers::pi;
    if (ang >= std::numbers::pi) ang -= std::numbers::pi;
    e.orientation = ang;
    e.mismatch_ratio = ratio;
    return {e, RejectReason::none};
}

std::vector<DetectedEllipse> detect_ellipses(const GrayImage& img, const DetectConfig& cfg) {
    cfg.validate();
    if (img.width < 16 || img.height < 16)
        throw std::invalid_argument("image too small (minimum 16x16)");

    const GrayImage local_mean = smooth(img, cfg);
    const BinaryImage bright = normalize_and_threshold(img, local_mean, cfg);
    const std::vector<Blob> blobs = label_components(bright, cfg);

    std::vector<std::optional<DetectedEllipse>> slots(blobs.size());
#pragma omp parallel for schedule(dynamic)
    for (int64_t i = 0; i < static_cast<int64_t>(blobs.size()); ++i) {
        const Blob filled = star_fill(blobs[i], img.width, img.height);
        slots[i] = ellipse_filter(filled, cfg).ellipse;
    }

    std::vector<DetectedEllipse> out;
    for (auto& s : slots)
        if (s) out.push_back(*s);
    std::sort(out.begin(), out.end(), [](const DetectedEllipse& a, const DetectedEllipse& b) {
        if (a.mismatch_ratio != b.mismatch_ratio) return a.mismatch_ratio < b.mismatch_ratio;
        return a.label < b.label;
    });
    return out;
}

namespace {

// near-circles have no usable orientation and match anything
bool is_circle_like(const DetectedEllipse& e) { return e.a1 - e.a2 <= 1.0; }

double orientation_difference(double a, double b) {
    double d = std::fabs(a - b);
    d = std::fmod(d, std::numbers::pi);
    return std::min(d, std::numbers::pi - d);
}

}  // namespace

std::optional<WheelPair> select_wheel_pair(std::span<const DetectedEllipse> ellipses,
                                           int width, int height, const DetectConfig& cfg) {
    const double image_area = static_cast<double>(width) * height;
    std::vector<const DetectedEllipse*> kept;
    for (const DetectedEllipse& e : ellipses) {
        const double frac = static_cast<double>(e.area) / image_area;
        if (frac < cfg.min_area_frac || frac > cfg.max_area_frac) continue;
        kept.push_back(&e);
    }

    const DetectedEllipse* best_a = nullptr;
    const DetectedEllipse* best_b = nullptr;
    double best_score = 0.0;
    for (size_t i = 0; i < kept.size(); ++i) {
        for (size_t j = i + 1; j < kept.size(); ++j) {
            const DetectedEllipse& a = *kept[i];
            const DetectedEllipse& b = *kept[j];
            if (!is_circle_like(a) && !is_circle_like(b) &&
                orientation_difference(a.orientation, b.orientation) > cfg.pair_orientation_tol)
                continue;
            const Vec2 d = b.mu - a.mu;
            if (std::atan2(std::fabs(d.y), std::fabs(d.x)) > cfg.pair_horizontal_tol) continue;
            const double score = a.mismatch_ratio + b.mismatch_ratio;
            if (!best_a || score < best_score) {
                best_a = &a;
                best_b = &b;
                best_score = score;
            }
        }
    }
    if (!best_a) return std::nullopt;
    return WheelPair{*best_a, *best_b};
}

}  // namespace conicpose
