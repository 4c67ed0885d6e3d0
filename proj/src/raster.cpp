#include "conicpose/raster.hpp"

#include <algorithm>

namespace conicpose {

GrayImage::GrayImage(int w, int h, double fill) : width(w), height(h) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("empty image");
    data.assign(static_cast<size_t>(w) * h, fill);
}

ColorImage::ColorImage(int w, int h) : width(w), height(h) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("empty image");
    data.assign(3 * static_cast<size_t>(w) * h, 0.0);
}

BinaryImage::BinaryImage(int w, int h) : width(w), height(h) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("empty image");
    data.assign(static_cast<size_t>(w) * h, 0);
}

GrayImage to_gray(const ColorImage& rgb) {
    if (rgb.width <= 0 || rgb.height <= 0) throw std::invalid_argument("empty image");
    double maxv = 0.0;
    for (double v : rgb.data) maxv = std::max(maxv, v);
    const double scale = maxv > 1.0 ? 1.0 / 255.0 : 1.0;

    GrayImage out(rgb.width, rgb.height);
    const int64_t n = static_cast<int64_t>(rgb.width) * rgb.height;
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) {
        const double r = rgb.data[3 * i + 0] * scale;
        const double g = rgb.data[3 * i + 1] * scale;
        const double b = rgb.data[3 * i + 2] * scale;
        out.data[i] = std::clamp(0.299 * r + 0.587 * g + 0.114 * b, 0.0, 1.0);
    }
    return out;
}

IntegralImage build_integral(const GrayImage& img) {
    if (img.width <= 0 || img.height <= 0) throw std::invalid_argument("empty image");
    IntegralImage ii;
    ii.width = img.width;
    ii.height = img.height;
    const int w1 = img.width + 1;
    ii.sums.assign(static_cast<size_t>(w1) * (img.height + 1), 0.0);

    // Two separable prefix passes. Each output cell sees a fixed summation
    // order, so results do not depend on the thread count.
#pragma omp parallel for schedule(static)
    for (int y = 0; y < img.height; ++y) {
        double acc = 0.0;
        double* row = &ii.sums[static_cast<size_t>(y + 1) * w1];
        for (int x = 0; x < img.width; ++x) {
            acc += img.at(x, y);
            row[x + 1] = acc;
        }
    }
#pragma omp parallel for schedule(static)
    for (int x = 1; x <= img.width; ++x) {
        double acc = 0.0;
        for (int y = 1; y <= img.height; ++y) {
            acc += ii.sums[static_cast<size_t>(y) * w1 + x];
            ii.sums[static_cast<size_t>(y) * w1 + x] = acc;
        }
    }
    return ii;
}

double windowed_mean(const IntegralImage& ii, int cx, int cy, int half_width) {
    const int side = 2 * half_width + 1;
    if (side > ii.width || side > ii.height)
        throw std::invalid_argument("window exceeds image");
    if (cx < 0 || cx >= ii.width || cy < 0 || cy >= ii.height)
        throw std::invalid_argument("window center outside image");
    const int x0 = std::clamp(cx - half_width, 0, ii.width - side);
    const int y0 = std::clamp(cy - half_width, 0, ii.height - side);
    return ii.rect_sum(x0, y0, x0 + side, y0 + side) / (static_cast<double>(side) * side);
}

GrayImage resize_nearest(const GrayImage& img, int new_width, int new_height) {
    if (new_width <= 0 || new_height <= 0) throw std::invalid_argument("empty image");
    GrayImage out(new_width, new_height);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < new_height; ++y) {
        const int sy = std::min(img.height - 1,
                                static_cast<int>((y + 0.5) * img.height / new_height));
        for (int x = 0; x < new_width; ++x) {
            const int sx = std::min(img.width - 1,
                                    static_cast<int>((x + 0.5) * img.width / new_width));
            out.at(x, y) = img.at(sx, sy);
        }
    }
    return out;
}

}  // namespace conicpose
