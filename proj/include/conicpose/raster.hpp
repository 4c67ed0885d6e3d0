#pragma once

#include <cstdint>
#include <vector>

#include "conicpose/geometry.hpp"

namespace conicpose {

/// Row-major grayscale raster with intensities in [0,1].
/// Pixel (x,y) has x rightward, y downward, origin at the top-left pixel.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0);

    double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    size_t size() const { return data.size(); }
};

/// Interleaved RGB raster, values in [0,1].
struct ColorImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // 3 * width * height, R,G,B per pixel

    ColorImage() = default;
    ColorImage(int w, int h);

    double channel(int x, int y, int c) const {
        return data[3 * (static_cast<size_t>(y) * width + x) + c];
    }
    double& channel(int x, int y, int c) {
        return data[3 * (static_cast<size_t>(y) * width + x) + c];
    }
};

struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data;  // 1 = bright

    BinaryImage() = default;
    BinaryImage(int w, int h);

    uint8_t at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    void set(int x, int y, bool v) { data[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }
};

/// Summed-area table: entry (x,y) holds the sum of all intensities with
/// row < y and column < x, so the table is (width+1) x (height+1).
struct IntegralImage {
    int width = 0;
    int height = 0;
    std::vector<double> sums;

    double entry(int x, int y) const {
        return sums[static_cast<size_t>(y) * (width + 1) + x];
    }
    /// Sum over the half-open pixel rectangle [x0,x1) x [y0,y1).
    double rect_sum(int x0, int y0, int x1, int y1) const {
        return entry(x1, y1) - entry(x0, y1) - entry(x1, y0) + entry(x0, y0);
    }
};

/// Rec.601 luma conversion. Channel values above 1 are assumed 0..255 scaled
/// and normalized first; the result is clamped to [0,1].
GrayImage to_gray(const ColorImage& rgb);

IntegralImage build_integral(const GrayImage& img);

/// Mean of the (2*half_width+1)^2 window centered at (cx,cy). Windows that
/// would overflow the border are translated, not shrunk, to the nearest
/// position fully inside the image. Throws if the window exceeds the image.
double windowed_mean(const IntegralImage& ii, int cx, int cy, int half_width);

/// Nearest-neighbor resample (used by the scale-invariance checks).
GrayImage resize_nearest(const GrayImage& img, int new_width, int new_height);

}  // namespace conicpose
