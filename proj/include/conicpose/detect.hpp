#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "conicpose/conic.hpp"
#include "conicpose/raster.hpp"

namespace conicpose {

struct Pixel {
    int x = 0;
    int y = 0;
    bool operator==(const Pixel&) const = default;
};

struct DetectConfig {
    double window_frac = 0.10;          // smoothing window, fraction of shortest side
    double threshold_sigmas = 1.0;      // T = sigmas * stddev of the local-mean image
    int min_blob_px = 20;               // at the 800x600 reference scale, scaled by area
    double mismatch_max = 0.20;
    double area_consistency_frac = 0.15;
    double min_area_frac = 0.0015;
    double max_area_frac = 0.25;
    double pair_orientation_tol = 0.26;  // radians
    double pair_horizontal_tol = 0.52;   // radians

    void validate() const;
};

struct BlobMoments {
    int64_t area = 0;
    Vec2 mean;
    SymMat2 cov;
};

struct Blob {
    int label = 0;
    std::vector<Pixel> pixels;  // raster order
    BlobMoments moments;
};

struct DetectedEllipse {
    int label = 0;
    int64_t area = 0;  // filled blob pixel count
    Vec2 mu;
    SymMat2 cov;
    double a1 = 0.0;
    double a2 = 0.0;
    double orientation = 0.0;  // major-axis angle in [0, pi)
    double mismatch_ratio = 0.0;
};

/// Provisional pairing: which member is actually the back wheel is an
/// ambiguity resolved during pose estimation, not here.
struct WheelPair {
    DetectedEllipse back;
    DetectedEllipse front;
};

/// Effective smoothing half-width: the window side is window_frac times the
/// shortest image side, rounded, made odd as 2*half+1.
int smooth_half_width(int width, int height, const DetectConfig& cfg);

/// Box filter with translated-window border handling, via the integral image.
GrayImage smooth(const GrayImage& img, const DetectConfig& cfg);

/// Bright-pixel mask: img(p) - local_mean(p) > T, where
/// T = threshold_sigmas * stddev(local_mean). The strict inequality leaves
/// flat images empty.
BinaryImage normalize_and_threshold(const GrayImage& img, const GrayImage& local_mean,
                                    const DetectConfig& cfg);

/// min_blob_px rescaled from the 800x600 reference to this image's area.
int64_t effective_min_blob_px(int width, int height, const DetectConfig& cfg);

/// 8-connected components of the bright mask, labeled densely in raster-scan
/// discovery order; components below effective_min_blob_px are dropped.
std::vector<Blob> label_components(const BinaryImage& bin, const DetectConfig& cfg);

/// Radial gap fill: the union of Bresenham segments from every blob pixel to
/// the blob mean rounded to the nearest pixel. Moments are recomputed.
Blob star_fill(const Blob& blob, int width, int height);

/// Exact population moments of an integer pixel set. Covariance entries are
/// computed from integer raw moments ((n*Sxx - Sx^2)/n^2), so the result is
/// independent of accumulation order.
BlobMoments blob_moments(std::span<const Pixel> pixels);

enum class RejectReason { none, degenerate, area_inconsistent, mismatch };

struct EllipseFilterResult {
    std::optional<DetectedEllipse> ellipse;
    RejectReason reject = RejectReason::none;
};

/// Equivalent-ellipse test: discard when | |W| - 4*pi*sqrt(det C) | exceeds
/// area_consistency_frac * |W|, otherwise count the pixel-wise symmetric
/// difference against E(mu, C) and accept when mismatch/|W| <= mismatch_max.
EllipseFilterResult ellipse_filter(const Blob& blob, const DetectConfig& cfg);

/// Full pipeline; results sorted by mismatch ratio (label breaks ties).
/// Requires at least a 16x16 image.
std::vector<DetectedEllipse> detect_ellipses(const GrayImage& img, const DetectConfig& cfg);

/// Pair selection: area-fraction gate, orientation similarity (modulo pi,
/// near-circles match anything), center-line horizontality, then the pair
/// with the lowest combined mismatch.
std::optional<WheelPair> select_wheel_pair(std::span<const DetectedEllipse> ellipses,
                                           int width, int height, const DetectConfig& cfg);

}  // namespace conicpose
