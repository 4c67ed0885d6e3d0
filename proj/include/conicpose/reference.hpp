#pragma once

#include "conicpose/detect.hpp"
#include "conicpose/raster.hpp"
#include "conicpose/synth.hpp"

/// Serial reference implementations of the parallel kernels. These are the
/// oracles the test suite checks the production kernels against, and the
/// baselines the benchmark compares them with. Everything here is written as
/// directly as possible (nested loops, no integral images, no OpenMP) and is
/// intentionally independent of the code paths under src/.
namespace conicpose::reference {

/// Windowed mean by direct summation, with the same translated-window border
/// policy as the production kernel.
double windowed_mean_direct(const GrayImage& img, int cx, int cy, int half_width);

/// Box filter by direct summation at every pixel.
GrayImage box_filter(const GrayImage& img, int half_width);

/// Integral-image entry by brute-force summation of the covered rectangle.
double integral_entry_direct(const GrayImage& img, int x, int y);

/// Thresholding with naive two-pass statistics.
BinaryImage threshold(const GrayImage& img, const GrayImage& local_mean, double sigmas);

/// Connected components by BFS flood fill in raster order (8-connectivity),
/// no size filtering.
std::vector<std::vector<Pixel>> flood_fill_components(const BinaryImage& bin);

/// Population moments via the two-pass deviation form, accumulated in exact
/// 128-bit integers: sum((n*x - Sx)^2) / n^3 and friends.
BlobMoments moments_two_pass(std::span<const Pixel> pixels);

/// Star fill semantics re-implemented directly: the union over blob pixels of
/// the raster line segment to the rounded mean, gathered from a std::set.
std::vector<Pixel> line_union(std::span<const Pixel> pixels, Pixel center);

/// Scene rasterization with a plain serial loop; same sampling, noise stream
/// and occluder handling as the parallel renderer.
GrayImage render_serial(const SceneSpec& scene);

}  // namespace conicpose::reference
