#pragma once

#include <filesystem>
#include <variant>

#include "conicpose/raster.hpp"

namespace conicpose {

/// Parse failure with the offending byte offset recorded in what().
struct PnmParseError : std::runtime_error {
    size_t offset;
    PnmParseError(const std::string& msg, size_t off);
};

using PnmImage = std::variant<GrayImage, ColorImage>;

/// Read a binary PGM (P5) or PPM (P6) file, maxval up to 65535.
/// Samples are normalized by maxval; 16-bit samples are big-endian.
PnmImage read_pnm(const std::filesystem::path& path);

/// Convenience: read and convert P6 to grayscale on the fly.
GrayImage read_gray(const std::filesystem::path& path);

/// Write binary PGM/PPM. maxval must be in [1, 65535]; values are quantized
/// with round-to-nearest, so 8-bit data round-trips bit-exactly.
void write_pgm(const GrayImage& img, const std::filesystem::path& path, int maxval = 255);
void write_ppm(const ColorImage& img, const std::filesystem::path& path, int maxval = 255);

}  // namespace conicpose
