#pragma once

#include <filesystem>

#include "cntq/image.hpp"

namespace cntq {

/// Decode an 8-bit PNG. Grayscale is taken verbatim; RGB(A) is converted per
/// pixel by BT.601 luma round(0.299 R + 0.587 G + 0.114 B), alpha ignored.
/// 16-bit inputs are rejected.
GrayImage load_png(const std::filesystem::path& path);

/// Encode as 8-bit grayscale PNG. Pixels round-trip byte-for-byte through
/// load_png. Written atomically (temp file + rename).
void save_png(const GrayImage& img, const std::filesystem::path& path);

}  // namespace cntq
