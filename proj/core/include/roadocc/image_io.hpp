#pragma once

#include <filesystem>
#include <string>

#include "roadocc/image.hpp"

namespace roadocc {

/// Reads 8-bit PNG or binary PPM (P6); values are divided by 255.
ImageBuffer load_image(const std::filesystem::path& path);

/// Writes binary PPM (P6) with values rounded from [0,1] to 0..255.
void write_ppm(const std::filesystem::path& path, const ImageBuffer& image);

/// 8-bit PGM of a likelihood map, byte = round(L * 255).
void write_pgm(const std::filesystem::path& path, const LikelihoodMap& map);
void write_pgm(const std::filesystem::path& path, const BinaryMask& mask);

}  // namespace roadocc
