#pragma once

// Image containers:
//  - PFM ("Pf", single channel, little-endian float32, rows stored bottom to top)
//    carries the raw intensities.
//  - Binary PGM ("P5", maxval 65535, big-endian) is a 16-bit preview scaled so
//    the brightest pixel maps to 65535.

#include <filesystem>

#include "duality/optics.hpp"

namespace duality {

void write_pfm(const std::filesystem::path &path, const IntensityImage &image);

/// Reads a single-channel PFM written by write_pfm (either byte order). The
/// grid extent is not stored in the file and is taken from `extent`.
IntensityImage read_pfm(const std::filesystem::path &path, double extent = 4.0);

/// Returns the intensity that maps to 65535 (0 for an all-zero image).
double write_pgm16(const std::filesystem::path &path, const IntensityImage &image);

} // namespace duality
