#pragma once

#include <string>

#include "core/grid.hpp"

namespace dg3pd {

// PGM P5, 8-bit. Values are quantized (round + clamp to [0,255]) on write.
void write_pgm(const std::string& path, const Image& img);
Image read_pgm(const std::string& path);

// Masks as PGM: 255 = set (missing for a D mask), 0 = clear. On read any
// value >= 128 counts as set.
void write_mask_pgm(const std::string& path, const Mask& mask);
Mask read_mask_pgm(const std::string& path);

// PFM "Pf" grayscale, 32-bit float, little-endian (scale -1.0), rows stored
// bottom-to-top per the de-facto standard.
void write_pfm(const std::string& path, const Image& img);
Image read_pfm(const std::string& path);

}  // namespace dg3pd
