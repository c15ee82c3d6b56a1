#pragma once

#include <cstddef>
#include <filesystem>

#include "cfstereo/grid.hpp"

namespace cfstereo {

/// Reads a grayscale ("Pf") PFM file. Rows are stored bottom-to-top; the sign
/// of the scale field selects endianness (negative = little-endian). NaN and
/// infinite samples are kept. Color ("PF") files and malformed or truncated
/// files raise FormatError.
Grid2D read_pfm(const std::filesystem::path& path);

/// Writes a little-endian grayscale PFM with scale -1.
void write_pfm(const std::filesystem::path& path, const Grid2D& map);

/// Reads a binary PGM (P5) or PPM (P6) with maxval <= 65535 as grayscale in
/// [0, 1]; color is converted with the BT.601 luma weights. ASCII variants
/// raise FormatError.
Grid2D read_pnm(const std::filesystem::path& path);

/// Writes a binary PGM. Values are clamped to [0, 1] and scaled to maxval
/// (16-bit big-endian samples when maxval > 255).
void write_pgm(const std::filesystem::path& path, const Grid2D& image, unsigned maxval = 255);

/// Number of NaN or infinite entries.
std::size_t count_nonfinite(const Grid2D& map);

}  // namespace cfstereo
