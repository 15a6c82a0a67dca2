#ifndef ARFEX_IMAGE_IO_HPP
#define ARFEX_IMAGE_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "arfex/image.hpp"

namespace arfex {

/// Binary PPM (P5 or P6, maxval 255).
RasterImage decode_ppm(std::string_view bytes);
std::string encode_ppm(const RasterImage& img);

/// Reads a PPM or PNG file, chosen by its magic bytes.
/// Throws IoError when the file cannot be read, ParseError when it is malformed.
RasterImage read_image(const std::filesystem::path& path);

/// Writes a binary P6 PPM.
void write_ppm(const std::filesystem::path& path, const RasterImage& img);

}  // namespace arfex

#endif  // ARFEX_IMAGE_IO_HPP
