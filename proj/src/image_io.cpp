#include "arfex/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

namespace arfex {
namespace {

class PpmHeaderReader {
 public:
  explicit PpmHeaderReader(std::string_view bytes) : bytes_(bytes) {}

  std::string token() {
    skip_space_and_comments();
    std::string out;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      out.push_back(bytes_[pos_++]);
    }
    if (out.empty()) throw Error(ErrorKind::ParseError, "truncated PPM header");
    return out;
  }

  int integer() {
    const std::string t = token();
    for (char ch : t) {
      if (!std::isdigit(static_cast<unsigned char>(ch))) {
        throw Error(ErrorKind::ParseError, "bad PPM header field '" + t + "'");
      }
    }
    if (t.size() > 9) throw Error(ErrorKind::ParseError, "PPM header value too large");
    return std::stoi(t);
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw Error(ErrorKind::ParseError, "missing separator after PPM header");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  return data;
}

RasterImage decode_png(const std::string& bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw Error(ErrorKind::ParseError, std::string("PNG: ") + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&image);
    throw Error(ErrorKind::ParseError, std::string("PNG: ") + image.message);
  }
  const int width = static_cast<int>(image.width);
  const int height = static_cast<int>(image.height);
  std::vector<Rgb> pixels(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    pixels[i] = Rgb{buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2]};
  }
  return RasterImage(width, height, std::move(pixels));
}

}  // namespace

RasterImage decode_ppm(std::string_view bytes) {
  PpmHeaderReader header(bytes);
  const std::string magic = header.token();
  if (magic != "P5" && magic != "P6") {
    throw Error(ErrorKind::ParseError, "unsupported PPM magic '" + magic + "'");
  }
  const int width = header.integer();
  const int height = header.integer();
  const int maxval = header.integer();
  if (width < 1 || height < 1) throw Error(ErrorKind::ParseError, "PPM has zero size");
  if (maxval != 255) throw Error(ErrorKind::ParseError, "PPM maxval must be 255");

  const std::size_t channels = magic == "P6" ? 3 : 1;
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  const std::size_t offset = header.raster_offset();
  if (bytes.size() < offset + count * channels) {
    throw Error(ErrorKind::ParseError, "truncated PPM raster");
  }

  std::vector<Rgb> pixels(count);
  const auto* raster = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
  for (std::size_t i = 0; i < count; ++i) {
    if (channels == 3) {
      pixels[i] = Rgb{raster[3 * i], raster[3 * i + 1], raster[3 * i + 2]};
    } else {
      pixels[i] = Rgb{raster[i], raster[i], raster[i]};
    }
  }
  return RasterImage(width, height, std::move(pixels));
}

std::string encode_ppm(const RasterImage& img) {
  std::ostringstream out;
  out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
  std::string data = out.str();
  data.reserve(data.size() + img.pixels().size() * 3);
  for (const Rgb& p : img.pixels()) {
    data.push_back(static_cast<char>(p.r));
    data.push_back(static_cast<char>(p.g));
    data.push_back(static_cast<char>(p.b));
  }
  return data;
}

RasterImage read_image(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  static constexpr unsigned char kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngMagic, 8) == 0) {
    return decode_png(bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P') return decode_ppm(bytes);
  throw Error(ErrorKind::ParseError, "unrecognized image format: " + path.string());
}

void write_ppm(const std::filesystem::path& path, const RasterImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  const std::string data = encode_ppm(img);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
}

}  // namespace arfex
