#include "roadocc/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "roadocc/error.hpp"

namespace roadocc {
namespace {

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ImageBuffer decode_png(const std::vector<unsigned char>& bytes, const std::string& name) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    throw IoError(name + ": " + png.message);
  }
  png.format = PNG_FORMAT_RGB;
  std::vector<unsigned char> raw(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, raw.data(), 0, nullptr)) {
    png_image_free(&png);
    throw IoError(name + ": " + png.message);
  }
  ImageBuffer image(static_cast<int>(png.width), static_cast<int>(png.height));
  auto pixels = image.pixels();
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    pixels[i] = {raw[3 * i] / 255.0, raw[3 * i + 1] / 255.0, raw[3 * i + 2] / 255.0};
  }
  return image;
}

class PnmReader {
 public:
  PnmReader(const std::vector<unsigned char>& bytes, std::string name)
      : bytes_(bytes), name_(std::move(name)) {}

  long next_int() {
    skip_space_and_comments();
    long value = 0;
    bool any = false;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      any = true;
      if (value > 1'000'000'000) fail("header value out of range");
    }
    if (!any) fail("malformed header");
    return value;
  }

  std::string magic() {
    if (bytes_.size() < 2) fail("truncated header");
    pos_ = 2;
    return std::string(bytes_.begin(), bytes_.begin() + 2);
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) fail("malformed header");
    return pos_ + 1;
  }

  [[noreturn]] void fail(const std::string& what) const { throw IoError(name_ + ": " + what); }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

ImageBuffer decode_ppm(const std::vector<unsigned char>& bytes, const std::string& name) {
  PnmReader reader(bytes, name);
  if (reader.magic() != "P6") reader.fail("only binary PPM (P6) is supported");
  const long width = reader.next_int();
  const long height = reader.next_int();
  const long maxval = reader.next_int();
  if (width <= 0 || height <= 0) reader.fail("empty image");
  if (maxval != 255) reader.fail("only 8-bit PPM (maxval 255) is supported");
  const std::size_t offset = reader.raster_offset();
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < offset + 3 * count) reader.fail("truncated raster");
  ImageBuffer image(static_cast<int>(width), static_cast<int>(height));
  auto pixels = image.pixels();
  const unsigned char* raw = bytes.data() + offset;
  for (std::size_t i = 0; i < count; ++i) {
    pixels[i] = {raw[3 * i] / 255.0, raw[3 * i + 1] / 255.0, raw[3 * i + 2] / 255.0};
  }
  return image;
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

void write_file(const std::filesystem::path& path, const std::string& header,
                const std::vector<std::uint8_t>& raster) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << header;
  out.write(reinterpret_cast<const char*>(raster.data()),
            static_cast<std::streamsize>(raster.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

ImageBuffer load_image(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  static constexpr unsigned char kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(bytes.begin(), bytes.begin() + 8, kPngSignature)) {
    return decode_png(bytes, path.string());
  }
  if (bytes.size() >= 2 && bytes[0] == 'P') return decode_ppm(bytes, path.string());
  throw IoError(path.string() + ": unsupported image container");
}

void write_ppm(const std::filesystem::path& path, const ImageBuffer& image) {
  std::vector<std::uint8_t> raster;
  raster.reserve(image.size() * 3);
  for (const auto& p : image.pixels()) {
    raster.push_back(to_byte(p.r));
    raster.push_back(to_byte(p.g));
    raster.push_back(to_byte(p.b));
  }
  write_file(path,
             "P6\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) +
                 "\n255\n",
             raster);
}

void write_pgm(const std::filesystem::path& path, const LikelihoodMap& map) {
  std::vector<std::uint8_t> raster;
  raster.reserve(map.size());
  for (double v : map.values()) raster.push_back(to_byte(v));
  write_file(path,
             "P5\n" + std::to_string(map.width()) + " " + std::to_string(map.height()) +
                 "\n255\n",
             raster);
}

void write_pgm(const std::filesystem::path& path, const BinaryMask& mask) {
  std::vector<std::uint8_t> raster;
  raster.reserve(mask.size());
  for (auto bit : mask.bits()) raster.push_back(bit ? 255 : 0);
  write_file(path,
             "P5\n" + std::to_string(mask.width()) + " " + std::to_string(mask.height()) +
                 "\n255\n",
             raster);
}

}  // namespace roadocc
