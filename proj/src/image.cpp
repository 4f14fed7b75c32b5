#include "wbsn/image.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

namespace wbsn {

ImageGrid::ImageGrid(std::uint32_t width, std::uint32_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != std::size_t{width} * height) {
    throw Error(Errc::InvalidDimensions, std::to_string(width) + "x" + std::to_string(height) + " grid given " +
                                             std::to_string(pixels_.size()) + " pixels");
  }
}

ImageGrid::ImageGrid(std::uint32_t width, std::uint32_t height, std::uint8_t fill)
    : width_(width), height_(height), pixels_(std::size_t{width} * height, fill) {}

Bytes to_pgm(const ImageGrid& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  Bytes out(header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

namespace {

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::span<const std::uint8_t> data, std::size_t& pos) {
  for (;;) {
    while (pos < data.size() && std::isspace(data[pos])) ++pos;
    if (pos < data.size() && data[pos] == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  std::string tok;
  while (pos < data.size() && !std::isspace(data[pos]) && data[pos] != '#') tok.push_back(static_cast<char>(data[pos++]));
  if (tok.empty()) throw Error(Errc::BadFile, "PGM header ends early");
  return tok;
}

std::uint32_t pgm_number(std::span<const std::uint8_t> data, std::size_t& pos, const char* what) {
  const std::string tok = pgm_token(data, pos);
  if (tok.size() > 9 || tok.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(Errc::BadFile, std::string("PGM ") + what + " is not a number: " + tok);
  }
  return static_cast<std::uint32_t>(std::stoul(tok));
}

}  // namespace

ImageGrid parse_pgm(std::span<const std::uint8_t> data) {
  std::size_t pos = 0;
  if (pgm_token(data, pos) != "P5") throw Error(Errc::BadFile, "not a binary PGM (P5)");
  const auto width = pgm_number(data, pos, "width");
  const auto height = pgm_number(data, pos, "height");
  const auto maxval = pgm_number(data, pos, "maxval");
  if (maxval != 255) throw Error(Errc::BadFile, "only maxval 255 is supported, got " + std::to_string(maxval));
  if (width == 0 || height == 0) throw Error(Errc::InvalidDimensions, "PGM has a zero dimension");
  if (pos >= data.size() || !std::isspace(data[pos])) throw Error(Errc::BadFile, "PGM header not terminated");
  ++pos;
  const std::size_t n = std::size_t{width} * height;
  if (data.size() - pos != n) {
    throw Error(Errc::BadFile, "PGM raster holds " + std::to_string(data.size() - pos) + " bytes, expected " +
                                   std::to_string(n));
  }
  return ImageGrid(width, height, std::vector<std::uint8_t>(data.begin() + static_cast<std::ptrdiff_t>(pos), data.end()));
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::BadFile, "cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::BadFile, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(Errc::BadFile, "short write to " + path.string());
}

ImageGrid read_pgm(const std::filesystem::path& path) { return parse_pgm(read_file(path)); }

void write_pgm(const std::filesystem::path& path, const ImageGrid& img) { write_file(path, to_pgm(img)); }

ImageGrid read_raw(const std::filesystem::path& path, std::uint32_t width, std::uint32_t height) {
  if (width == 0 || height == 0) throw Error(Errc::InvalidDimensions, "raw image needs positive width and height");
  return ImageGrid(width, height, read_file(path));
}

}  // namespace wbsn
