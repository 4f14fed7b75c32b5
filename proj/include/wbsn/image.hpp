#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "wbsn/bytes.hpp"

namespace wbsn {

/// Row-major 8-bit grayscale raster. A 0×0 grid is representable so that
/// codec entry points can report EmptyImage rather than failing construction.
class ImageGrid {
 public:
  ImageGrid() = default;
  ImageGrid(std::uint32_t width, std::uint32_t height, std::vector<std::uint8_t> pixels);
  ImageGrid(std::uint32_t width, std::uint32_t height, std::uint8_t fill = 0);

  std::uint32_t width() const { return width_; }
  std::uint32_t height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::uint8_t at(std::uint32_t x, std::uint32_t y) const { return pixels_[std::size_t{y} * width_ + x]; }
  std::uint8_t& at(std::uint32_t x, std::uint32_t y) { return pixels_[std::size_t{y} * width_ + x]; }

  friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

 private:
  std::uint32_t width_ = 0;
  std::uint32_t height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Binary PGM ("P5", maxval 255). Writing always emits the canonical header
// "P5\n<w> <h>\n255\n" so that encode/decode round trips are byte-exact.
Bytes to_pgm(const ImageGrid& img);
ImageGrid parse_pgm(std::span<const std::uint8_t> data);

ImageGrid read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const ImageGrid& img);

// Raw row-major dump; dimensions come from elsewhere.
ImageGrid read_raw(const std::filesystem::path& path, std::uint32_t width, std::uint32_t height);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data);

}  // namespace wbsn
