#include "wbsn/synth_image.hpp"

#include <algorithm>

#include "wbsn/error.hpp"
#include "wbsn/rng.hpp"

namespace wbsn {

ImageKind parse_image_kind(const std::string& name) {
  if (name == "flat") return ImageKind::flat;
  if (name == "gradient") return ImageKind::gradient;
  if (name == "blocks") return ImageKind::blocks;
  if (name == "noise") return ImageKind::noise;
  throw Error(Errc::InvalidParameters, "unknown image kind '" + name + "'");
}

std::string image_kind_name(ImageKind kind) {
  switch (kind) {
    case ImageKind::flat: return "flat";
    case ImageKind::gradient: return "gradient";
    case ImageKind::blocks: return "blocks";
    case ImageKind::noise: return "noise";
  }
  return "unknown";
}

ImageGrid synth_image(ImageKind kind, std::uint32_t width, std::uint32_t height, std::uint64_t seed,
                      BlocksLayout layout) {
  if (width == 0 || height == 0) {
    throw Error(Errc::InvalidDimensions, std::to_string(width) + "x" + std::to_string(height));
  }
  Rng rng(seed);
  ImageGrid img(width, height);
  switch (kind) {
    case ImageKind::flat: {
      const auto level = static_cast<std::uint8_t>(rng.below(256));
      for (std::uint32_t y = 0; y < height; ++y)
        for (std::uint32_t x = 0; x < width; ++x) img.at(x, y) = level;
      break;
    }
    case ImageKind::gradient: {
      const auto phase = rng.below(256);
      const std::uint64_t span = std::max<std::uint64_t>(1, std::uint64_t{width} + height - 2);
      for (std::uint32_t y = 0; y < height; ++y)
        for (std::uint32_t x = 0; x < width; ++x)
          img.at(x, y) = static_cast<std::uint8_t>(((std::uint64_t{x} + y) * 255 / span + phase) % 256);
      break;
    }
    case ImageKind::blocks: {
      if (layout.tiles == 0 || layout.tile_size == 0) throw Error(Errc::InvalidParameters, "blocks layout needs tiles and a tile size");
      const std::size_t area = std::size_t{layout.tile_size} * layout.tile_size;
      std::vector<std::vector<std::uint8_t>> tiles;
      while (tiles.size() < layout.tiles) {
        std::vector<std::uint8_t> t(area);
        for (auto& p : t) p = static_cast<std::uint8_t>(rng.below(256));
        if (std::find(tiles.begin(), tiles.end(), t) == tiles.end()) tiles.push_back(std::move(t));
      }
      const std::uint32_t cols = (width + layout.tile_size - 1) / layout.tile_size;
      const std::uint32_t rows = (height + layout.tile_size - 1) / layout.tile_size;
      for (std::uint32_t ty = 0; ty < rows; ++ty) {
        for (std::uint32_t tx = 0; tx < cols; ++tx) {
          const auto& t = tiles[rng.below(tiles.size())];
          for (std::uint32_t dy = 0; dy < layout.tile_size; ++dy) {
            for (std::uint32_t dx = 0; dx < layout.tile_size; ++dx) {
              const auto x = tx * layout.tile_size + dx, y = ty * layout.tile_size + dy;
              if (x < width && y < height) img.at(x, y) = t[std::size_t{dy} * layout.tile_size + dx];
            }
          }
        }
      }
      break;
    }
    case ImageKind::noise:
      for (std::uint32_t y = 0; y < height; ++y)
        for (std::uint32_t x = 0; x < width; ++x) img.at(x, y) = static_cast<std::uint8_t>(rng.below(256));
      break;
  }
  return img;
}

}  // namespace wbsn
