#pragma once

#include <cstdint>
#include <string>

#include "wbsn/image.hpp"

namespace wbsn {

enum class ImageKind { flat, gradient, blocks, noise };

ImageKind parse_image_kind(const std::string& name);
std::string image_kind_name(ImageKind kind);

struct BlocksLayout {
  std::uint32_t tiles = 4;      // distinct tile patterns
  std::uint32_t tile_size = 8;  // square tile edge in pixels
};

/// Deterministic test image standing in for a medical scan.
///   flat      one seeded gray level everywhere
///   gradient  diagonal ramp 0..255 with a seeded phase
///   blocks    grid of tiles, each cell a seeded pick among `tiles` random patterns
///   noise     uniform random pixels (incompressible control)
/// Throws Errc::InvalidDimensions for a zero dimension.
ImageGrid synth_image(ImageKind kind, std::uint32_t width, std::uint32_t height, std::uint64_t seed,
                      BlocksLayout layout = {});

}  // namespace wbsn
