#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mlrank/glyphs.hpp"

namespace mlrank {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

struct IdxImages {
  std::uint32_t count = 0;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::uint8_t> pixels;  // count * rows * cols
};

// Parse failures raise DataError naming the byte offset.
IdxImages read_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path);

void write_idx_images(const std::filesystem::path& path, const IdxImages& images);
void write_idx_labels(const std::filesystem::path& path, const std::vector<std::uint8_t>& labels);

/// Square images with matching labels 0..9, normalized to [0, 1].
GlyphBank load_idx_glyphs(const std::filesystem::path& images_path,
                          const std::filesystem::path& labels_path);

}  // namespace mlrank
