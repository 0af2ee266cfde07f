#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace mlrank {

/// Square grayscale bitmap, intensities in [0, 1], row-major.
struct Glyph {
  std::size_t size = 0;
  std::vector<double> pixels;

  [[nodiscard]] double at(std::size_t row, std::size_t col) const { return pixels[row * size + col]; }
};

/// Glyph images keyed by digit class 0..9.
struct GlyphBank {
  std::array<std::vector<Glyph>, 10> by_digit;

  [[nodiscard]] bool complete() const noexcept {
    for (const auto& g : by_digit) {
      if (g.empty()) return false;
    }
    return true;
  }
};

inline constexpr std::size_t kGlyphResolution = 28;

/// Ten stroke-drawn digits rasterized at kGlyphResolution, one per class.
const GlyphBank& builtin_glyphs();

/// Bilinear sample of `g` at fractional source coordinates (pixel centers at
/// integer + 0.5); zero outside the bitmap.
double sample_bilinear(const Glyph& g, double row, double col) noexcept;

}  // namespace mlrank
