#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mlrank/glyphs.hpp"
#include "mlrank/rank_model.hpp"

namespace mlrank {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  [[nodiscard]] double mid() const noexcept { return 0.5 * (lo + hi); }
};

enum class ColorMode { gray, color };

/// Which importance factor varies and which one the ranks follow.
/// S / B: only scale / brightness varies. Mixes vary both and rank by one.
enum class Setup { scale, brightness, scale_mix, brightness_mix };

enum class GlyphSource { builtin, idx_file };

std::string to_string(Setup s);
std::string to_string(ColorMode m);
Setup setup_from_string(const std::string& s);
ColorMode color_mode_from_string(const std::string& s);

[[nodiscard]] constexpr bool ranks_by_scale(Setup s) noexcept {
  return s == Setup::scale || s == Setup::scale_mix;
}

struct CanvasConfig {
  std::size_t canvas_size = 64;
  std::size_t glyph_size = 12;  // rendered glyph frame edge at scale 1, in pixels
  std::size_t min_digits = 1;
  std::size_t max_digits = 10;
  Interval scale_range{1.0, 3.0};
  Interval brightness_range{0.0, 1.0};
  double brightness_floor = 0.05;
  // value of the factor that does not vary in the S / B setups;
  // fixed_scale <= 0 means the midpoint of scale_range
  double fixed_scale = 0.0;
  double fixed_brightness = 1.0;
  ColorMode color_mode = ColorMode::gray;
  Setup setup = Setup::scale;
  GlyphSource glyph_source = GlyphSource::builtin;
  std::filesystem::path idx_images;
  std::filesystem::path idx_labels;
  std::uint64_t seed = 0;
  // sample stream name; different splits draw from disjoint seed streams
  std::string split = "train";

  static constexpr std::size_t kNumClasses = 10;

  [[nodiscard]] std::size_t channels() const noexcept { return color_mode == ColorMode::color ? 3 : 1; }
  [[nodiscard]] std::size_t feature_size() const noexcept {
    return canvas_size * canvas_size * channels();
  }
  /// Throws DataError on invalid ranges or infeasible placement.
  void validate() const;
};

/// Placement and appearance of one digit within a canvas.
struct DigitFactor {
  std::size_t digit = 0;
  double scale = 1.0;
  double brightness = 1.0;
  double hue = 0.0;
  double saturation = 0.0;
  double x = 0.0;  // top-left of the glyph frame, canvas pixels
  double y = 0.0;
};

struct GeneratedSample {
  std::vector<double> pixels;  // row-major, channels interleaved
  RankVector ranks;            // length 10, dense 1..m by the ranking factor
  std::vector<DigitFactor> digits;

  [[nodiscard]] RankedInstance instance() const { return {pixels, ranks}; }
};

/// Glyph bank for `cfg`: builtin, or loaded from the configured IDX files.
GlyphBank resolve_glyphs(const CanvasConfig& cfg);

/// Composites `digits` onto an empty canvas (per-pixel maximum) and assigns
/// ranks by the setup's importance factor. Digits pick glyph instance 0 for
/// builtin glyphs; `instance_choice` selects per digit for IDX banks.
GeneratedSample render_sample(const CanvasConfig& cfg, const GlyphBank& glyphs,
                              std::vector<DigitFactor> digits,
                              const std::vector<std::size_t>& instance_choice = {});

/// Dense ranks 1..m ascending by factor (equal factors share a rank) for the
/// given digits; every other class gets 0.
RankVector ranks_from_factors(const std::vector<DigitFactor>& digits, Setup setup,
                              std::size_t num_classes = CanvasConfig::kNumClasses);

std::vector<GeneratedSample> generate_canvas_dataset(const CanvasConfig& cfg, std::size_t n);

/// linear: a present class adds factor * direction.
/// decoupled: a present class adds a presence direction plus
/// (factor - mid) times a separate significance direction, all orthonormal,
/// so the class evidence carries no information about the order.
enum class FeatureEncoding { linear, decoupled };

std::string to_string(FeatureEncoding e);
FeatureEncoding feature_encoding_from_string(const std::string& s);

struct FeatureConfig {
  std::size_t num_classes = 6;
  std::size_t dims = 24;
  Interval factor_range{1.0, 3.0};
  double noise = 0.05;
  // class directions depend on the seed only, so every split shares them
  std::uint64_t seed = 0;
  std::string split = "train";
  FeatureEncoding encoding = FeatureEncoding::linear;

  [[nodiscard]] std::size_t direction_count() const noexcept {
    return encoding == FeatureEncoding::linear ? num_classes : 2 * num_classes;
  }
  void validate() const;
};

/// Random unit directions used by generate_feature_dataset: one per class,
/// or (decoupled) K presence directions followed by K significance ones.
std::vector<std::vector<double>> feature_directions(const FeatureConfig& cfg);

/// Each class is present with probability 1/2 and carries a factor drawn from
/// factor_range; features sum the present classes' encodings plus uniform
/// noise in [-noise, noise]; ranks follow the factors.
std::vector<RankedInstance> generate_feature_dataset(const FeatureConfig& cfg, std::size_t n);

/// Three digits per sequence: "low" sweeps its factor from the low to the
/// high level, "high" the reverse, "middle" stays put. digits[0..2] of every
/// sample are (low, middle, high); glyph centers stay fixed per sequence.
std::vector<std::vector<GeneratedSample>> generate_adjust_sequences(const CanvasConfig& cfg,
                                                                    std::size_t n_seq = 50,
                                                                    std::size_t steps = 50);

inline constexpr double kCalibrationLevels[4] = {1.0, 1.5, 2.0, 2.5};

/// Four digits per sample with the scales {1.0, 1.5, 2.0, 2.5} in random
/// assignment. Requires a scale-ranked setup.
std::vector<GeneratedSample> generate_calibration_set(const CanvasConfig& cfg, std::size_t n = 50);

/// generate_canvas_dataset with scale_range = [1, 1.5].
std::vector<GeneratedSample> generate_small_variance_dataset(CanvasConfig cfg, std::size_t n);

}  // namespace mlrank
