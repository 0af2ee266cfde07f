#include "mlrank/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlrank/errors.hpp"
#include "mlrank/idx.hpp"
#include "mlrank/rng.hpp"

namespace mlrank {

std::string to_string(Setup s) {
  switch (s) {
    case Setup::scale: return "S";
    case Setup::brightness: return "B";
    case Setup::scale_mix: return "S-mix";
    case Setup::brightness_mix: return "B-mix";
  }
  return "S";
}

std::string to_string(ColorMode m) { return m == ColorMode::color ? "color" : "gray"; }

Setup setup_from_string(const std::string& s) {
  if (s == "S") return Setup::scale;
  if (s == "B") return Setup::brightness;
  if (s == "S-mix") return Setup::scale_mix;
  if (s == "B-mix") return Setup::brightness_mix;
  throw DataError("unknown setup '" + s + "' (expected S, B, S-mix or B-mix)");
}

ColorMode color_mode_from_string(const std::string& s) {
  if (s == "gray") return ColorMode::gray;
  if (s == "color") return ColorMode::color;
  throw DataError("unknown color mode '" + s + "'");
}

namespace {

bool varies_scale(Setup s) { return s != Setup::brightness; }
bool varies_brightness(Setup s) { return s != Setup::scale; }

double resolved_fixed_scale(const CanvasConfig& cfg) {
  return cfg.fixed_scale > 0.0 ? cfg.fixed_scale : cfg.scale_range.mid();
}

Interval effective_brightness(const CanvasConfig& cfg) {
  return {std::max(cfg.brightness_range.lo, cfg.brightness_floor), cfg.brightness_range.hi};
}

double max_scale(const CanvasConfig& cfg) {
  return varies_scale(cfg.setup) ? cfg.scale_range.hi : resolved_fixed_scale(cfg);
}

void hsv_to_rgb(double h, double s, double v, double rgb[3]) {
  const double h6 = (h - std::floor(h)) * 6.0;
  const int sector = std::min(static_cast<int>(h6), 5);
  const double f = h6 - sector;
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - s * f);
  const double t = v * (1.0 - s * (1.0 - f));
  switch (sector) {
    case 0: rgb[0] = v; rgb[1] = t; rgb[2] = p; break;
    case 1: rgb[0] = q; rgb[1] = v; rgb[2] = p; break;
    case 2: rgb[0] = p; rgb[1] = v; rgb[2] = t; break;
    case 3: rgb[0] = p; rgb[1] = q; rgb[2] = v; break;
    case 4: rgb[0] = t; rgb[1] = p; rgb[2] = v; break;
    default: rgb[0] = v; rgb[1] = p; rgb[2] = q; break;
  }
}

void composite(const CanvasConfig& cfg, const Glyph& glyph, const DigitFactor& d,
               std::vector<double>& pixels) {
  const auto n = static_cast<long>(cfg.canvas_size);
  const double extent = static_cast<double>(cfg.glyph_size) * d.scale;
  const double unit = static_cast<double>(glyph.size) / extent;
  const long r0 = std::max(0L, static_cast<long>(std::floor(d.y)));
  const long c0 = std::max(0L, static_cast<long>(std::floor(d.x)));
  const long r1 = std::min(n, static_cast<long>(std::ceil(d.y + extent)));
  const long c1 = std::min(n, static_cast<long>(std::ceil(d.x + extent)));
  const std::size_t ch = cfg.channels();
  for (long r = r0; r < r1; ++r) {
    for (long c = c0; c < c1; ++c) {
      const double ink = sample_bilinear(glyph, (static_cast<double>(r) + 0.5 - d.y) * unit,
                                         (static_cast<double>(c) + 0.5 - d.x) * unit);
      if (ink <= 0.0) continue;
      const double v = ink * d.brightness;
      const auto base = static_cast<std::size_t>(r * n + c) * ch;
      if (ch == 1) {
        pixels[base] = std::max(pixels[base], v);
      } else {
        double rgb[3];
        hsv_to_rgb(d.hue, d.saturation, v, rgb);
        for (std::size_t k = 0; k < 3; ++k) pixels[base + k] = std::max(pixels[base + k], rgb[k]);
      }
    }
  }
}

// Appearance draws shared by every generator. Colors are drawn in color mode
// only.
void draw_color(const CanvasConfig& cfg, Rng& rng, DigitFactor& d) {
  if (cfg.color_mode == ColorMode::color) {
    d.hue = rng.uniform();
    d.saturation = rng.uniform();
  }
}

std::vector<std::size_t> draw_instances(const GlyphBank& glyphs, const std::vector<DigitFactor>& digits,
                                        Rng& rng) {
  std::vector<std::size_t> choice(digits.size(), 0);
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const std::size_t pool = glyphs.by_digit[digits[i].digit].size();
    if (pool > 1) choice[i] = static_cast<std::size_t>(rng.uniform_int(0, pool - 1));
  }
  return choice;
}

std::uint64_t stream_seed(std::uint64_t seed, const std::string& stream) {
  return derive_seed(seed, stream);
}

}  // namespace

void CanvasConfig::validate() const {
  if (canvas_size == 0 || glyph_size == 0) throw DataError("canvas config: zero size");
  if (min_digits < 1 || max_digits > kNumClasses || min_digits > max_digits) {
    throw DataError("canvas config: digit count range must lie within 1..10");
  }
  if (scale_range.lo < 1.0 || scale_range.hi < scale_range.lo) {
    throw DataError("canvas config: scale range must satisfy 1 <= lo <= hi");
  }
  if (brightness_range.lo < 0.0 || brightness_range.hi > 1.0 ||
      brightness_range.hi < brightness_range.lo) {
    throw DataError("canvas config: brightness range must lie within [0, 1]");
  }
  if (brightness_floor < 0.0 || brightness_floor > brightness_range.hi) {
    throw DataError("canvas config: brightness floor outside the brightness range");
  }
  if (static_cast<double>(glyph_size) * max_scale(*this) > static_cast<double>(canvas_size)) {
    throw DataError("placement infeasible");
  }
}

GlyphBank resolve_glyphs(const CanvasConfig& cfg) {
  if (cfg.glyph_source == GlyphSource::builtin) return builtin_glyphs();
  GlyphBank bank = load_idx_glyphs(cfg.idx_images, cfg.idx_labels);
  if (!bank.complete()) throw DataError("glyph source unavailable: IDX files lack some digit classes");
  return bank;
}

RankVector ranks_from_factors(const std::vector<DigitFactor>& digits, Setup setup, std::size_t num_classes) {
  auto factor = [&](const DigitFactor& d) { return ranks_by_scale(setup) ? d.scale : d.brightness; };
  std::vector<double> levels;
  for (const auto& d : digits) levels.push_back(factor(d));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  RankVector ranks(num_classes, 0);
  for (const auto& d : digits) {
    if (d.digit >= num_classes) throw DimensionError("factor class index out of range");
    const auto pos = std::lower_bound(levels.begin(), levels.end(), factor(d)) - levels.begin();
    ranks[d.digit] = static_cast<Rank>(pos + 1);
  }
  return ranks;
}

GeneratedSample render_sample(const CanvasConfig& cfg, const GlyphBank& glyphs,
                              std::vector<DigitFactor> digits,
                              const std::vector<std::size_t>& instance_choice) {
  GeneratedSample s;
  s.pixels.assign(cfg.feature_size(), 0.0);
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const auto& pool = glyphs.by_digit.at(digits[i].digit);
    if (pool.empty()) throw DataError("glyph source unavailable for digit " + std::to_string(digits[i].digit));
    const std::size_t which = i < instance_choice.size() ? instance_choice[i] : 0;
    composite(cfg, pool.at(which), digits[i], s.pixels);
  }
  s.ranks = ranks_from_factors(digits, cfg.setup);
  s.digits = std::move(digits);
  return s;
}

std::vector<GeneratedSample> generate_canvas_dataset(const CanvasConfig& cfg, std::size_t n) {
  cfg.validate();
  const GlyphBank glyphs = resolve_glyphs(cfg);
  Rng rng(stream_seed(cfg.seed, cfg.split));
  const Interval bright = effective_brightness(cfg);
  const double canvas = static_cast<double>(cfg.canvas_size);

  std::vector<GeneratedSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto count = static_cast<std::size_t>(rng.uniform_int(cfg.min_digits, cfg.max_digits));
    std::vector<DigitFactor> digits;
    for (std::size_t digit : rng.sample_distinct(CanvasConfig::kNumClasses, count)) {
      DigitFactor d;
      d.digit = digit;
      d.scale = varies_scale(cfg.setup) ? rng.uniform(cfg.scale_range.lo, cfg.scale_range.hi)
                                        : resolved_fixed_scale(cfg);
      d.brightness = varies_brightness(cfg.setup) ? rng.uniform(bright.lo, bright.hi) : cfg.fixed_brightness;
      draw_color(cfg, rng, d);
      const double extent = static_cast<double>(cfg.glyph_size) * d.scale;
      d.x = rng.uniform(0.0, canvas - extent);
      d.y = rng.uniform(0.0, canvas - extent);
      digits.push_back(d);
    }
    const auto choice = draw_instances(glyphs, digits, rng);
    out.push_back(render_sample(cfg, glyphs, std::move(digits), choice));
  }
  return out;
}

std::string to_string(FeatureEncoding e) { return e == FeatureEncoding::linear ? "linear" : "decoupled"; }

FeatureEncoding feature_encoding_from_string(const std::string& s) {
  if (s == "linear") return FeatureEncoding::linear;
  if (s == "decoupled") return FeatureEncoding::decoupled;
  throw DataError("unknown feature encoding '" + s + "' (expected linear or decoupled)");
}

void FeatureConfig::validate() const {
  if (num_classes == 0) throw DataError("feature dataset: no classes");
  if (dims < direction_count()) {
    throw DataError("feature dataset: dims must be >= " + std::to_string(direction_count()) + " for the " +
                    to_string(encoding) + " encoding");
  }
  if (!(factor_range.lo <= factor_range.hi)) throw DataError("feature dataset: empty factor range");
  if (!(noise >= 0.0)) throw DataError("feature dataset: noise must be non-negative");
}

std::vector<std::vector<double>> feature_directions(const FeatureConfig& cfg) {
  cfg.validate();
  Rng rng(stream_seed(cfg.seed, "directions"));
  const bool orthogonal = cfg.encoding == FeatureEncoding::decoupled;
  std::vector<std::vector<double>> dirs;
  while (dirs.size() < cfg.direction_count()) {
    std::vector<double> dir(cfg.dims);
    for (auto& v : dir) v = rng.uniform(-1.0, 1.0);
    if (orthogonal) {
      for (const auto& prev : dirs) {
        double dot = 0.0;
        for (std::size_t j = 0; j < cfg.dims; ++j) dot += dir[j] * prev[j];
        for (std::size_t j = 0; j < cfg.dims; ++j) dir[j] -= dot * prev[j];
      }
    }
    double norm2 = 0.0;
    for (double v : dir) norm2 += v * v;
    if (norm2 < 1e-6) continue;  // nearly dependent draw; redraw
    const double norm = std::sqrt(norm2);
    for (auto& v : dir) v /= norm;
    dirs.push_back(std::move(dir));
  }
  return dirs;
}

std::vector<RankedInstance> generate_feature_dataset(const FeatureConfig& cfg, std::size_t n) {
  const auto dirs = feature_directions(cfg);
  const std::size_t k = cfg.num_classes;
  const double mid = cfg.factor_range.mid();
  Rng rng(stream_seed(cfg.seed, cfg.split));

  std::vector<RankedInstance> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RankedInstance inst{std::vector<double>(cfg.dims, 0.0), RankVector(k, 0)};
    std::vector<DigitFactor> present;
    for (std::size_t c = 0; c < k; ++c) {
      if ((rng.next_u64() >> 63) == 0) continue;
      const double f = rng.uniform(cfg.factor_range.lo, cfg.factor_range.hi);
      if (cfg.encoding == FeatureEncoding::linear) {
        for (std::size_t j = 0; j < cfg.dims; ++j) inst.features[j] += f * dirs[c][j];
      } else {
        for (std::size_t j = 0; j < cfg.dims; ++j) inst.features[j] += dirs[c][j] + (f - mid) * dirs[k + c][j];
      }
      DigitFactor d;
      d.digit = c;
      d.scale = f;
      present.push_back(d);
    }
    if (cfg.noise > 0.0) {
      for (auto& v : inst.features) v += rng.uniform(-cfg.noise, cfg.noise);
    }
    inst.ranks = ranks_from_factors(present, Setup::scale, k);
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<std::vector<GeneratedSample>> generate_adjust_sequences(const CanvasConfig& cfg,
                                                                    std::size_t n_seq,
                                                                    std::size_t steps) {
  cfg.validate();
  const GlyphBank glyphs = resolve_glyphs(cfg);
  Rng rng(stream_seed(cfg.seed, "adjust"));
  const bool sweep_scale = ranks_by_scale(cfg.setup);
  const Interval sweep = sweep_scale ? cfg.scale_range : effective_brightness(cfg);
  const double canvas = static_cast<double>(cfg.canvas_size);
  const double biggest =
      static_cast<double>(cfg.glyph_size) * (sweep_scale ? cfg.scale_range.hi : resolved_fixed_scale(cfg));

  std::vector<std::vector<GeneratedSample>> out;
  out.reserve(n_seq);
  for (std::size_t s = 0; s < n_seq; ++s) {
    const auto picked = rng.sample_distinct(CanvasConfig::kNumClasses, 3);
    std::vector<DigitFactor> base(3);
    double cx[3], cy[3];
    for (std::size_t k = 0; k < 3; ++k) {
      base[k].digit = picked[k];
      base[k].scale = resolved_fixed_scale(cfg);
      base[k].brightness = cfg.fixed_brightness;
      draw_color(cfg, rng, base[k]);
      cx[k] = rng.uniform(0.5 * biggest, canvas - 0.5 * biggest);
      cy[k] = rng.uniform(0.5 * biggest, canvas - 0.5 * biggest);
    }
    const auto choice = draw_instances(glyphs, base, rng);

    std::vector<GeneratedSample> seq;
    seq.reserve(steps);
    for (std::size_t i = 0; i < steps; ++i) {
      const double t = steps > 1 ? static_cast<double>(i) / static_cast<double>(steps - 1) : 0.0;
      const double levels[3] = {sweep.lo + (sweep.hi - sweep.lo) * t, sweep.mid(),
                                sweep.hi - (sweep.hi - sweep.lo) * t};
      std::vector<DigitFactor> digits = base;
      for (std::size_t k = 0; k < 3; ++k) {
        (sweep_scale ? digits[k].scale : digits[k].brightness) = levels[k];
        const double extent = static_cast<double>(cfg.glyph_size) * digits[k].scale;
        digits[k].x = cx[k] - 0.5 * extent;
        digits[k].y = cy[k] - 0.5 * extent;
      }
      seq.push_back(render_sample(cfg, glyphs, std::move(digits), choice));
    }
    out.push_back(std::move(seq));
  }
  return out;
}

std::vector<GeneratedSample> generate_calibration_set(const CanvasConfig& cfg, std::size_t n) {
  if (!ranks_by_scale(cfg.setup)) throw DataError("calibration set requires a scale setup");
  CanvasConfig c = cfg;
  c.scale_range = {1.0, std::max(cfg.scale_range.hi, kCalibrationLevels[3])};
  c.validate();
  const GlyphBank glyphs = resolve_glyphs(c);
  Rng rng(stream_seed(cfg.seed, "calibration"));
  const double canvas = static_cast<double>(c.canvas_size);

  std::vector<GeneratedSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto picked = rng.sample_distinct(CanvasConfig::kNumClasses, 4);
    std::vector<std::size_t> level(4);
    std::iota(level.begin(), level.end(), 0);
    rng.shuffle(std::span<std::size_t>(level));
    std::vector<DigitFactor> digits(4);
    for (std::size_t k = 0; k < 4; ++k) {
      digits[k].digit = picked[k];
      digits[k].scale = kCalibrationLevels[level[k]];
      digits[k].brightness = cfg.fixed_brightness;
      draw_color(c, rng, digits[k]);
      const double extent = static_cast<double>(c.glyph_size) * digits[k].scale;
      digits[k].x = rng.uniform(0.0, canvas - extent);
      digits[k].y = rng.uniform(0.0, canvas - extent);
    }
    const auto choice = draw_instances(glyphs, digits, rng);
    out.push_back(render_sample(c, glyphs, std::move(digits), choice));
  }
  return out;
}

std::vector<GeneratedSample> generate_small_variance_dataset(CanvasConfig cfg, std::size_t n) {
  if (!ranks_by_scale(cfg.setup)) throw DataError("small-variance dataset requires a scale setup");
  cfg.scale_range = {1.0, 1.5};
  return generate_canvas_dataset(cfg, n);
}

}  // namespace mlrank
