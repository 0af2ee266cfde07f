#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "mlrank/errors.hpp"
#include "mlrank/idx.hpp"
#include "mlrank/metrics.hpp"
#include "mlrank/synthgen.hpp"

using namespace mlrank;

namespace {

CanvasConfig small_canvas(mlrank::Setup setup, std::uint64_t seed = 1) {
  CanvasConfig cfg;
  cfg.canvas_size = 40;
  cfg.glyph_size = 10;
  cfg.min_digits = 1;
  cfg.max_digits = 4;
  cfg.setup = setup;
  cfg.seed = seed;
  return cfg;
}

double factor_of(const DigitFactor& d, mlrank::Setup s) { return ranks_by_scale(s) ? d.scale : d.brightness; }

// Positive ranks are 1..m and follow the named factor; every other class is 0.
void expect_rank_consistency(const GeneratedSample& s, Setup setup) {
  ASSERT_EQ(s.ranks.size(), CanvasConfig::kNumClasses);
  std::set<std::size_t> placed;
  Rank top = 0;
  for (const auto& d : s.digits) {
    placed.insert(d.digit);
    top = std::max(top, s.ranks[d.digit]);
  }
  ASSERT_EQ(placed.size(), s.digits.size()) << "digits must be unique";
  for (std::size_t c = 0; c < s.ranks.size(); ++c) {
    if (!placed.count(c)) EXPECT_EQ(s.ranks[c], 0);
  }
  std::set<Rank> used;
  for (const auto& d : s.digits) used.insert(s.ranks[d.digit]);
  EXPECT_EQ(used.size(), static_cast<std::size_t>(top));
  EXPECT_EQ(*used.begin(), 1);
  for (const auto& a : s.digits) {
    for (const auto& b : s.digits) {
      if (factor_of(a, setup) < factor_of(b, setup)) EXPECT_LT(s.ranks[a.digit], s.ranks[b.digit]);
      if (factor_of(a, setup) == factor_of(b, setup)) EXPECT_EQ(s.ranks[a.digit], s.ranks[b.digit]);
    }
  }
}

// Tie-corrected Spearman: Pearson correlation of fractional ranks.
double rank_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = fractional_ranks(a);
  const auto rb = fractional_ranks(b);
  const double n = static_cast<double>(ra.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    ma += ra[i] / n;
    mb += rb[i] / n;
  }
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("mlrank_synthgen_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Ranks, ScaleExample) {
  std::vector<DigitFactor> d(3);
  d[0].digit = 5; d[0].scale = 1.2;
  d[1].digit = 4; d[1].scale = 2.7;
  d[2].digit = 8; d[2].scale = 1.9;
  const RankVector r = ranks_from_factors(d, mlrank::Setup::scale);
  EXPECT_EQ(r, (RankVector{0, 0, 0, 0, 3, 1, 0, 0, 2, 0}));
}

TEST(Ranks, BrighterDigitOutranks) {
  std::vector<DigitFactor> d(2);
  d[0].digit = 1; d[0].brightness = 0.9;
  d[1].digit = 7; d[1].brightness = 0.1;
  const RankVector r = ranks_from_factors(d, mlrank::Setup::brightness);
  EXPECT_GT(r[1], r[7]);
  EXPECT_EQ(r[1], 2);
  EXPECT_EQ(r[7], 1);
}

TEST(Ranks, FeatureFactorsGiveAscendingRanks) {
  std::vector<DigitFactor> d(2);
  d[0].digit = 0; d[0].scale = 0.5;
  d[1].digit = 1; d[1].scale = 2.0;
  EXPECT_EQ(ranks_from_factors(d, mlrank::Setup::scale, 2), (RankVector{1, 2}));
}

TEST(Ranks, OutOfRangeClassThrows) {
  std::vector<DigitFactor> d(1);
  d[0].digit = 3;
  EXPECT_THROW(ranks_from_factors(d, mlrank::Setup::scale, 3), DimensionError);
}

TEST(SetupNames, StringRoundTrip) {
  for (mlrank::Setup s : {mlrank::Setup::scale, mlrank::Setup::brightness, mlrank::Setup::scale_mix, mlrank::Setup::brightness_mix}) {
    EXPECT_EQ(setup_from_string(to_string(s)), s);
  }
  for (ColorMode m : {ColorMode::gray, ColorMode::color}) EXPECT_EQ(color_mode_from_string(to_string(m)), m);
  EXPECT_THROW(setup_from_string("X"), DataError);
}

TEST(CanvasConfigTest, RejectsInvalidRanges) {
  CanvasConfig cfg;
  cfg.scale_range = {0.5, 2.0};
  EXPECT_THROW(cfg.validate(), DataError);
  cfg = CanvasConfig{};
  cfg.brightness_range = {0.0, 1.5};
  EXPECT_THROW(cfg.validate(), DataError);
  cfg = CanvasConfig{};
  cfg.max_digits = 11;
  EXPECT_THROW(cfg.validate(), DataError);
}

TEST(CanvasConfigTest, PlacementInfeasible) {
  CanvasConfig cfg;
  cfg.canvas_size = 30;
  cfg.glyph_size = 12;
  cfg.scale_range = {1.0, 3.0};
  try {
    generate_canvas_dataset(cfg, 1);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("placement infeasible"), std::string::npos);
  }
}

TEST(CanvasDataset, SameSeedIsBitIdentical) {
  const CanvasConfig cfg = small_canvas(mlrank::Setup::scale_mix, 9);
  const auto a = generate_canvas_dataset(cfg, 20);
  const auto b = generate_canvas_dataset(cfg, 20);
  ASSERT_EQ(a.size(), 20u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].pixels, b[i].pixels);
    EXPECT_EQ(a[i].ranks, b[i].ranks);
    ASSERT_EQ(a[i].digits.size(), b[i].digits.size());
    for (std::size_t j = 0; j < a[i].digits.size(); ++j) {
      EXPECT_EQ(a[i].digits[j].scale, b[i].digits[j].scale);
      EXPECT_EQ(a[i].digits[j].x, b[i].digits[j].x);
    }
  }
}

TEST(CanvasDataset, SplitsDrawDisjointStreams) {
  CanvasConfig cfg = small_canvas(mlrank::Setup::scale);
  const auto train = generate_canvas_dataset(cfg, 5);
  cfg.split = "test";
  const auto test = generate_canvas_dataset(cfg, 5);
  std::size_t same = 0;
  for (std::size_t i = 0; i < 5; ++i) same += train[i].pixels == test[i].pixels;
  EXPECT_EQ(same, 0u);
}

TEST(CanvasDataset, SamplesRespectTheConfig) {
  for (mlrank::Setup setup : {mlrank::Setup::scale, mlrank::Setup::brightness, mlrank::Setup::scale_mix, mlrank::Setup::brightness_mix}) {
    CanvasConfig cfg = small_canvas(setup, 3);
    cfg.min_digits = 2;
    const auto samples = generate_canvas_dataset(cfg, 200);
    std::set<std::size_t> counts;
    for (const auto& s : samples) {
      ASSERT_EQ(s.pixels.size(), cfg.feature_size());
      counts.insert(s.digits.size());
      EXPECT_GE(s.digits.size(), 2u);
      EXPECT_LE(s.digits.size(), 4u);
      for (double p : s.pixels) {
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
      }
      for (const auto& d : s.digits) {
        const double extent = static_cast<double>(cfg.glyph_size) * d.scale;
        EXPECT_GE(d.x, 0.0);
        EXPECT_GE(d.y, 0.0);
        EXPECT_LE(d.x + extent, static_cast<double>(cfg.canvas_size));
        EXPECT_LE(d.y + extent, static_cast<double>(cfg.canvas_size));
        if (setup == mlrank::Setup::scale) EXPECT_EQ(d.brightness, 1.0);
        if (setup == mlrank::Setup::brightness) EXPECT_EQ(d.scale, 2.0);
        if (setup != mlrank::Setup::scale) {
          EXPECT_GE(d.brightness, cfg.brightness_floor);
          EXPECT_LE(d.brightness, 1.0);
        }
        if (setup != mlrank::Setup::brightness) {
          EXPECT_GE(d.scale, 1.0);
          EXPECT_LE(d.scale, 3.0);
        }
        EXPECT_EQ(d.hue, 0.0);
      }
      expect_rank_consistency(s, setup);
    }
    EXPECT_EQ(counts, (std::set<std::size_t>{2, 3, 4}));
  }
}

TEST(CanvasDataset, ContinuousFactorsGiveTieFreeRanks) {
  const auto samples = generate_canvas_dataset(small_canvas(mlrank::Setup::brightness_mix, 4), 300);
  for (const auto& s : samples) {
    expect_rank_consistency(s, mlrank::Setup::brightness_mix);
    Rank top = 0;
    for (Rank r : s.ranks) top = std::max(top, r);
    EXPECT_EQ(static_cast<std::size_t>(top), s.digits.size());
  }
}

TEST(CanvasDataset, SingleFactorSetupsRankDensely) {
  for (mlrank::Setup setup : {mlrank::Setup::scale, mlrank::Setup::brightness}) {
    for (const auto& s : generate_canvas_dataset(small_canvas(setup, 5), 100)) {
      Rank top = 0;
      for (Rank r : s.ranks) top = std::max(top, r);
      EXPECT_EQ(static_cast<std::size_t>(top), s.digits.size());
    }
  }
}

TEST(CanvasDataset, MixUnlabeledFactorIsIndependentOfRanks) {
  for (mlrank::Setup setup : {mlrank::Setup::scale_mix, mlrank::Setup::brightness_mix}) {
    CanvasConfig cfg = small_canvas(setup, 6);
    cfg.max_digits = 3;
    const auto samples = generate_canvas_dataset(cfg, 1000);
    std::vector<double> rank, other;
    for (const auto& s : samples) {
      for (const auto& d : s.digits) {
        rank.push_back(static_cast<double>(s.ranks[d.digit]));
        other.push_back(ranks_by_scale(setup) ? d.brightness : d.scale);
      }
    }
    EXPECT_LE(std::abs(rank_correlation(rank, other)), 0.1) << to_string(setup);
  }
}

TEST(CanvasDataset, ColorModeDrawsHueAndTripleChannels) {
  CanvasConfig cfg = small_canvas(mlrank::Setup::brightness_mix, 7);
  cfg.color_mode = ColorMode::color;
  const auto samples = generate_canvas_dataset(cfg, 30);
  bool any_hue = false;
  for (const auto& s : samples) {
    EXPECT_EQ(s.pixels.size(), 40u * 40u * 3u);
    for (const auto& d : s.digits) {
      EXPECT_GE(d.hue, 0.0);
      EXPECT_LT(d.hue, 1.0);
      EXPECT_GE(d.saturation, 0.0);
      EXPECT_LT(d.saturation, 1.0);
      any_hue = any_hue || d.hue > 0.0;
    }
  }
  EXPECT_TRUE(any_hue);
}

TEST(Render, CompositingTakesPixelMaximum) {
  const CanvasConfig cfg = small_canvas(mlrank::Setup::scale_mix);
  const GlyphBank& glyphs = builtin_glyphs();
  DigitFactor a;
  a.digit = 3; a.scale = 2.0; a.brightness = 0.6; a.x = 5.0; a.y = 6.0;
  DigitFactor b;
  b.digit = 8; b.scale = 1.7; b.brightness = 0.9; b.x = 12.5; b.y = 9.25;
  const auto only_a = render_sample(cfg, glyphs, {a});
  const auto only_b = render_sample(cfg, glyphs, {b});
  const auto both = render_sample(cfg, glyphs, {a, b});
  std::size_t overlap = 0;
  for (std::size_t p = 0; p < both.pixels.size(); ++p) {
    EXPECT_EQ(both.pixels[p], std::max(only_a.pixels[p], only_b.pixels[p]));
    overlap += only_a.pixels[p] > 0.0 && only_b.pixels[p] > 0.0;
  }
  EXPECT_GT(overlap, 0u);
}

TEST(Render, BrightnessScalesIntensity) {
  const CanvasConfig cfg = small_canvas(mlrank::Setup::brightness);
  DigitFactor d;
  d.digit = 0; d.scale = 2.0; d.brightness = 1.0; d.x = 4.0; d.y = 4.0;
  const auto full = render_sample(cfg, builtin_glyphs(), {d});
  d.brightness = 0.25;
  const auto dim = render_sample(cfg, builtin_glyphs(), {d});
  double peak = 0.0;
  for (std::size_t p = 0; p < full.pixels.size(); ++p) {
    EXPECT_NEAR(dim.pixels[p], 0.25 * full.pixels[p], 1e-15);
    peak = std::max(peak, full.pixels[p]);
  }
  EXPECT_GT(peak, 0.5);
}

TEST(AdjustSequences, EndpointsMiddleAndCrossing) {
  CanvasConfig cfg = small_canvas(mlrank::Setup::scale, 8);
  const auto seqs = generate_adjust_sequences(cfg, 6, 5);
  ASSERT_EQ(seqs.size(), 6u);
  for (const auto& seq : seqs) {
    ASSERT_EQ(seq.size(), 5u);
    EXPECT_EQ(seq.front().digits[0].scale, 1.0);
    EXPECT_EQ(seq.front().digits[2].scale, 3.0);
    EXPECT_EQ(seq.back().digits[0].scale, 3.0);
    EXPECT_EQ(seq.back().digits[2].scale, 1.0);
    EXPECT_DOUBLE_EQ(seq[2].digits[0].scale, seq[2].digits[2].scale);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      EXPECT_EQ(seq[i].digits[1].scale, 2.0);
      for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(seq[i].digits[k].digit, seq[0].digits[k].digit);
        const double half_i = 0.5 * static_cast<double>(cfg.glyph_size) * seq[i].digits[k].scale;
        const double half_0 = 0.5 * static_cast<double>(cfg.glyph_size) * seq[0].digits[k].scale;
        EXPECT_NEAR(seq[i].digits[k].x + half_i, seq[0].digits[k].x + half_0, 1e-12);
        EXPECT_NEAR(seq[i].digits[k].y + half_i, seq[0].digits[k].y + half_0, 1e-12);
      }
      if (i > 0) {
        EXPECT_GT(seq[i].digits[0].scale, seq[i - 1].digits[0].scale);
        EXPECT_LT(seq[i].digits[2].scale, seq[i - 1].digits[2].scale);
      }
    }
  }
}

TEST(AdjustSequences, BrightnessSetupSweepsBrightness) {
  const auto seqs = generate_adjust_sequences(small_canvas(mlrank::Setup::brightness, 8), 2, 4);
  for (const auto& seq : seqs) {
    EXPECT_EQ(seq.front().digits[0].brightness, 0.05);
    EXPECT_EQ(seq.back().digits[0].brightness, 1.0);
    for (const auto& s : seq) EXPECT_EQ(s.digits[1].scale, s.digits[0].scale);
  }
}

TEST(AdjustSequences, Deterministic) {
  const CanvasConfig cfg = small_canvas(mlrank::Setup::scale, 8);
  const auto a = generate_adjust_sequences(cfg, 3, 4);
  const auto b = generate_adjust_sequences(cfg, 3, 4);
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(a[s][i].pixels, b[s][i].pixels);
  }
}

TEST(CalibrationSet, FourLevelsBijectivelyAssigned) {
  CanvasConfig cfg;
  cfg.setup = mlrank::Setup::scale;
  cfg.seed = 12;
  const auto samples = generate_calibration_set(cfg, 50);
  ASSERT_EQ(samples.size(), 50u);
  for (const auto& s : samples) {
    ASSERT_EQ(s.digits.size(), 4u);
    std::multiset<double> levels;
    std::size_t positives = 0;
    for (Rank r : s.ranks) positives += r > 0;
    EXPECT_EQ(positives, 4u);
    for (const auto& d : s.digits) {
      levels.insert(d.scale);
      const auto pos = std::find(std::begin(kCalibrationLevels), std::end(kCalibrationLevels), d.scale) -
                       std::begin(kCalibrationLevels);
      EXPECT_EQ(s.ranks[d.digit], static_cast<Rank>(pos + 1));
    }
    EXPECT_EQ(levels, (std::multiset<double>{1.0, 1.5, 2.0, 2.5}));
  }
  const auto again = generate_calibration_set(cfg, 50);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(samples[i].pixels, again[i].pixels);
}

TEST(CalibrationSet, RequiresScaleSetup) {
  CanvasConfig cfg;
  cfg.setup = mlrank::Setup::brightness;
  EXPECT_THROW(generate_calibration_set(cfg, 5), DataError);
}

TEST(SmallVariance, ScalesStayInNarrowRange) {
  CanvasConfig cfg = small_canvas(mlrank::Setup::scale_mix, 13);
  const auto samples = generate_small_variance_dataset(cfg, 100);
  for (const auto& s : samples) {
    for (const auto& d : s.digits) {
      EXPECT_GE(d.scale, 1.0);
      EXPECT_LE(d.scale, 1.5);
    }
    expect_rank_consistency(s, mlrank::Setup::scale_mix);
  }
  cfg.scale_range = {1.0, 1.5};
  const auto direct = generate_canvas_dataset(cfg, 100);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(samples[i].pixels, direct[i].pixels);
  cfg.setup = mlrank::Setup::brightness;
  EXPECT_THROW(generate_small_variance_dataset(cfg, 1), DataError);
}

TEST(FeatureDataset, NoiselessSingleClassIsFactorTimesDirection) {
  FeatureConfig cfg;
  cfg.num_classes = 4;
  cfg.dims = 9;
  cfg.noise = 0.0;
  cfg.factor_range = {1.75, 1.75};
  cfg.seed = 2;
  const auto dirs = feature_directions(cfg);
  const auto data = generate_feature_dataset(cfg, 200);
  std::size_t singles = 0;
  for (const auto& inst : data) {
    std::vector<std::size_t> present;
    for (std::size_t c = 0; c < 4; ++c) {
      if (inst.ranks[c] > 0) present.push_back(c);
    }
    if (present.size() != 1) continue;
    ++singles;
    for (std::size_t j = 0; j < cfg.dims; ++j) EXPECT_EQ(inst.features[j], 1.75 * dirs[present[0]][j]);
  }
  EXPECT_GT(singles, 10u);
}

TEST(FeatureDataset, LinearDirectionsAreUnitVectors) {
  FeatureConfig cfg;
  cfg.seed = 3;
  const auto dirs = feature_directions(cfg);
  ASSERT_EQ(dirs.size(), cfg.num_classes);
  for (const auto& d : dirs) {
    double n2 = 0.0;
    for (double v : d) n2 += v * v;
    EXPECT_NEAR(n2, 1.0, 1e-12);
  }
}

TEST(FeatureDataset, DecoupledDirectionsAreOrthonormal) {
  FeatureConfig cfg;
  cfg.encoding = FeatureEncoding::decoupled;
  cfg.seed = 4;
  const auto dirs = feature_directions(cfg);
  ASSERT_EQ(dirs.size(), 2 * cfg.num_classes);
  for (std::size_t a = 0; a < dirs.size(); ++a) {
    for (std::size_t b = 0; b < dirs.size(); ++b) {
      double dot = 0.0;
      for (std::size_t j = 0; j < cfg.dims; ++j) dot += dirs[a][j] * dirs[b][j];
      EXPECT_NEAR(dot, a == b ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(FeatureDataset, DecoupledSeparatesPresenceAndSignificance) {
  FeatureConfig cfg;
  cfg.encoding = FeatureEncoding::decoupled;
  cfg.noise = 0.0;
  cfg.seed = 5;
  const auto dirs = feature_directions(cfg);
  const double mid = cfg.factor_range.mid();
  for (const auto& inst : generate_feature_dataset(cfg, 100)) {
    for (std::size_t c = 0; c < cfg.num_classes; ++c) {
      double presence = 0.0, significance = 0.0;
      for (std::size_t j = 0; j < cfg.dims; ++j) {
        presence += inst.features[j] * dirs[c][j];
        significance += inst.features[j] * dirs[cfg.num_classes + c][j];
      }
      EXPECT_NEAR(presence, inst.ranks[c] > 0 ? 1.0 : 0.0, 1e-12);
      if (inst.ranks[c] == 0) EXPECT_NEAR(significance, 0.0, 1e-12);
      EXPECT_LE(std::abs(significance), cfg.factor_range.hi - mid + 1e-12);
    }
  }
}

TEST(FeatureDataset, DeterministicAndRankConsistent) {
  FeatureConfig cfg;
  cfg.seed = 6;
  const auto a = generate_feature_dataset(cfg, 300);
  const auto b = generate_feature_dataset(cfg, 300);
  std::size_t empty = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].features, b[i].features);
    EXPECT_EQ(a[i].ranks, b[i].ranks);
    std::set<Rank> used;
    Rank top = 0;
    for (Rank r : a[i].ranks) {
      if (r > 0) used.insert(r);
      top = std::max(top, r);
    }
    EXPECT_EQ(used.size(), static_cast<std::size_t>(top));
    empty += top == 0;
  }
  EXPECT_LT(empty, 20u);
  cfg.split = "test";
  const auto c = generate_feature_dataset(cfg, 1);
  EXPECT_NE(c[0].features, a[0].features);
}

TEST(FeatureDataset, RejectsTooFewDims) {
  FeatureConfig cfg;
  cfg.num_classes = 6;
  cfg.dims = 5;
  EXPECT_THROW(generate_feature_dataset(cfg, 1), DataError);
  cfg.dims = 8;
  cfg.encoding = FeatureEncoding::decoupled;
  EXPECT_THROW(feature_directions(cfg), DataError);
  EXPECT_EQ(feature_encoding_from_string("decoupled"), FeatureEncoding::decoupled);
  EXPECT_THROW(feature_encoding_from_string("cubic"), DataError);
}

TEST(Idx, RoundTripPreservesPixels) {
  const auto dir = temp_dir("roundtrip");
  IdxImages img;
  img.count = 20;
  img.rows = img.cols = 6;
  std::vector<std::uint8_t> labels;
  for (std::uint32_t i = 0; i < img.count * 36; ++i) img.pixels.push_back(static_cast<std::uint8_t>((i * 37) % 256));
  for (std::uint32_t i = 0; i < img.count; ++i) labels.push_back(static_cast<std::uint8_t>(i % 10));
  write_idx_images(dir / "img.idx", img);
  write_idx_labels(dir / "lab.idx", labels);
  const IdxImages back = read_idx_images(dir / "img.idx");
  EXPECT_EQ(back.count, img.count);
  EXPECT_EQ(back.rows, 6u);
  EXPECT_EQ(back.pixels, img.pixels);
  EXPECT_EQ(read_idx_labels(dir / "lab.idx"), labels);

  const GlyphBank bank = load_idx_glyphs(dir / "img.idx", dir / "lab.idx");
  EXPECT_TRUE(bank.complete());
  for (std::size_t d = 0; d < 10; ++d) {
    ASSERT_EQ(bank.by_digit[d].size(), 2u);
    const Glyph& g = bank.by_digit[d][1];
    const std::size_t image = d + 10;
    for (std::size_t p = 0; p < 36; ++p) EXPECT_EQ(g.pixels[p], img.pixels[image * 36 + p] / 255.0);
  }
}

TEST(Idx, TruncatedFileReportsOffset) {
  const auto dir = temp_dir("truncated");
  IdxImages img;
  img.count = 3;
  img.rows = img.cols = 4;
  img.pixels.assign(48, 9);
  write_idx_images(dir / "img.idx", img);
  std::filesystem::resize_file(dir / "img.idx", 16 + 30);
  try {
    read_idx_images(dir / "img.idx");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("truncated file at byte 16"), std::string::npos) << e.what();
  }
}

TEST(Idx, BadMagicAndMismatchedCounts) {
  const auto dir = temp_dir("magic");
  write_idx_labels(dir / "lab.idx", {1, 2, 3});
  EXPECT_THROW(read_idx_images(dir / "lab.idx"), DataError);
  IdxImages img;
  img.count = 2;
  img.rows = img.cols = 2;
  img.pixels.assign(8, 0);
  write_idx_images(dir / "img.idx", img);
  EXPECT_THROW(load_idx_glyphs(dir / "img.idx", dir / "lab.idx"), DataError);
  EXPECT_THROW(read_idx_images(dir / "missing.idx"), DataError);
}

TEST(Idx, IncompleteBankIsUnavailable) {
  const auto dir = temp_dir("incomplete");
  IdxImages img;
  img.count = 2;
  img.rows = img.cols = 28;
  img.pixels.assign(2 * 28 * 28, 200);
  write_idx_images(dir / "img.idx", img);
  write_idx_labels(dir / "lab.idx", {0, 1});
  CanvasConfig cfg;
  cfg.glyph_source = GlyphSource::idx_file;
  cfg.idx_images = dir / "img.idx";
  cfg.idx_labels = dir / "lab.idx";
  EXPECT_THROW(generate_canvas_dataset(cfg, 1), DataError);
}

TEST(Idx, CanvasFromIdxGlyphs) {
  const auto dir = temp_dir("canvas");
  IdxImages img;
  img.count = 20;
  img.rows = img.cols = 28;
  std::vector<std::uint8_t> labels;
  for (std::uint32_t i = 0; i < 20; ++i) {
    labels.push_back(static_cast<std::uint8_t>(i % 10));
    for (std::size_t p = 0; p < 28 * 28; ++p) img.pixels.push_back(static_cast<std::uint8_t>(p % 3 == 0 ? 255 : 0));
  }
  write_idx_images(dir / "img.idx", img);
  write_idx_labels(dir / "lab.idx", labels);
  CanvasConfig cfg = small_canvas(mlrank::Setup::scale_mix, 14);
  cfg.glyph_source = GlyphSource::idx_file;
  cfg.idx_images = dir / "img.idx";
  cfg.idx_labels = dir / "lab.idx";
  const auto samples = generate_canvas_dataset(cfg, 10);
  for (const auto& s : samples) {
    expect_rank_consistency(s, mlrank::Setup::scale_mix);
    EXPECT_GT(*std::max_element(s.pixels.begin(), s.pixels.end()), 0.0);
  }
}
