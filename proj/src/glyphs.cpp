#include "mlrank/glyphs.hpp"

#include <algorithm>
#include <cmath>

namespace mlrank {

namespace {

struct Point {
  double x;
  double y;
};

using Stroke = std::vector<Point>;

// cos/sin of whole degrees by Taylor series, evaluated at compile time so the
// glyph shapes do not depend on the platform's libm.
constexpr double kPi = 3.14159265358979323846;

constexpr double taylor_cos(double x) {
  double term = 1.0, sum = 1.0;
  for (int n = 1; n < 20; ++n) {
    term *= -x * x / ((2.0 * n - 1.0) * (2.0 * n));
    sum += term;
  }
  return sum;
}

constexpr double taylor_sin(double x) {
  double term = x, sum = x;
  for (int n = 1; n < 20; ++n) {
    term *= -x * x / ((2.0 * n) * (2.0 * n + 1.0));
    sum += term;
  }
  return sum;
}

struct TrigTable {
  std::array<double, 360> cos{};
  std::array<double, 360> sin{};
};

constexpr TrigTable make_trig_table() {
  TrigTable t;
  for (int d = 0; d < 360; ++d) {
    // reduce to [-180, 180) before expanding
    const double r = (d < 180 ? d : d - 360) * kPi / 180.0;
    t.cos[static_cast<std::size_t>(d)] = taylor_cos(r);
    t.sin[static_cast<std::size_t>(d)] = taylor_sin(r);
  }
  return t;
}

constexpr TrigTable kTrig = make_trig_table();

// Elliptic arc in glyph space (y grows downward), angles in degrees,
// sampled every 10 degrees from `from` to `to`.
Stroke arc(double cx, double cy, double rx, double ry, int from, int to) {
  Stroke s;
  const int step = to >= from ? 10 : -10;
  for (int a = from;; a += step) {
    if ((step > 0 && a > to) || (step < 0 && a < to)) a = to;
    const auto idx = static_cast<std::size_t>(((a % 360) + 360) % 360);
    s.push_back({cx + rx * kTrig.cos[idx], cy + ry * kTrig.sin[idx]});
    if (a == to) break;
  }
  return s;
}

std::vector<Stroke> digit_strokes(int digit) {
  switch (digit) {
    case 0:
      return {arc(0.5, 0.5, 0.42, 0.5, 0, 360)};
    case 1:
      return {{{0.3, 0.2}, {0.55, 0.0}, {0.55, 1.0}}};
    case 2:
      return {arc(0.5, 0.27, 0.42, 0.27, 180, 380),
              {{0.85, 0.42}, {0.08, 1.0}, {0.95, 1.0}}};
    case 3:
      return {arc(0.48, 0.25, 0.4, 0.25, 200, 450), arc(0.48, 0.74, 0.45, 0.26, 270, 520)};
    case 4:
      return {{{0.72, 1.0}, {0.72, 0.0}, {0.05, 0.68}, {0.98, 0.68}}};
    case 5: {
      Stroke top{{0.92, 0.0}, {0.15, 0.0}, {0.1, 0.45}};
      return {top, arc(0.5, 0.68, 0.43, 0.32, 220, 510)};
    }
    case 6:
      return {arc(0.5, 0.7, 0.43, 0.3, 0, 360), arc(0.5, 0.7, 0.43, 0.68, 290, 180)};
    case 7:
      return {{{0.05, 0.0}, {0.95, 0.0}, {0.38, 1.0}}};
    case 8:
      return {arc(0.5, 0.24, 0.34, 0.24, 0, 360), arc(0.5, 0.74, 0.42, 0.26, 0, 360)};
    default:
      return {arc(0.5, 0.3, 0.42, 0.3, 0, 360), {{0.92, 0.3}, {0.85, 0.65}, {0.6, 1.0}}};
  }
}

double segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = p.x - (a.x + t * dx);
  const double ey = p.y - (a.y + t * dy);
  return std::sqrt(ex * ex + ey * ey);
}

Glyph rasterize(const std::vector<Stroke>& strokes) {
  constexpr std::size_t n = kGlyphResolution;
  // content box inside the 28x28 frame, MNIST-like padding
  constexpr double left = 7.0, top = 4.0, width = 14.0, height = 20.0;
  constexpr double radius = 1.3;

  std::vector<Stroke> px = strokes;
  for (auto& s : px) {
    for (auto& p : s) p = {left + p.x * width, top + p.y * height};
  }
  Glyph g{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const Point p{static_cast<double>(c) + 0.5, static_cast<double>(r) + 0.5};
      double d = 1e9;
      for (const auto& s : px) {
        for (std::size_t i = 0; i + 1 < s.size(); ++i) d = std::min(d, segment_distance(p, s[i], s[i + 1]));
      }
      g.pixels[r * n + c] = std::clamp(radius + 0.5 - d, 0.0, 1.0);
    }
  }
  return g;
}

}  // namespace

const GlyphBank& builtin_glyphs() {
  static const GlyphBank bank = [] {
    GlyphBank b;
    for (int d = 0; d < 10; ++d) b.by_digit[static_cast<std::size_t>(d)].push_back(rasterize(digit_strokes(d)));
    return b;
  }();
  return bank;
}

double sample_bilinear(const Glyph& g, double row, double col) noexcept {
  const double y = row - 0.5;
  const double x = col - 0.5;
  const double fy = std::floor(y);
  const double fx = std::floor(x);
  const double wy = y - fy;
  const double wx = x - fx;
  const auto n = static_cast<long>(g.size);
  auto px = [&](long r, long c) -> double {
    if (r < 0 || c < 0 || r >= n || c >= n) return 0.0;
    return g.pixels[static_cast<std::size_t>(r * n + c)];
  };
  const auto r0 = static_cast<long>(fy);
  const auto c0 = static_cast<long>(fx);
  return (1.0 - wy) * ((1.0 - wx) * px(r0, c0) + wx * px(r0, c0 + 1)) +
         wy * ((1.0 - wx) * px(r0 + 1, c0) + wx * px(r0 + 1, c0 + 1));
}

}  // namespace mlrank
