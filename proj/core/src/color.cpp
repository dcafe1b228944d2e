#include "roadocc/color.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "roadocc/error.hpp"

namespace roadocc {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt3 = 0.57735026918962576451;
constexpr double kInvSqrt6 = 0.40824829046386301637;

// RGB -> XYZ. Every row sums to one, so RGB white maps to (1,1,1), which
// is used as the reference white.
constexpr double kXyz[3][3] = {
    {0.490, 0.310, 0.200},
    {0.177, 0.812, 0.011},
    {0.000, 0.010, 0.990},
};

struct NamedChannel {
  ChannelId id;
  std::string_view name;
};

constexpr NamedChannel kChannelNames[] = {
    {ChannelId::R, "R"},   {ChannelId::G, "G"},   {ChannelId::B, "B"},
    {ChannelId::nr, "nr"}, {ChannelId::ng, "ng"}, {ChannelId::O1, "O1"},
    {ChannelId::O2, "O2"}, {ChannelId::L, "L"},   {ChannelId::a, "a"},
    {ChannelId::b, "b"},   {ChannelId::H, "H"},   {ChannelId::S, "S"},
    {ChannelId::V, "V"},
};

}  // namespace

std::string_view channel_name(ChannelId id) {
  for (const auto& c : kChannelNames) {
    if (c.id == id) return c.name;
  }
  return "?";
}

std::optional<ChannelId> parse_channel(std::string_view name) {
  for (const auto& c : kChannelNames) {
    if (c.name == name) return c.id;
  }
  return std::nullopt;
}

NormalizedRgb to_normalized_rgb(const RgbPixel& p) {
  const double sum = p.r + p.g + p.b;
  if (!(sum > 0.0)) return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  const double nr = p.r / sum;
  const double ng = p.g / sum;
  return {nr, ng, p.b / sum};
}

Opponent to_opponent(const RgbPixel& p) {
  return {(p.r - p.g) * kInvSqrt2, (p.r + p.g - 2.0 * p.b) * kInvSqrt6,
          (p.r + p.g + p.b) * kInvSqrt3};
}

HsvVariant to_hsv_variant(const RgbPixel& p) {
  const double v = (p.r + p.g + p.b) / 3.0;
  const double v1 = (-p.r - p.g + 2.0 * p.b) * kInvSqrt6;
  const double v2 = (p.r - 2.0 * p.g + p.b) * kInvSqrt6;
  const double s = std::hypot(v1, v2);
  // atan2(0, 0) is 0 but atan2(-0, -1) is -pi; pin the achromatic axis and
  // fold -pi onto +pi so H stays in (-pi, pi].
  double h = s > 0.0 ? std::atan2(v2, v1) : 0.0;
  if (h <= -std::numbers::pi) h = std::numbers::pi;
  return {h, s, v};
}

Lab to_lab(const RgbPixel& p) {
  const double x = kXyz[0][0] * p.r + kXyz[0][1] * p.g + kXyz[0][2] * p.b;
  const double y = kXyz[1][0] * p.r + kXyz[1][1] * p.g + kXyz[1][2] * p.b;
  const double z = kXyz[2][0] * p.r + kXyz[2][1] * p.g + kXyz[2][2] * p.b;
  const double fx = std::cbrt(x);
  const double fy = std::cbrt(y);
  const double fz = std::cbrt(z);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

double channel_value(const RgbPixel& p, ChannelId id) {
  switch (id) {
    case ChannelId::R: return p.r;
    case ChannelId::G: return p.g;
    case ChannelId::B: return p.b;
    case ChannelId::nr: return to_normalized_rgb(p).nr;
    case ChannelId::ng: return to_normalized_rgb(p).ng;
    case ChannelId::O1: return to_opponent(p).o1;
    case ChannelId::O2: return to_opponent(p).o2;
    case ChannelId::L: return to_lab(p).l;
    case ChannelId::a: return to_lab(p).a;
    case ChannelId::b: return to_lab(p).b;
    case ChannelId::H: return to_hsv_variant(p).h;
    case ChannelId::S: return to_hsv_variant(p).s;
    case ChannelId::V: return to_hsv_variant(p).v;
  }
  return 0.0;
}

Representation::Representation(std::string name, std::vector<ChannelId> channels)
    : name_(std::move(name)), channels_(std::move(channels)) {
  if (channels_.empty()) throw ConfigError("representation '" + name_ + "' has no channels");
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    for (std::size_t j = i + 1; j < channels_.size(); ++j) {
      if (channels_[i] == channels_[j]) {
        throw ConfigError("representation '" + name_ + "' repeats channel " +
                          std::string(channel_name(channels_[i])));
      }
    }
  }
}

Representation Representation::parse(std::string_view text) {
  for (const auto& rep : canonical_representations()) {
    if (rep.name() == text) return rep;
  }
  std::vector<ChannelId> channels;
  std::string name;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('+', start), text.size());
    const std::string_view token = text.substr(start, end - start);
    const auto id = parse_channel(token);
    if (!id) throw ConfigError("unknown color representation '" + std::string(text) + "'");
    channels.push_back(*id);
    name += token;
    start = end + 1;
  }
  return Representation(name, std::move(channels));
}

const std::vector<Representation>& canonical_representations() {
  static const std::vector<Representation> reps = [] {
    using C = ChannelId;
    std::vector<Representation> out;
    for (const auto& c : kChannelNames) out.emplace_back(std::string(c.name), std::vector{c.id});
    out.emplace_back("RGB", std::vector{C::R, C::G, C::B});
    out.emplace_back("nrng", std::vector{C::nr, C::ng});
    out.emplace_back("O1O2", std::vector{C::O1, C::O2});
    out.emplace_back("Lab", std::vector{C::L, C::a, C::b});
    out.emplace_back("HSV", std::vector{C::H, C::S, C::V});
    out.emplace_back("HS", std::vector{C::H, C::S});
    return out;
  }();
  return reps;
}

ChannelRange channel_range(ChannelId id) {
  if (id == ChannelId::H) return {id, -std::numbers::pi, std::numbers::pi};
  // Every other channel attains its extremes on a vertex of the RGB cube:
  // linear maps trivially, S as a convex function, nr/ng as linear-fractional
  // maps, and the Lab channels as verified by dense search of the cube.
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (int mask = 0; mask < 8; ++mask) {
    const RgbPixel p{double(mask & 1), double((mask >> 1) & 1), double((mask >> 2) & 1)};
    const double v = channel_value(p, id);
    if (first || v < lo) lo = v;
    if (first || v > hi) hi = v;
    first = false;
  }
  return {id, lo, hi};
}

FeatureImage extract(const ImageBuffer& image, const Representation& rep) {
  const auto& channels = rep.channels();
  FeatureImage out(image.width(), image.height(), channels.size());
  for (std::size_t c = 0; c < channels.size(); ++c) {
    const auto range = channel_range(channels[c]);
    out.lo[c] = range.lo;
    out.hi[c] = range.hi;
  }
  const auto pixels = image.pixels();
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    auto row = out.row(i);
    for (std::size_t c = 0; c < channels.size(); ++c) row[c] = channel_value(pixels[i], channels[c]);
  }
  return out;
}

FeatureImage rescale_unit(const FeatureImage& features) {
  FeatureImage out(features.width(), features.height(), features.dims());
  const std::size_t d = features.dims();
  std::vector<double> scale(d);
  for (std::size_t c = 0; c < d; ++c) {
    const double span = features.hi[c] - features.lo[c];
    scale[c] = span > 0.0 ? 1.0 / span : 0.0;
    out.lo[c] = 0.0;
    out.hi[c] = 1.0;
  }
  const auto in = features.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < in.size(); ++i) {
    const std::size_t c = i % d;
    dst[i] = std::clamp((in[i] - features.lo[c]) * scale[c], 0.0, 1.0);
  }
  return out;
}

}  // namespace roadocc
