#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roadocc/image.hpp"

namespace roadocc {

/// The thirteen color planes evaluated by the benchmark.
enum class ChannelId { R, G, B, nr, ng, O1, O2, L, a, b, H, S, V };

inline constexpr std::array<ChannelId, 13> kAllChannels = {
    ChannelId::R,  ChannelId::G,  ChannelId::B, ChannelId::nr, ChannelId::ng,
    ChannelId::O1, ChannelId::O2, ChannelId::L, ChannelId::a,  ChannelId::b,
    ChannelId::H,  ChannelId::S,  ChannelId::V};

std::string_view channel_name(ChannelId id);
std::optional<ChannelId> parse_channel(std::string_view name);

struct NormalizedRgb {
  double nr, ng, nb;
};

struct Opponent {
  double o1, o2, o3;
};

/// Hue/saturation/value from the opponent-style V, V1, V2 matrix.
/// H is in radians, (-pi, pi]. This is not hexcone HSV.
struct HsvVariant {
  double h, s, v;
};

struct Lab {
  double l, a, b;
};

/// nr+ng+nb = 1; black maps to (1/3, 1/3, 1/3).
NormalizedRgb to_normalized_rgb(const RgbPixel& p);
Opponent to_opponent(const RgbPixel& p);
HsvVariant to_hsv_variant(const RgbPixel& p);
/// Pure cube-root CIE Lab with white point (1,1,1); black gives L = -16.
Lab to_lab(const RgbPixel& p);

double channel_value(const RgbPixel& p, ChannelId id);

/// Ordered, duplicate-free list of channels.
class Representation {
 public:
  Representation(std::string name, std::vector<ChannelId> channels);

  /// Accepts canonical names ("HS", "nrng", "O1O2", "R", ...) and
  /// '+'-joined channel lists ("O1+O2+L").
  static Representation parse(std::string_view text);

  const std::string& name() const noexcept { return name_; }
  const std::vector<ChannelId>& channels() const noexcept { return channels_; }
  std::size_t dims() const noexcept { return channels_.size(); }

  bool operator==(const Representation& other) const {
    return channels_ == other.channels_;
  }

 private:
  std::string name_;
  std::vector<ChannelId> channels_;
};

/// The 13 single planes followed by RGB, nrng, O1O2, Lab, HSV, HS.
const std::vector<Representation>& canonical_representations();

struct ChannelRange {
  ChannelId channel;
  double lo;
  double hi;
};

/// Tight bounds of a channel over RGB in [0,1]^3.
ChannelRange channel_range(ChannelId id);

/// Converts every pixel into rep's channels, in order. Column bounds are
/// taken from channel_range.
FeatureImage extract(const ImageBuffer& image, const Representation& rep);

/// Affinely maps each column from [lo, hi] to [0, 1].
FeatureImage rescale_unit(const FeatureImage& features);

}  // namespace roadocc
