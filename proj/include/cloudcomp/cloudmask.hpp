#pragma once

#include "cloudcomp/parallel.hpp"
#include "cloudcomp/raster.hpp"

#include <string_view>

namespace cloudcomp {

/// Inclusive Red-band DN interval that may contain cloud.
class CloudBracket {
public:
  constexpr CloudBracket() = default;
  /// Throws std::invalid_argument unless lo <= hi (both are 8-bit already).
  CloudBracket(Dn lo, Dn hi);

  constexpr Dn lo() const { return lo_; }
  constexpr Dn hi() const { return hi_; }
  constexpr bool contains(Dn red) const { return red >= lo_ && red <= hi_; }

  friend constexpr bool operator==(const CloudBracket&, const CloudBracket&) = default;

private:
  Dn lo_ = 150;
  Dn hi_ = 255;
};

/// Parses "lo:hi", e.g. "150:255". Throws std::invalid_argument.
CloudBracket parse_bracket(std::string_view text);
std::string to_string(const CloudBracket& b);

inline constexpr Dn kFillZero = 0;
inline constexpr Dn kFillSaturate = 255;

/// Cloud when Red falls inside the bracket and Red is not below SWIR. The
/// SWIR test screens out bright fallow land, where SWIR exceeds Red.
constexpr bool is_cloud(const Pixel& p, const CloudBracket& b) {
  return b.contains(p.red) && p.red >= p.swir;
}

/// Recodes every cloud pixel to (fill, fill, fill). `fill` must be 0 (masked
/// max compositing) or 255 (hybrid compositing); anything else throws
/// std::invalid_argument.
MultibandImage mask_clouds(const MultibandImage& img, const CloudBracket& b, Dn fill, Partition part = {});

double cloud_fraction(const MultibandImage& img, const CloudBracket& b);

}  // namespace cloudcomp
