#pragma once

// Red-band histogram and inflection search used to tighten the lower cloud
// threshold on heavily clouded scenes.

#include "cloudcomp/cloudmask.hpp"
#include "cloudcomp/parallel.hpp"
#include "cloudcomp/raster.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>

namespace cloudcomp {

struct BandHistogram {
  std::array<std::uint64_t, 256> counts{};
  std::uint64_t total = 0;

  void add(Dn d, std::uint64_t n = 1) {
    counts[d] += n;
    total += n;
  }
  /// Bin frequency in per-mille of `total` (0 for an empty histogram).
  double per_mille(Dn d) const;

  friend bool operator==(const BandHistogram&, const BandHistogram&) = default;
};

BandHistogram band_histogram(const MultibandImage& img, Band band, Partition part = {});

/// 256 lines of `dn,count`.
void write_histogram_csv(const BandHistogram& h, std::ostream& out);

struct InflectionParams {
  Dn start = 150;
  unsigned seg_width = 5;
  /// Per-mille of total pixels per DN.
  double slope_thresh = 1.0;
};

/// Splits [start, 255] into line segments [s, s + seg_width] and returns the
/// start DN of the first one whose rise, in per-mille per DN, exceeds the
/// threshold. Only segments ending at or before 255 are considered.
/// Throws std::invalid_argument for seg_width == 0.
std::optional<Dn> detect_inflection(const BandHistogram& h, const InflectionParams& params = {});

/// Bracket whose lower bound is the Red-band inflection when one exists
/// (and does not pass defaults.hi), else `defaults`.
CloudBracket adaptive_bracket(const MultibandImage& img, const CloudBracket& defaults,
                              const InflectionParams& params = {});

}  // namespace cloudcomp
