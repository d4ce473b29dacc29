#pragma once

// Deterministic synthetic scenes and cloudy stacks with exact ground truth.
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by
// the C++ standard. Values are derived from raw engine output by the helpers
// in Rng (never by std:: distributions, which differ between standard
// libraries), so a given seed yields the same files everywhere.

#include "cloudcomp/cloudmask.hpp"
#include "cloudcomp/raster.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>

namespace cloudcomp {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, n); n must be > 0. Rejection sampling, unbiased.
  std::uint64_t below(std::uint64_t n);
  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  /// Uniform double in [0, 1) from the top 53 bits.
  double unit();
  bool chance(double p) { return unit() < p; }

private:
  std::mt19937_64 engine_;
};

struct DnRange {
  Dn lo = 0;
  Dn hi = 0;
  friend constexpr bool operator==(const DnRange&, const DnRange&) = default;
};

struct Signature {
  DnRange swir;
  DnRange nir;
  DnRange red;
};

struct SceneSpec {
  Size size{256, 256};
  std::uint64_t seed = 1;
  Date date = std::chrono::year{2008} / std::chrono::May / 15;
  /// Number of Voronoi cells the land-cover layout is built from.
  std::size_t regions = 32;

  double water = 0.15;
  double fallow = 0.35;
  double moderate = 0.30;
  double dense = 0.20;
  /// Fallow whose Red overlaps the cloud bracket but whose SWIR exceeds Red.
  double bright_fallow = 0.0;

  Signature water_sig{{1, 6}, {2, 7}, {8, 18}};
  Signature fallow_sig{{90, 130}, {80, 92}, {60, 66}};
  Signature moderate_sig{{50, 80}, {90, 118}, {40, 50}};
  Signature dense_sig{{30, 60}, {100, 160}, {20, 30}};
  Signature bright_fallow_sig{{205, 240}, {205, 240}, {150, 200}};

  /// Throws std::invalid_argument when fractions do not sum to 1, a range is
  /// inverted, vegetation has NIR <= RED somewhere in range, water is not
  /// strictly NIR < RED, or any signature could satisfy is_cloud under the
  /// default bracket.
  void validate() const;
};

struct CloudSpec {
  /// Clouds present on each day.
  std::size_t count = 6;
  std::size_t radius_min = 6;
  std::size_t radius_max = 20;
  /// Probability that a cloud stays in place from one day to the next;
  /// otherwise it is replaced by a fresh random cloud.
  double persistence = 0.0;

  DnRange red{160, 255};
  /// Upper end is additionally clipped to the pixel's Red DN.
  DnRange swir{100, 255};
  DnRange nir{150, 255};

  bool shadows = false;
  int shadow_dx = 6;
  int shadow_dy = 4;
  double shadow_factor = 0.6;

  /// Maximum per-day misregistration in pixels. The first day is the
  /// registration master and is never shifted.
  unsigned jitter = 0;

  /// Throws std::invalid_argument unless every cloud sample satisfies
  /// is_cloud under the default bracket and the geometry is valid.
  void validate() const;
};

struct GroundTruth {
  MultibandImage base;
  MaskStack clouds;
  MaskStack shadows;

  std::size_t days() const { return clouds.layers(); }
  /// True if the site is cloud-free on at least one day.
  bool has_clear_day(std::size_t index) const;
};

struct GeneratedStack {
  ImageStack stack;
  GroundTruth truth;
};

MultibandImage gen_base_scene(const SceneSpec& spec);

/// Day i is dated base.date() + i days. Throws std::invalid_argument for
/// days == 0 or an invalid CloudSpec.
GeneratedStack gen_cloudy_stack(const MultibandImage& base, std::size_t days, const CloudSpec& cs,
                                std::uint64_t seed);

struct CompositeScore {
  /// Among sites clouded on at least one day, share not cloud-marked in the composite.
  double recovered_fraction = 0.0;
  /// Share of all sites that had a clear day yet are cloud-marked in the composite.
  double residual_cloud_fraction = 0.0;
  /// Share of all sites equal to the base pixel.
  double exact_match_fraction = 0.0;
};

/// A composite pixel is cloud-marked when it is (0, 0, 0) or satisfies
/// is_cloud under `b`. Throws DimensionMismatch.
CompositeScore score_composite(const MultibandImage& composite, const GroundTruth& gt, const CloudBracket& b = {});

/// Everything `gen` needs: scene, clouds, number of days and the stack seed.
struct GenConfig {
  SceneSpec scene;
  CloudSpec clouds;
  std::size_t days = 7;
  std::uint64_t stack_seed = 2;
};

/// Plain-text `key = value` lines; `#` starts a comment. Unknown keys and
/// malformed values throw Error naming the line. See README for the keys.
GenConfig parse_gen_config(std::istream& in);
GenConfig load_gen_config(const std::filesystem::path& path);

}  // namespace cloudcomp
