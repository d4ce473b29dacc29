#pragma once

#include "cloudcomp/parallel.hpp"
#include "cloudcomp/raster.hpp"

#include <array>
#include <cstdint>
#include <optional>

namespace cloudcomp {

/// Upper (exclusive) NDVI bounds of the water, cloud, fallow and moderate
/// slices; dense takes the rest up to 1.
class ClassBreaks {
public:
  constexpr ClassBreaks() = default;
  /// Throws std::invalid_argument unless strictly ascending within [-1, 1].
  ClassBreaks(double water_hi, double cloud_hi, double fallow_hi, double moderate_hi);

  constexpr double water_hi() const { return water_hi_; }
  constexpr double cloud_hi() const { return cloud_hi_; }
  constexpr double fallow_hi() const { return fallow_hi_; }
  constexpr double moderate_hi() const { return moderate_hi_; }

private:
  double water_hi_ = 0.0;
  double cloud_hi_ = 0.09;
  double fallow_hi_ = 0.25;
  double moderate_hi_ = 0.5;
};

/// (nir - red) / (nir + red); 0 when both are 0.
float ndvi_value(const Pixel& p);

NdviRaster ndvi(const MultibandImage& img, Partition part = {});

/// Slices one value. Lower bounds are inclusive. In hybrid mode only an exact
/// 0 is cloud and (0, cloud_hi) becomes fallow.
LandClass classify_value(double v, const ClassBreaks& breaks, bool hybrid_mode);

ClassMap classify(const NdviRaster& nv, const ClassBreaks& breaks, bool hybrid_mode, Partition part = {});

using ClassCounts = std::array<std::uint64_t, kClassCount>;

ClassCounts class_histogram(const ClassMap& cm, Partition part = {});

struct NdviSummary {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::uint64_t count = 0;
};

/// Statistics over pixels classed moderate or dense; nullopt when there are
/// none. Throws DimensionMismatch if the rasters differ in extent.
std::optional<NdviSummary> ndvi_stats(const NdviRaster& nv, const ClassMap& cm, Partition part = {});

}  // namespace cloudcomp
