#pragma once

// Separable cubic-convolution resampling (Keys kernel, a = -0.5).
//
// Output sample (x', y') reads source position (x' / scale, y' / scale), so
// integer source positions are hit exactly at scale 1 and the output grid's
// origin coincides with the source origin. Taps beyond the border are
// clamped to the nearest edge sample.

#include "cloudcomp/raster.hpp"

#include <array>

namespace cloudcomp {

inline constexpr double kKeysA = -0.5;

/// Keys cubic convolution kernel value at distance `t`.
double keys_kernel(double t, double a = kKeysA);

/// The four tap weights for taps at offsets -1, 0, +1, +2 from floor(x),
/// given the fractional phase x - floor(x) in [0, 1).
std::array<double, 4> cubic_weights(double phase, double a = kKeysA);

/// round(n * scale), at least 1. Throws std::invalid_argument for scale <= 0
/// or a non-finite scale.
std::size_t scaled_extent(std::size_t n, double scale);

Grid<double> resample_cubic(const Grid<double>& src, double scale);

/// NDVI output is clamped to [-1, 1] since cubic overshoot would leave the
/// valid range next to sharp edges.
NdviRaster resample_cubic(const NdviRaster& src, double scale);

/// 8-bit output is rounded to nearest and clamped to [0, 255].
BandPlane resample_cubic(const BandPlane& src, double scale);

/// Resamples each band independently.
MultibandImage resample_cubic(const MultibandImage& src, double scale);

}  // namespace cloudcomp
