#include "cloudcomp/resample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cloudcomp {

namespace {

struct Taps {
  std::array<std::size_t, 4> index;
  std::array<double, 4> weight;
};

// Precomputed taps for every output position along one axis.
std::vector<Taps> axis_taps(std::size_t src_n, std::size_t dst_n, double scale) {
  std::vector<Taps> taps(dst_n);
  const auto last = static_cast<std::ptrdiff_t>(src_n) - 1;
  for (std::size_t o = 0; o < dst_n; ++o) {
    const double pos = static_cast<double>(o) / scale;
    const double base = std::floor(pos);
    taps[o].weight = cubic_weights(pos - base);
    for (int k = 0; k < 4; ++k) {
      const auto i = static_cast<std::ptrdiff_t>(base) + k - 1;
      taps[o].index[k] = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, last));
    }
  }
  return taps;
}

template <class T, class Convert>
Grid<T> resample_as(const Grid<T>& src, double scale, Convert&& convert) {
  const Size out{scaled_extent(src.width(), scale), scaled_extent(src.height(), scale)};
  const auto xt = axis_taps(src.width(), out.width, scale);
  const auto yt = axis_taps(src.height(), out.height, scale);

  // Horizontal pass: src.height rows of out.width.
  std::vector<double> rows(src.height() * out.width);
  for (std::size_t y = 0; y < src.height(); ++y)
    for (std::size_t x = 0; x < out.width; ++x) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += xt[x].weight[k] * static_cast<double>(src.at(xt[x].index[k], y));
      rows[y * out.width + x] = acc;
    }

  Grid<T> dst(out, src.date());
  for (std::size_t y = 0; y < out.height; ++y)
    for (std::size_t x = 0; x < out.width; ++x) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += yt[y].weight[k] * rows[yt[y].index[k] * out.width + x];
      dst.at(x, y) = convert(acc);
    }
  return dst;
}

}  // namespace

double keys_kernel(double t, double a) {
  t = std::abs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

std::array<double, 4> cubic_weights(double phase, double a) {
  return {keys_kernel(1.0 + phase, a), keys_kernel(phase, a), keys_kernel(1.0 - phase, a),
          keys_kernel(2.0 - phase, a)};
}

std::size_t scaled_extent(std::size_t n, double scale) {
  if (!std::isfinite(scale) || scale <= 0.0) throw std::invalid_argument("resample scale must be positive and finite");
  const double r = std::round(static_cast<double>(n) * scale);
  if (r > 1e8) throw std::invalid_argument("resampled extent too large");
  return std::max<std::size_t>(1, static_cast<std::size_t>(r));
}

Grid<double> resample_cubic(const Grid<double>& src, double scale) {
  return resample_as(src, scale, [](double v) { return v; });
}

NdviRaster resample_cubic(const NdviRaster& src, double scale) {
  return resample_as(src, scale, [](double v) { return static_cast<float>(std::clamp(v, -1.0, 1.0)); });
}

BandPlane resample_cubic(const BandPlane& src, double scale) {
  return resample_as(src, scale, [](double v) { return static_cast<Dn>(std::clamp(std::round(v), 0.0, 255.0)); });
}

MultibandImage resample_cubic(const MultibandImage& src, double scale) {
  const Size out{scaled_extent(src.width(), scale), scaled_extent(src.height(), scale)};
  std::vector<Dn> samples;
  samples.reserve(3 * out.area());
  for (Band b : {Band::Swir, Band::Nir, Band::Red}) {
    const auto plane = src.band(b);
    const BandPlane resampled = resample_cubic(BandPlane(src.size(), src.date(), std::vector<Dn>(plane.begin(), plane.end())), scale);
    samples.insert(samples.end(), resampled.values().begin(), resampled.values().end());
  }
  return MultibandImage(out, src.date(), std::move(samples));
}

}  // namespace cloudcomp
