#include "cloudcomp/vegindex.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace cloudcomp {

ClassBreaks::ClassBreaks(double water_hi, double cloud_hi, double fallow_hi, double moderate_hi)
    : water_hi_(water_hi), cloud_hi_(cloud_hi), fallow_hi_(fallow_hi), moderate_hi_(moderate_hi) {
  if (!(-1.0 <= water_hi && water_hi < cloud_hi && cloud_hi < fallow_hi && fallow_hi < moderate_hi &&
        moderate_hi <= 1.0))
    throw std::invalid_argument("class breaks must be strictly ascending within [-1, 1]");
}

float ndvi_value(const Pixel& p) {
  const int sum = int{p.nir} + int{p.red};
  if (sum == 0) return 0.0f;
  return static_cast<float>(static_cast<double>(int{p.nir} - int{p.red}) / static_cast<double>(sum));
}

NdviRaster ndvi(const MultibandImage& img, Partition part) {
  NdviRaster out(img.size(), img.date());
  auto values = out.values();
  for_each_chunk(img.pixel_count(), part, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) values[i] = ndvi_value(img.pixel(i));
  });
  return out;
}

LandClass classify_value(double v, const ClassBreaks& breaks, bool hybrid_mode) {
  if (v < breaks.water_hi()) return LandClass::Water;
  if (hybrid_mode) {
    if (v == breaks.water_hi()) return LandClass::Cloud;
  } else if (v < breaks.cloud_hi()) {
    return LandClass::Cloud;
  }
  if (v < breaks.fallow_hi()) return LandClass::Fallow;
  if (v < breaks.moderate_hi()) return LandClass::Moderate;
  return LandClass::Dense;
}

ClassMap classify(const NdviRaster& nv, const ClassBreaks& breaks, bool hybrid_mode, Partition part) {
  ClassMap out(nv.size(), nv.date());
  auto codes = out.values();
  const auto values = nv.values();
  for_each_chunk(values.size(), part, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) codes[i] = classify_value(values[i], breaks, hybrid_mode);
  });
  return out;
}

ClassCounts class_histogram(const ClassMap& cm, Partition part) {
  const auto codes = cm.values();
  std::vector<ClassCounts> partial(chunk_count(codes.size(), part), ClassCounts{});
  for_each_chunk(codes.size(), part, [&](std::size_t begin, std::size_t end, std::size_t k) {
    for (std::size_t i = begin; i < end; ++i) ++partial[k][static_cast<std::size_t>(codes[i])];
  });
  ClassCounts total{};
  for (const auto& p : partial)
    for (std::size_t c = 0; c < kClassCount; ++c) total[c] += p[c];
  return total;
}

std::optional<NdviSummary> ndvi_stats(const NdviRaster& nv, const ClassMap& cm, Partition part) {
  if (nv.size() != cm.size())
    throw DimensionMismatch("NDVI raster is " + to_string(nv.size()) + " but class map is " + to_string(cm.size()));
  struct Acc {
    double sum = 0.0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    std::uint64_t count = 0;
  };
  const auto values = nv.values();
  const auto codes = cm.values();
  std::vector<Acc> partial(chunk_count(values.size(), part));
  for_each_chunk(values.size(), part, [&](std::size_t begin, std::size_t end, std::size_t k) {
    Acc& a = partial[k];
    for (std::size_t i = begin; i < end; ++i) {
      if (codes[i] != LandClass::Moderate && codes[i] != LandClass::Dense) continue;
      const double v = values[i];
      a.sum += v;
      a.min = std::min(a.min, v);
      a.max = std::max(a.max, v);
      ++a.count;
    }
  });
  Acc total;
  for (const auto& a : partial) {
    total.sum += a.sum;
    total.min = std::min(total.min, a.min);
    total.max = std::max(total.max, a.max);
    total.count += a.count;
  }
  if (total.count == 0) return std::nullopt;
  return NdviSummary{total.sum / static_cast<double>(total.count), total.min, total.max, total.count};
}

}  // namespace cloudcomp
