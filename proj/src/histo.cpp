#include "cloudcomp/histo.hpp"

#include <ostream>
#include <stdexcept>

namespace cloudcomp {

double BandHistogram::per_mille(Dn d) const {
  if (total == 0) return 0.0;
  return 1000.0 * static_cast<double>(counts[d]) / static_cast<double>(total);
}

BandHistogram band_histogram(const MultibandImage& img, Band band, Partition part) {
  const auto samples = img.band(band);
  std::vector<BandHistogram> partial(chunk_count(samples.size(), part));
  for_each_chunk(samples.size(), part, [&](std::size_t begin, std::size_t end, std::size_t k) {
    for (std::size_t i = begin; i < end; ++i) partial[k].add(samples[i]);
  });
  BandHistogram h;
  for (const auto& p : partial)
    for (std::size_t d = 0; d < 256; ++d) h.add(static_cast<Dn>(d), p.counts[d]);
  return h;
}

void write_histogram_csv(const BandHistogram& h, std::ostream& out) {
  for (std::size_t d = 0; d < 256; ++d) out << d << ',' << h.counts[d] << '\n';
}

std::optional<Dn> detect_inflection(const BandHistogram& h, const InflectionParams& params) {
  if (params.seg_width == 0) throw std::invalid_argument("segment width must be at least 1");
  if (h.total == 0) return std::nullopt;
  const double width = params.seg_width;
  for (unsigned s = params.start; s + params.seg_width <= 255; s += params.seg_width) {
    const auto rise = static_cast<double>(h.counts[s + params.seg_width]) - static_cast<double>(h.counts[s]);
    // Per-mille computed from the raw rise so that scaling every count by a
    // constant gives bit-identical slopes.
    const double slope = 1000.0 * rise / static_cast<double>(h.total) / width;
    if (slope > params.slope_thresh) return static_cast<Dn>(s);
  }
  return std::nullopt;
}

CloudBracket adaptive_bracket(const MultibandImage& img, const CloudBracket& defaults, const InflectionParams& params) {
  const auto lo = detect_inflection(band_histogram(img, Band::Red), params);
  if (!lo || *lo > defaults.hi()) return defaults;
  return CloudBracket(*lo, defaults.hi());
}

}  // namespace cloudcomp
