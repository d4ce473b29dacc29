#include "cloudcomp/cloudmask.hpp"

#include <charconv>
#include <stdexcept>

namespace cloudcomp {

CloudBracket::CloudBracket(Dn lo, Dn hi) : lo_(lo), hi_(hi) {
  if (lo > hi)
    throw std::invalid_argument("cloud bracket lower bound " + std::to_string(lo) + " exceeds upper bound " +
                                std::to_string(hi));
}

CloudBracket parse_bracket(std::string_view text) {
  const auto colon = text.find(':');
  const auto bad = [&] { return std::invalid_argument("invalid bracket '" + std::string(text) + "', expected lo:hi"); };
  if (colon == std::string_view::npos) throw bad();
  unsigned lo = 0, hi = 0;
  const auto lo_s = text.substr(0, colon), hi_s = text.substr(colon + 1);
  auto r1 = std::from_chars(lo_s.data(), lo_s.data() + lo_s.size(), lo);
  auto r2 = std::from_chars(hi_s.data(), hi_s.data() + hi_s.size(), hi);
  if (lo_s.empty() || hi_s.empty() || r1.ec != std::errc{} || r2.ec != std::errc{} ||
      r1.ptr != lo_s.data() + lo_s.size() || r2.ptr != hi_s.data() + hi_s.size())
    throw bad();
  if (lo > 255 || hi > 255) throw std::invalid_argument("bracket bounds must be within 0..255");
  return CloudBracket(static_cast<Dn>(lo), static_cast<Dn>(hi));
}

std::string to_string(const CloudBracket& b) { return std::to_string(b.lo()) + ":" + std::to_string(b.hi()); }

MultibandImage mask_clouds(const MultibandImage& img, const CloudBracket& b, Dn fill, Partition part) {
  if (fill != kFillZero && fill != kFillSaturate)
    throw std::invalid_argument("cloud fill must be 0 or 255, got " + std::to_string(fill));
  MultibandImage out = img;
  const Pixel marker{fill, fill, fill};
  for_each_chunk(img.pixel_count(), part, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i)
      if (is_cloud(img.pixel(i), b)) out.set_pixel(i, marker);
  });
  return out;
}

double cloud_fraction(const MultibandImage& img, const CloudBracket& b) {
  std::size_t clouds = 0;
  for (std::size_t i = 0; i < img.pixel_count(); ++i) clouds += is_cloud(img.pixel(i), b) ? 1 : 0;
  return static_cast<double>(clouds) / static_cast<double>(img.pixel_count());
}

}  // namespace cloudcomp
