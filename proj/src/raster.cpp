#include "cloudcomp/raster.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace cloudcomp {

namespace {

bool parse_fixed_digits(std::string_view s, int& out) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

Date parse_date(std::string_view text) {
  int y = 0, m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_fixed_digits(text.substr(0, 4), y) ||
      !parse_fixed_digits(text.substr(5, 2), m) || !parse_fixed_digits(text.substr(8, 2), d))
    throw Error("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
  const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) throw Error("invalid calendar date '" + std::string(text) + "'");
  return date;
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

Band parse_band(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "swir") return Band::Swir;
  if (lower == "nir") return Band::Nir;
  if (lower == "red") return Band::Red;
  throw std::invalid_argument("unknown band '" + std::string(name) + "' (swir, nir, red)");
}

std::string to_string(const Size& s) { return std::to_string(s.width) + "x" + std::to_string(s.height); }

std::string_view class_name(LandClass c) {
  switch (c) {
    case LandClass::Water: return "water";
    case LandClass::Cloud: return "cloud";
    case LandClass::Fallow: return "fallow";
    case LandClass::Moderate: return "moderate";
    case LandClass::Dense: return "dense";
  }
  return "invalid";
}

MultibandImage::MultibandImage(Size size, Date date) : MultibandImage(size, date, std::vector<Dn>(3 * size.area())) {}

MultibandImage::MultibandImage(Size size, Date date, std::vector<Dn> samples)
    : size_(size), date_(date), data_(std::move(samples)) {
  if (size.width == 0 || size.height == 0) throw std::invalid_argument("image extent must be non-empty");
  if (data_.size() != kBandCount * size.area())
    throw std::invalid_argument("sample count " + std::to_string(data_.size()) + " does not match 3 x " +
                                to_string(size));
}

ImageStack::ImageStack(std::vector<MultibandImage> images) : images_(std::move(images)) {
  if (images_.empty()) throw std::invalid_argument("image stack must hold at least one image");
  const Size first = images_.front().size();
  for (std::size_t i = 1; i < images_.size(); ++i) {
    if (images_[i].size() != first)
      throw DimensionMismatch("stack image " + std::to_string(i) + " is " + to_string(images_[i].size()) +
                              ", expected " + to_string(first));
    if (!(images_[i - 1].date() < images_[i].date()))
      throw Error("stack dates must be strictly ascending: " + format_date(images_[i - 1].date()) + " then " +
                  format_date(images_[i].date()));
  }
}

MaskStack::MaskStack(Size size, std::size_t layers, Date date)
    : MaskStack(size, layers, date, std::vector<std::uint8_t>(layers * size.area())) {}

MaskStack::MaskStack(Size size, std::size_t layers, Date date, std::vector<std::uint8_t> bits)
    : size_(size), layers_(layers), date_(date), bits_(std::move(bits)) {
  if (size.width == 0 || size.height == 0 || layers == 0)
    throw std::invalid_argument("mask extent and layer count must be non-empty");
  if (bits_.size() != layers * size.area()) throw std::invalid_argument("mask byte count does not match extent");
  for (auto& b : bits_)
    if (b > 1) throw std::invalid_argument("mask bytes must be 0 or 1");
}

}  // namespace cloudcomp
