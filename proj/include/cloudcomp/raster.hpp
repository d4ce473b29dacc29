#pragma once

// Core raster model: 8-bit three-band scenes, dated stacks, and single-band
// grids for NDVI, class codes and masks.

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cloudcomp {

using Dn = std::uint8_t;
using Date = std::chrono::year_month_day;

/// Base class for every data-level failure (bad files, mismatched inputs).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// Parses a strict ISO `YYYY-MM-DD` calendar date; throws Error otherwise.
Date parse_date(std::string_view text);
std::string format_date(const Date& d);

enum class Band : std::uint8_t { Swir = 0, Nir = 1, Red = 2 };
inline constexpr std::size_t kBandCount = 3;

/// Parses "swir", "nir" or "red" (case-insensitive).
Band parse_band(std::string_view name);

struct Pixel {
  Dn swir = 0;
  Dn nir = 0;
  Dn red = 0;

  constexpr Dn operator[](Band b) const {
    switch (b) {
      case Band::Swir: return swir;
      case Band::Nir: return nir;
      default: return red;
    }
  }
  friend constexpr bool operator==(const Pixel&, const Pixel&) = default;
};

struct Size {
  std::size_t width = 0;
  std::size_t height = 0;

  constexpr std::size_t area() const { return width * height; }
  friend constexpr bool operator==(const Size&, const Size&) = default;
};

std::string to_string(const Size& s);

/// One dated scene. Samples are held band-sequential: the whole SWIR plane,
/// then NIR, then RED, each plane row-major.
class MultibandImage {
public:
  /// Zero-filled image. Throws std::invalid_argument for an empty extent.
  MultibandImage(Size size, Date date);
  /// Adopts band-sequential samples; `samples.size()` must be 3 * area.
  MultibandImage(Size size, Date date, std::vector<Dn> samples);

  Size size() const { return size_; }
  std::size_t width() const { return size_.width; }
  std::size_t height() const { return size_.height; }
  std::size_t pixel_count() const { return size_.area(); }
  const Date& date() const { return date_; }
  void set_date(Date d) { date_ = d; }

  Pixel pixel(std::size_t index) const {
    const std::size_t n = pixel_count();
    return {data_[index], data_[n + index], data_[2 * n + index]};
  }
  Pixel pixel(std::size_t x, std::size_t y) const { return pixel(y * size_.width + x); }

  void set_pixel(std::size_t index, const Pixel& p) {
    const std::size_t n = pixel_count();
    data_[index] = p.swir;
    data_[n + index] = p.nir;
    data_[2 * n + index] = p.red;
  }
  void set_pixel(std::size_t x, std::size_t y, const Pixel& p) { set_pixel(y * size_.width + x, p); }

  std::span<const Dn> band(Band b) const {
    return {data_.data() + static_cast<std::size_t>(b) * pixel_count(), pixel_count()};
  }
  std::span<Dn> band(Band b) {
    return {data_.data() + static_cast<std::size_t>(b) * pixel_count(), pixel_count()};
  }

  /// Raw band-sequential payload.
  std::span<const Dn> samples() const { return data_; }

  friend bool operator==(const MultibandImage& a, const MultibandImage& b) {
    return a.size_ == b.size_ && a.date_ == b.date_ && a.data_ == b.data_;
  }

private:
  Size size_;
  Date date_;
  std::vector<Dn> data_;
};

/// Date-ordered, equally sized scenes forming one compositing window.
class ImageStack {
public:
  /// Throws std::invalid_argument when empty, DimensionMismatch on unequal
  /// extents and Error when dates are not strictly ascending.
  explicit ImageStack(std::vector<MultibandImage> images);

  std::size_t size() const { return images_.size(); }
  Size extent() const { return images_.front().size(); }
  const MultibandImage& operator[](std::size_t i) const { return images_[i]; }
  const MultibandImage& front() const { return images_.front(); }
  const MultibandImage& back() const { return images_.back(); }
  auto begin() const { return images_.begin(); }
  auto end() const { return images_.end(); }
  const std::vector<MultibandImage>& images() const { return images_; }

private:
  std::vector<MultibandImage> images_;
};

/// Single-band row-major grid with a date tag.
template <class T>
class Grid {
public:
  using value_type = T;

  Grid(Size size, Date date, T fill = T{}) : size_(size), date_(date), values_(size.area(), fill) {
    if (size.width == 0 || size.height == 0) throw std::invalid_argument("grid extent must be non-empty");
  }
  Grid(Size size, Date date, std::vector<T> values) : size_(size), date_(date), values_(std::move(values)) {
    if (size.width == 0 || size.height == 0) throw std::invalid_argument("grid extent must be non-empty");
    if (values_.size() != size.area()) throw std::invalid_argument("grid value count does not match extent");
  }

  Size size() const { return size_; }
  std::size_t width() const { return size_.width; }
  std::size_t height() const { return size_.height; }
  const Date& date() const { return date_; }

  T operator[](std::size_t i) const { return values_[i]; }
  T& operator[](std::size_t i) { return values_[i]; }
  T at(std::size_t x, std::size_t y) const { return values_[y * size_.width + x]; }
  T& at(std::size_t x, std::size_t y) { return values_[y * size_.width + x]; }

  std::span<const T> values() const { return values_; }
  std::span<T> values() { return values_; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.size_ == b.size_ && a.date_ == b.date_ && a.values_ == b.values_;
  }

private:
  Size size_;
  Date date_;
  std::vector<T> values_;
};

/// NDVI surface; values lie in [-1, 1].
using NdviRaster = Grid<float>;

enum class LandClass : std::uint8_t { Water = 0, Cloud = 1, Fallow = 2, Moderate = 3, Dense = 4 };
inline constexpr std::size_t kClassCount = 5;
std::string_view class_name(LandClass c);

using ClassMap = Grid<LandClass>;
using BandPlane = Grid<Dn>;

/// Multi-layer boolean mask (one layer per day), stored as 0/1 bytes.
class MaskStack {
public:
  MaskStack(Size size, std::size_t layers, Date date);
  MaskStack(Size size, std::size_t layers, Date date, std::vector<std::uint8_t> bits);

  Size size() const { return size_; }
  std::size_t layers() const { return layers_; }
  const Date& date() const { return date_; }

  bool get(std::size_t layer, std::size_t index) const { return bits_[layer * size_.area() + index] != 0; }
  void set(std::size_t layer, std::size_t index, bool v) { bits_[layer * size_.area() + index] = v ? 1 : 0; }
  std::span<const std::uint8_t> bytes() const { return bits_; }

  friend bool operator==(const MaskStack&, const MaskStack&) = default;

private:
  Size size_;
  std::size_t layers_;
  Date date_;
  std::vector<std::uint8_t> bits_;
};

}  // namespace cloudcomp
