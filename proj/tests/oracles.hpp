#pragma once

// Brute-force reference implementations and random input generators for
// tests. Nothing here calls into the code paths it is used to check.

#include "cloudcomp/raster.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace cloudcomp::testing {

inline Date day(int n) {
  using namespace std::chrono;
  return year_month_day{sys_days{year{2008} / May / 1} + days{n}};
}

inline MultibandImage single_pixel(Pixel p, int d = 0) {
  MultibandImage img({1, 1}, day(d));
  img.set_pixel(0, p);
  return img;
}

inline ImageStack pixel_stack(const std::vector<Pixel>& pixels) {
  std::vector<MultibandImage> v;
  for (std::size_t i = 0; i < pixels.size(); ++i) v.push_back(single_pixel(pixels[i], static_cast<int>(i)));
  return ImageStack(std::move(v));
}

/// Random DN: half the draws come from a tiny alphabet so ties are common,
/// the rest from the whole 8-bit range.
inline Dn random_dn(std::mt19937_64& rng, bool narrow) {
  if (narrow) return static_cast<Dn>(std::array<int, 6>{0, 40, 150, 151, 200, 255}[rng() % 6]);
  return static_cast<Dn>(rng() % 256);
}

inline MultibandImage random_image(std::mt19937_64& rng, Size size, Date date, bool narrow) {
  MultibandImage img(size, date);
  for (std::size_t i = 0; i < size.area(); ++i)
    img.set_pixel(i, {random_dn(rng, narrow), random_dn(rng, narrow), random_dn(rng, narrow)});
  return img;
}

/// Stack of 1..9 scenes, each dimension 1..32.
inline ImageStack random_stack(std::mt19937_64& rng) {
  const std::size_t n = 1 + rng() % 9;
  const Size size{1 + rng() % 32, 1 + rng() % 32};
  const bool narrow = rng() % 2 == 0;
  std::vector<MultibandImage> v;
  int d = 0;
  for (std::size_t k = 0; k < n; ++k) {
    d += 1 + static_cast<int>(rng() % 3);
    v.push_back(random_image(rng, size, day(d), narrow));
  }
  return ImageStack(std::move(v));
}

/// Global scan for the first (earliest) scene with minimum Red.
inline Pixel oracle_red_argmin(const ImageStack& s, std::size_t i) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < s.size(); ++k)
    if (s[k].pixel(i).red < s[best].pixel(i).red) best = k;
  return s[best].pixel(i);
}

inline Dn oracle_band_extreme(const ImageStack& s, Band b, std::size_t i, bool want_max) {
  std::vector<Dn> v;
  for (const auto& img : s) v.push_back(img.band(b)[i]);
  return want_max ? *std::max_element(v.begin(), v.end()) : *std::min_element(v.begin(), v.end());
}

/// Cloud predicate written out from its definition.
inline bool oracle_is_cloud(Pixel p, int lo, int hi) { return p.red >= lo && p.red <= hi && !(p.red < p.swir); }

/// Direct kernel-sum cubic convolution of a 1-D signal at `x`, extending the
/// signal by edge replication, summing over every source sample.
inline double oracle_cubic_1d(const std::vector<double>& src, double x, double a = -0.5) {
  const auto kernel = [a](double t) {
    t = std::abs(t);
    if (t <= 1) return (a + 2) * t * t * t - (a + 3) * t * t + 1;
    if (t < 2) return a * t * t * t - 5 * a * t * t + 8 * a * t - 4 * a;
    return 0.0;
  };
  double s = 0.0;
  const int n = static_cast<int>(src.size());
  for (int j = -4; j < n + 4; ++j) s += src[static_cast<std::size_t>(std::clamp(j, 0, n - 1))] * kernel(x - j);
  return s;
}

/// Unique scratch directory removed on destruction.
class TempDir {
public:
  TempDir() {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() / ("cloudcomp_test_" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

}  // namespace cloudcomp::testing
