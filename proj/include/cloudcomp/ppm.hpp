#pragma once

// Viewable exports as binary P6 PPM (maxval 255).

#include "cloudcomp/parallel.hpp"
#include "cloudcomp/raster.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace cloudcomp {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend constexpr bool operator==(const Rgb&, const Rgb&) = default;
};

/// Display colour per LandClass, indexed by class code.
inline constexpr std::array<Rgb, kClassCount> kClassPalette{{
    {0, 0, 255},      // water: blue
    {128, 128, 128},  // cloud: grey
    {255, 255, 153},  // fallow: pale yellow
    {144, 238, 144},  // moderate: mild green
    {0, 100, 0},      // dense: dark green
}};

/// False-colour "2,1,1": screen R <- NIR, G <- RED, B <- RED.
constexpr Rgb fcc_colour(const Pixel& p) { return {p.nir, p.red, p.red}; }

std::vector<std::uint8_t> encode_ppm_fcc(const MultibandImage& img, Partition part = {});
std::vector<std::uint8_t> encode_ppm_classmap(const ClassMap& cm, Partition part = {});

void export_ppm_fcc(const MultibandImage& img, const std::filesystem::path& path, Partition part = {});
void export_ppm_classmap(const ClassMap& cm, const std::filesystem::path& path, Partition part = {});

}  // namespace cloudcomp
