#include "cloudcomp/ppm.hpp"

#include <fstream>
#include <string>

namespace cloudcomp {

namespace {

template <class ColourAt>
std::vector<std::uint8_t> encode(Size size, Partition part, ColourAt&& colour_at) {
  const std::string head = "P6\n" + std::to_string(size.width) + " " + std::to_string(size.height) + "\n255\n";
  std::vector<std::uint8_t> out(head.size() + 3 * size.area());
  std::copy(head.begin(), head.end(), out.begin());
  std::uint8_t* body = out.data() + head.size();
  for_each_chunk(size.height, part, [&](std::size_t row_begin, std::size_t row_end, std::size_t) {
    for (std::size_t i = row_begin * size.width; i < row_end * size.width; ++i) {
      const Rgb c = colour_at(i);
      body[3 * i] = c.r;
      body[3 * i + 1] = c.g;
      body[3 * i + 2] = c.b;
    }
  });
  return out;
}

void spill(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error("write failure on '" + path.string() + "'");
}

}  // namespace

std::vector<std::uint8_t> encode_ppm_fcc(const MultibandImage& img, Partition part) {
  return encode(img.size(), part, [&](std::size_t i) { return fcc_colour(img.pixel(i)); });
}

std::vector<std::uint8_t> encode_ppm_classmap(const ClassMap& cm, Partition part) {
  return encode(cm.size(), part, [&](std::size_t i) { return kClassPalette[static_cast<std::size_t>(cm[i])]; });
}

void export_ppm_fcc(const MultibandImage& img, const std::filesystem::path& path, Partition part) {
  spill(path, encode_ppm_fcc(img, part));
}

void export_ppm_classmap(const ClassMap& cm, const std::filesystem::path& path, Partition part) {
  spill(path, encode_ppm_classmap(cm, part));
}

}  // namespace cloudcomp
