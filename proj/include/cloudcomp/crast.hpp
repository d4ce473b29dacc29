#pragma once

// CRAST v1 container.
//
//   CRAST v1
//   width <W>
//   height <H>
//   bands <N>
//   dtype u8|f32
//   order SWIR,NIR,RED   | value NDVI | value CLASS | value MASK
//   date YYYY-MM-DD
//   <blank line>
//   <N * W * H samples, band-sequential, f32 little-endian>
//
// Every line ends with a single '\n'. A three-band scene is `bands 3`,
// `dtype u8`, `order SWIR,NIR,RED`. NDVI is `bands 1 dtype f32 value NDVI`,
// class maps `bands 1 dtype u8 value CLASS`, and ground-truth masks
// `bands <days> dtype u8 value MASK`.

#include "cloudcomp/raster.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace cloudcomp {

/// Malformed or truncated CRAST file. `offset()` is the byte position in the
/// file where the problem was detected.
class CrastError : public Error {
public:
  CrastError(const std::string& what, std::uint64_t offset);
  std::uint64_t offset() const { return offset_; }
  /// Message without the offset suffix.
  const std::string& detail() const { return detail_; }

private:
  std::string detail_;
  std::uint64_t offset_;
};

enum class SampleType { U8, F32 };
enum class Layout { Scene, Ndvi, Class, Mask };

struct CrastHeader {
  Size size;
  std::size_t bands = 0;
  SampleType dtype = SampleType::U8;
  Layout layout = Layout::Scene;
  Date date;

  std::size_t sample_bytes() const { return dtype == SampleType::F32 ? 4 : 1; }
  std::size_t payload_bytes() const { return bands * size.area() * sample_bytes(); }
  std::string serialize() const;
};

/// Parses the header at the front of `bytes`; `header_length` receives the
/// offset of the first payload byte.
CrastHeader parse_crast_header(std::span<const std::uint8_t> bytes, std::size_t& header_length);
CrastHeader read_crast_header(const std::filesystem::path& path);

MultibandImage read_raster(const std::filesystem::path& path);
void write_raster(const MultibandImage& img, const std::filesystem::path& path);

/// In-memory encode/decode used by the file functions.
std::vector<std::uint8_t> encode_raster(const MultibandImage& img);
MultibandImage decode_raster(std::span<const std::uint8_t> bytes);

NdviRaster read_ndvi(const std::filesystem::path& path);
void write_ndvi(const NdviRaster& nv, const std::filesystem::path& path);

ClassMap read_classmap(const std::filesystem::path& path);
void write_classmap(const ClassMap& cm, const std::filesystem::path& path);

MaskStack read_masks(const std::filesystem::path& path);
void write_masks(const MaskStack& masks, const std::filesystem::path& path);

/// Reads every path, sorts by header date and validates equal extents.
/// Throws DimensionMismatch naming the offending file, Error on duplicate dates.
ImageStack load_stack(std::span<const std::filesystem::path> paths);

}  // namespace cloudcomp
