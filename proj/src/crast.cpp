#include "cloudcomp/crast.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>

namespace cloudcomp {

namespace {

constexpr std::uint64_t kMaxDimension = 1u << 24;
constexpr std::uint64_t kMaxSamples = std::uint64_t{1} << 34;

std::string_view layout_line(Layout l) {
  switch (l) {
    case Layout::Scene: return "order SWIR,NIR,RED";
    case Layout::Ndvi: return "value NDVI";
    case Layout::Class: return "value CLASS";
    case Layout::Mask: return "value MASK";
  }
  return {};
}

// Walks the header one '\n'-terminated line at a time, tracking offsets.
class LineReader {
public:
  explicit LineReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::string_view next(std::size_t& line_start) {
    line_start = pos_;
    const auto* begin = bytes_.data() + pos_;
    const auto* end = bytes_.data() + bytes_.size();
    const auto* nl = std::find(begin, end, std::uint8_t{'\n'});
    if (nl == end) throw CrastError("unterminated header line", pos_);
    std::string_view line(reinterpret_cast<const char*>(begin), static_cast<std::size_t>(nl - begin));
    pos_ += line.size() + 1;
    return line;
  }
  std::size_t position() const { return pos_; }

private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::string_view expect_key(std::string_view line, std::string_view key, std::size_t offset) {
  if (line.size() <= key.size() + 1 || line.substr(0, key.size()) != key || line[key.size()] != ' ')
    throw CrastError("expected '" + std::string(key) + " <value>' header line, found '" + std::string(line) + "'",
                     offset);
  return line.substr(key.size() + 1);
}

std::uint64_t parse_count(std::string_view v, std::string_view key, std::size_t offset) {
  std::uint64_t n = 0;
  const bool digits = !v.empty() && std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; });
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (!digits || ec != std::errc{} || ptr != v.data() + v.size())
    throw CrastError("malformed " + std::string(key) + " value '" + std::string(v) + "'", offset);
  return n;
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error("read failure on '" + path.string() + "'");
  return bytes;
}

void spill(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error("write failure on '" + path.string() + "'");
}

// Validates the payload length and returns its offset.
std::size_t check_payload(const CrastHeader& h, std::size_t header_length, std::size_t file_size) {
  const std::size_t expected = h.payload_bytes();
  const std::size_t actual = file_size - header_length;
  if (actual < expected)
    throw CrastError("truncated payload: expected " + std::to_string(expected) + " bytes, found " +
                         std::to_string(actual),
                     file_size);
  if (actual > expected)
    throw CrastError("trailing bytes after payload: expected " + std::to_string(expected) + " bytes, found " +
                         std::to_string(actual),
                     header_length + expected);
  return header_length;
}

// Layout mismatches are reported at the end of the header.
void require(const CrastHeader& h, std::size_t header_length, Layout layout, std::string_view what) {
  if (h.layout != layout) throw CrastError("file does not hold " + std::string(what), header_length);
}

std::vector<std::uint8_t> with_header(const CrastHeader& h, std::span<const std::uint8_t> payload) {
  const std::string head = h.serialize();
  std::vector<std::uint8_t> out;
  out.reserve(head.size() + payload.size());
  out.insert(out.end(), head.begin(), head.end());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

// Prefixes parse errors with the file name.
template <class Fn>
auto in_file(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const CrastError& e) {
    throw CrastError(path.string() + ": " + e.detail(), e.offset());
  }
}

std::uint32_t load_le32(const std::uint8_t* p) {
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 | std::uint32_t{p[3]} << 24;
}

void store_le32(std::uint8_t* p, std::uint32_t v) {
  p[0] = static_cast<std::uint8_t>(v);
  p[1] = static_cast<std::uint8_t>(v >> 8);
  p[2] = static_cast<std::uint8_t>(v >> 16);
  p[3] = static_cast<std::uint8_t>(v >> 24);
}

}  // namespace

CrastError::CrastError(const std::string& what, std::uint64_t offset)
    : Error(what + " (at byte " + std::to_string(offset) + ")"), detail_(what), offset_(offset) {}

std::string CrastHeader::serialize() const {
  std::string s = "CRAST v1\n";
  s += "width " + std::to_string(size.width) + "\n";
  s += "height " + std::to_string(size.height) + "\n";
  s += "bands " + std::to_string(bands) + "\n";
  s += dtype == SampleType::F32 ? "dtype f32\n" : "dtype u8\n";
  s += std::string(layout_line(layout)) + "\n";
  s += "date " + format_date(date) + "\n";
  s += "\n";
  return s;
}

CrastHeader parse_crast_header(std::span<const std::uint8_t> bytes, std::size_t& header_length) {
  static constexpr std::string_view kMagic = "CRAST v1\n";
  if (bytes.size() < kMagic.size() || std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    std::size_t at = 0;
    while (at < std::min(bytes.size(), kMagic.size()) && bytes[at] == static_cast<std::uint8_t>(kMagic[at])) ++at;
    throw CrastError("bad magic, expected 'CRAST v1'", at);
  }

  LineReader lines(bytes.subspan(0));
  std::size_t at = 0;
  lines.next(at);

  CrastHeader h;
  auto line = lines.next(at);
  const auto width = parse_count(expect_key(line, "width", at), "width", at);
  if (width == 0 || width > kMaxDimension) throw CrastError("width out of range", at);

  line = lines.next(at);
  const auto height = parse_count(expect_key(line, "height", at), "height", at);
  if (height == 0 || height > kMaxDimension) throw CrastError("height out of range", at);
  h.size = {static_cast<std::size_t>(width), static_cast<std::size_t>(height)};

  line = lines.next(at);
  const std::size_t bands_at = at;
  const auto bands = parse_count(expect_key(line, "bands", at), "bands", at);
  if (bands == 0 || bands > 4096) throw CrastError("band count out of range", at);
  h.bands = static_cast<std::size_t>(bands);
  if (width * height * bands > kMaxSamples) throw CrastError("raster too large", at);

  line = lines.next(at);
  const auto dtype = expect_key(line, "dtype", at);
  if (dtype == "u8")
    h.dtype = SampleType::U8;
  else if (dtype == "f32")
    h.dtype = SampleType::F32;
  else
    throw CrastError("unsupported dtype '" + std::string(dtype) + "'", at);
  const std::size_t dtype_at = at;

  line = lines.next(at);
  if (line == "order SWIR,NIR,RED")
    h.layout = Layout::Scene;
  else if (line == "value NDVI")
    h.layout = Layout::Ndvi;
  else if (line == "value CLASS")
    h.layout = Layout::Class;
  else if (line == "value MASK")
    h.layout = Layout::Mask;
  else
    throw CrastError("unrecognised layout line '" + std::string(line) + "'", at);

  switch (h.layout) {
    case Layout::Scene:
      if (h.bands != 3) throw CrastError("scene band count must be 3, found " + std::to_string(h.bands), bands_at);
      if (h.dtype != SampleType::U8) throw CrastError("scene dtype must be u8", dtype_at);
      break;
    case Layout::Ndvi:
      if (h.bands != 1) throw CrastError("NDVI band count must be 1", bands_at);
      if (h.dtype != SampleType::F32) throw CrastError("NDVI dtype must be f32", dtype_at);
      break;
    case Layout::Class:
      if (h.bands != 1) throw CrastError("CLASS band count must be 1", bands_at);
      if (h.dtype != SampleType::U8) throw CrastError("CLASS dtype must be u8", dtype_at);
      break;
    case Layout::Mask:
      if (h.dtype != SampleType::U8) throw CrastError("MASK dtype must be u8", dtype_at);
      break;
  }

  line = lines.next(at);
  try {
    h.date = parse_date(expect_key(line, "date", at));
  } catch (const CrastError&) {
    throw;
  } catch (const Error& e) {
    throw CrastError(e.what(), at);
  }

  line = lines.next(at);
  if (!line.empty()) throw CrastError("expected blank line ending the header", at);
  header_length = lines.position();
  return h;
}

CrastHeader read_crast_header(const std::filesystem::path& path) {
  // Headers are tiny; read a bounded prefix.
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> prefix(512);
  in.read(reinterpret_cast<char*>(prefix.data()), static_cast<std::streamsize>(prefix.size()));
  prefix.resize(static_cast<std::size_t>(in.gcount()));
  std::size_t length = 0;
  return parse_crast_header(prefix, length);
}

std::vector<std::uint8_t> encode_raster(const MultibandImage& img) {
  CrastHeader h{img.size(), 3, SampleType::U8, Layout::Scene, img.date()};
  return with_header(h, img.samples());
}

MultibandImage decode_raster(std::span<const std::uint8_t> bytes) {
  std::size_t header_length = 0;
  const auto h = parse_crast_header(bytes, header_length);
  require(h, header_length, Layout::Scene, "a SWIR,NIR,RED scene");
  const auto at = check_payload(h, header_length, bytes.size());
  std::vector<Dn> samples(bytes.begin() + static_cast<std::ptrdiff_t>(at), bytes.end());
  return MultibandImage(h.size, h.date, std::move(samples));
}

MultibandImage read_raster(const std::filesystem::path& path) {
  try {
    return decode_raster(slurp(path));
  } catch (const CrastError& e) {
    throw CrastError(path.string() + ": " + e.what(), e.offset());
  }
}

void write_raster(const MultibandImage& img, const std::filesystem::path& path) { spill(path, encode_raster(img)); }

NdviRaster read_ndvi(const std::filesystem::path& path) {
  return in_file(path, [&] {
  const auto bytes = slurp(path);
  std::size_t header_length = 0;
  const auto h = parse_crast_header(bytes, header_length);
  require(h, header_length, Layout::Ndvi, "NDVI values");
  const auto at = check_payload(h, header_length, bytes.size());
  std::vector<float> values(h.size.area());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const float v = std::bit_cast<float>(load_le32(bytes.data() + at + 4 * i));
    if (!(v >= -1.0f && v <= 1.0f)) throw CrastError("NDVI sample outside [-1, 1]", at + 4 * i);
    values[i] = v;
  }
  return NdviRaster(h.size, h.date, std::move(values));
  });
}

void write_ndvi(const NdviRaster& nv, const std::filesystem::path& path) {
  CrastHeader h{nv.size(), 1, SampleType::F32, Layout::Ndvi, nv.date()};
  std::vector<std::uint8_t> payload(4 * nv.size().area());
  const auto values = nv.values();
  for (std::size_t i = 0; i < values.size(); ++i) store_le32(payload.data() + 4 * i, std::bit_cast<std::uint32_t>(values[i]));
  spill(path, with_header(h, payload));
}

ClassMap read_classmap(const std::filesystem::path& path) {
  return in_file(path, [&] {
  const auto bytes = slurp(path);
  std::size_t header_length = 0;
  const auto h = parse_crast_header(bytes, header_length);
  require(h, header_length, Layout::Class, "class codes");
  const auto at = check_payload(h, header_length, bytes.size());
  std::vector<LandClass> codes(h.size.area());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    const auto c = bytes[at + i];
    if (c >= kClassCount) throw CrastError("class code " + std::to_string(c) + " out of range", at + i);
    codes[i] = static_cast<LandClass>(c);
  }
  return ClassMap(h.size, h.date, std::move(codes));
  });
}

void write_classmap(const ClassMap& cm, const std::filesystem::path& path) {
  CrastHeader h{cm.size(), 1, SampleType::U8, Layout::Class, cm.date()};
  std::vector<std::uint8_t> payload(cm.size().area());
  const auto codes = cm.values();
  std::transform(codes.begin(), codes.end(), payload.begin(), [](LandClass c) { return static_cast<std::uint8_t>(c); });
  spill(path, with_header(h, payload));
}

MaskStack read_masks(const std::filesystem::path& path) {
  return in_file(path, [&] {
  const auto bytes = slurp(path);
  std::size_t header_length = 0;
  const auto h = parse_crast_header(bytes, header_length);
  require(h, header_length, Layout::Mask, "masks");
  const auto at = check_payload(h, header_length, bytes.size());
  std::vector<std::uint8_t> bits(bytes.begin() + static_cast<std::ptrdiff_t>(at), bytes.end());
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] > 1) throw CrastError("mask byte must be 0 or 1", at + i);
  return MaskStack(h.size, h.bands, h.date, std::move(bits));
  });
}

void write_masks(const MaskStack& masks, const std::filesystem::path& path) {
  CrastHeader h{masks.size(), masks.layers(), SampleType::U8, Layout::Mask, masks.date()};
  spill(path, with_header(h, masks.bytes()));
}

ImageStack load_stack(std::span<const std::filesystem::path> paths) {
  if (paths.empty()) throw std::invalid_argument("load_stack needs at least one path");
  std::vector<MultibandImage> images;
  images.reserve(paths.size());
  for (const auto& p : paths) {
    images.push_back(read_raster(p));
    if (images.back().size() != images.front().size())
      throw DimensionMismatch("'" + p.string() + "' is " + to_string(images.back().size()) + " but '" +
                              paths.front().string() + "' is " + to_string(images.front().size()));
  }
  std::vector<std::size_t> order(images.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return images[a].date() < images[b].date(); });
  std::vector<MultibandImage> sorted;
  sorted.reserve(images.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && images[order[k]].date() == images[order[k - 1]].date())
      throw Error("duplicate date " + format_date(images[order[k]].date()) + " in '" + paths[order[k - 1]].string() +
                  "' and '" + paths[order[k]].string() + "'");
    sorted.push_back(std::move(images[order[k]]));
  }
  return ImageStack(std::move(sorted));
}

}  // namespace cloudcomp
