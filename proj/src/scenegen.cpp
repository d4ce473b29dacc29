#include "cloudcomp/scenegen.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace cloudcomp {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below needs n > 0");
  // 2^64 mod n; raw values under it would bias the low residues.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = next();
    if (x >= threshold) return x % n;
  }
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("Rng::between needs lo <= hi");
  const auto span = static_cast<std::uint64_t>(hi - lo);
  if (span == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(next());
  return lo + static_cast<std::int64_t>(below(span + 1));
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

namespace {

enum class Cover : std::size_t { Water, Fallow, Moderate, Dense, BrightFallow };
constexpr std::size_t kCoverCount = 5;

std::array<double, kCoverCount> fractions(const SceneSpec& s) {
  return {s.water, s.fallow, s.moderate, s.dense, s.bright_fallow};
}

std::array<const Signature*, kCoverCount> signatures(const SceneSpec& s) {
  return {&s.water_sig, &s.fallow_sig, &s.moderate_sig, &s.dense_sig, &s.bright_fallow_sig};
}

constexpr std::array<std::string_view, kCoverCount> kCoverNames{"water", "fallow", "moderate", "dense",
                                                                "bright_fallow"};

Dn draw(Rng& rng, DnRange r) { return static_cast<Dn>(rng.between(r.lo, r.hi)); }

void check_range(DnRange r, std::string_view what) {
  if (r.lo > r.hi) throw std::invalid_argument(std::string(what) + " range is inverted");
}

// Calls fn(index) for every in-bounds pixel of the disk.
template <class Fn>
void for_disk(Size size, std::int64_t cx, std::int64_t cy, std::int64_t r, Fn&& fn) {
  const auto w = static_cast<std::int64_t>(size.width), h = static_cast<std::int64_t>(size.height);
  for (std::int64_t y = std::max<std::int64_t>(0, cy - r); y <= std::min(h - 1, cy + r); ++y)
    for (std::int64_t x = std::max<std::int64_t>(0, cx - r); x <= std::min(w - 1, cx + r); ++x)
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) fn(static_cast<std::size_t>(y * w + x));
}

}  // namespace

void SceneSpec::validate() const {
  if (size.width == 0 || size.height == 0) throw std::invalid_argument("scene extent must be non-empty");
  if (regions == 0) throw std::invalid_argument("scene needs at least one region");
  const auto f = fractions(*this);
  double sum = 0.0;
  for (double x : f) {
    if (!(x >= 0.0)) throw std::invalid_argument("land-cover fractions must be non-negative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("land-cover fractions must sum to 1");

  const auto sigs = signatures(*this);
  const CloudBracket standard;
  for (std::size_t c = 0; c < kCoverCount; ++c) {
    const Signature& s = *sigs[c];
    const std::string name(kCoverNames[c]);
    check_range(s.swir, name + " swir");
    check_range(s.nir, name + " nir");
    check_range(s.red, name + " red");
    if (static_cast<Cover>(c) == Cover::Water) {
      if (s.nir.hi >= s.red.lo) throw std::invalid_argument("water signature needs NIR below RED");
      if (std::max({s.swir.hi, s.nir.hi, s.red.hi}) > 100) throw std::invalid_argument("water signature must be dark");
    } else if (s.nir.lo <= s.red.hi) {
      throw std::invalid_argument(name + " signature needs NIR above RED");
    }
    // Smallest SWIR against largest Red is the easiest way into is_cloud.
    if (is_cloud(Pixel{s.swir.lo, 0, s.red.hi}, standard))
      throw std::invalid_argument(name + " signature can look like cloud");
  }
}

void CloudSpec::validate() const {
  if (count > 0 && (radius_min == 0 || radius_min > radius_max))
    throw std::invalid_argument("cloud radius range must satisfy 1 <= min <= max");
  if (!(persistence >= 0.0 && persistence <= 1.0)) throw std::invalid_argument("cloud persistence must be in [0, 1]");
  check_range(red, "cloud red");
  check_range(swir, "cloud swir");
  check_range(nir, "cloud nir");
  if (red.lo < CloudBracket{}.lo()) throw std::invalid_argument("cloud red must lie inside the default bracket");
  if (swir.lo > red.lo) throw std::invalid_argument("cloud swir lower bound must not exceed red lower bound");
  if (!(shadow_factor >= 0.0 && shadow_factor <= 1.0)) throw std::invalid_argument("shadow factor must be in [0, 1]");
  if (jitter > 64) throw std::invalid_argument("jitter must be at most 64 pixels");
}

bool GroundTruth::has_clear_day(std::size_t index) const {
  for (std::size_t d = 0; d < clouds.layers(); ++d)
    if (!clouds.get(d, index)) return true;
  return false;
}

MultibandImage gen_base_scene(const SceneSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  struct Site {
    double x, y;
    Cover cover;
  };
  const auto f = fractions(spec);
  std::vector<Site> sites(spec.regions);
  for (auto& s : sites) {
    s.x = rng.unit() * static_cast<double>(spec.size.width);
    s.y = rng.unit() * static_cast<double>(spec.size.height);
    const double u = rng.unit();
    double cum = 0.0;
    std::size_t pick = kCoverCount;
    for (std::size_t c = 0; c < kCoverCount; ++c) {
      if (f[c] <= 0.0) continue;
      cum += f[c];
      pick = c;
      if (u < cum) break;
    }
    s.cover = static_cast<Cover>(pick);
  }

  const auto sigs = signatures(spec);
  MultibandImage img(spec.size, spec.date);
  for (std::size_t y = 0; y < spec.size.height; ++y)
    for (std::size_t x = 0; x < spec.size.width; ++x) {
      const double px = static_cast<double>(x) + 0.5, py = static_cast<double>(y) + 0.5;
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < sites.size(); ++k) {
        const double d = (sites[k].x - px) * (sites[k].x - px) + (sites[k].y - py) * (sites[k].y - py);
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      const Signature& s = *sigs[static_cast<std::size_t>(sites[best].cover)];
      const Dn swir = draw(rng, s.swir);
      const Dn nir = draw(rng, s.nir);
      const Dn red = draw(rng, s.red);
      img.set_pixel(x, y, {swir, nir, red});
    }
  return img;
}

GeneratedStack gen_cloudy_stack(const MultibandImage& base, std::size_t days, const CloudSpec& cs,
                                std::uint64_t seed) {
  if (days == 0) throw std::invalid_argument("a cloudy stack needs at least one day");
  cs.validate();
  Rng rng(seed);
  const Size size = base.size();
  const auto w = static_cast<std::int64_t>(size.width), h = static_cast<std::int64_t>(size.height);

  struct Cloud {
    std::int64_t cx, cy, r;
  };
  const auto fresh = [&] {
    const auto cx = rng.between(0, w - 1);
    const auto cy = rng.between(0, h - 1);
    const auto r = rng.between(static_cast<std::int64_t>(cs.radius_min), static_cast<std::int64_t>(cs.radius_max));
    return Cloud{cx, cy, r};
  };
  std::vector<Cloud> clouds;
  for (std::size_t k = 0; k < cs.count; ++k) clouds.push_back(fresh());

  MaskStack cloud_mask(size, days, base.date());
  MaskStack shadow_mask(size, days, base.date());
  std::vector<MultibandImage> images;
  images.reserve(days);
  const auto jitter = static_cast<std::int64_t>(cs.jitter);

  for (std::size_t d = 0; d < days; ++d) {
    if (d > 0)
      for (auto& c : clouds)
        if (!rng.chance(cs.persistence)) c = fresh();

    std::int64_t dx = 0, dy = 0;
    if (d > 0 && jitter > 0) {
      dx = rng.between(-jitter, jitter);
      dy = rng.between(-jitter, jitter);
    }

    const Date date = std::chrono::sys_days{base.date()} + std::chrono::days{static_cast<int>(d)};
    MultibandImage day(size, date);
    for (std::int64_t y = 0; y < h; ++y)
      for (std::int64_t x = 0; x < w; ++x) {
        const auto sx = std::clamp<std::int64_t>(x + dx, 0, w - 1), sy = std::clamp<std::int64_t>(y + dy, 0, h - 1);
        day.set_pixel(static_cast<std::size_t>(x), static_cast<std::size_t>(y),
                      base.pixel(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy)));
      }

    for (const auto& c : clouds) for_disk(size, c.cx, c.cy, c.r, [&](std::size_t i) { cloud_mask.set(d, i, true); });

    if (cs.shadows) {
      for (const auto& c : clouds)
        for_disk(size, c.cx + cs.shadow_dx, c.cy + cs.shadow_dy, c.r, [&](std::size_t i) {
          if (!cloud_mask.get(d, i)) shadow_mask.set(d, i, true);
        });
      const auto darken = [&](Dn v) { return static_cast<Dn>(std::lround(v * cs.shadow_factor)); };
      for (std::size_t i = 0; i < size.area(); ++i)
        if (shadow_mask.get(d, i)) {
          const Pixel p = day.pixel(i);
          day.set_pixel(i, {darken(p.swir), darken(p.nir), darken(p.red)});
        }
    }

    for (std::size_t i = 0; i < size.area(); ++i) {
      if (!cloud_mask.get(d, i)) continue;
      const Dn red = draw(rng, cs.red);
      const Dn swir = draw(rng, {cs.swir.lo, std::min(cs.swir.hi, red)});
      const Dn nir = draw(rng, cs.nir);
      day.set_pixel(i, {swir, nir, red});
    }
    images.push_back(std::move(day));
  }

  return {ImageStack(std::move(images)), GroundTruth{base, std::move(cloud_mask), std::move(shadow_mask)}};
}

CompositeScore score_composite(const MultibandImage& composite, const GroundTruth& gt, const CloudBracket& b) {
  if (composite.size() != gt.base.size())
    throw DimensionMismatch("composite is " + to_string(composite.size()) + " but ground truth is " +
                            to_string(gt.base.size()));
  if (gt.clouds.size() != gt.base.size())
    throw DimensionMismatch("cloud masks are " + to_string(gt.clouds.size()) + " but base is " +
                            to_string(gt.base.size()));
  std::size_t ever_clouded = 0, recovered = 0, residual = 0, exact = 0;
  const std::size_t n = composite.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const Pixel c = composite.pixel(i);
    const bool marked = c == Pixel{0, 0, 0} || is_cloud(c, b);
    bool clouded = false;
    for (std::size_t d = 0; d < gt.days(); ++d) clouded = clouded || gt.clouds.get(d, i);
    if (clouded) {
      ++ever_clouded;
      if (!marked) ++recovered;
    }
    if (marked && gt.has_clear_day(i)) ++residual;
    if (c == gt.base.pixel(i)) ++exact;
  }
  const auto total = static_cast<double>(n);
  return {ever_clouded == 0 ? 1.0 : static_cast<double>(recovered) / static_cast<double>(ever_clouded),
          static_cast<double>(residual) / total, static_cast<double>(exact) / total};
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T number(std::string_view v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size())
    throw std::invalid_argument("malformed number '" + std::string(v) + "'");
  return out;
}

template <class T>
std::pair<T, T> number_pair(std::string_view v) {
  const auto colon = v.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("expected lo:hi, got '" + std::string(v) + "'");
  return {number<T>(trim(v.substr(0, colon))), number<T>(trim(v.substr(colon + 1)))};
}

DnRange dn_range(std::string_view v) {
  const auto [lo, hi] = number_pair<unsigned>(v);
  if (lo > 255 || hi > 255) throw std::invalid_argument("DN range must be within 0..255");
  return {static_cast<Dn>(lo), static_cast<Dn>(hi)};
}

bool boolean(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("expected true/false, got '" + std::string(v) + "'");
}

}  // namespace

GenConfig parse_gen_config(std::istream& in) {
  GenConfig cfg;
  auto& sc = cfg.scene;
  auto& cl = cfg.clouds;
  using Setter = std::function<void(std::string_view)>;
  std::map<std::string, Setter, std::less<>> keys{
      {"scene.width", [&](auto v) { sc.size.width = number<std::size_t>(v); }},
      {"scene.height", [&](auto v) { sc.size.height = number<std::size_t>(v); }},
      {"scene.seed", [&](auto v) { sc.seed = number<std::uint64_t>(v); }},
      {"scene.date", [&](auto v) { sc.date = parse_date(v); }},
      {"scene.regions", [&](auto v) { sc.regions = number<std::size_t>(v); }},
      {"scene.fraction.water", [&](auto v) { sc.water = number<double>(v); }},
      {"scene.fraction.fallow", [&](auto v) { sc.fallow = number<double>(v); }},
      {"scene.fraction.moderate", [&](auto v) { sc.moderate = number<double>(v); }},
      {"scene.fraction.dense", [&](auto v) { sc.dense = number<double>(v); }},
      {"scene.fraction.bright_fallow", [&](auto v) { sc.bright_fallow = number<double>(v); }},
      {"clouds.count", [&](auto v) { cl.count = number<std::size_t>(v); }},
      {"clouds.radius",
       [&](auto v) {
         const auto [lo, hi] = number_pair<std::size_t>(v);
         cl.radius_min = lo;
         cl.radius_max = hi;
       }},
      {"clouds.persistence", [&](auto v) { cl.persistence = number<double>(v); }},
      {"clouds.red", [&](auto v) { cl.red = dn_range(v); }},
      {"clouds.swir", [&](auto v) { cl.swir = dn_range(v); }},
      {"clouds.nir", [&](auto v) { cl.nir = dn_range(v); }},
      {"clouds.shadows", [&](auto v) { cl.shadows = boolean(v); }},
      {"clouds.shadow_offset",
       [&](auto v) {
         const auto [dx, dy] = number_pair<int>(v);
         cl.shadow_dx = dx;
         cl.shadow_dy = dy;
       }},
      {"clouds.shadow_factor", [&](auto v) { cl.shadow_factor = number<double>(v); }},
      {"clouds.jitter", [&](auto v) { cl.jitter = number<unsigned>(v); }},
      {"stack.days", [&](auto v) { cfg.days = number<std::size_t>(v); }},
      {"stack.seed", [&](auto v) { cfg.stack_seed = number<std::uint64_t>(v); }},
  };
  const std::array<std::pair<std::string_view, Signature*>, kCoverCount> sigs{{{"water", &sc.water_sig},
                                                                                {"fallow", &sc.fallow_sig},
                                                                                {"moderate", &sc.moderate_sig},
                                                                                {"dense", &sc.dense_sig},
                                                                                {"bright_fallow", &sc.bright_fallow_sig}}};
  for (const auto& [name, sig] : sigs) {
    const std::string prefix = "scene.signature." + std::string(name) + ".";
    keys[prefix + "swir"] = [sig = sig](auto v) { sig->swir = dn_range(v); };
    keys[prefix + "nir"] = [sig = sig](auto v) { sig->nir = dn_range(v); };
    keys[prefix + "red"] = [sig = sig](auto v) { sig->red = dn_range(v); };
  }

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error("config line " + std::to_string(line_no) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) throw Error("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    try {
      it->second(value);
    } catch (const std::exception& e) {
      throw Error("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  try {
    cfg.scene.validate();
    cfg.clouds.validate();
  } catch (const std::invalid_argument& e) {
    throw Error(std::string("invalid config: ") + e.what());
  }
  if (cfg.days == 0) throw Error("invalid config: stack.days must be at least 1");
  return cfg;
}

GenConfig load_gen_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path.string() + "'");
  return parse_gen_config(in);
}

}  // namespace cloudcomp
