#include "cloudcomp/compositor.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cloudcomp {

namespace {

// Per-band reduction over the stack; `pick` chooses between the running
// sample and the next one.
template <class Pick>
MultibandImage per_band(const ImageStack& stack, Partition part, Pick pick) {
  MultibandImage out = stack.front();
  out.set_date(stack.back().date());
  for (Band b : {Band::Swir, Band::Nir, Band::Red}) {
    auto dst = out.band(b);
    for_each_chunk(dst.size(), part, [&](std::size_t begin, std::size_t end, std::size_t) {
      for (std::size_t k = 1; k < stack.size(); ++k) {
        const auto src = stack[k].band(b);
        for (std::size_t i = begin; i < end; ++i) dst[i] = pick(dst[i], src[i]);
      }
    });
  }
  return out;
}

// One tournament match: the whole pixel with the lower Red wins; the
// earlier scene (`left`) wins ties.
MultibandImage lower_red(const MultibandImage& left, const MultibandImage& right, Partition part) {
  MultibandImage out = left;
  const auto right_red = right.band(Band::Red);
  const auto left_red = left.band(Band::Red);
  for_each_chunk(left.pixel_count(), part, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i)
      if (right_red[i] < left_red[i]) out.set_pixel(i, right.pixel(i));
  });
  return out;
}

}  // namespace

CompositeMethod parse_method(std::string_view name) {
  if (name == "max") return CompositeMethod::Max;
  if (name == "min-naive") return CompositeMethod::MinNaive;
  if (name == "min-refined") return CompositeMethod::MinRefined;
  if (name == "hybrid") return CompositeMethod::Hybrid;
  throw std::invalid_argument("unknown method '" + std::string(name) + "' (max, min-naive, min-refined, hybrid)");
}

std::string_view method_name(CompositeMethod m) {
  switch (m) {
    case CompositeMethod::Max: return "max";
    case CompositeMethod::MinNaive: return "min-naive";
    case CompositeMethod::MinRefined: return "min-refined";
    case CompositeMethod::Hybrid: return "hybrid";
  }
  return "?";
}

MultibandImage composite_max(const ImageStack& stack, Partition part) {
  return per_band(stack, part, [](Dn a, Dn b) { return std::max(a, b); });
}

MultibandImage composite_min_naive(const ImageStack& stack, Partition part) {
  return per_band(stack, part, [](Dn a, Dn b) { return std::min(a, b); });
}

MultibandImage composite_min_refined(const ImageStack& stack, Partition part) {
  // Pairs (0,1), (2,3), ... meet in each round; an odd scene out advances
  // unopposed. Every match keeps date order, so the left-wins rule makes the
  // final winner the earliest scene holding the minimum Red.
  std::vector<MultibandImage> round = stack.images();
  while (round.size() > 1) {
    std::vector<MultibandImage> next;
    next.reserve((round.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < round.size(); i += 2) next.push_back(lower_red(round[i], round[i + 1], part));
    if (round.size() % 2 == 1) next.push_back(std::move(round.back()));
    round = std::move(next);
  }
  MultibandImage out = std::move(round.front());
  out.set_date(stack.back().date());
  return out;
}

ImageStack mask_stack(const ImageStack& stack, std::span<const CloudBracket> brackets, Dn fill, Partition part) {
  if (brackets.size() != stack.size())
    throw std::invalid_argument("need one bracket per scene: " + std::to_string(brackets.size()) + " brackets for " +
                                std::to_string(stack.size()) + " scenes");
  std::vector<MultibandImage> masked;
  masked.reserve(stack.size());
  for (std::size_t k = 0; k < stack.size(); ++k) masked.push_back(mask_clouds(stack[k], brackets[k], fill, part));
  return ImageStack(std::move(masked));
}

MultibandImage composite_hybrid(const ImageStack& stack, const CloudBracket& b, Partition part) {
  const std::vector<CloudBracket> brackets(stack.size(), b);
  return composite_min_refined(mask_stack(stack, brackets, kFillSaturate, part), part);
}

MultibandImage recomposite(const ImageStack& composites, const CloudBracket& b, Partition part) {
  return composite_hybrid(composites, b, part);
}

MultibandImage composite(const ImageStack& stack, CompositeMethod method, std::span<const CloudBracket> brackets,
                         Partition part) {
  switch (method) {
    case CompositeMethod::Max: return composite_max(mask_stack(stack, brackets, kFillZero, part), part);
    case CompositeMethod::MinNaive: return composite_min_naive(stack, part);
    case CompositeMethod::MinRefined: return composite_min_refined(stack, part);
    case CompositeMethod::Hybrid:
      return composite_min_refined(mask_stack(stack, brackets, kFillSaturate, part), part);
  }
  throw std::invalid_argument("unknown compositing method");
}

MultibandImage composite(const ImageStack& stack, CompositeMethod method, const CloudBracket& b, Partition part) {
  const std::vector<CloudBracket> brackets(stack.size(), b);
  return composite(stack, method, brackets, part);
}

}  // namespace cloudcomp
