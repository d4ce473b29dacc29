#pragma once

// Time compositing over an ImageStack.
//
// Every composite carries the date of the newest scene in its window, so
// composites of successive windows can themselves form a stack.

#include "cloudcomp/cloudmask.hpp"
#include "cloudcomp/parallel.hpp"
#include "cloudcomp/raster.hpp"

#include <span>
#include <string_view>

namespace cloudcomp {

enum class CompositeMethod { Max, MinNaive, MinRefined, Hybrid };

/// "max", "min-naive", "min-refined" or "hybrid".
CompositeMethod parse_method(std::string_view name);
std::string_view method_name(CompositeMethod m);

/// Per-band maximum. Inputs are expected to be cloud-masked with fill 0, so a
/// masked sample loses to any clear one and a site masked on every date stays
/// (0, 0, 0).
MultibandImage composite_max(const ImageStack& stack, Partition part = {});

/// Per-band minimum. Each band is reduced on its own, so the output pixel can
/// mix bands from different dates (a synthetic pixel).
MultibandImage composite_min_naive(const ImageStack& stack, Partition part = {});

/// Whole-pixel selection by minimum Red. Scenes are compared two at a time in
/// a pairwise tournament in date order; on equal Red the earlier scene wins,
/// which makes the result equal to the first global Red argmin.
MultibandImage composite_min_refined(const ImageStack& stack, Partition part = {});

/// Clouds recoded to (255, 255, 255) then refined minimum. A site is
/// (255, 255, 255) in the output only when it is cloud on every date.
MultibandImage composite_hybrid(const ImageStack& stack, const CloudBracket& b, Partition part = {});

/// Hybrid compositing applied to earlier hybrid composites. Persistent-cloud
/// markers re-mask to themselves and lose to any clear pixel.
MultibandImage recomposite(const ImageStack& composites, const CloudBracket& b, Partition part = {});

/// Dispatches by method. `b` is used by Max (fill 0) and Hybrid (fill 255)
/// and ignored by the two unmasked minimum methods.
MultibandImage composite(const ImageStack& stack, CompositeMethod method, const CloudBracket& b,
                         Partition part = {});

/// As above with one bracket per scene, in stack order (adaptive masking).
MultibandImage composite(const ImageStack& stack, CompositeMethod method, std::span<const CloudBracket> brackets,
                         Partition part = {});

/// Masks every scene of the stack, scene i with brackets[i].
ImageStack mask_stack(const ImageStack& stack, std::span<const CloudBracket> brackets, Dn fill,
                      Partition part = {});

}  // namespace cloudcomp
