#pragma once

#include <functional>
#include <string>
#include <vector>

#include "core/grid.hpp"

namespace dg3pd {

struct TextureParams {
  int patch_size = 15;               // s, odd
  double min_known_fraction = 0.70;  // p1
  double min_texture_fraction = 0.60;  // p2 (nonzero coefficients)
  double min_overlap_fraction = 0.30;  // p3, of s^2
  int top_k = 5;                     // NL-means averaging
  int nlm_iterations = 10;           // n
  int dilation_radius = 5;           // circular SE on D
  int closing_size = 3;              // closing kernel (square)
  int min_component_area = 25;       // small-component removal
  double nonzero_tol = 1e-9;
  int start_tier_percent = 90;       // decreasing in steps of 5
};

// Binary morphology used by the segmentation (square SE unless noted).
Mask dilate_square(const Mask& m, int size);
Mask erode_square(const Mask& m, int size);
Mask dilate_disk(const Mask& m, int radius);
Mask majority_smooth(const Mask& m);                         // 3x3 majority vote
Mask remove_small_components(const Mask& m, int min_area);   // 8-connected
Mask fill_holes(const Mask& m);                              // 4-connected background

// Texture ROI from the sparsity of v: binarize |v| > tol, close, majority
// smooth, drop small components, fill holes.
Mask segment_texture(const Image& v, const TextureParams& params = {});

// I = dilate(D, disk) intersect ROI
Mask build_inpaint_mask(const Mask& roi, const Mask& missing, int dilation_radius = 5);

// Exhaustive dictionary of s x s patches of v fully inside the grid with a
// known central pixel, >= p1 known pixels and >= p2 known-and-nonzero
// coefficients (both fractions of s^2). Snapshot semantics: entries keep the
// values v had at build time.
struct PatchDictionary {
  int patch_size = 0;
  Image source;
  Mask known;
  struct Entry {
    int row, col;  // top-left corner
  };
  std::vector<Entry> entries;
};

PatchDictionary build_dictionary(const Image& v, const Mask& known, const TextureParams& params = {});

struct InpaintStats {
  std::size_t targets = 0;
  std::size_t filled = 0;
  std::size_t relaxed = 0;    // filled only by the relaxed final pass
  std::size_t unfilled = 0;   // no candidate even after relaxation
  std::vector<std::string> warnings;
};

using ProgressSink = std::function<void(double fraction, const Image& current)>;

// Fills mask I in tiers of decreasing known-percentage (start_tier_percent,
// -5 per tier, down to 0) with the best dictionary match (min SSD per
// mutually known pixel, overlap >= p3*s^2; ties broken by smallest source
// row, col). Newly written pixels count as known for later targets. A final
// pass relaxes the overlap constraint to one pixel. Pixels outside I are
// never modified. known_out (optional) receives known-or-filled.
Image inpaint_texture(const Image& v, const Mask& inpaint_mask, const Mask& known,
                      const PatchDictionary& dict, const TextureParams& params = {},
                      InpaintStats* stats = nullptr, const ProgressSink& progress = nullptr,
                      Mask* known_out = nullptr);

// Iterated NL-means over the ROI: each iteration rebuilds the dictionary
// from the current image (entries centered in the ROI) and replaces every
// ROI pixel by the mean central value of its top-k matches (self-match
// admissible), reading a frozen copy of the previous iterate.
Image nlmeans_denoise(const Image& v, const Mask& roi, const Mask& known,
                      const TextureParams& params = {});

Image synthesize(const Image& u, const Image& v_restored);

// v_texture = (v + e1 .* chi_D) .* ROI
Image compose_v_texture(const Image& v, const Image& e1, const Mask& missing, const Mask& roi);

}  // namespace dg3pd
