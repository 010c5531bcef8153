#pragma once

#include <cstdint>

#include "core/grid.hpp"

namespace dg3pd {

enum class MaskKind { Blobs, Scratches };

// Synthetic cartoon+texture test scene: piecewise-constant shapes on a flat
// background plus an oriented sinusoidal stripe band. The geometry is frozen
// (tests depend on it); only the noise and the missing region use the seed.
struct ChallengeScene {
  Image clean;          // f0
  Image noisy;          // f = f0 + N(0, sigma^2) on all of Omega
  Mask missing;         // D
  Mask stripe_region;   // ground-truth texture ROI (for evaluation only)
};

ChallengeScene make_challenge_scene(int rows, int cols, double sigma, double mask_fraction,
                                    MaskKind kind, std::uint64_t seed);

// Random missing-region generator used by the scene; fraction 0 gives an
// empty mask, fractions outside [0, 1) are rejected. The achieved coverage is
// within 2 percentage points above the request.
Mask make_missing_mask(int rows, int cols, double fraction, MaskKind kind, std::uint64_t seed);

}  // namespace dg3pd
