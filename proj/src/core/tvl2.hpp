#pragma once

#include <vector>

#include "core/grid.hpp"
#include "core/solver.hpp"

namespace dg3pd {

// Reference TVL2 inpainting: argmin_u TV(u) + (beta/2) ||chi .* (f - u)||_2^2
// solved by ADMM with a gradient split (d = grad u, isotropic shrink) and a
// fidelity split (h = u, pointwise solve), so the u-update is the same
// periodic Fourier solve the main model uses.
struct Tvl2Params {
  double fidelity = 0.5;       // beta
  double penalty_grad = 0.25;  // mu: weight on d = grad u
  double penalty_fid = 0.5;    // eta: weight on h = u
  int iterations = 300;
  bool isotropic = true;
};

struct Tvl2Result {
  Image u;
  std::vector<double> energy_trace;            // objective per iteration
  std::vector<IterationMetrics> trace;         // same CSV schema as the main solver
};

Tvl2Result tvl2_inpaint(const Image& f, const Mask& missing, const Tvl2Params& params);

double tvl2_energy(const Image& u, const Image& f, const Mask& missing, double beta,
                   bool isotropic);

}  // namespace dg3pd
