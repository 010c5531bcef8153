#pragma once

#include <memory>
#include <string>
#include <vector>

#include "core/fft.hpp"
#include "core/grid.hpp"

namespace dg3pd {

// Multiscale directional tight frame built from FFT-domain windows:
// Meyer-type radial rings split into smooth angular wedges, with the squared
// windows forming an exact partition of unity on the frequency grid. Serves
// as the multiscale multidirectional analysis operator C{.} of the model.
//
// Scale layout (coarse to fine): one lowpass residual band (no orientation
// split), then J bandpass rings on dyadic radial edges pi/2^(J-1), ..., pi,
// the last ring extending to the grid corners. Ring j carries
// base_orientations * 2^floor((j-1)/2) wedges (8, 8, 16, 16, 32, ... by
// default), the usual parabolic-scaling schedule.
struct MsdtConfig {
  int scales = 0;             // bandpass ring count J; 0 = auto from grid size
  int base_orientations = 8;  // wedges on the coarsest ring
};

class MsdtPlan {
 public:
  MsdtPlan(int rows, int cols, MsdtConfig cfg = {});

  struct Band {
    int scale;        // 0 = lowpass, 1..J = rings coarse to fine
    int orientation;  // wedge index within the ring (0 for lowpass)
    std::vector<double> window;
  };

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int scale_count() const { return scales_; }
  int band_count() const { return static_cast<int>(bands_.size()); }
  const Band& band(int b) const { return bands_[static_cast<std::size_t>(b)]; }

  // max_z |sum_b window_b(z)^2 - 1|
  double partition_deviation() const;

  static int auto_scales(int rows, int cols);

 private:
  int rows_, cols_, scales_;
  std::vector<Band> bands_;
};

struct CoeffPyramid {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<cd>> bands;
  std::shared_ptr<const MsdtPlan> plan;
};

std::shared_ptr<const MsdtPlan> make_msdt_plan(int rows, int cols, MsdtConfig cfg = {});

CoeffPyramid msdt_forward(const Image& x, std::shared_ptr<const MsdtPlan> plan);
Image msdt_inverse(const CoeffPyramid& p);
double sup_coeff(const CoeffPyramid& p);

// Soft-thresholds coefficient magnitudes (phase preserving) by nu in place.
void shrink_pyramid(CoeffPyramid& p, double nu);

// msdt_inverse(shrink(msdt_forward(x), nu))
Image cst(const Image& x, double nu, std::shared_ptr<const MsdtPlan> plan);

// One PFM per band (scale{j}_band{b}_{re|im}.pfm) plus a manifest.txt.
void dump_pyramid(const CoeffPyramid& p, const std::string& dir);

}  // namespace dg3pd
