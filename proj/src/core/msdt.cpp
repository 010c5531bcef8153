#include "core/msdt.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "core/errors.hpp"
#include "core/image_io.hpp"
#include "core/parallel.hpp"

namespace dg3pd {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Meyer window polynomial: smooth, nu(0)=0, nu(1)=1, nu(t)+nu(1-t)=1.
double meyer_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * t * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t * t * t);
}

// Monotone crossfade q(r): 0 below lo, 1 above hi, sin^2-shaped between.
double radial_cross(double r, double lo, double hi) {
  if (r <= lo) return 0.0;
  if (r >= hi) return 1.0;
  const double s = std::sin(0.5 * kPi * meyer_step((r - lo) / (hi - lo)));
  return s * s;
}

// Angular window for wedge a of n_a wedges centered at 2*pi*a/n_a; adjacent
// wedges crossfade so that the squares sum to one for every angle.
double angular_window(double theta, int a, int n_a) {
  if (n_a == 1) return 1.0;
  const double half = kPi / n_a;         // half wedge width
  const double cross = 0.5 * half;       // crossfade half width
  double d = theta - 2.0 * kPi * a / n_a;
  d = std::remainder(d, 2.0 * kPi);
  d = std::abs(d);
  if (d <= half - cross) return 1.0;
  if (d >= half + cross) return 0.0;
  const double t = (d - (half - cross)) / (2.0 * cross);
  return std::cos(0.5 * kPi * meyer_step(t));
}

double freq_of_index(int k, int n) {
  // map index to (-pi, pi]
  const int half = n / 2;
  const int kk = (k <= half) ? k : k - n;
  return 2.0 * kPi * kk / n;
}

}  // namespace

int MsdtPlan::auto_scales(int rows, int cols) {
  const int mn = std::min(rows, cols);
  const int j = static_cast<int>(std::ceil(std::log2(static_cast<double>(mn)))) - 4;
  return std::max(3, j);
}

MsdtPlan::MsdtPlan(int rows, int cols, MsdtConfig cfg) : rows_(rows), cols_(cols) {
  scales_ = cfg.scales > 0 ? cfg.scales : auto_scales(rows, cols);
  if (cfg.base_orientations < 1) throw std::invalid_argument("base_orientations must be >= 1");
  if (std::min(rows, cols) < (1 << (scales_ + 1)))
    throw std::invalid_argument("grid too small for requested scale count");

  const std::size_t total = static_cast<std::size_t>(rows) * cols;
  const int J = scales_;

  // precompute radius and angle per frequency-grid point
  std::vector<double> radius(total), theta(total);
  for (int k1 = 0; k1 < rows; ++k1) {
    const double w1 = freq_of_index(k1, rows);
    for (int k2 = 0; k2 < cols; ++k2) {
      const double w2 = freq_of_index(k2, cols);
      const std::size_t k = static_cast<std::size_t>(k1) * cols + k2;
      radius[k] = std::hypot(w1, w2);
      theta[k] = std::atan2(w1, w2);
    }
  }

  // q_j: crossfade at edge E_j = pi / 2^(J-1-j), transition over [E_j/sqrt2, E_j]
  std::vector<std::vector<double>> q(static_cast<std::size_t>(J));
  for (int j = 0; j < J; ++j) {
    const double edge = kPi / static_cast<double>(1 << (J - 1 - j));
    q[static_cast<std::size_t>(j)].resize(total);
    for (std::size_t k = 0; k < total; ++k)
      q[static_cast<std::size_t>(j)][k] = radial_cross(radius[k], edge / std::sqrt(2.0), edge);
  }

  // lowpass band
  Band low;
  low.scale = 0;
  low.orientation = 0;
  low.window.resize(total);
  for (std::size_t k = 0; k < total; ++k) low.window[k] = std::sqrt(std::max(0.0, 1.0 - q[0][k]));
  bands_.push_back(std::move(low));

  // rings with angular wedges
  for (int j = 1; j <= J; ++j) {
    const int n_a = cfg.base_orientations * (1 << ((j - 1) / 2));
    std::vector<double> ring_sq(total);
    for (std::size_t k = 0; k < total; ++k) {
      const double hi = q[static_cast<std::size_t>(j - 1)][k];
      const double lo = (j < J) ? q[static_cast<std::size_t>(j)][k] : 0.0;
      ring_sq[k] = std::max(0.0, hi - lo);
    }
    for (int a = 0; a < n_a; ++a) {
      Band b;
      b.scale = j;
      b.orientation = a;
      b.window.resize(total);
      bool nonzero = false;
      for (std::size_t k = 0; k < total; ++k) {
        const double w = std::sqrt(ring_sq[k]) * angular_window(theta[k], a, n_a);
        b.window[k] = w;
        nonzero |= (w != 0.0);
      }
      (void)nonzero;
      bands_.push_back(std::move(b));
    }
  }
}

double MsdtPlan::partition_deviation() const {
  const std::size_t total = static_cast<std::size_t>(rows_) * cols_;
  double worst = 0.0;
  for (std::size_t k = 0; k < total; ++k) {
    double s = 0.0;
    for (const auto& b : bands_) s += b.window[k] * b.window[k];
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

std::shared_ptr<const MsdtPlan> make_msdt_plan(int rows, int cols, MsdtConfig cfg) {
  return std::make_shared<MsdtPlan>(rows, cols, cfg);
}

CoeffPyramid msdt_forward(const Image& x, std::shared_ptr<const MsdtPlan> plan) {
  if (!plan) throw std::invalid_argument("msdt_forward: null plan");
  if (x.rows() != plan->rows() || x.cols() != plan->cols())
    throw std::invalid_argument("msdt_forward: image does not match plan size");
  CoeffPyramid p;
  p.rows = x.rows();
  p.cols = x.cols();
  p.plan = plan;
  p.bands.resize(static_cast<std::size_t>(plan->band_count()));

  const Spectrum hat = dft2(x);
  const std::size_t total = hat.size();
  parallel_for(static_cast<std::size_t>(plan->band_count()), [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      const auto& win = plan->band(static_cast<int>(b)).window;
      Spectrum y(p.rows, p.cols);
      for (std::size_t k = 0; k < total; ++k) y[k] = win[k] * hat[k];
      Spectrum c = fft_inverse(y);
      p.bands[b].assign(c.data(), c.data() + total);
    }
  });
  return p;
}

Image msdt_inverse(const CoeffPyramid& p) {
  if (!p.plan) throw std::invalid_argument("msdt_inverse: pyramid has no plan");
  const MsdtPlan& plan = *p.plan;
  if (p.bands.size() != static_cast<std::size_t>(plan.band_count()))
    throw std::invalid_argument("msdt_inverse: band count mismatch");
  const std::size_t total = static_cast<std::size_t>(p.rows) * p.cols;

  std::vector<Spectrum> parts(p.bands.size());
  parallel_for(p.bands.size(), [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      Spectrum c(p.rows, p.cols);
      std::copy(p.bands[b].begin(), p.bands[b].end(), c.data());
      Spectrum y = fft_forward(c);
      const auto& win = plan.band(static_cast<int>(b)).window;
      for (std::size_t k = 0; k < total; ++k) y[k] *= win[k];
      parts[b] = std::move(y);
    }
  });

  Spectrum acc(p.rows, p.cols);
  for (const auto& part : parts)
    for (std::size_t k = 0; k < total; ++k) acc[k] += part[k];
  return idft2_real(acc);
}

double sup_coeff(const CoeffPyramid& p) {
  double m = 0.0;
  for (const auto& band : p.bands)
    for (const cd& c : band) m = std::max(m, std::abs(c));
  return m;
}

void shrink_pyramid(CoeffPyramid& p, double nu) {
  if (nu < 0.0) throw std::invalid_argument("shrink threshold must be nonnegative");
  if (nu == 0.0) return;
  parallel_for(p.bands.size(), [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      for (cd& c : p.bands[b]) {
        const double mag = std::abs(c);
        c = (mag <= nu) ? cd(0.0, 0.0) : c * ((mag - nu) / mag);
      }
    }
  });
}

Image cst(const Image& x, double nu, std::shared_ptr<const MsdtPlan> plan) {
  CoeffPyramid p = msdt_forward(x, std::move(plan));
  shrink_pyramid(p, nu);
  return msdt_inverse(p);
}

void dump_pyramid(const CoeffPyramid& p, const std::string& dir) {
  if (!p.plan) throw std::invalid_argument("dump_pyramid: pyramid has no plan");
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir + "/manifest.txt");
  if (!manifest) throw IoError("cannot write manifest in " + dir);
  manifest << "rows " << p.rows << "\ncols " << p.cols << "\nbands " << p.bands.size() << "\n";
  for (std::size_t b = 0; b < p.bands.size(); ++b) {
    const auto& info = p.plan->band(static_cast<int>(b));
    const std::string stem =
        "scale" + std::to_string(info.scale) + "_band" + std::to_string(b);
    Image re(p.rows, p.cols), im(p.rows, p.cols);
    for (std::size_t k = 0; k < p.bands[b].size(); ++k) {
      re[k] = p.bands[b][k].real();
      im[k] = p.bands[b][k].imag();
    }
    write_pfm(dir + "/" + stem + "_re.pfm", re);
    write_pfm(dir + "/" + stem + "_im.pfm", im);
    manifest << stem << " scale=" << info.scale << " orientation=" << info.orientation << "\n";
  }
}

}  // namespace dg3pd
