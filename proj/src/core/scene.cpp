#include "core/scene.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "core/rng.hpp"

namespace dg3pd {

namespace {

constexpr double kPi = 3.14159265358979323846;

void paint_disk(Mask& m, int ci, int cj, int radius) {
  const int r2 = radius * radius;
  for (int i = std::max(0, ci - radius); i <= std::min(m.rows() - 1, ci + radius); ++i)
    for (int j = std::max(0, cj - radius); j <= std::min(m.cols() - 1, cj + radius); ++j)
      if ((i - ci) * (i - ci) + (j - cj) * (j - cj) <= r2) m.set(i, j, true);
}

std::size_t disk_new_pixels(const Mask& m, int ci, int cj, int radius) {
  const int r2 = radius * radius;
  std::size_t n = 0;
  for (int i = std::max(0, ci - radius); i <= std::min(m.rows() - 1, ci + radius); ++i)
    for (int j = std::max(0, cj - radius); j <= std::min(m.cols() - 1, cj + radius); ++j)
      if ((i - ci) * (i - ci) + (j - cj) * (j - cj) <= r2 && !m.at(i, j)) ++n;
  return n;
}

// squared distance from pixel to segment (a -> b)
double seg_dist2(double pi, double pj, double ai, double aj, double bi, double bj) {
  const double di = bi - ai, dj = bj - aj;
  const double len2 = di * di + dj * dj;
  double t = len2 > 0.0 ? ((pi - ai) * di + (pj - aj) * dj) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double qi = ai + t * di, qj = aj + t * dj;
  return (pi - qi) * (pi - qi) + (pj - qj) * (pj - qj);
}

struct Stroke {
  int ai, aj, bi, bj, width;
};

void stroke_pixels(const Mask& m, const Stroke& s, std::vector<std::size_t>& out) {
  out.clear();
  const int lo_i = std::max(0, std::min(s.ai, s.bi) - s.width);
  const int hi_i = std::min(m.rows() - 1, std::max(s.ai, s.bi) + s.width);
  const int lo_j = std::max(0, std::min(s.aj, s.bj) - s.width);
  const int hi_j = std::min(m.cols() - 1, std::max(s.aj, s.bj) + s.width);
  const double w2 = static_cast<double>(s.width) * s.width;
  for (int i = lo_i; i <= hi_i; ++i)
    for (int j = lo_j; j <= hi_j; ++j)
      if (seg_dist2(i, j, s.ai, s.aj, s.bi, s.bj) <= w2)
        out.push_back(static_cast<std::size_t>(i) * m.cols() + j);
}

}  // namespace

Mask make_missing_mask(int rows, int cols, double fraction, MaskKind kind, std::uint64_t seed) {
  if (fraction < 0.0 || fraction >= 1.0)
    throw std::invalid_argument("mask fraction must lie in [0, 1)");
  Mask mask(rows, cols);
  if (fraction == 0.0) return mask;

  Rng rng(seed);
  const std::size_t total = mask.size();
  const std::size_t target = static_cast<std::size_t>(fraction * static_cast<double>(total));
  const std::size_t ceiling = target + static_cast<std::size_t>(0.019 * static_cast<double>(total));
  std::size_t covered = 0;
  int attempts = 0;

  if (kind == MaskKind::Blobs) {
    const int max_radius = std::max(3, std::min(rows, cols) / 10);
    while (covered < target) {
      if (++attempts > 200000) throw std::runtime_error("mask generation did not converge");
      const int ci = rng.uniform_int(0, rows - 1);
      const int cj = rng.uniform_int(0, cols - 1);
      int radius = rng.uniform_int(2, max_radius);
      while (radius >= 1) {
        const std::size_t fresh = disk_new_pixels(mask, ci, cj, radius);
        if (fresh > 0 && covered + fresh <= ceiling) {
          paint_disk(mask, ci, cj, radius);
          covered += fresh;
          break;
        }
        radius /= 2;
      }
    }
  } else {
    std::vector<std::size_t> px;
    while (covered < target) {
      if (++attempts > 200000) throw std::runtime_error("mask generation did not converge");
      Stroke s;
      s.ai = rng.uniform_int(0, rows - 1);
      s.aj = rng.uniform_int(0, cols - 1);
      s.bi = rng.uniform_int(0, rows - 1);
      s.bj = rng.uniform_int(0, cols - 1);
      s.width = rng.uniform_int(1, 3);
      while (s.width >= 1) {
        stroke_pixels(mask, s, px);
        std::size_t fresh = 0;
        for (auto k : px) fresh += mask[k] ? 0 : 1;
        if (fresh > 0 && covered + fresh <= ceiling) {
          for (auto k : px) mask[k] = 1;
          covered += fresh;
          break;
        }
        --s.width;
      }
    }
  }
  return mask;
}

ChallengeScene make_challenge_scene(int rows, int cols, double sigma, double mask_fraction,
                                    MaskKind kind, std::uint64_t seed) {
  if (rows < 16 || cols < 16) throw std::invalid_argument("challenge scene needs at least 16x16");
  if (sigma < 0.0) throw std::invalid_argument("noise sigma must be nonnegative");

  ChallengeScene scene;
  scene.clean = Image(rows, cols, 64.0);
  scene.stripe_region = Mask(rows, cols);

  // cartoon shapes
  const double disk_ci = 0.30 * rows, disk_cj = 0.28 * cols;
  const double disk_r = 0.16 * std::min(rows, cols);
  const int rect_i0 = static_cast<int>(0.10 * rows), rect_i1 = static_cast<int>(0.30 * rows);
  const int rect_j0 = static_cast<int>(0.55 * cols), rect_j1 = static_cast<int>(0.92 * cols);
  // oriented sinusoidal stripe band; high contrast so the texture survives
  // heavy noise in the degradation studies
  const int band_i0 = static_cast<int>(0.60 * rows), band_i1 = static_cast<int>(0.95 * rows);
  const int band_j0 = static_cast<int>(0.06 * cols), band_j1 = static_cast<int>(0.94 * cols);
  const double angle = kPi / 6.0, period = 5.0, amplitude = 108.0, stripe_base = 118.0;

  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      double v = 64.0;
      if ((i - disk_ci) * (i - disk_ci) + (j - disk_cj) * (j - disk_cj) <= disk_r * disk_r) v = 200.0;
      if (i >= rect_i0 && i < rect_i1 && j >= rect_j0 && j < rect_j1) v = 128.0;
      if (i >= band_i0 && i < band_i1 && j >= band_j0 && j < band_j1) {
        const double phase = (j * std::cos(angle) + i * std::sin(angle)) / period;
        v = stripe_base + amplitude * std::sin(2.0 * kPi * phase);
        scene.stripe_region.set(i, j, true);
      }
      scene.clean.at(i, j) = v;
    }
  }

  scene.noisy = scene.clean;
  if (sigma > 0.0) {
    Rng rng(seed);
    for (std::size_t k = 0; k < scene.noisy.size(); ++k) scene.noisy[k] += rng.normal(0.0, sigma);
  }
  scene.missing = make_missing_mask(rows, cols, mask_fraction, kind, seed ^ 0x9E3779B97F4A7C15ULL);
  return scene;
}

}  // namespace dg3pd
