#include "core/texture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "core/parallel.hpp"

namespace dg3pd {

namespace {

void check_odd_patch(int s) {
  if (s < 3 || s % 2 == 0) throw std::invalid_argument("patch size must be odd and >= 3");
}

struct Candidate {
  double score = std::numeric_limits<double>::infinity();
  int row = std::numeric_limits<int>::max();
  int col = std::numeric_limits<int>::max();

  bool better_than(const Candidate& o) const {
    if (score != o.score) return score < o.score;
    if (row != o.row) return row < o.row;
    return col < o.col;
  }
  bool found() const { return score != std::numeric_limits<double>::infinity(); }
};

}  // namespace

Mask dilate_square(const Mask& m, int size) {
  const int h = size / 2;
  Mask out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      bool hit = false;
      for (int di = -h; di <= h && !hit; ++di)
        for (int dj = -h; dj <= h && !hit; ++dj) {
          const int ii = i + di, jj = j + dj;
          if (ii >= 0 && ii < m.rows() && jj >= 0 && jj < m.cols() && m.at(ii, jj)) hit = true;
        }
      out.set(i, j, hit);
    }
  return out;
}

Mask erode_square(const Mask& m, int size) {
  const int h = size / 2;
  Mask out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      bool all = true;
      for (int di = -h; di <= h && all; ++di)
        for (int dj = -h; dj <= h && all; ++dj) {
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || ii >= m.rows() || jj < 0 || jj >= m.cols() || !m.at(ii, jj)) all = false;
        }
      out.set(i, j, all);
    }
  return out;
}

Mask dilate_disk(const Mask& m, int radius) {
  if (radius < 0) throw std::invalid_argument("dilation radius must be nonnegative");
  Mask out(m.rows(), m.cols());
  const int r2 = radius * radius;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      if (!m.at(i, j)) continue;
      for (int di = -radius; di <= radius; ++di)
        for (int dj = -radius; dj <= radius; ++dj) {
          if (di * di + dj * dj > r2) continue;
          const int ii = i + di, jj = j + dj;
          if (ii >= 0 && ii < m.rows() && jj >= 0 && jj < m.cols()) out.set(ii, jj, true);
        }
    }
  return out;
}

Mask majority_smooth(const Mask& m) {
  Mask out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      int n = 0;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int ii = i + di, jj = j + dj;
          if (ii >= 0 && ii < m.rows() && jj >= 0 && jj < m.cols() && m.at(ii, jj)) ++n;
        }
      out.set(i, j, n >= 5);
    }
  return out;
}

namespace {

// flood fill over the given connectivity, returns component size
std::size_t flood(const Mask& m, std::vector<std::uint8_t>& seen, int si, int sj, bool target,
                  bool eight_conn, std::vector<std::pair<int, int>>& px) {
  px.clear();
  std::vector<std::pair<int, int>> stack{{si, sj}};
  seen[static_cast<std::size_t>(si) * m.cols() + sj] = 1;
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    stack.pop_back();
    px.emplace_back(i, j);
    const int lo = eight_conn ? -1 : 0;
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        if (!eight_conn && di != 0 && dj != 0) continue;
        (void)lo;
        const int ii = i + di, jj = j + dj;
        if (ii < 0 || ii >= m.rows() || jj < 0 || jj >= m.cols()) continue;
        const std::size_t k = static_cast<std::size_t>(ii) * m.cols() + jj;
        if (seen[k] || m.at(ii, jj) != target) continue;
        seen[k] = 1;
        stack.emplace_back(ii, jj);
      }
  }
  return px.size();
}

}  // namespace

Mask remove_small_components(const Mask& m, int min_area) {
  Mask out = m;
  std::vector<std::uint8_t> seen(m.size(), 0);
  std::vector<std::pair<int, int>> px;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * m.cols() + j;
      if (seen[k] || !m.at(i, j)) continue;
      flood(m, seen, i, j, true, true, px);
      if (px.size() < static_cast<std::size_t>(min_area))
        for (auto [pi, pj] : px) out.set(pi, pj, false);
    }
  return out;
}

Mask fill_holes(const Mask& m) {
  // background components not reachable from the border are holes
  std::vector<std::uint8_t> seen(m.size(), 0);
  std::vector<std::pair<int, int>> px;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const bool border = i == 0 || j == 0 || i == m.rows() - 1 || j == m.cols() - 1;
      if (!border || m.at(i, j)) continue;
      const std::size_t k = static_cast<std::size_t>(i) * m.cols() + j;
      if (seen[k]) continue;
      flood(m, seen, i, j, false, false, px);
    }
  Mask out = m;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * m.cols() + j;
      if (!m.at(i, j) && !seen[k]) out.set(i, j, true);
    }
  return out;
}

Mask segment_texture(const Image& v, const TextureParams& params) {
  Mask bin(v.rows(), v.cols());
  for (int i = 0; i < v.rows(); ++i)
    for (int j = 0; j < v.cols(); ++j) bin.set(i, j, std::abs(v.at(i, j)) > params.nonzero_tol);
  Mask closed = erode_square(dilate_square(bin, params.closing_size), params.closing_size);
  Mask smooth = majority_smooth(closed);
  Mask big = remove_small_components(smooth, params.min_component_area);
  return fill_holes(big);
}

Mask build_inpaint_mask(const Mask& roi, const Mask& missing, int dilation_radius) {
  require_same_shape(roi, missing, "build_inpaint_mask");
  Mask dil = dilate_disk(missing, dilation_radius);
  Mask out(roi.rows(), roi.cols());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (dil[k] && roi[k]) ? 1 : 0;
  return out;
}

PatchDictionary build_dictionary(const Image& v, const Mask& known, const TextureParams& params) {
  check_odd_patch(params.patch_size);
  require_same_shape(v, known, "build_dictionary");
  const int s = params.patch_size;
  if (s > std::min(v.rows(), v.cols()))
    throw std::invalid_argument("patch size exceeds image extent");
  if (!(params.min_known_fraction > 0.0 && params.min_known_fraction <= 1.0) ||
      !(params.min_texture_fraction > 0.0 && params.min_texture_fraction <= 1.0))
    throw std::invalid_argument("p1 and p2 must lie in (0, 1]");

  PatchDictionary dict;
  dict.patch_size = s;
  dict.source = v;
  dict.known = known;
  const int h = s / 2;
  const double area = static_cast<double>(s) * s;

  for (int i = 0; i + s <= v.rows(); ++i) {
    for (int j = 0; j + s <= v.cols(); ++j) {
      if (!known.at(i + h, j + h)) continue;  // central pixel must exist
      int n_known = 0, n_texture = 0;
      for (int oi = 0; oi < s; ++oi)
        for (int oj = 0; oj < s; ++oj) {
          if (!known.at(i + oi, j + oj)) continue;
          ++n_known;
          if (std::abs(v.at(i + oi, j + oj)) > params.nonzero_tol) ++n_texture;
        }
      if (n_known < params.min_known_fraction * area) continue;
      if (n_texture < params.min_texture_fraction * area) continue;
      dict.entries.push_back({i, j});
    }
  }
  return dict;
}

namespace {

// SSD per mutually known pixel between the window centered at (pi, pj) of
// `img` and the dictionary patch with top-left (er, ec).
bool patch_distance(const Image& img, const Mask& known_now, int pi, int pj,
                    const PatchDictionary& dict, int er, int ec, int min_overlap, double* score) {
  const int s = dict.patch_size;
  const int h = s / 2;
  int overlap = 0;
  double ssd = 0.0;
  for (int oi = 0; oi < s; ++oi) {
    const int ti = pi - h + oi;
    if (ti < 0 || ti >= img.rows()) continue;
    for (int oj = 0; oj < s; ++oj) {
      const int tj = pj - h + oj;
      if (tj < 0 || tj >= img.cols()) continue;
      if (!known_now.at(ti, tj) || !dict.known.at(er + oi, ec + oj)) continue;
      const double d = img.at(ti, tj) - dict.source.at(er + oi, ec + oj);
      ssd += d * d;
      ++overlap;
    }
  }
  if (overlap < min_overlap) return false;
  *score = ssd / static_cast<double>(overlap);
  return true;
}

Candidate best_match(const Image& img, const Mask& known_now, int pi, int pj,
                     const PatchDictionary& dict, int min_overlap) {
  const std::size_t n = dict.entries.size();
  std::vector<Candidate> partial;
  const std::size_t workers = std::min(worker_count(), std::size_t{1} + n / 512);
  partial.assign(std::max<std::size_t>(workers, 1), Candidate{});
  const std::size_t chunk = (n + partial.size() - 1) / partial.size();
  parallel_for(partial.size(), [&](std::size_t w0, std::size_t w1) {
    for (std::size_t w = w0; w < w1; ++w) {
      Candidate best;
      const std::size_t b = w * chunk, e = std::min(n, b + chunk);
      for (std::size_t idx = b; idx < e; ++idx) {
        const auto& entry = dict.entries[idx];
        double score;
        if (!patch_distance(img, known_now, pi, pj, dict, entry.row, entry.col, min_overlap, &score))
          continue;
        Candidate c{score, entry.row, entry.col};
        if (c.better_than(best)) best = c;
      }
      partial[w] = best;
    }
  });
  Candidate best;
  for (const auto& c : partial)
    if (c.better_than(best)) best = c;
  return best;
}

double known_fraction(const Mask& known_now, int pi, int pj, int s) {
  const int h = s / 2;
  int n = 0;
  for (int oi = -h; oi <= h; ++oi) {
    const int ti = pi + oi;
    if (ti < 0 || ti >= known_now.rows()) continue;
    for (int oj = -h; oj <= h; ++oj) {
      const int tj = pj + oj;
      if (tj < 0 || tj >= known_now.cols()) continue;
      if (known_now.at(ti, tj)) ++n;
    }
  }
  return static_cast<double>(n) / (static_cast<double>(s) * s);
}

}  // namespace

Image inpaint_texture(const Image& v, const Mask& inpaint_mask, const Mask& known,
                      const PatchDictionary& dict, const TextureParams& params,
                      InpaintStats* stats, const ProgressSink& progress, Mask* known_out) {
  check_odd_patch(params.patch_size);
  require_same_shape(v, inpaint_mask, "inpaint_texture");
  require_same_shape(v, known, "inpaint_texture");
  InpaintStats local;
  InpaintStats& st = stats ? *stats : local;

  std::vector<std::pair<int, int>> targets;
  for (int i = 0; i < v.rows(); ++i)
    for (int j = 0; j < v.cols(); ++j)
      if (inpaint_mask.at(i, j)) targets.emplace_back(i, j);
  st.targets = targets.size();
  if (targets.empty()) {
    if (known_out) *known_out = known;
    return v;
  }
  if (dict.entries.empty()) throw std::invalid_argument("inpaint_texture: empty dictionary");

  const int s = params.patch_size;
  const int min_overlap =
      std::max(1, static_cast<int>(std::ceil(params.min_overlap_fraction * s * s)));

  Image current = v;
  Mask known_now = known;
  std::vector<std::uint8_t> pending(targets.size(), 1);
  std::size_t done = 0;
  int next_milestone = 25;

  auto report = [&]() {
    if (!progress) return;
    while (next_milestone <= 100 &&
           done * 100 >= static_cast<std::size_t>(next_milestone) * targets.size()) {
      progress(next_milestone / 100.0, current);
      next_milestone += 25;
    }
  };

  auto fill_one = [&](std::size_t t, int overlap_req) -> bool {
    const auto [pi, pj] = targets[t];
    Candidate best = best_match(current, known_now, pi, pj, dict, overlap_req);
    if (!best.found()) return false;
    current.at(pi, pj) = dict.source.at(best.row + s / 2, best.col + s / 2);
    known_now.set(pi, pj, true);
    pending[t] = 0;
    ++done;
    ++st.filled;
    report();
    return true;
  };

  for (int tier = params.start_tier_percent; tier >= 0; tier -= 5) {
    // tier membership is frozen at tier start; fills inside the tier still
    // update the known set for subsequent targets
    std::vector<std::size_t> eligible;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      if (!pending[t]) continue;
      const auto [pi, pj] = targets[t];
      if (known_fraction(known_now, pi, pj, s) * 100.0 >= static_cast<double>(tier))
        eligible.push_back(t);
    }
    for (std::size_t t : eligible) {
      if (!pending[t]) continue;
      fill_one(t, min_overlap);
    }
  }

  // relaxed pass for isolated pixels
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (!pending[t]) continue;
    if (fill_one(t, 1)) {
      ++st.relaxed;
      continue;
    }
    const auto [pi, pj] = targets[t];
    current.at(pi, pj) = 0.0;
    pending[t] = 0;
    ++done;
    ++st.unfilled;
    st.warnings.push_back("no admissible patch for pixel (" + std::to_string(pi) + ", " +
                          std::to_string(pj) + ")");
    report();
  }

  if (known_out) *known_out = known_now;
  return current;
}

Image nlmeans_denoise(const Image& v, const Mask& roi, const Mask& known,
                      const TextureParams& params) {
  check_odd_patch(params.patch_size);
  require_same_shape(v, roi, "nlmeans_denoise");
  require_same_shape(v, known, "nlmeans_denoise");
  if (params.top_k < 1) throw std::invalid_argument("top_k must be >= 1");

  std::vector<std::pair<int, int>> targets;
  for (int i = 0; i < v.rows(); ++i)
    for (int j = 0; j < v.cols(); ++j)
      if (roi.at(i, j)) targets.emplace_back(i, j);
  if (targets.empty()) return v;

  const int s = params.patch_size;
  const int h = s / 2;
  const std::size_t k_best = static_cast<std::size_t>(params.top_k);
  Image current = v;

  for (int it = 0; it < params.nlm_iterations; ++it) {
    PatchDictionary dict = build_dictionary(current, known, params);
    // keep entries whose central pixel lies in the ROI
    std::vector<PatchDictionary::Entry> in_roi;
    for (const auto& entry : dict.entries)
      if (roi.at(entry.row + h, entry.col + h)) in_roi.push_back(entry);
    dict.entries = std::move(in_roi);
    if (dict.entries.empty()) break;

    Image next = current;
    parallel_for(targets.size(), [&](std::size_t t0, std::size_t t1) {
      std::vector<Candidate> top;
      for (std::size_t t = t0; t < t1; ++t) {
        const auto [pi, pj] = targets[t];
        top.clear();
        for (const auto& entry : dict.entries) {
          double score;
          if (!patch_distance(current, known, pi, pj, dict, entry.row, entry.col, 1, &score))
            continue;
          Candidate c{score, entry.row, entry.col};
          if (top.size() < k_best) {
            top.push_back(c);
            std::sort(top.begin(), top.end(),
                      [](const Candidate& a, const Candidate& b) { return a.better_than(b); });
          } else if (c.better_than(top.back())) {
            top.back() = c;
            std::sort(top.begin(), top.end(),
                      [](const Candidate& a, const Candidate& b) { return a.better_than(b); });
          }
        }
        if (top.empty()) continue;
        double mean = 0.0;
        for (const auto& c : top) mean += dict.source.at(c.row + h, c.col + h);
        next.at(pi, pj) = mean / static_cast<double>(top.size());
      }
    });
    current = std::move(next);
  }
  return current;
}

Image synthesize(const Image& u, const Image& v_restored) {
  require_same_shape(u, v_restored, "synthesize");
  return add(u, v_restored);
}

Image compose_v_texture(const Image& v, const Image& e1, const Mask& missing, const Mask& roi) {
  require_same_shape(v, e1, "compose_v_texture");
  require_same_shape(v, missing, "compose_v_texture");
  require_same_shape(v, roi, "compose_v_texture");
  Image out(v.rows(), v.cols());
  for (std::size_t k = 0; k < v.size(); ++k)
    out[k] = (v[k] + e1[k] * (missing[k] ? 1.0 : 0.0)) * (roi[k] ? 1.0 : 0.0);
  return out;
}

}  // namespace dg3pd
