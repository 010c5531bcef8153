// Acceptance suite: one criterion per entry, each printing a single
// PASS/FAIL line. Run with no arguments for all criteria or with a list of
// criterion numbers. Exit code is the number of failures.
//
// Thresholds are pinned here; the handful of dB anchors marked "frozen" were
// recorded at first calibration on the 64x64 challenge fixture (seed 1) and
// guard against regressions rather than stating external claims.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "core/directional.hpp"
#include "core/filters.hpp"
#include "core/metrics.hpp"
#include "core/msdt.hpp"
#include "core/rng.hpp"
#include "core/scene.hpp"
#include "core/solver.hpp"
#include "core/texture.hpp"
#include "core/tvl2.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace dg3pd;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// the standard fixture: 64x64 challenge scene, sigma = 100, 30% missing
ChallengeScene fixture() { return make_challenge_scene(64, 64, 100.0, 0.30, MaskKind::Blobs, 1); }

// ---- criterion 1: frame unity, u-problem ----
Check criterion1() {
  Check c;
  for (int L : {4, 8}) {
    FilterBank bank = build_u_filters(L, 0.04, 0.04, 128, 128);
    const double err = unity_error_u(bank);
    c.note("L=" + std::to_string(L) + " err=" + fmt(err));
    c.expect(err <= 1e-12, "unity error above 1e-12 at L=" + std::to_string(L));
  }
  return c;
}

// ---- criterion 2: frame unity, g-problem ----
Check criterion2() {
  Check c;
  for (int S : {4, 8}) {
    FilterBank bank = build_g_filters(S, 0.3, 0.3, 128, 128);
    const double err = unity_error_g(bank);
    c.note("S=" + std::to_string(S) + " err=" + fmt(err));
    c.expect(err <= 1e-12, "unity error above 1e-12 at S=" + std::to_string(S));
  }
  return c;
}

// ---- criterion 3: Riesz bounds attained at DC ----
Check criterion3() {
  Check c;
  const double beta1 = 0.04, beta4 = 0.04, beta2 = 0.3, beta3 = 0.3;
  auto sq = dir_symbol_sq_sum(128, 128, 4);
  double min_x = 1e300;
  std::size_t argmin = 1;
  for (std::size_t k = 0; k < sq.size(); ++k) {
    const double x = beta4 + beta1 * sq[k];
    if (x < min_x) {
      min_x = x;
      argmin = k;
    }
  }
  c.expect(argmin == 0, "min X not at DC");
  c.expect(std::abs(min_x - beta4) <= 1e-12, "min X differs from beta4");
  c.note("min X=" + fmt(min_x) + " at k=" + std::to_string(argmin));

  for (int a = 0; a < 4; ++a) {
    Spectrum p = dir_symbol(128, 128, a, 4);
    double min_a = 1e300;
    std::size_t arg_a = 1;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double v = beta2 + beta3 * std::norm(p[k]);
      if (v < min_a) {
        min_a = v;
        arg_a = k;
      }
    }
    c.expect(arg_a == 0 && std::abs(min_a - beta2) <= 1e-12,
             "min A_" + std::to_string(a) + " not beta2 at DC");
  }
  return c;
}

// ---- criterion 4: transform integrity ----
Check criterion4() {
  Check c;
  Rng rng(404);
  for (int n : {64, 128}) {
    auto plan = make_msdt_plan(n, n);
    const double part = plan->partition_deviation();
    Image x = testutil::random_image(n, n, rng, 0.0, 255.0);
    const double rt = testutil::rel_l2_diff(msdt_inverse(msdt_forward(x, plan)), x);
    c.note(std::to_string(n) + "x" + std::to_string(n) + ": partition=" + fmt(part) +
           " roundtrip=" + fmt(rt));
    c.expect(part <= 1e-10, "partition deviation above 1e-10");
    c.expect(rt <= 1e-10, "round-trip error above 1e-10");
  }
  return c;
}

// ---- criterion 5: subproblem oracles on 8x8 random states ----
Check criterion5() {
  Check c;
  double worst_u = 0.0, worst_g = 0.0, worst_eps = 0.0, worst_r = 0.0;
  for (int seed = 0; seed < 10; ++seed) {
    Rng rng(505 + static_cast<std::uint64_t>(seed));
    SolverParams p;
    p.iterations = 1;
    Mask missing(8, 8);
    for (std::size_t k = 0; k < missing.size(); ++k) missing[k] = rng.uniform() < 0.3 ? 1 : 0;
    SolverState st(testutil::random_image(8, 8, rng, 0.0, 4.0), &missing, p);
    auto fill = [&](Image& img) {
      for (std::size_t k = 0; k < img.size(); ++k) img[k] = rng.uniform(-2.0, 2.0);
    };
    fill(st.u);
    fill(st.v);
    fill(st.eps);
    fill(st.e);
    for (auto& x : st.r) fill(x);
    for (auto& x : st.w) fill(x);
    for (auto& x : st.g) fill(x);
    for (auto& x : st.lambda1) fill(x);
    for (auto& x : st.lambda2) fill(x);
    fill(st.lambda3);
    fill(st.lambda4);
    fill(st.lambda5);

    const double b1 = p.beta1(), b2 = p.beta2(), b3 = p.beta3(), b4 = p.beta4, b5 = p.beta5();
    const int L = p.tv_directions, S = p.g_directions;

    // r-problem vs per-pixel golden-section minimization
    const Image u0 = st.u;
    const auto lambda1 = st.lambda1;
    st.step_r();
    for (int l = 0; l < L; ++l) {
      Image grad = dir_forward(u0, l, L);
      for (std::size_t k = 0; k < grad.size(); ++k) {
        const double t = grad[k] - lambda1[static_cast<std::size_t>(l)][k] / b1;
        auto obj = [&](double rv) { return std::abs(rv) + 0.5 * b1 * (rv - t) * (rv - t); };
        const double oracle = oracles::golden_min(obj, std::min(t, 0.0) - 1.0, std::max(t, 0.0) + 1.0);
        worst_r = std::max(worst_r, std::abs(st.r[static_cast<std::size_t>(l)][k] - oracle));
      }
    }

    // g-problem normal equations (Gauss-Seidel freshness respected)
    const auto g_before = st.g;
    const Image v0 = st.v, l3 = st.lambda3;
    const auto w0 = st.w;
    const auto l2 = st.lambda2;
    st.step_g();
    for (int a = 0; a < S; ++a) {
      auto Da = oracles::dir_matrix(8, 8, a, S);
      Image bracket = v0;
      for (std::size_t k = 0; k < bracket.size(); ++k) bracket[k] += l3[k] / b3;
      for (int s = 0; s < S; ++s) {
        if (s == a) continue;
        const Image& gs =
            s < a ? st.g[static_cast<std::size_t>(s)] : g_before[static_cast<std::size_t>(s)];
        sub_in_place(bracket, dir_forward(gs, s, S));
      }
      std::vector<double> rhs = oracles::mat_t_vec(Da, oracles::to_vec(bracket));
      for (std::size_t k = 0; k < rhs.size(); ++k)
        rhs[k] = b2 * (w0[static_cast<std::size_t>(a)][k] +
                       l2[static_cast<std::size_t>(a)][k] / b2) +
                 b3 * rhs[k];
      std::vector<double> gv = oracles::to_vec(st.g[static_cast<std::size_t>(a)]);
      std::vector<double> lhs = oracles::mat_t_vec(Da, oracles::mat_vec(Da, gv));
      for (std::size_t k = 0; k < lhs.size(); ++k)
        worst_g = std::max(worst_g, std::abs(b2 * gv[k] + b3 * lhs[k] - rhs[k]));
    }

    // u-problem normal equations
    st.step_u();
    {
      std::vector<double> rhs(64, 0.0), lhs(64, 0.0);
      std::vector<double> uv = oracles::to_vec(st.u);
      for (std::size_t k = 0; k < 64; ++k) {
        rhs[k] = b4 * (st.f[k] - st.v[k] - st.eps[k] + st.lambda4[k] / b4);
        lhs[k] = b4 * uv[k];
      }
      for (int l = 0; l < L; ++l) {
        auto Dl = oracles::dir_matrix(8, 8, l, L);
        Image t(8, 8);
        for (std::size_t k = 0; k < 64; ++k)
          t[k] = st.r[static_cast<std::size_t>(l)][k] +
                 st.lambda1[static_cast<std::size_t>(l)][k] / b1;
        std::vector<double> dt = oracles::mat_t_vec(Dl, oracles::to_vec(t));
        std::vector<double> ddu = oracles::mat_t_vec(Dl, oracles::mat_vec(Dl, uv));
        for (std::size_t k = 0; k < 64; ++k) {
          rhs[k] += b1 * dt[k];
          lhs[k] += b1 * ddu[k];
        }
      }
      for (std::size_t k = 0; k < 64; ++k) worst_u = std::max(worst_u, std::abs(lhs[k] - rhs[k]));
    }

    // eps-problem vs closed-form quadratic vertex
    st.step_eps();
    for (std::size_t k = 0; k < st.eps.size(); ++k) {
      const double chi = missing[k] ? 0.0 : 1.0;
      const double a = st.f[k] - st.u[k] - st.v[k] + st.lambda4[k] / b4;
      const double cc = st.e[k] + st.lambda5[k] / b5;
      const double oracle = (b4 * a + b5 * cc * chi) / (b4 + b5 * chi * chi);
      worst_eps = std::max(worst_eps, std::abs(st.eps[k] - oracle));
    }
  }
  c.note("residuals: u=" + fmt(worst_u) + " g=" + fmt(worst_g) + " eps=" + fmt(worst_eps) +
         " r=" + fmt(worst_r));
  c.expect(worst_u <= 1e-8, "u normal equation residual above 1e-8");
  c.expect(worst_g <= 1e-8, "g normal equation residual above 1e-8");
  c.expect(worst_eps <= 1e-10, "eps mismatch above 1e-10");
  c.expect(worst_r <= 1e-6, "r mismatch above 1e-6");
  return c;
}

// ---- criterion 6: adjointness ----
Check criterion6() {
  Check c;
  Rng rng(606);
  double worst = 0.0;
  for (int L : {4, 8, 100}) {
    for (int pair = 0; pair < 20; ++pair) {
      Image x = testutil::random_image(6, 6, rng);
      Image y = testutil::random_image(6, 6, rng);
      for (int l = 0; l < L; ++l)
        worst = std::max(worst, std::abs(dot(dir_forward(x, l, L), y) + dot(x, dir_backward(y, l, L))));
    }
  }
  c.note("worst |<d+x,y> + <x,d-y>| = " + fmt(worst));
  c.expect(worst <= 1e-10, "adjoint identity above 1e-10");
  return c;
}

// ---- criterion 7: reduction to the plain decomposition ----
Check criterion7() {
  Check c;
  Rng rng(707);
  Image f = testutil::random_image(64, 64, rng, 0.0, 255.0);
  SolverParams p;
  p.iterations = 50;
  Mask all_known(64, 64, false);
  Decomposition masked = run(f, all_known, p);
  Decomposition plain = run_decompose(f, p);
  const bool same = testutil::bit_identical(masked.u, plain.u) &&
                    testutil::bit_identical(masked.v, plain.v) &&
                    testutil::bit_identical(masked.eps, plain.eps) &&
                    testutil::bit_identical(masked.e, plain.e) &&
                    testutil::bit_identical(masked.e1, plain.e1);
  c.expect(same, "all-known run differs from the dedicated no-mask path");
  c.note(same ? "bit-identical over u, v, eps, e, e1 (T=50, 64x64)" : "mismatch");
  return c;
}

// ---- criterion 8: end-to-end convergence at default parameters ----
Check criterion8() {
  Check c;
  ChallengeScene sc = fixture();
  SolverParams p;
  p.iterations = 200;
  Decomposition d = run(sc.noisy, sc.missing, p);
  const double ur = unity_residual_known(d, sc.noisy, sc.missing);
  std::vector<Image> parts;
  for (int s = 0; s < d.g_directions; ++s) parts.push_back(d.texture_direction(s));
  EmpiricalFilters emp = empirical_filters(sc.noisy, d.u, parts, d.eps);
  c.note("unity residual=" + fmt(ur) + " unity MSE=" + fmt(emp.unity_mse));
  c.expect(ur <= 1e-3, "relative unity residual above 1e-3");
  c.expect(emp.unity_mse <= 1e-4, "empirical unity MSE above 1e-4");

  // monitored (not asserted by the model): residual trend and the frame
  // feasibility ratio at the final iterate
  const double half = d.trace[d.trace.size() / 2].unity_residual_l2;
  c.expect(d.trace.back().unity_residual_l2 <= half * 1.05,
           "unity residual grew over the last half of the run");
  Mask known = sc.missing.complement();
  auto plan = make_msdt_plan(64, 64);
  const double sup = sup_coeff(msdt_forward(pointwise_mul(d.eps, known.to_image()), plan));
  const double ratio = sup / d.trace.back().nu;
  c.note("feasibility sup/nu=" + fmt(ratio) + " (frame slack, frozen bound 1.5)");
  c.expect(ratio <= 1.5, "feasibility ratio above frozen bound 1.5");
  return c;
}

// ---- criterion 9: restoration improvement and the TVL2 comparison ----
Check criterion9() {
  Check c;
  ChallengeScene sc = fixture();
  const Mask& troi = sc.stripe_region;
  Mask known = sc.missing.complement();

  // restoration configuration frozen at first calibration: the absolute-nu
  // policy (as used for texture work), nu = 25 on this fixture
  SolverParams p;
  p.iterations = 200;
  p.nu = NuPolicy::fixed(25.0);
  Decomposition d = run(sc.noisy, sc.missing, p);

  TextureParams tp;
  Mask roi = segment_texture(d.v, tp);
  Mask inp = build_inpaint_mask(roi, sc.missing, tp.dilation_radius);
  Image v_rest = d.v;
  Mask known_after = known;
  if (!inp.empty_set()) {
    PatchDictionary dict = build_dictionary(d.v, known, tp);
    if (!dict.entries.empty())
      v_rest = inpaint_texture(d.v, inp, known, dict, tp, nullptr, nullptr, &known_after);
  }
  Image v_den = nlmeans_denoise(v_rest, roi, known_after, tp);
  Image restored = synthesize(d.u, v_den);

  Image degraded = pointwise_mul(sc.noisy, known);
  const double psnr_restored = psnr(restored, sc.clean, nullptr);
  const double psnr_degraded = psnr(degraded, sc.clean, nullptr);
  const double roi_dg3pd = psnr(restored, sc.clean, &troi);

  Tvl2Params tvl2p;
  tvl2p.fidelity = 0.005;  // the smaller-beta TVL2 setting referenced for smooth results
  Tvl2Result tvl2 = tvl2_inpaint(sc.noisy, sc.missing, tvl2p);
  const double roi_tvl2 = psnr(tvl2.u, sc.clean, &troi);
  const double full_tvl2 = psnr(tvl2.u, sc.clean, nullptr);

  c.note("restored=" + fmt(psnr_restored) + "dB degraded=" + fmt(psnr_degraded) +
         "dB | roi dg3pd=" + fmt(roi_dg3pd) + " tvl2=" + fmt(roi_tvl2));
  c.expect(psnr_restored >= psnr_degraded + 3.0, "less than 3 dB over the degraded input");
  c.expect(roi_dg3pd >= roi_tvl2, "texture-ROI PSNR below TVL2");

  // frozen regression anchors (first calibration, seed 1)
  c.expect(std::abs(psnr_restored - 14.22) <= 0.5, "restored PSNR drifted from 14.22 anchor");
  c.expect(std::abs(roi_dg3pd - 10.65) <= 0.5, "dg3pd ROI PSNR drifted from 10.65 anchor");
  c.expect(std::abs(full_tvl2 - 13.55) <= 0.5, "tvl2 PSNR drifted from 13.55 anchor");
  c.expect(std::abs(roi_tvl2 - 10.00) <= 0.5, "tvl2 ROI PSNR drifted from 10.00 anchor");
  return c;
}

// ---- criterion 10: residual normality ----
Check criterion10() {
  Check c;
  ChallengeScene sc = fixture();
  SolverParams p;
  p.iterations = 200;
  Decomposition d = run(sc.noisy, sc.missing, p);
  Mask known = sc.missing.complement();
  QqReport qq = qq_normal(d.eps, &known);
  c.note("qq correlation=" + fmt(qq.correlation));
  c.expect(qq.correlation >= 0.98, "qq correlation below 0.98");
  return c;
}

// ---- criterion 11: texture pipeline properties ----
Check criterion11() {
  Check c;
  // dictionary equals the exhaustive enumeration oracle on a 64x64 fixture
  {
    Rng rng(1111);
    const int n = 64;
    Image v(n, n);
    Mask known(n, n, true);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        v.at(i, j) = rng.uniform() < 0.25 ? 0.0 : rng.uniform(-3.0, 3.0);
        if (rng.uniform() < 0.12) known.set(i, j, false);
      }
    TextureParams tp;
    PatchDictionary dict = build_dictionary(v, known, tp);
    std::vector<std::pair<int, int>> expected;
    const int s = tp.patch_size, h = s / 2;
    for (int i = 0; i + s <= n; ++i)
      for (int j = 0; j + s <= n; ++j) {
        if (!known.at(i + h, j + h)) continue;
        int kn = 0, tx = 0;
        for (int oi = 0; oi < s; ++oi)
          for (int oj = 0; oj < s; ++oj) {
            if (!known.at(i + oi, j + oj)) continue;
            ++kn;
            if (std::abs(v.at(i + oi, j + oj)) > tp.nonzero_tol) ++tx;
          }
        if (kn >= tp.min_known_fraction * s * s && tx >= tp.min_texture_fraction * s * s)
          expected.emplace_back(i, j);
      }
    bool match = dict.entries.size() == expected.size() && !expected.empty();
    if (match)
      for (std::size_t k = 0; k < expected.size(); ++k)
        match = match && dict.entries[k].row == expected[k].first &&
                dict.entries[k].col == expected[k].second;
    c.expect(match, "dictionary differs from the enumeration oracle");
    c.note("dictionary entries=" + std::to_string(dict.entries.size()));
  }

  // inpainting writes only inside mask I; constant-texture hole filled exactly
  {
    const double cval = 4.25;
    Image v(64, 64, cval);
    Mask missing(64, 64);
    for (int i = 30; i < 37; ++i)
      for (int j = 22; j < 29; ++j) missing.set(i, j, true);
    Mask known = missing.complement();
    for (std::size_t k = 0; k < v.size(); ++k)
      if (missing[k]) v[k] = 0.0;
    PatchDictionary dict = build_dictionary(v, known, {});
    Image out = inpaint_texture(v, missing, known, dict, {});
    bool outside_ok = true, hole_ok = true;
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (missing[k]) {
        hole_ok = hole_ok && out[k] == cval;
      } else {
        outside_ok = outside_ok && out[k] == v[k];
      }
    }
    c.expect(outside_ok, "inpainting touched pixels outside mask I");
    c.expect(hole_ok, "constant-texture hole not filled exactly");
  }

  // NL-means fixed point on constant images
  {
    Image v(48, 48, 3.0);
    Mask roi(48, 48);
    for (int i = 12; i < 36; ++i)
      for (int j = 12; j < 36; ++j) roi.set(i, j, true);
    TextureParams tp;
    tp.nlm_iterations = 3;
    Image out = nlmeans_denoise(v, roi, Mask(48, 48, true), tp);
    c.expect(testutil::max_abs_diff(out, v) <= 1e-12, "NL-means moved a constant image");
  }
  return c;
}

struct Criterion {
  int id;
  const char* name;
  Check (*run)();
};

const Criterion kCriteria[] = {
    {1, "frame unity (u-problem)", criterion1},
    {2, "frame unity (g-problem)", criterion2},
    {3, "Riesz bounds at DC", criterion3},
    {4, "transform integrity", criterion4},
    {5, "subproblem oracles", criterion5},
    {6, "adjointness", criterion6},
    {7, "reduction to the no-mask decomposition", criterion7},
    {8, "end-to-end convergence", criterion8},
    {9, "restoration improvement vs TVL2", criterion9},
    {10, "residual normality", criterion10},
    {11, "texture pipeline properties", criterion11},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& criterion : kCriteria) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), criterion.id) == wanted.end())
      continue;
    Check c = criterion.run();
    std::printf("%s criterion %d: %s%s%s\n", c.ok ? "PASS" : "FAIL", criterion.id, criterion.name,
                c.detail.empty() ? "" : " -- ", c.detail.c_str());
    std::fflush(stdout);
    if (!c.ok) ++failures;
  }
  return failures;
}
