// Tests of the public C API against the shared library only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "dg3pd.h"

namespace {

std::string tmp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

struct Cleanup {
  std::vector<dg3pd_image*> images;
  std::vector<dg3pd_mask*> masks;
  ~Cleanup() {
    for (auto* p : images) dg3pd_image_free(p);
    for (auto* p : masks) dg3pd_mask_free(p);
  }
  dg3pd_image* img(dg3pd_image* p) {
    images.push_back(p);
    return p;
  }
  dg3pd_mask* msk(dg3pd_mask* p) {
    masks.push_back(p);
    return p;
  }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(dg3pd_version()) > 0);
  CHECK(std::string(dg3pd_status_name(DG3PD_OK)) == "ok");
  CHECK(std::string(dg3pd_status_name(DG3PD_ERR_IO)) == "io failure");
}

TEST_CASE("image lifecycle, data access and validation") {
  Cleanup c;
  dg3pd_image* img = nullptr;
  REQUIRE(dg3pd_image_create(4, 6, &img) == DG3PD_OK);
  c.img(img);
  CHECK(dg3pd_image_rows(img) == 4);
  CHECK(dg3pd_image_cols(img) == 6);

  CHECK(dg3pd_image_create(0, 4, &img) == DG3PD_ERR_INVALID);
  CHECK(std::strlen(dg3pd_last_error()) > 0);

  std::vector<double> data(12, 1.5);
  data[5] = 300.7;
  dg3pd_image* from = nullptr;
  REQUIRE(dg3pd_image_from_data(3, 4, data.data(), &from) == DG3PD_OK);
  c.img(from);
  std::vector<double> out(12, 0.0);
  CHECK(dg3pd_image_copy_data(from, out.data(), 4) == DG3PD_ERR_INVALID);  // buffer too small
  REQUIRE(dg3pd_image_copy_data(from, out.data(), out.size()) == DG3PD_OK);
  CHECK(out[5] == 300.7);

  dg3pd_image* q = nullptr;
  REQUIRE(dg3pd_image_quantize(from, &q) == DG3PD_OK);
  c.img(q);
  REQUIRE(dg3pd_image_copy_data(q, out.data(), out.size()) == DG3PD_OK);
  CHECK(out[5] == 255.0);

  const double nan_val = std::nan("");
  std::vector<double> bad(12, nan_val);
  dg3pd_image* bad_img = nullptr;
  CHECK(dg3pd_image_from_data(3, 4, bad.data(), &bad_img) == DG3PD_ERR_INVALID);

  dg3pd_image* sum = nullptr;
  dg3pd_image* five = nullptr;
  REQUIRE(dg3pd_image_create(3, 4, &five) == DG3PD_OK);
  c.img(five);
  REQUIRE(dg3pd_image_add(from, five, &sum) == DG3PD_OK);
  c.img(sum);
  dg3pd_image* mismatch = nullptr;
  CHECK(dg3pd_image_add(from, img, &mismatch) == DG3PD_ERR_INVALID);
}

TEST_CASE("image and mask file io through the C API") {
  Cleanup c;
  dg3pd_image *f0 = nullptr, *f = nullptr;
  dg3pd_mask* missing = nullptr;
  REQUIRE(dg3pd_challenge_scene(32, 32, 20.0, 0.2, DG3PD_MASK_BLOBS, 5, &f0, &f, &missing,
                                nullptr) == DG3PD_OK);
  c.img(f0);
  c.img(f);
  c.msk(missing);

  const std::string pfm = tmp_path("dg3pd_capi.pfm");
  const std::string pgm = tmp_path("dg3pd_capi.pgm");
  REQUIRE(dg3pd_image_write_pfm(f, pfm.c_str()) == DG3PD_OK);
  REQUIRE(dg3pd_image_write_pgm(f, pgm.c_str()) == DG3PD_OK);
  dg3pd_image* back = nullptr;
  REQUIRE(dg3pd_image_read_pfm(pfm.c_str(), &back) == DG3PD_OK);
  c.img(back);
  CHECK(dg3pd_image_rows(back) == 32);
  dg3pd_image* noback = nullptr;
  CHECK(dg3pd_image_read_pfm("/nonexistent/x.pfm", &noback) == DG3PD_ERR_IO);

  const std::string mpgm = tmp_path("dg3pd_capi_mask.pgm");
  REQUIRE(dg3pd_mask_write_pgm(missing, mpgm.c_str()) == DG3PD_OK);
  dg3pd_mask* mback = nullptr;
  REQUIRE(dg3pd_mask_read_pgm(mpgm.c_str(), &mback) == DG3PD_OK);
  c.msk(mback);
  CHECK(dg3pd_mask_fraction(mback) == dg3pd_mask_fraction(missing));

  dg3pd_mask* comp = nullptr;
  REQUIRE(dg3pd_mask_complement(missing, &comp) == DG3PD_OK);
  c.msk(comp);
  CHECK(dg3pd_mask_fraction(comp) == doctest::Approx(1.0 - dg3pd_mask_fraction(missing)));

  std::remove(pfm.c_str());
  std::remove(pgm.c_str());
  std::remove(mpgm.c_str());
}

TEST_CASE("challenge scene is deterministic per seed") {
  Cleanup c;
  dg3pd_image *a = nullptr, *b = nullptr;
  REQUIRE(dg3pd_challenge_scene(32, 32, 50.0, 0.25, DG3PD_MASK_SCRATCHES, 11, nullptr, &a,
                                nullptr, nullptr) == DG3PD_OK);
  REQUIRE(dg3pd_challenge_scene(32, 32, 50.0, 0.25, DG3PD_MASK_SCRATCHES, 11, nullptr, &b,
                                nullptr, nullptr) == DG3PD_OK);
  c.img(a);
  c.img(b);
  std::vector<double> va(32 * 32), vb(32 * 32);
  REQUIRE(dg3pd_image_copy_data(a, va.data(), va.size()) == DG3PD_OK);
  REQUIRE(dg3pd_image_copy_data(b, vb.data(), vb.size()) == DG3PD_OK);
  CHECK(va == vb);

  CHECK(dg3pd_challenge_scene(32, 32, 50.0, 1.5, DG3PD_MASK_BLOBS, 1, nullptr, &a, nullptr,
                              nullptr) == DG3PD_ERR_INVALID);
}

TEST_CASE("parameter defaults") {
  dg3pd_params p;
  dg3pd_params_init(&p);
  CHECK(p.tv_directions == 4);
  CHECK(p.g_directions == 4);
  CHECK(p.beta4 == doctest::Approx(0.04));
  CHECK(p.theta / (1.0 - p.theta) * p.beta4 == doctest::Approx(0.3));
  CHECK(p.nu_fixed == 0);
  CHECK(p.nu_value == doctest::Approx(0.5));
  CHECK(p.iterations == 200);

  dg3pd_texture_params t;
  dg3pd_texture_params_init(&t);
  CHECK(t.patch_size == 15);
  CHECK(t.min_known_fraction == doctest::Approx(0.70));
  CHECK(t.min_texture_fraction == doctest::Approx(0.60));
  CHECK(t.min_overlap_fraction == doctest::Approx(0.30));
  CHECK(t.top_k == 5);
  CHECK(t.nlm_iterations == 10);
  CHECK(t.dilation_radius == 5);

  dg3pd_tvl2_params v;
  dg3pd_tvl2_params_init(&v);
  CHECK(v.fidelity > 0.0);
  CHECK(v.isotropic == 1);
}

TEST_CASE("decomposition through the C API") {
  Cleanup c;
  dg3pd_image *f0 = nullptr, *f = nullptr;
  dg3pd_mask* missing = nullptr;
  REQUIRE(dg3pd_challenge_scene(32, 32, 30.0, 0.2, DG3PD_MASK_BLOBS, 3, &f0, &f, &missing,
                                nullptr) == DG3PD_OK);
  c.img(f0);
  c.img(f);
  c.msk(missing);

  dg3pd_params p;
  dg3pd_params_init(&p);
  p.iterations = 5;
  dg3pd_decomposition* d = nullptr;
  REQUIRE(dg3pd_decompose(f, missing, &p, &d) == DG3PD_OK);
  CHECK(dg3pd_decomposition_trace_length(d) == 5);
  CHECK(dg3pd_decomposition_direction_count(d) == 4);

  dg3pd_image* u = nullptr;
  REQUIRE(dg3pd_decomposition_component(d, DG3PD_COMP_U, &u) == DG3PD_OK);
  c.img(u);
  dg3pd_image* vs = nullptr;
  REQUIRE(dg3pd_decomposition_texture_direction(d, 0, &vs) == DG3PD_OK);
  c.img(vs);
  dg3pd_image* bad = nullptr;
  CHECK(dg3pd_decomposition_texture_direction(d, 9, &bad) == DG3PD_ERR_INVALID);

  const std::string csv = tmp_path("dg3pd_capi_metrics.csv");
  REQUIRE(dg3pd_decomposition_write_metrics_csv(d, csv.c_str()) == DG3PD_OK);
  std::FILE* fp = std::fopen(csv.c_str(), "r");
  REQUIRE(fp != nullptr);
  int lines = 0;
  for (int ch; (ch = std::fgetc(fp)) != EOF;)
    if (ch == '\n') ++lines;
  std::fclose(fp);
  CHECK(lines == 6);  // header + 5 iterations
  std::remove(csv.c_str());

  double ur = 0.0;
  REQUIRE(dg3pd_decomposition_unity_residual(d, f, missing, &ur) == DG3PD_OK);
  CHECK(ur >= 0.0);

  // no-mask path via NULL mask
  dg3pd_decomposition* d2 = nullptr;
  REQUIRE(dg3pd_decompose(f, nullptr, &p, &d2) == DG3PD_OK);
  dg3pd_decomposition_free(d2);
  dg3pd_decomposition_free(d);

  CHECK(dg3pd_decompose(nullptr, missing, &p, &d) == DG3PD_ERR_INVALID);
  dg3pd_params bad_params = p;
  bad_params.theta = 2.0;
  CHECK(dg3pd_decompose(f, missing, &bad_params, &d) == DG3PD_ERR_INVALID);
}

TEST_CASE("texture restoration and synthesis through the C API") {
  Cleanup c;
  // sparse oriented texture with a hole
  const int n = 48;
  std::vector<double> vdata(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 8; i < 40; ++i)
    for (int j = 8; j < 40; ++j)
      vdata[static_cast<std::size_t>(i) * n + j] = 20.0 * std::sin(2.0 * 3.14159265 * (i + j) / 6.0);
  dg3pd_image* v = nullptr;
  REQUIRE(dg3pd_image_from_data(n, n, vdata.data(), &v) == DG3PD_OK);
  c.img(v);

  std::vector<uint8_t> holes(static_cast<std::size_t>(n) * n, 0);
  for (int i = 20; i < 26; ++i)
    for (int j = 20; j < 26; ++j) holes[static_cast<std::size_t>(i) * n + j] = 1;
  dg3pd_mask* missing = nullptr;
  REQUIRE(dg3pd_mask_from_data(n, n, holes.data(), &missing) == DG3PD_OK);
  c.msk(missing);

  dg3pd_mask* roi = nullptr;
  REQUIRE(dg3pd_segment_texture(v, &roi) == DG3PD_OK);
  c.msk(roi);
  CHECK(dg3pd_mask_fraction(roi) > 0.2);

  dg3pd_mask* inp = nullptr;
  REQUIRE(dg3pd_build_inpaint_mask(roi, missing, 5, &inp) == DG3PD_OK);
  c.msk(inp);
  CHECK(dg3pd_mask_fraction(inp) > 0.0);

  dg3pd_texture_params tp;
  dg3pd_texture_params_init(&tp);
  tp.nlm_iterations = 1;
  dg3pd_image* restored_v = nullptr;
  dg3pd_mask* roi2 = nullptr;
  REQUIRE(dg3pd_restore_texture(v, missing, &tp, nullptr, nullptr, &restored_v, &roi2) == DG3PD_OK);
  c.img(restored_v);
  c.msk(roi2);

  dg3pd_image* base = nullptr;
  REQUIRE(dg3pd_image_create(n, n, &base) == DG3PD_OK);
  c.img(base);
  dg3pd_image* out = nullptr;
  REQUIRE(dg3pd_synthesize(base, restored_v, &out) == DG3PD_OK);
  c.img(out);

  dg3pd_image* vt = nullptr;
  REQUIRE(dg3pd_compose_v_texture(v, v, missing, roi, &vt) == DG3PD_OK);
  c.img(vt);
}

TEST_CASE("tvl2 through the C API") {
  Cleanup c;
  dg3pd_image* f = nullptr;
  dg3pd_mask* missing = nullptr;
  REQUIRE(dg3pd_challenge_scene(32, 32, 10.0, 0.15, DG3PD_MASK_BLOBS, 9, nullptr, &f, &missing,
                                nullptr) == DG3PD_OK);
  c.img(f);
  c.msk(missing);
  dg3pd_tvl2_params p;
  dg3pd_tvl2_params_init(&p);
  p.iterations = 30;
  const std::string csv = tmp_path("dg3pd_capi_tvl2.csv");
  dg3pd_image* u = nullptr;
  REQUIRE(dg3pd_tvl2_inpaint(f, missing, &p, &u, csv.c_str()) == DG3PD_OK);
  c.img(u);
  CHECK(std::filesystem::exists(csv));
  std::remove(csv.c_str());

  p.fidelity = -1.0;
  dg3pd_image* bad = nullptr;
  CHECK(dg3pd_tvl2_inpaint(f, missing, &p, &bad, nullptr) == DG3PD_ERR_INVALID);
}

TEST_CASE("filter banks through the C API") {
  dg3pd_filterbank* bu = nullptr;
  REQUIRE(dg3pd_filterbank_build_u(4, 0.04, 0.04, 64, 64, &bu) == DG3PD_OK);
  double err = 1.0;
  REQUIRE(dg3pd_filterbank_unity_error(bu, &err) == DG3PD_OK);
  CHECK(err <= 1e-12);
  CHECK(dg3pd_filterbank_band_count(bu) == 1 + 2 * 4);
  char name[64];
  REQUIRE(dg3pd_filterbank_band_name(bu, 0, name, sizeof(name)) == DG3PD_OK);
  CHECK(std::string(name) == "phi");
  dg3pd_image *re = nullptr, *im = nullptr;
  REQUIRE(dg3pd_filterbank_band(bu, 0, &re, &im) == DG3PD_OK);
  std::vector<double> phi(64 * 64);
  REQUIRE(dg3pd_image_copy_data(re, phi.data(), phi.size()) == DG3PD_OK);
  CHECK(phi[0] == doctest::Approx(1.0));  // DC gain
  dg3pd_image_free(re);
  dg3pd_image_free(im);
  CHECK(dg3pd_filterbank_band(bu, 99, &re, &im) == DG3PD_ERR_INVALID);
  dg3pd_filterbank_free(bu);

  dg3pd_filterbank* bg = nullptr;
  REQUIRE(dg3pd_filterbank_build_g(8, 0.3, 0.3, 64, 64, &bg) == DG3PD_OK);
  REQUIRE(dg3pd_filterbank_unity_error(bg, &err) == DG3PD_OK);
  CHECK(err <= 1e-12);
  dg3pd_filterbank_free(bg);
}

TEST_CASE("empirical filters and diagnostics through the C API") {
  Cleanup c;
  dg3pd_image* f = nullptr;
  dg3pd_mask* missing = nullptr;
  REQUIRE(dg3pd_challenge_scene(32, 32, 40.0, 0.2, DG3PD_MASK_BLOBS, 21, nullptr, &f, &missing,
                                nullptr) == DG3PD_OK);
  c.img(f);
  c.msk(missing);
  dg3pd_params p;
  dg3pd_params_init(&p);
  p.iterations = 10;
  dg3pd_decomposition* d = nullptr;
  REQUIRE(dg3pd_decompose(f, missing, &p, &d) == DG3PD_OK);

  double mse = -1.0;
  dg3pd_filterbank* emp = nullptr;
  REQUIRE(dg3pd_filterbank_empirical(f, d, &emp, &mse) == DG3PD_OK);
  CHECK(mse >= 0.0);
  CHECK(dg3pd_filterbank_band_count(emp) == 2 + 4);
  double no_unity = 0.0;
  CHECK(dg3pd_filterbank_unity_error(emp, &no_unity) == DG3PD_ERR_INVALID);
  dg3pd_filterbank_free(emp);

  dg3pd_image* eps = nullptr;
  REQUIRE(dg3pd_decomposition_component(d, DG3PD_COMP_EPS, &eps) == DG3PD_OK);
  c.img(eps);
  dg3pd_mask* known = nullptr;
  REQUIRE(dg3pd_mask_complement(missing, &known) == DG3PD_OK);
  c.msk(known);

  const std::string dens = tmp_path("dg3pd_capi_density.csv");
  double mean = 0, var = 0, kurt = 0;
  REQUIRE(dg3pd_density_report(eps, known, dens.c_str(), &mean, &var, &kurt) == DG3PD_OK);
  CHECK(std::filesystem::exists(dens));
  std::remove(dens.c_str());

  double corr = 0.0;
  REQUIRE(dg3pd_qq_normal(eps, known, nullptr, &corr) == DG3PD_OK);
  CHECK(corr > 0.5);

  double ps = 0, ms = 0;
  REQUIRE(dg3pd_psnr(f, f, nullptr, &ps, &ms) == DG3PD_OK);
  CHECK(ms == 0.0);
  dg3pd_decomposition_free(d);
}
