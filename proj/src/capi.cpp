#include "dg3pd.h"

#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/filters.hpp"
#include "core/grid.hpp"
#include "core/image_io.hpp"
#include "core/metrics.hpp"
#include "core/scene.hpp"
#include "core/solver.hpp"
#include "core/texture.hpp"
#include "core/tvl2.hpp"

// Opaque handles wrap the C++ core types; every entry point catches and
// converts exceptions to status codes with a thread-local message.

struct dg3pd_image {
  dg3pd::Image v;
};
struct dg3pd_mask {
  dg3pd::Mask v;
};
struct dg3pd_decomposition {
  dg3pd::Decomposition v;
};
struct dg3pd_filterbank {
  // exactly one of these is populated
  dg3pd::FilterBank analytic;
  bool has_analytic = false;
  dg3pd::EmpiricalFilters empirical;
  bool has_empirical = false;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
dg3pd_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return DG3PD_OK;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return DG3PD_ERR_INVALID;
  } catch (const dg3pd::IoError& e) {
    g_last_error = e.what();
    return DG3PD_ERR_IO;
  } catch (const dg3pd::NumericError& e) {
    g_last_error = e.what();
    return DG3PD_ERR_NUMERIC;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DG3PD_ERR_INVALID;
  }
}

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

dg3pd_image* wrap(dg3pd::Image img) { return new dg3pd_image{std::move(img)}; }
dg3pd_mask* wrap(dg3pd::Mask mask) { return new dg3pd_mask{std::move(mask)}; }

dg3pd::SolverParams to_core(const dg3pd_params& p) {
  dg3pd::SolverParams sp;
  sp.tv_directions = p.tv_directions;
  sp.g_directions = p.g_directions;
  sp.beta4 = p.beta4;
  sp.theta = p.theta;
  sp.c1 = p.c1;
  sp.c2 = p.c2;
  sp.c3 = p.c3;
  sp.c_mu1 = p.c_mu1;
  sp.c_mu2 = p.c_mu2;
  sp.gamma = p.gamma;
  sp.nu = p.nu_fixed ? dg3pd::NuPolicy::fixed(p.nu_value) : dg3pd::NuPolicy::adaptive(p.nu_value);
  sp.iterations = p.iterations;
  sp.msdt.scales = p.msdt_scales;
  sp.msdt.base_orientations = p.msdt_base_orientations;
  return sp;
}

dg3pd::TextureParams to_core(const dg3pd_texture_params& p) {
  dg3pd::TextureParams tp;
  tp.patch_size = p.patch_size;
  tp.min_known_fraction = p.min_known_fraction;
  tp.min_texture_fraction = p.min_texture_fraction;
  tp.min_overlap_fraction = p.min_overlap_fraction;
  tp.top_k = p.top_k;
  tp.nlm_iterations = p.nlm_iterations;
  tp.dilation_radius = p.dilation_radius;
  return tp;
}

dg3pd::Tvl2Params to_core(const dg3pd_tvl2_params& p) {
  dg3pd::Tvl2Params tp;
  tp.fidelity = p.fidelity;
  tp.penalty_grad = p.penalty_grad;
  tp.penalty_fid = p.penalty_fid;
  tp.iterations = p.iterations;
  tp.isotropic = p.isotropic != 0;
  return tp;
}

}  // namespace

extern "C" {

const char* dg3pd_version(void) { return "1.0.0"; }

const char* dg3pd_status_name(dg3pd_status s) {
  switch (s) {
    case DG3PD_OK:
      return "ok";
    case DG3PD_ERR_INVALID:
      return "invalid argument";
    case DG3PD_ERR_NUMERIC:
      return "numerical failure";
    case DG3PD_ERR_IO:
      return "io failure";
  }
  return "unknown";
}

const char* dg3pd_last_error(void) { return g_last_error.c_str(); }

/* ---- images ---- */

dg3pd_status dg3pd_image_create(int rows, int cols, dg3pd_image** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = wrap(dg3pd::Image(rows, cols));
  });
}

dg3pd_status dg3pd_image_from_data(int rows, int cols, const double* samples, dg3pd_image** out) {
  return guarded([&] {
    require(out != nullptr && samples != nullptr, "null pointer");
    std::vector<double> data(samples,
                             samples + static_cast<std::size_t>(rows < 0 ? 0 : rows) *
                                           static_cast<std::size_t>(cols < 0 ? 0 : cols));
    dg3pd::Image img = dg3pd::Image::from_data(rows, cols, std::move(data));
    require(img.all_finite(), "samples contain non-finite values");
    *out = wrap(std::move(img));
  });
}

void dg3pd_image_free(dg3pd_image* img) { delete img; }

int dg3pd_image_rows(const dg3pd_image* img) { return img ? img->v.rows() : 0; }
int dg3pd_image_cols(const dg3pd_image* img) { return img ? img->v.cols() : 0; }

dg3pd_status dg3pd_image_copy_data(const dg3pd_image* img, double* out, size_t capacity) {
  return guarded([&] {
    require(img != nullptr && out != nullptr, "null pointer");
    require(capacity >= img->v.size(), "buffer too small");
    std::memcpy(out, img->v.data(), img->v.size() * sizeof(double));
  });
}

dg3pd_status dg3pd_image_clone(const dg3pd_image* img, dg3pd_image** out) {
  return guarded([&] {
    require(img != nullptr && out != nullptr, "null pointer");
    *out = wrap(img->v);
  });
}

dg3pd_status dg3pd_image_add(const dg3pd_image* u, const dg3pd_image* v, dg3pd_image** out) {
  return guarded([&] {
    require(u != nullptr && v != nullptr && out != nullptr, "null pointer");
    *out = wrap(dg3pd::add(u->v, v->v));
  });
}

dg3pd_status dg3pd_image_quantize(const dg3pd_image* img, dg3pd_image** out) {
  return guarded([&] {
    require(img != nullptr && out != nullptr, "null pointer");
    *out = wrap(dg3pd::quantize_preview(img->v));
  });
}

dg3pd_status dg3pd_image_read_pgm(const char* path, dg3pd_image** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null pointer");
    *out = wrap(dg3pd::read_pgm(path));
  });
}

dg3pd_status dg3pd_image_write_pgm(const dg3pd_image* img, const char* path) {
  return guarded([&] {
    require(img != nullptr && path != nullptr, "null pointer");
    dg3pd::write_pgm(path, img->v);
  });
}

dg3pd_status dg3pd_image_read_pfm(const char* path, dg3pd_image** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null pointer");
    *out = wrap(dg3pd::read_pfm(path));
  });
}

dg3pd_status dg3pd_image_write_pfm(const dg3pd_image* img, const char* path) {
  return guarded([&] {
    require(img != nullptr && path != nullptr, "null pointer");
    dg3pd::write_pfm(path, img->v);
  });
}

/* ---- masks ---- */

dg3pd_status dg3pd_mask_create(int rows, int cols, dg3pd_mask** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = wrap(dg3pd::Mask(rows, cols));
  });
}

dg3pd_status dg3pd_mask_from_data(int rows, int cols, const uint8_t* bits, dg3pd_mask** out) {
  return guarded([&] {
    require(bits != nullptr && out != nullptr, "null pointer");
    dg3pd::Mask m(rows, cols);
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = bits[k] ? 1 : 0;
    *out = wrap(std::move(m));
  });
}

void dg3pd_mask_free(dg3pd_mask* mask) { delete mask; }

int dg3pd_mask_rows(const dg3pd_mask* mask) { return mask ? mask->v.rows() : 0; }
int dg3pd_mask_cols(const dg3pd_mask* mask) { return mask ? mask->v.cols() : 0; }

dg3pd_status dg3pd_mask_copy_data(const dg3pd_mask* mask, uint8_t* out, size_t capacity) {
  return guarded([&] {
    require(mask != nullptr && out != nullptr, "null pointer");
    require(capacity >= mask->v.size(), "buffer too small");
    for (std::size_t k = 0; k < mask->v.size(); ++k) out[k] = mask->v[k];
  });
}

double dg3pd_mask_fraction(const dg3pd_mask* mask) { return mask ? mask->v.fraction() : 0.0; }

dg3pd_status dg3pd_mask_complement(const dg3pd_mask* mask, dg3pd_mask** out) {
  return guarded([&] {
    require(mask != nullptr && out != nullptr, "null pointer");
    *out = wrap(mask->v.complement());
  });
}

dg3pd_status dg3pd_mask_read_pgm(const char* path, dg3pd_mask** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null pointer");
    *out = wrap(dg3pd::read_mask_pgm(path));
  });
}

dg3pd_status dg3pd_mask_write_pgm(const dg3pd_mask* mask, const char* path) {
  return guarded([&] {
    require(mask != nullptr && path != nullptr, "null pointer");
    dg3pd::write_mask_pgm(path, mask->v);
  });
}

/* ---- scene ---- */

dg3pd_status dg3pd_challenge_scene(int rows, int cols, double sigma, double mask_fraction,
                                   dg3pd_mask_kind kind, uint64_t seed, dg3pd_image** f0,
                                   dg3pd_image** f, dg3pd_mask** missing,
                                   dg3pd_mask** texture_region) {
  return guarded([&] {
    dg3pd::ChallengeScene scene = dg3pd::make_challenge_scene(
        rows, cols, sigma, mask_fraction,
        kind == DG3PD_MASK_SCRATCHES ? dg3pd::MaskKind::Scratches : dg3pd::MaskKind::Blobs, seed);
    if (f0) *f0 = wrap(std::move(scene.clean));
    if (f) *f = wrap(std::move(scene.noisy));
    if (missing) *missing = wrap(std::move(scene.missing));
    if (texture_region) *texture_region = wrap(std::move(scene.stripe_region));
  });
}

/* ---- params ---- */

void dg3pd_params_init(dg3pd_params* p) {
  if (!p) return;
  dg3pd::SolverParams d;
  p->tv_directions = d.tv_directions;
  p->g_directions = d.g_directions;
  p->beta4 = d.beta4;
  p->theta = d.theta;
  p->c1 = d.c1;
  p->c2 = d.c2;
  p->c3 = d.c3;
  p->c_mu1 = d.c_mu1;
  p->c_mu2 = d.c_mu2;
  p->gamma = d.gamma;
  p->nu_fixed = d.nu.kind == dg3pd::NuPolicy::Kind::Fixed ? 1 : 0;
  p->nu_value = d.nu.value;
  p->iterations = d.iterations;
  p->msdt_scales = d.msdt.scales;
  p->msdt_base_orientations = d.msdt.base_orientations;
}

void dg3pd_texture_params_init(dg3pd_texture_params* p) {
  if (!p) return;
  dg3pd::TextureParams d;
  p->patch_size = d.patch_size;
  p->min_known_fraction = d.min_known_fraction;
  p->min_texture_fraction = d.min_texture_fraction;
  p->min_overlap_fraction = d.min_overlap_fraction;
  p->top_k = d.top_k;
  p->nlm_iterations = d.nlm_iterations;
  p->dilation_radius = d.dilation_radius;
}

void dg3pd_tvl2_params_init(dg3pd_tvl2_params* p) {
  if (!p) return;
  dg3pd::Tvl2Params d;
  p->fidelity = d.fidelity;
  p->penalty_grad = d.penalty_grad;
  p->penalty_fid = d.penalty_fid;
  p->iterations = d.iterations;
  p->isotropic = d.isotropic ? 1 : 0;
}

/* ---- decomposition ---- */

dg3pd_status dg3pd_decompose(const dg3pd_image* f, const dg3pd_mask* missing,
                             const dg3pd_params* params, dg3pd_decomposition** out) {
  return guarded([&] {
    require(f != nullptr && params != nullptr && out != nullptr, "null pointer");
    dg3pd::SolverParams sp = to_core(*params);
    dg3pd::Decomposition d =
        missing ? dg3pd::run(f->v, missing->v, sp) : dg3pd::run_decompose(f->v, sp);
    *out = new dg3pd_decomposition{std::move(d)};
  });
}

void dg3pd_decomposition_free(dg3pd_decomposition* d) { delete d; }

dg3pd_status dg3pd_decomposition_component(const dg3pd_decomposition* d, dg3pd_component which,
                                           dg3pd_image** out) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null pointer");
    switch (which) {
      case DG3PD_COMP_U:
        *out = wrap(d->v.u);
        return;
      case DG3PD_COMP_V:
        *out = wrap(d->v.v);
        return;
      case DG3PD_COMP_EPS:
        *out = wrap(d->v.eps);
        return;
      case DG3PD_COMP_E:
        *out = wrap(d->v.e);
        return;
      case DG3PD_COMP_E1:
        *out = wrap(d->v.e1);
        return;
    }
    throw std::invalid_argument("unknown component");
  });
}

int dg3pd_decomposition_direction_count(const dg3pd_decomposition* d) {
  return d ? d->v.g_directions : 0;
}

dg3pd_status dg3pd_decomposition_texture_direction(const dg3pd_decomposition* d, int s,
                                                   dg3pd_image** out) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null pointer");
    *out = wrap(d->v.texture_direction(s));
  });
}

int dg3pd_decomposition_trace_length(const dg3pd_decomposition* d) {
  return d ? static_cast<int>(d->v.trace.size()) : 0;
}

dg3pd_status dg3pd_decomposition_write_metrics_csv(const dg3pd_decomposition* d,
                                                   const char* path) {
  return guarded([&] {
    require(d != nullptr && path != nullptr, "null pointer");
    dg3pd::write_metrics_csv(path, d->v.trace);
  });
}

dg3pd_status dg3pd_decomposition_unity_residual(const dg3pd_decomposition* d, const dg3pd_image* f,
                                                const dg3pd_mask* missing, double* out) {
  return guarded([&] {
    require(d != nullptr && f != nullptr && missing != nullptr && out != nullptr, "null pointer");
    *out = dg3pd::unity_residual_known(d->v, f->v, missing->v);
  });
}

/* ---- texture ---- */

dg3pd_status dg3pd_segment_texture(const dg3pd_image* v, dg3pd_mask** roi) {
  return guarded([&] {
    require(v != nullptr && roi != nullptr, "null pointer");
    *roi = wrap(dg3pd::segment_texture(v->v));
  });
}

dg3pd_status dg3pd_build_inpaint_mask(const dg3pd_mask* roi, const dg3pd_mask* missing,
                                      int dilation_radius, dg3pd_mask** out) {
  return guarded([&] {
    require(roi != nullptr && missing != nullptr && out != nullptr, "null pointer");
    *out = wrap(dg3pd::build_inpaint_mask(roi->v, missing->v, dilation_radius));
  });
}

dg3pd_status dg3pd_restore_texture(const dg3pd_image* v, const dg3pd_mask* missing,
                                   const dg3pd_texture_params* params,
                                   const dg3pd_image* trace_base, const char* trace_dir,
                                   dg3pd_image** v_restored, dg3pd_mask** roi_out) {
  return guarded([&] {
    require(v != nullptr && missing != nullptr && params != nullptr && v_restored != nullptr,
            "null pointer");
    dg3pd::TextureParams tp = to_core(*params);
    dg3pd::Mask roi = dg3pd::segment_texture(v->v, tp);
    dg3pd::Mask inpaint_mask = dg3pd::build_inpaint_mask(roi, missing->v, tp.dilation_radius);
    dg3pd::Mask known = missing->v.complement();

    dg3pd::Image inpainted = v->v;
    dg3pd::Mask known_after = known;
    if (!inpaint_mask.empty_set()) {
      dg3pd::PatchDictionary dict = dg3pd::build_dictionary(v->v, known, tp);
      dg3pd::ProgressSink sink;
      if (trace_base != nullptr && trace_dir != nullptr) {
        std::string dir(trace_dir);
        const dg3pd::Image base = trace_base->v;
        sink = [dir, base](double fraction, const dg3pd::Image& current) {
          const int pct = static_cast<int>(fraction * 100.0 + 0.5);
          char name[64];
          std::snprintf(name, sizeof(name), "/texture_progress_%03d.pgm", pct);
          dg3pd::write_pgm(dir + name, dg3pd::quantize_preview(dg3pd::add(base, current)));
        };
      }
      inpainted = dg3pd::inpaint_texture(v->v, inpaint_mask, known, dict, tp, nullptr, sink,
                                         &known_after);
    }
    dg3pd::Image denoised = dg3pd::nlmeans_denoise(inpainted, roi, known_after, tp);
    *v_restored = wrap(std::move(denoised));
    if (roi_out) *roi_out = wrap(std::move(roi));
  });
}

dg3pd_status dg3pd_synthesize(const dg3pd_image* u, const dg3pd_image* v_restored,
                              dg3pd_image** out) {
  return guarded([&] {
    require(u != nullptr && v_restored != nullptr && out != nullptr, "null pointer");
    *out = wrap(dg3pd::synthesize(u->v, v_restored->v));
  });
}

dg3pd_status dg3pd_compose_v_texture(const dg3pd_image* v, const dg3pd_image* e1,
                                     const dg3pd_mask* missing, const dg3pd_mask* roi,
                                     dg3pd_image** out) {
  return guarded([&] {
    require(v != nullptr && e1 != nullptr && missing != nullptr && roi != nullptr && out != nullptr,
            "null pointer");
    *out = wrap(dg3pd::compose_v_texture(v->v, e1->v, missing->v, roi->v));
  });
}

/* ---- TVL2 ---- */

dg3pd_status dg3pd_tvl2_inpaint(const dg3pd_image* f, const dg3pd_mask* missing,
                                const dg3pd_tvl2_params* params, dg3pd_image** out,
                                const char* metrics_csv_path) {
  return guarded([&] {
    require(f != nullptr && missing != nullptr && params != nullptr && out != nullptr,
            "null pointer");
    dg3pd::Tvl2Result res = dg3pd::tvl2_inpaint(f->v, missing->v, to_core(*params));
    if (metrics_csv_path) dg3pd::write_metrics_csv(metrics_csv_path, res.trace);
    *out = wrap(std::move(res.u));
  });
}

/* ---- filter analysis ---- */

dg3pd_status dg3pd_filterbank_build_u(int tv_directions, double beta1, double beta4, int rows,
                                      int cols, dg3pd_filterbank** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    auto* bank = new dg3pd_filterbank;
    bank->analytic = dg3pd::build_u_filters(tv_directions, beta1, beta4, rows, cols);
    bank->has_analytic = true;
    *out = bank;
  });
}

dg3pd_status dg3pd_filterbank_build_g(int g_directions, double beta2, double beta3, int rows,
                                      int cols, dg3pd_filterbank** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    auto* bank = new dg3pd_filterbank;
    bank->analytic = dg3pd::build_g_filters(g_directions, beta2, beta3, rows, cols);
    bank->has_analytic = true;
    *out = bank;
  });
}

dg3pd_status dg3pd_filterbank_empirical(const dg3pd_image* f, const dg3pd_decomposition* d,
                                        dg3pd_filterbank** out, double* unity_mse) {
  return guarded([&] {
    require(f != nullptr && d != nullptr && out != nullptr, "null pointer");
    std::vector<dg3pd::Image> parts;
    for (int s = 0; s < d->v.g_directions; ++s) parts.push_back(d->v.texture_direction(s));
    auto* bank = new dg3pd_filterbank;
    bank->empirical = dg3pd::empirical_filters(f->v, d->v.u, parts, d->v.eps);
    bank->has_empirical = true;
    if (unity_mse) *unity_mse = bank->empirical.unity_mse;
    *out = bank;
  });
}

void dg3pd_filterbank_free(dg3pd_filterbank* bank) { delete bank; }

dg3pd_status dg3pd_filterbank_unity_error(const dg3pd_filterbank* bank, double* out) {
  return guarded([&] {
    require(bank != nullptr && out != nullptr, "null pointer");
    require(bank->has_analytic, "unity error is defined for analytic banks");
    *out = bank->analytic.phi.empty() ? dg3pd::unity_error_g(bank->analytic)
                                      : dg3pd::unity_error_u(bank->analytic);
  });
}

namespace {

struct BandRef {
  std::string name;
  const std::vector<double>* real_spec = nullptr;  // real-valued spectrum
  const dg3pd::Spectrum* cplx = nullptr;           // complex spectrum
};

std::vector<BandRef> band_list(const dg3pd_filterbank* bank) {
  std::vector<BandRef> bands;
  if (bank->has_analytic) {
    const auto& a = bank->analytic;
    if (!a.phi.empty()) {
      bands.push_back({"phi", &a.phi, nullptr});
      for (std::size_t l = 0; l < a.psi.size(); ++l) {
        bands.push_back({"psi_" + std::to_string(l), nullptr, &a.psi[l]});
        bands.push_back({"psi_dual_" + std::to_string(l), nullptr, &a.psi_dual[l]});
      }
    } else {
      for (std::size_t s = 0; s < a.xi.size(); ++s) {
        bands.push_back({"xi_" + std::to_string(s), &a.xi[s], nullptr});
        bands.push_back({"psi_g_" + std::to_string(s), nullptr, &a.psi_g[s]});
        bands.push_back({"psi_prime_" + std::to_string(s), nullptr, &a.psi_prime[s]});
      }
    }
  } else if (bank->has_empirical) {
    const auto& e = bank->empirical;
    bands.push_back({"lp", nullptr, &e.lp});
    bands.push_back({"hp", nullptr, &e.hp});
    for (std::size_t s = 0; s < e.bp.size(); ++s)
      bands.push_back({"bp_" + std::to_string(s), nullptr, &e.bp[s]});
  }
  return bands;
}

}  // namespace

int dg3pd_filterbank_band_count(const dg3pd_filterbank* bank) {
  if (!bank) return 0;
  return static_cast<int>(band_list(bank).size());
}

dg3pd_status dg3pd_filterbank_band_name(const dg3pd_filterbank* bank, int index, char* buf,
                                        size_t capacity) {
  return guarded([&] {
    require(bank != nullptr && buf != nullptr, "null pointer");
    auto bands = band_list(bank);
    require(index >= 0 && index < static_cast<int>(bands.size()), "band index out of range");
    const std::string& name = bands[static_cast<std::size_t>(index)].name;
    require(capacity > name.size(), "buffer too small");
    std::memcpy(buf, name.c_str(), name.size() + 1);
  });
}

dg3pd_status dg3pd_filterbank_band(const dg3pd_filterbank* bank, int index, dg3pd_image** re,
                                   dg3pd_image** im) {
  return guarded([&] {
    require(bank != nullptr && re != nullptr && im != nullptr, "null pointer");
    auto bands = band_list(bank);
    require(index >= 0 && index < static_cast<int>(bands.size()), "band index out of range");
    const auto& band = bands[static_cast<std::size_t>(index)];
    int rows = 0, cols = 0;
    if (bank->has_analytic) {
      rows = bank->analytic.rows;
      cols = bank->analytic.cols;
    } else {
      rows = bank->empirical.lp.rows();
      cols = bank->empirical.lp.cols();
    }
    dg3pd::Image real_img(rows, cols), imag_img(rows, cols);
    if (band.real_spec != nullptr) {
      for (std::size_t k = 0; k < band.real_spec->size(); ++k) real_img[k] = (*band.real_spec)[k];
    } else {
      for (std::size_t k = 0; k < band.cplx->size(); ++k) {
        real_img[k] = (*band.cplx)[k].real();
        imag_img[k] = (*band.cplx)[k].imag();
      }
    }
    *re = wrap(std::move(real_img));
    *im = wrap(std::move(imag_img));
  });
}

/* ---- diagnostics ---- */

dg3pd_status dg3pd_density_report(const dg3pd_image* x, const dg3pd_mask* region,
                                  const char* csv_path, double* mean, double* variance,
                                  double* excess_kurtosis) {
  return guarded([&] {
    require(x != nullptr, "null pointer");
    dg3pd::DensityReport rep = dg3pd::density_report(x->v, region ? &region->v : nullptr);
    if (csv_path) {
      std::ofstream f(csv_path);
      if (!f) throw dg3pd::IoError(std::string("cannot open for writing: ") + csv_path);
      f << "bin_lo,bin_hi,count,schema\n";
      f.precision(17);
      const double width = (rep.hi - rep.lo) / static_cast<double>(rep.counts.size());
      for (std::size_t b = 0; b < rep.counts.size(); ++b)
        f << rep.lo + width * static_cast<double>(b) << ','
          << rep.lo + width * static_cast<double>(b + 1) << ',' << rep.counts[b]
          << ",dg3pd.density.v1\n";
      if (!f) throw dg3pd::IoError(std::string("write failed: ") + csv_path);
    }
    if (mean) *mean = rep.mean;
    if (variance) *variance = rep.variance;
    if (excess_kurtosis) *excess_kurtosis = rep.excess_kurtosis;
  });
}

dg3pd_status dg3pd_qq_normal(const dg3pd_image* x, const dg3pd_mask* region, const char* csv_path,
                             double* correlation) {
  return guarded([&] {
    require(x != nullptr, "null pointer");
    dg3pd::QqReport rep = dg3pd::qq_normal(x->v, region ? &region->v : nullptr);
    if (csv_path) {
      std::ofstream f(csv_path);
      if (!f) throw dg3pd::IoError(std::string("cannot open for writing: ") + csv_path);
      f << "theoretical,sample,schema\n";
      f.precision(17);
      for (std::size_t i = 0; i < rep.sample.size(); ++i)
        f << rep.theoretical[i] << ',' << rep.sample[i] << ",dg3pd.qq.v1\n";
      if (!f) throw dg3pd::IoError(std::string("write failed: ") + csv_path);
    }
    if (correlation) *correlation = rep.correlation;
  });
}

dg3pd_status dg3pd_psnr(const dg3pd_image* a, const dg3pd_image* reference,
                        const dg3pd_mask* region, double* psnr_out, double* mse_out) {
  return guarded([&] {
    require(a != nullptr && reference != nullptr, "null pointer");
    const dg3pd::Mask* r = region ? &region->v : nullptr;
    if (psnr_out) *psnr_out = dg3pd::psnr(a->v, reference->v, r);
    if (mse_out) *mse_out = dg3pd::mse(a->v, reference->v, r);
  });
}

} /* extern "C" */
