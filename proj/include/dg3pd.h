/* dg3pd - directional global three-part decomposition for image inpainting
 * and denoising. C API: opaque handles, status codes, thread-local error
 * messages. All functions returning dg3pd_status set *out parameters only on
 * DG3PD_OK. Handles are freed with the matching _free function.
 */
#ifndef DG3PD_H
#define DG3PD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DG3PD_API __declspec(dllexport)
#else
#define DG3PD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dg3pd_status {
  DG3PD_OK = 0,
  DG3PD_ERR_INVALID = 1, /* validation failure / bad argument */
  DG3PD_ERR_NUMERIC = 2, /* non-finite values, degenerate input */
  DG3PD_ERR_IO = 3       /* file read/write failure */
} dg3pd_status;

DG3PD_API const char* dg3pd_version(void);
DG3PD_API const char* dg3pd_status_name(dg3pd_status s);
/* message from the last failing call on this thread; empty string if none */
DG3PD_API const char* dg3pd_last_error(void);

typedef struct dg3pd_image dg3pd_image;
typedef struct dg3pd_mask dg3pd_mask;
typedef struct dg3pd_decomposition dg3pd_decomposition;
typedef struct dg3pd_filterbank dg3pd_filterbank;

/* ---- images (real-valued grids, row-major doubles) ---- */

DG3PD_API dg3pd_status dg3pd_image_create(int rows, int cols, dg3pd_image** out);
DG3PD_API dg3pd_status dg3pd_image_from_data(int rows, int cols, const double* samples,
                                             dg3pd_image** out);
DG3PD_API void dg3pd_image_free(dg3pd_image* img);
DG3PD_API int dg3pd_image_rows(const dg3pd_image* img);
DG3PD_API int dg3pd_image_cols(const dg3pd_image* img);
DG3PD_API dg3pd_status dg3pd_image_copy_data(const dg3pd_image* img, double* out, size_t capacity);
DG3PD_API dg3pd_status dg3pd_image_clone(const dg3pd_image* img, dg3pd_image** out);
/* out = u + v */
DG3PD_API dg3pd_status dg3pd_image_add(const dg3pd_image* u, const dg3pd_image* v,
                                       dg3pd_image** out);
/* round(clamp(x, 0, 255)) */
DG3PD_API dg3pd_status dg3pd_image_quantize(const dg3pd_image* img, dg3pd_image** out);

DG3PD_API dg3pd_status dg3pd_image_read_pgm(const char* path, dg3pd_image** out);
DG3PD_API dg3pd_status dg3pd_image_write_pgm(const dg3pd_image* img, const char* path);
DG3PD_API dg3pd_status dg3pd_image_read_pfm(const char* path, dg3pd_image** out);
DG3PD_API dg3pd_status dg3pd_image_write_pfm(const dg3pd_image* img, const char* path);

/* ---- binary masks (for D: set = missing; PGM: 255 = set) ---- */

DG3PD_API dg3pd_status dg3pd_mask_create(int rows, int cols, dg3pd_mask** out);
DG3PD_API dg3pd_status dg3pd_mask_from_data(int rows, int cols, const uint8_t* bits,
                                            dg3pd_mask** out);
DG3PD_API void dg3pd_mask_free(dg3pd_mask* mask);
DG3PD_API int dg3pd_mask_rows(const dg3pd_mask* mask);
DG3PD_API int dg3pd_mask_cols(const dg3pd_mask* mask);
DG3PD_API dg3pd_status dg3pd_mask_copy_data(const dg3pd_mask* mask, uint8_t* out, size_t capacity);
DG3PD_API double dg3pd_mask_fraction(const dg3pd_mask* mask);
DG3PD_API dg3pd_status dg3pd_mask_complement(const dg3pd_mask* mask, dg3pd_mask** out);
DG3PD_API dg3pd_status dg3pd_mask_read_pgm(const char* path, dg3pd_mask** out);
DG3PD_API dg3pd_status dg3pd_mask_write_pgm(const dg3pd_mask* mask, const char* path);

/* ---- synthetic challenge scene ---- */

typedef enum dg3pd_mask_kind { DG3PD_MASK_BLOBS = 0, DG3PD_MASK_SCRATCHES = 1 } dg3pd_mask_kind;

/* f0 (clean), f = f0 + N(0, sigma^2), missing region D and the ground-truth
 * texture region. Any output pointer may be NULL to skip it. */
DG3PD_API dg3pd_status dg3pd_challenge_scene(int rows, int cols, double sigma,
                                             double mask_fraction, dg3pd_mask_kind kind,
                                             uint64_t seed, dg3pd_image** f0, dg3pd_image** f,
                                             dg3pd_mask** missing, dg3pd_mask** texture_region);

/* ---- solver parameters ---- */

typedef struct dg3pd_params {
  int tv_directions;  /* L */
  int g_directions;   /* S */
  double beta4;
  double theta;  /* beta3 = theta/(1-theta)*beta4 */
  double c1;     /* beta1 = c1*beta4 */
  double c2;     /* beta2 = c2*beta3 */
  double c3;     /* beta5 = c3*beta4 */
  double c_mu1;
  double c_mu2;
  double gamma;
  int nu_fixed;    /* 1: nu_value is an absolute threshold; 0: adaptive c_nu */
  double nu_value; /* fixed nu >= 0, or c_nu in (0,1) */
  int iterations;
  int msdt_scales;            /* 0 = auto */
  int msdt_base_orientations; /* default 8 */
} dg3pd_params;

DG3PD_API void dg3pd_params_init(dg3pd_params* p);

typedef struct dg3pd_texture_params {
  int patch_size;              /* s, odd */
  double min_known_fraction;   /* p1 */
  double min_texture_fraction; /* p2 */
  double min_overlap_fraction; /* p3 */
  int top_k;                   /* k */
  int nlm_iterations;          /* n */
  int dilation_radius;
} dg3pd_texture_params;

DG3PD_API void dg3pd_texture_params_init(dg3pd_texture_params* p);

typedef struct dg3pd_tvl2_params {
  double fidelity; /* beta */
  double penalty_grad;
  double penalty_fid;
  int iterations;
  int isotropic;
} dg3pd_tvl2_params;

DG3PD_API void dg3pd_tvl2_params_init(dg3pd_tvl2_params* p);

/* ---- decomposition ---- */

typedef enum dg3pd_component {
  DG3PD_COMP_U = 0,
  DG3PD_COMP_V = 1,
  DG3PD_COMP_EPS = 2,
  DG3PD_COMP_E = 3,
  DG3PD_COMP_E1 = 4 /* pre-subtraction term chi .* eps - lambda5/beta5 */
} dg3pd_component;

/* missing == NULL runs the dedicated no-mask decomposition path */
DG3PD_API dg3pd_status dg3pd_decompose(const dg3pd_image* f, const dg3pd_mask* missing,
                                       const dg3pd_params* params, dg3pd_decomposition** out);
DG3PD_API void dg3pd_decomposition_free(dg3pd_decomposition* d);
DG3PD_API dg3pd_status dg3pd_decomposition_component(const dg3pd_decomposition* d,
                                                     dg3pd_component which, dg3pd_image** out);
DG3PD_API int dg3pd_decomposition_direction_count(const dg3pd_decomposition* d);
/* v_s = dir_forward(g_s): the s-th directional texture part */
DG3PD_API dg3pd_status dg3pd_decomposition_texture_direction(const dg3pd_decomposition* d, int s,
                                                             dg3pd_image** out);
DG3PD_API int dg3pd_decomposition_trace_length(const dg3pd_decomposition* d);
DG3PD_API dg3pd_status dg3pd_decomposition_write_metrics_csv(const dg3pd_decomposition* d,
                                                             const char* path);
/* relative unity residual ||f-u-v-eps||/||f|| over the known region */
DG3PD_API dg3pd_status dg3pd_decomposition_unity_residual(const dg3pd_decomposition* d,
                                                          const dg3pd_image* f,
                                                          const dg3pd_mask* missing, double* out);

/* ---- texture restoration ---- */

DG3PD_API dg3pd_status dg3pd_segment_texture(const dg3pd_image* v, dg3pd_mask** roi);
DG3PD_API dg3pd_status dg3pd_build_inpaint_mask(const dg3pd_mask* roi, const dg3pd_mask* missing,
                                                int dilation_radius, dg3pd_mask** out);
/* Full texture restoration: segment, build mask I, dictionary inpaint,
 * NL-means. trace_base/trace_dir (both optional, set together) emit
 * Fig.-style 25%-step progress snapshots of trace_base + texture as PGM.
 * roi_out is optional. */
DG3PD_API dg3pd_status dg3pd_restore_texture(const dg3pd_image* v, const dg3pd_mask* missing,
                                             const dg3pd_texture_params* params,
                                             const dg3pd_image* trace_base, const char* trace_dir,
                                             dg3pd_image** v_restored, dg3pd_mask** roi_out);
DG3PD_API dg3pd_status dg3pd_synthesize(const dg3pd_image* u, const dg3pd_image* v_restored,
                                        dg3pd_image** out);
/* v_texture = (v + e1 .* chi_D) .* ROI */
DG3PD_API dg3pd_status dg3pd_compose_v_texture(const dg3pd_image* v, const dg3pd_image* e1,
                                               const dg3pd_mask* missing, const dg3pd_mask* roi,
                                               dg3pd_image** out);

/* ---- TVL2 baseline ---- */

DG3PD_API dg3pd_status dg3pd_tvl2_inpaint(const dg3pd_image* f, const dg3pd_mask* missing,
                                          const dg3pd_tvl2_params* params, dg3pd_image** out,
                                          const char* metrics_csv_path /* optional */);

/* ---- filter analysis ---- */

DG3PD_API dg3pd_status dg3pd_filterbank_build_u(int tv_directions, double beta1, double beta4,
                                                int rows, int cols, dg3pd_filterbank** out);
DG3PD_API dg3pd_status dg3pd_filterbank_build_g(int g_directions, double beta2, double beta3,
                                                int rows, int cols, dg3pd_filterbank** out);
/* spectra of a finished decomposition: LP = U/F, HP = E/F, BP_s = V_s/F */
DG3PD_API dg3pd_status dg3pd_filterbank_empirical(const dg3pd_image* f,
                                                  const dg3pd_decomposition* d,
                                                  dg3pd_filterbank** out, double* unity_mse);
DG3PD_API void dg3pd_filterbank_free(dg3pd_filterbank* bank);
/* max deviation of the unity identity over the grid */
DG3PD_API dg3pd_status dg3pd_filterbank_unity_error(const dg3pd_filterbank* bank, double* out);
DG3PD_API int dg3pd_filterbank_band_count(const dg3pd_filterbank* bank);
DG3PD_API dg3pd_status dg3pd_filterbank_band_name(const dg3pd_filterbank* bank, int index,
                                                  char* buf, size_t capacity);
/* real and imaginary parts of band spectra as images */
DG3PD_API dg3pd_status dg3pd_filterbank_band(const dg3pd_filterbank* bank, int index,
                                             dg3pd_image** re, dg3pd_image** im);

/* ---- diagnostics & metrics ---- */

/* 64-bin histogram + moments as CSV (optional), moments via out params
 * (any may be NULL). region == NULL uses the whole grid. */
DG3PD_API dg3pd_status dg3pd_density_report(const dg3pd_image* x, const dg3pd_mask* region,
                                            const char* csv_path, double* mean, double* variance,
                                            double* excess_kurtosis);
/* normal QQ pairs as CSV (optional) and the QQ correlation */
DG3PD_API dg3pd_status dg3pd_qq_normal(const dg3pd_image* x, const dg3pd_mask* region,
                                       const char* csv_path, double* correlation);
DG3PD_API dg3pd_status dg3pd_psnr(const dg3pd_image* a, const dg3pd_image* reference,
                                  const dg3pd_mask* region, double* psnr_out, double* mse_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DG3PD_H */
