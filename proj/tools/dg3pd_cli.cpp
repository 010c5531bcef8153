// dg3pd command-line front end. Talks to the library exclusively through the
// C API in dg3pd.h.
//
//   dg3pd {decompose|inpaint|analyze-filters|compare|diagnostics}
//         --config FILE [--key value ...]
//
// Configuration is flat key=value lines with # comments; command-line pairs
// override file values. Exit codes: 0 success, 2 validation error,
// 3 numerical failure, 4 I/O error.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dg3pd.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& msg) { throw CliError{code, msg}; }

void check(dg3pd_status s, const std::string& what) {
  if (s == DG3PD_OK) return;
  int code = kExitValidation;
  if (s == DG3PD_ERR_NUMERIC) code = kExitNumeric;
  if (s == DG3PD_ERR_IO) code = kExitIo;
  fail(code, what + ": " + dg3pd_status_name(s) + " (" + dg3pd_last_error() + ")");
}

// RAII wrappers over the C handles
struct ImageDeleter {
  void operator()(dg3pd_image* p) const { dg3pd_image_free(p); }
};
struct MaskDeleter {
  void operator()(dg3pd_mask* p) const { dg3pd_mask_free(p); }
};
struct DecompDeleter {
  void operator()(dg3pd_decomposition* p) const { dg3pd_decomposition_free(p); }
};
struct BankDeleter {
  void operator()(dg3pd_filterbank* p) const { dg3pd_filterbank_free(p); }
};
using ImagePtr = std::unique_ptr<dg3pd_image, ImageDeleter>;
using MaskPtr = std::unique_ptr<dg3pd_mask, MaskDeleter>;
using DecompPtr = std::unique_ptr<dg3pd_decomposition, DecompDeleter>;
using BankPtr = std::unique_ptr<dg3pd_filterbank, BankDeleter>;

ImagePtr take(dg3pd_image* p) { return ImagePtr(p); }
MaskPtr take(dg3pd_mask* p) { return MaskPtr(p); }

// ---- configuration ----

struct Config {
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) != 0; }
  std::string str(const std::string& key, const std::string& dflt = "") const {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : it->second;
  }
  double num(const std::string& key, double dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    try {
      std::size_t used = 0;
      double v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("trailing junk");
      return v;
    } catch (...) {
      fail(kExitValidation, "config key '" + key + "' is not a number: " + it->second);
    }
  }
  int integer(const std::string& key, int dflt) const {
    const double v = num(key, dflt);
    if (v != static_cast<double>(static_cast<int>(v)))
      fail(kExitValidation, "config key '" + key + "' must be an integer");
    return static_cast<int>(v);
  }
  bool flag(const std::string& key, bool dflt = false) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    const std::string& v = it->second;
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    fail(kExitValidation, "config key '" + key + "' is not a boolean: " + v);
  }
};

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

void load_config_file(Config& cfg, const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(kExitIo, "cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      fail(kExitValidation, path + ":" + std::to_string(lineno) + ": expected key=value");
    cfg.kv[trim(stripped.substr(0, eq))] = trim(stripped.substr(eq + 1));
  }
}

const char* const kKnownKeys[] = {
    "input", "mask", "truth", "out_dir", "seed", "trace",
    // synthetic scene
    "scene", "rows", "cols", "sigma", "mask_fraction", "mask_kind",
    // solver
    "L", "S", "beta4", "theta", "c1", "c2", "c3", "c_mu1", "c_mu2", "gamma", "nu", "c_nu",
    "iterations", "msdt_scales", "msdt_orientations",
    // texture restore
    "patch_size", "p1", "p2", "p3", "k", "nlm_iterations", "dilation_radius",
    // tvl2
    "tvl2_beta", "tvl2_mu", "tvl2_eta", "tvl2_iterations",
};

void validate_keys(const Config& cfg) {
  for (const auto& [key, value] : cfg.kv) {
    (void)value;
    if (key.rfind("external.", 0) == 0) continue;
    bool known = false;
    for (const char* k : kKnownKeys)
      if (key == k) {
        known = true;
        break;
      }
    if (!known) fail(kExitValidation, "unknown config key: " + key);
  }
}

Config parse_cli(int argc, char** argv, int first) {
  Config cfg;
  // --config files load first so explicit pairs override them
  for (int i = first; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--config") == 0) load_config_file(cfg, argv[i + 1]);
  for (int i = first; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--", 0) != 0) fail(kExitValidation, "expected --key, got: " + arg);
    const std::string key = arg.substr(2);
    if (key == "config") {
      ++i;  // already loaded
      continue;
    }
    if (key == "trace" && (i + 1 >= argc || std::strncmp(argv[i + 1], "--", 2) == 0)) {
      cfg.kv["trace"] = "1";
      continue;
    }
    if (i + 1 >= argc) fail(kExitValidation, "missing value for --" + key);
    cfg.kv[key] = argv[++i];
  }
  validate_keys(cfg);
  return cfg;
}

// ---- parameter assembly ----

dg3pd_params solver_params(const Config& cfg) {
  dg3pd_params p;
  dg3pd_params_init(&p);
  p.tv_directions = cfg.integer("L", p.tv_directions);
  p.g_directions = cfg.integer("S", p.g_directions);
  p.beta4 = cfg.num("beta4", p.beta4);
  p.theta = cfg.num("theta", p.theta);
  p.c1 = cfg.num("c1", p.c1);
  p.c2 = cfg.num("c2", p.c2);
  p.c3 = cfg.num("c3", p.c3);
  p.c_mu1 = cfg.num("c_mu1", p.c_mu1);
  p.c_mu2 = cfg.num("c_mu2", p.c_mu2);
  p.gamma = cfg.num("gamma", p.gamma);
  if (cfg.has("nu") && cfg.has("c_nu"))
    fail(kExitValidation, "set either nu (fixed) or c_nu (adaptive), not both");
  if (cfg.has("nu")) {
    p.nu_fixed = 1;
    p.nu_value = cfg.num("nu", 0.0);
  } else if (cfg.has("c_nu")) {
    p.nu_fixed = 0;
    p.nu_value = cfg.num("c_nu", 0.5);
  }
  p.iterations = cfg.integer("iterations", p.iterations);
  p.msdt_scales = cfg.integer("msdt_scales", p.msdt_scales);
  p.msdt_base_orientations = cfg.integer("msdt_orientations", p.msdt_base_orientations);
  return p;
}

dg3pd_texture_params texture_params(const Config& cfg) {
  dg3pd_texture_params p;
  dg3pd_texture_params_init(&p);
  p.patch_size = cfg.integer("patch_size", p.patch_size);
  p.min_known_fraction = cfg.num("p1", p.min_known_fraction);
  p.min_texture_fraction = cfg.num("p2", p.min_texture_fraction);
  p.min_overlap_fraction = cfg.num("p3", p.min_overlap_fraction);
  p.top_k = cfg.integer("k", p.top_k);
  p.nlm_iterations = cfg.integer("nlm_iterations", p.nlm_iterations);
  p.dilation_radius = cfg.integer("dilation_radius", p.dilation_radius);
  return p;
}

dg3pd_tvl2_params tvl2_params(const Config& cfg) {
  dg3pd_tvl2_params p;
  dg3pd_tvl2_params_init(&p);
  p.fidelity = cfg.num("tvl2_beta", p.fidelity);
  p.penalty_grad = cfg.num("tvl2_mu", p.penalty_grad);
  p.penalty_fid = cfg.num("tvl2_eta", p.penalty_fid);
  p.iterations = cfg.integer("tvl2_iterations", p.iterations);
  return p;
}

// ---- input loading ----

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

ImagePtr load_image(const std::string& path) {
  dg3pd_image* img = nullptr;
  if (ends_with(path, ".pfm"))
    check(dg3pd_image_read_pfm(path.c_str(), &img), "reading " + path);
  else
    check(dg3pd_image_read_pgm(path.c_str(), &img), "reading " + path);
  return take(img);
}

struct Inputs {
  ImagePtr f;
  ImagePtr truth;    // may be null
  MaskPtr missing;   // may be null
  MaskPtr true_roi;  // ground-truth texture region for synthetic scenes
};

// Loads input/mask/truth, or synthesizes the challenge scene when
// scene=challenge. Validation happens before anything is written.
Inputs gather_inputs(const Config& cfg, bool need_mask, bool need_truth) {
  Inputs in;
  if (cfg.str("scene") == "challenge") {
    const int rows = cfg.integer("rows", 64);
    const int cols = cfg.integer("cols", 64);
    const double sigma = cfg.num("sigma", 100.0);
    const double fraction = cfg.num("mask_fraction", 0.30);
    const std::string kind_s = cfg.str("mask_kind", "blobs");
    dg3pd_mask_kind kind = DG3PD_MASK_BLOBS;
    if (kind_s == "scratches")
      kind = DG3PD_MASK_SCRATCHES;
    else if (kind_s != "blobs")
      fail(kExitValidation, "mask_kind must be blobs or scratches");
    const auto seed = static_cast<uint64_t>(cfg.num("seed", 0.0));
    dg3pd_image *f0 = nullptr, *f = nullptr;
    dg3pd_mask *missing = nullptr, *roi = nullptr;
    check(dg3pd_challenge_scene(rows, cols, sigma, fraction, kind, seed, &f0, &f, &missing, &roi),
          "synthesizing challenge scene");
    in.f = take(f);
    in.truth = take(f0);
    in.missing = take(missing);
    in.true_roi = MaskPtr(roi);
    return in;
  }
  if (cfg.has("scene")) fail(kExitValidation, "unknown scene: " + cfg.str("scene"));
  if (!cfg.has("input")) fail(kExitValidation, "input path is required");
  in.f = load_image(cfg.str("input"));
  if (cfg.has("mask")) {
    dg3pd_mask* m = nullptr;
    check(dg3pd_mask_read_pgm(cfg.str("mask").c_str(), &m), "reading mask");
    in.missing = take(m);
  } else if (need_mask) {
    fail(kExitValidation, "this command requires a mask");
  }
  if (cfg.has("truth"))
    in.truth = load_image(cfg.str("truth"));
  else if (need_truth)
    fail(kExitValidation, "this command requires a ground-truth image");
  return in;
}

std::string out_dir(const Config& cfg) {
  const std::string dir = cfg.str("out_dir", "out");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(kExitIo, "cannot create output directory: " + dir);
  return dir;
}

void write_image(const dg3pd_image* img, const std::string& path) {
  if (ends_with(path, ".pfm")) {
    check(dg3pd_image_write_pfm(img, path.c_str()), "writing " + path);
  } else {
    check(dg3pd_image_write_pgm(img, path.c_str()), "writing " + path);
  }
}

void write_component_pair(const dg3pd_decomposition* d, dg3pd_component which,
                          const std::string& stem) {
  dg3pd_image* img = nullptr;
  check(dg3pd_decomposition_component(d, which, &img), "extracting component");
  ImagePtr holder = take(img);
  write_image(holder.get(), stem + ".pfm");
  write_image(holder.get(), stem + ".pgm");
}

// ---- commands ----

int cmd_decompose(const Config& cfg) {
  Inputs in = gather_inputs(cfg, false, false);
  dg3pd_params params = solver_params(cfg);
  const std::string dir = out_dir(cfg);

  dg3pd_decomposition* d = nullptr;
  check(dg3pd_decompose(in.f.get(), in.missing.get(), &params, &d), "decomposition");
  DecompPtr dec(d);

  write_component_pair(d, DG3PD_COMP_U, dir + "/u");
  write_component_pair(d, DG3PD_COMP_V, dir + "/v");
  write_component_pair(d, DG3PD_COMP_EPS, dir + "/eps");
  check(dg3pd_decomposition_write_metrics_csv(d, (dir + "/metrics.csv").c_str()),
        "writing metrics.csv");
  if (cfg.str("scene") == "challenge") {
    write_image(in.f.get(), dir + "/f.pfm");
    write_image(in.truth.get(), dir + "/f0.pfm");
    check(dg3pd_mask_write_pgm(in.missing.get(), (dir + "/mask.pgm").c_str()), "writing mask");
  }
  std::printf("decompose: wrote u/v/eps and metrics.csv to %s (%d iterations)\n", dir.c_str(),
              dg3pd_decomposition_trace_length(d));
  return kExitOk;
}

struct PsnrRow {
  std::string label;
  double psnr, mse;
};

void append_psnr(std::vector<PsnrRow>& rows, const std::string& label, const dg3pd_image* a,
                 const dg3pd_image* truth, const dg3pd_mask* region) {
  double ps = 0.0, ms = 0.0;
  check(dg3pd_psnr(a, truth, region, &ps, &ms), "psnr " + label);
  rows.push_back({label, ps, ms});
}

void write_psnr_csv(const std::string& path, const std::vector<PsnrRow>& rows) {
  std::ofstream f(path);
  if (!f) fail(kExitIo, "cannot write " + path);
  f << "label,psnr,mse,schema\n";
  f.precision(17);
  for (const auto& r : rows) f << r.label << ',' << r.psnr << ',' << r.mse << ",dg3pd.psnr.v1\n";
}

// Full restoration pipeline; returns the restored image and optionally the
// decomposition and segmented ROI.
ImagePtr run_pipeline(const Config& cfg, const Inputs& in, const std::string& dir, bool trace,
                      DecompPtr* dec_out, MaskPtr* roi_out) {
  dg3pd_params params = solver_params(cfg);
  dg3pd_texture_params tex = texture_params(cfg);

  dg3pd_decomposition* d = nullptr;
  check(dg3pd_decompose(in.f.get(), in.missing.get(), &params, &d), "decomposition");
  DecompPtr dec(d);

  dg3pd_image* u = nullptr;
  check(dg3pd_decomposition_component(d, DG3PD_COMP_U, &u), "component u");
  ImagePtr u_holder = take(u);
  dg3pd_image* v = nullptr;
  check(dg3pd_decomposition_component(d, DG3PD_COMP_V, &v), "component v");
  ImagePtr v_holder = take(v);

  dg3pd_image* v_restored = nullptr;
  dg3pd_mask* roi = nullptr;
  check(dg3pd_restore_texture(v_holder.get(), in.missing.get(), &tex,
                              trace ? u_holder.get() : nullptr, trace ? dir.c_str() : nullptr,
                              &v_restored, &roi),
        "texture restoration");
  ImagePtr vr = take(v_restored);
  MaskPtr roi_holder(roi);

  dg3pd_image* restored = nullptr;
  check(dg3pd_synthesize(u_holder.get(), vr.get(), &restored), "synthesis");
  if (dec_out) *dec_out = std::move(dec);
  if (roi_out) *roi_out = std::move(roi_holder);
  return take(restored);
}

int cmd_inpaint(const Config& cfg) {
  Inputs in = gather_inputs(cfg, true, false);
  const std::string dir = out_dir(cfg);
  const bool trace = cfg.flag("trace");

  DecompPtr dec;
  MaskPtr roi;
  ImagePtr restored = run_pipeline(cfg, in, dir, trace, &dec, &roi);

  write_component_pair(dec.get(), DG3PD_COMP_U, dir + "/u");
  write_component_pair(dec.get(), DG3PD_COMP_V, dir + "/v");
  write_component_pair(dec.get(), DG3PD_COMP_EPS, dir + "/eps");
  check(dg3pd_decomposition_write_metrics_csv(dec.get(), (dir + "/metrics.csv").c_str()),
        "writing metrics.csv");
  check(dg3pd_mask_write_pgm(roi.get(), (dir + "/roi.pgm").c_str()), "writing roi");
  write_image(restored.get(), dir + "/restored.pfm");
  write_image(restored.get(), dir + "/restored.pgm");

  if (in.truth) {
    std::vector<PsnrRow> rows;
    append_psnr(rows, "restored_full", restored.get(), in.truth.get(), nullptr);
    append_psnr(rows, "restored_missing", restored.get(), in.truth.get(), in.missing.get());
    // ROI region: the generator's ground truth for synthetic scenes, else the
    // segmented ROI when it is non-empty
    const dg3pd_mask* roi_region = in.true_roi ? in.true_roi.get() : roi.get();
    if (roi_region && dg3pd_mask_fraction(roi_region) > 0.0)
      append_psnr(rows, "restored_roi", restored.get(), in.truth.get(), roi_region);
    // degraded baseline: known pixels kept, holes at zero
    const int rows_n = dg3pd_image_rows(in.f.get());
    const int cols_n = dg3pd_image_cols(in.f.get());
    std::vector<double> data(static_cast<std::size_t>(rows_n) * cols_n);
    check(dg3pd_image_copy_data(in.f.get(), data.data(), data.size()), "copy f");
    std::vector<uint8_t> bits(data.size());
    check(dg3pd_mask_copy_data(in.missing.get(), bits.data(), bits.size()), "copy mask");
    for (std::size_t k = 0; k < data.size(); ++k)
      if (bits[k]) data[k] = 0.0;
    dg3pd_image* degraded = nullptr;
    check(dg3pd_image_from_data(rows_n, cols_n, data.data(), &degraded), "degraded image");
    ImagePtr degraded_holder = take(degraded);
    append_psnr(rows, "degraded_full", degraded_holder.get(), in.truth.get(), nullptr);
    write_psnr_csv(dir + "/psnr.csv", rows);
  }
  std::printf("inpaint: wrote restored image and stages to %s\n", dir.c_str());
  return kExitOk;
}

int cmd_analyze_filters(const Config& cfg) {
  const bool have_input = cfg.has("input") || cfg.str("scene") == "challenge";
  Inputs in;
  int rows = cfg.integer("rows", 128), cols = cfg.integer("cols", 128);
  if (have_input) {
    in = gather_inputs(cfg, false, false);
    rows = dg3pd_image_rows(in.f.get());
    cols = dg3pd_image_cols(in.f.get());
  }
  dg3pd_params params = solver_params(cfg);
  const std::string dir = out_dir(cfg);

  const double beta1 = params.c1 * params.beta4;
  const double beta3 = params.theta / (1.0 - params.theta) * params.beta4;
  const double beta2 = params.c2 * beta3;

  dg3pd_filterbank* bu = nullptr;
  check(dg3pd_filterbank_build_u(params.tv_directions, beta1, params.beta4, rows, cols, &bu),
        "u filter bank");
  BankPtr bu_holder(bu);
  dg3pd_filterbank* bg = nullptr;
  check(dg3pd_filterbank_build_g(params.g_directions, beta2, beta3, rows, cols, &bg),
        "g filter bank");
  BankPtr bg_holder(bg);

  double err_u = 0.0, err_g = 0.0;
  check(dg3pd_filterbank_unity_error(bu, &err_u), "unity error u");
  check(dg3pd_filterbank_unity_error(bg, &err_g), "unity error g");

  auto dump_bank = [&](dg3pd_filterbank* bank, const std::string& prefix) {
    const int n = dg3pd_filterbank_band_count(bank);
    for (int i = 0; i < n; ++i) {
      char name[128];
      check(dg3pd_filterbank_band_name(bank, i, name, sizeof(name)), "band name");
      dg3pd_image *re = nullptr, *im = nullptr;
      check(dg3pd_filterbank_band(bank, i, &re, &im), "band spectra");
      ImagePtr re_h = take(re), im_h = take(im);
      write_image(re_h.get(), dir + "/" + prefix + "_" + name + "_re.pfm");
      write_image(im_h.get(), dir + "/" + prefix + "_" + name + "_im.pfm");
      // log-magnitude preview scaled to [0, 255]
      const int rn = dg3pd_image_rows(re_h.get()), cn = dg3pd_image_cols(re_h.get());
      std::vector<double> vre(static_cast<std::size_t>(rn) * cn), vim(vre.size());
      check(dg3pd_image_copy_data(re_h.get(), vre.data(), vre.size()), "copy re");
      check(dg3pd_image_copy_data(im_h.get(), vim.data(), vim.size()), "copy im");
      double peak = 0.0;
      for (std::size_t k = 0; k < vre.size(); ++k) {
        vre[k] = std::log1p(std::hypot(vre[k], vim[k]));
        peak = std::max(peak, vre[k]);
      }
      if (peak > 0.0)
        for (auto& v : vre) v *= 255.0 / peak;
      dg3pd_image* mag = nullptr;
      check(dg3pd_image_from_data(rn, cn, vre.data(), &mag), "magnitude preview");
      ImagePtr mag_h = take(mag);
      write_image(mag_h.get(), dir + "/" + prefix + "_" + name + "_mag.pgm");
    }
  };
  dump_bank(bu, "u");
  dump_bank(bg, "g");

  const double tol = 1e-12;
  std::ofstream rep(dir + "/unity_report.csv");
  if (!rep) fail(kExitIo, "cannot write unity_report.csv");
  rep.precision(17);
  rep << "identity,max_error,tolerance,verdict,schema\n";
  rep << "u_problem," << err_u << ',' << tol << ',' << (err_u <= tol ? "PASS" : "FAIL")
      << ",dg3pd.unity.v1\n";
  rep << "g_problem," << err_g << ',' << tol << ',' << (err_g <= tol ? "PASS" : "FAIL")
      << ",dg3pd.unity.v1\n";

  if (have_input) {
    dg3pd_params dparams = params;
    dg3pd_decomposition* d = nullptr;
    check(dg3pd_decompose(in.f.get(), in.missing.get(), &dparams, &d), "decomposition");
    DecompPtr dec(d);
    double unity_mse = -1.0;
    dg3pd_filterbank* emp = nullptr;
    check(dg3pd_filterbank_empirical(in.f.get(), d, &emp, &unity_mse), "empirical filters");
    BankPtr emp_holder(emp);
    dump_bank(emp, "empirical");
    std::ofstream rc(dir + "/report.csv");
    if (!rc) fail(kExitIo, "cannot write report.csv");
    rc.precision(17);
    rc << "metric,value,schema\n";
    rc << "unity_mse," << unity_mse << ",dg3pd.report.v1\n";
  }

  std::printf("analyze-filters: unity u=%.3e g=%.3e %s\n", err_u, err_g,
              (err_u <= tol && err_g <= tol) ? "PASS" : "FAIL");
  return kExitOk;
}

int cmd_compare(const Config& cfg) {
  Inputs in = gather_inputs(cfg, true, true);
  const std::string dir = out_dir(cfg);

  DecompPtr dec;
  MaskPtr roi;
  ImagePtr dg3pd_restored = run_pipeline(cfg, in, dir, false, &dec, &roi);
  write_image(dg3pd_restored.get(), dir + "/dg3pd.pfm");
  write_image(dg3pd_restored.get(), dir + "/dg3pd.pgm");

  dg3pd_tvl2_params tp = tvl2_params(cfg);
  dg3pd_image* tvl2 = nullptr;
  check(dg3pd_tvl2_inpaint(in.f.get(), in.missing.get(), &tp, &tvl2,
                           (dir + "/tvl2_metrics.csv").c_str()),
        "tvl2");
  ImagePtr tvl2_holder = take(tvl2);
  write_image(tvl2_holder.get(), dir + "/tvl2.pfm");
  write_image(tvl2_holder.get(), dir + "/tvl2.pgm");

  struct Method {
    std::string name;
    ImagePtr img;
  };
  std::vector<Method> methods;
  methods.push_back({"dg3pd", std::move(dg3pd_restored)});
  methods.push_back({"tvl2", std::move(tvl2_holder)});
  for (const auto& [key, path] : cfg.kv) {
    if (key.rfind("external.", 0) != 0) continue;
    methods.push_back({key.substr(9), load_image(path)});
  }

  // ROI region: ground truth for synthetic scenes, segmented ROI otherwise
  const dg3pd_mask* roi_region = in.true_roi ? in.true_roi.get() : roi.get();
  const bool have_roi = roi_region && dg3pd_mask_fraction(roi_region) > 0.0;

  std::ofstream f(dir + "/compare.csv");
  if (!f) fail(kExitIo, "cannot write compare.csv");
  f << "method,psnr_full,psnr_missing,psnr_roi,mse_full,mse_missing,mse_roi,schema\n";
  f.precision(17);
  for (const auto& m : methods) {
    double p_full, m_full, p_miss, m_miss;
    double p_roi = std::nan(""), m_roi = std::nan("");
    check(dg3pd_psnr(m.img.get(), in.truth.get(), nullptr, &p_full, &m_full), m.name);
    check(dg3pd_psnr(m.img.get(), in.truth.get(), in.missing.get(), &p_miss, &m_miss), m.name);
    if (have_roi) check(dg3pd_psnr(m.img.get(), in.truth.get(), roi_region, &p_roi, &m_roi), m.name);
    f << m.name << ',' << p_full << ',' << p_miss << ',' << p_roi << ',' << m_full << ','
      << m_miss << ',' << m_roi << ",dg3pd.compare.v1\n";
  }
  std::printf("compare: wrote compare.csv with %zu methods to %s\n", methods.size(), dir.c_str());
  return kExitOk;
}

int cmd_diagnostics(const Config& cfg) {
  Inputs in = gather_inputs(cfg, false, false);
  dg3pd_params params = solver_params(cfg);
  const std::string dir = out_dir(cfg);

  dg3pd_decomposition* d = nullptr;
  check(dg3pd_decompose(in.f.get(), in.missing.get(), &params, &d), "decomposition");
  DecompPtr dec(d);

  MaskPtr known;
  if (in.missing) {
    dg3pd_mask* k = nullptr;
    check(dg3pd_mask_complement(in.missing.get(), &k), "mask complement");
    known = MaskPtr(k);
  }

  std::ofstream moments(dir + "/moments.csv");
  if (!moments) fail(kExitIo, "cannot write moments.csv");
  moments << "grid,mean,variance,excess_kurtosis,schema\n";
  moments.precision(17);
  const std::pair<dg3pd_component, const char*> comps[] = {
      {DG3PD_COMP_U, "u"}, {DG3PD_COMP_V, "v"}, {DG3PD_COMP_EPS, "eps"}};
  for (auto [which, name] : comps) {
    dg3pd_image* img = nullptr;
    check(dg3pd_decomposition_component(d, which, &img), "component");
    ImagePtr holder = take(img);
    double mean, var, kurt;
    const dg3pd_mask* region = (which == DG3PD_COMP_EPS) ? known.get() : nullptr;
    check(dg3pd_density_report(holder.get(), region,
                               (dir + "/density_" + name + ".csv").c_str(), &mean, &var, &kurt),
          std::string("density ") + name);
    moments << name << ',' << mean << ',' << var << ',' << kurt << ",dg3pd.moments.v1\n";
  }

  dg3pd_image* eps = nullptr;
  check(dg3pd_decomposition_component(d, DG3PD_COMP_EPS, &eps), "component eps");
  ImagePtr eps_holder = take(eps);
  double qq = 0.0;
  check(dg3pd_qq_normal(eps_holder.get(), known.get(), (dir + "/qq_eps.csv").c_str(), &qq),
        "qq eps");

  // v_texture = (v + e1 .* chi_D) .* ROI, the estimated texture before the
  // residual subtraction
  if (in.missing) {
    dg3pd_image* v = nullptr;
    check(dg3pd_decomposition_component(d, DG3PD_COMP_V, &v), "component v");
    ImagePtr v_holder = take(v);
    dg3pd_image* e1t = nullptr;
    check(dg3pd_decomposition_component(d, DG3PD_COMP_E1, &e1t), "component e1");
    ImagePtr e1_holder2 = take(e1t);
    dg3pd_mask* roi = nullptr;
    check(dg3pd_segment_texture(v_holder.get(), &roi), "segmentation");
    MaskPtr roi_holder(roi);
    dg3pd_image* vt = nullptr;
    check(dg3pd_compose_v_texture(v_holder.get(), e1_holder2.get(), in.missing.get(), roi, &vt),
          "v_texture");
    ImagePtr vt_holder = take(vt);
    write_image(vt_holder.get(), dir + "/v_texture.pfm");
  }

  // closed-loop residual inspection: e, its pre-subtraction term e1 and the
  // smoothing term e2 = e1 - e
  dg3pd_image* e = nullptr;
  check(dg3pd_decomposition_component(d, DG3PD_COMP_E, &e), "component e");
  ImagePtr e_holder = take(e);
  dg3pd_image* e1 = nullptr;
  check(dg3pd_decomposition_component(d, DG3PD_COMP_E1, &e1), "component e1");
  ImagePtr e1_holder = take(e1);
  write_image(e_holder.get(), dir + "/e.pfm");
  write_image(e1_holder.get(), dir + "/e1.pfm");
  {
    const int rn = dg3pd_image_rows(e_holder.get()), cn = dg3pd_image_cols(e_holder.get());
    std::vector<double> ev(static_cast<std::size_t>(rn) * cn), e1v(ev.size());
    check(dg3pd_image_copy_data(e_holder.get(), ev.data(), ev.size()), "copy e");
    check(dg3pd_image_copy_data(e1_holder.get(), e1v.data(), e1v.size()), "copy e1");
    for (std::size_t k = 0; k < ev.size(); ++k) e1v[k] -= ev[k];
    dg3pd_image* e2 = nullptr;
    check(dg3pd_image_from_data(rn, cn, e1v.data(), &e2), "e2");
    ImagePtr e2_holder = take(e2);
    write_image(e2_holder.get(), dir + "/e2.pfm");
  }

  std::printf("diagnostics: qq correlation of eps = %.4f; reports in %s\n", qq, dir.c_str());
  return kExitOk;
}

void usage() {
  std::fprintf(stderr,
               "usage: dg3pd {decompose|inpaint|analyze-filters|compare|diagnostics}\n"
               "             --config FILE [--key value ...]\n"
               "library version %s\n",
               dg3pd_version());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    usage();
    return kExitValidation;
  }
  const std::string cmd = argv[1];
  try {
    Config cfg = parse_cli(argc, argv, 2);
    if (cmd == "decompose") return cmd_decompose(cfg);
    if (cmd == "inpaint") return cmd_inpaint(cfg);
    if (cmd == "analyze-filters") return cmd_analyze_filters(cfg);
    if (cmd == "compare") return cmd_compare(cfg);
    if (cmd == "diagnostics") return cmd_diagnostics(cfg);
    usage();
    return kExitValidation;
  } catch (const CliError& e) {
    std::fprintf(stderr, "dg3pd %s: %s\n", cmd.c_str(), e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "dg3pd %s: %s\n", cmd.c_str(), e.what());
    return kExitNumeric;
  }
}
