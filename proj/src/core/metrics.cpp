#include "core/metrics.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "core/errors.hpp"

namespace dg3pd {

double mse(const Image& a, const Image& reference, const Mask* region) {
  require_same_shape(a, reference, "mse");
  if (region) require_same_shape(a, *region, "mse region");
  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (region && !(*region)[k]) continue;
    const double d = a[k] - reference[k];
    s += d * d;
    ++n;
  }
  if (n == 0) throw std::invalid_argument("mse: empty region");
  return s / static_cast<double>(n);
}

double psnr(const Image& a, const Image& reference, const Mask* region) {
  const double m = mse(a, reference, region);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / m);
}

void write_metrics_csv(const std::string& path, const std::vector<IterationMetrics>& trace) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << "iteration,unity_residual_l2,sup_coeff_e,nu,mu1,mu2,time_ms,schema\n";
  f.precision(17);
  for (const auto& m : trace)
    f << m.iteration << ',' << m.unity_residual_l2 << ',' << m.sup_coeff_e << ',' << m.nu << ','
      << m.mu1 << ',' << m.mu2 << ',' << m.time_ms << ",dg3pd.metrics.v1\n";
  if (!f) throw IoError("write failed: " + path);
}

void write_compare_csv(const std::string& path, const std::vector<TableRow>& rows) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << "method,psnr_full,psnr_missing,psnr_roi,mse_full,mse_missing,mse_roi,schema\n";
  f.precision(17);
  for (const auto& r : rows)
    f << r.method << ',' << r.psnr_full << ',' << r.psnr_missing << ',' << r.psnr_roi << ','
      << r.mse_full << ',' << r.mse_missing << ',' << r.mse_roi << ",dg3pd.compare.v1\n";
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace dg3pd
