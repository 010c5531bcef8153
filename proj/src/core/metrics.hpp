#pragma once

#include <string>
#include <vector>

#include "core/grid.hpp"
#include "core/solver.hpp"

namespace dg3pd {

// MSE/PSNR against a reference, peak 255; region == nullptr means full grid,
// otherwise set pixels are included.
double mse(const Image& a, const Image& reference, const Mask* region = nullptr);
double psnr(const Image& a, const Image& reference, const Mask* region = nullptr);

// metrics.csv, schema dg3pd.metrics.v1:
// iteration,unity_residual_l2,sup_coeff_e,nu,mu1,mu2,time_ms,schema
void write_metrics_csv(const std::string& path, const std::vector<IterationMetrics>& trace);

struct TableRow {
  std::string method;
  double psnr_full, psnr_missing, psnr_roi;
  double mse_full, mse_missing, mse_roi;
};

// comparison table, schema dg3pd.compare.v1
void write_compare_csv(const std::string& path, const std::vector<TableRow>& rows);

}  // namespace dg3pd
