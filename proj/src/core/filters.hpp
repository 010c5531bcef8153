#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/fft.hpp"
#include "core/grid.hpp"

namespace dg3pd {

// Analytic frame-function spectra induced by the u- and g-subproblem solves.
// u-part: Phi = beta4/X, Psi_l = P_l, PsiDual_l = beta1*conj(P_l)/X with
// X = beta4 + beta1*sum_l |P_l|^2. g-part: Xi_a = beta2/A_a,
// PsiPrime_a = beta3*conj(P_a)/A_a, PsiG_a = P_a with
// A_a = beta2 + beta3*|P_a|^2. Their unity identities
// Phi + sum_l PsiDual_l*Psi_l = 1 and Xi_a + PsiG_a*PsiPrime_a = 1 hold at
// every frequency-grid point.
struct FilterBank {
  int rows = 0, cols = 0;
  // u-part (empty unless built)
  int tv_directions = 0;
  double beta1 = 0.0, beta4 = 0.0;
  std::vector<double> phi;  // real
  std::vector<Spectrum> psi, psi_dual;
  // g-part (empty unless built)
  int g_directions = 0;
  double beta2 = 0.0, beta3 = 0.0;
  std::vector<std::vector<double>> xi;  // real, per direction
  std::vector<Spectrum> psi_g, psi_prime;
};

FilterBank build_u_filters(int L, double beta1, double beta4, int rows, int cols);
FilterBank build_g_filters(int S, double beta2, double beta3, int rows, int cols);

double unity_error_u(const FilterBank& bank);  // max_z |Phi + sum PsiDual*Psi - 1|
double unity_error_g(const FilterBank& bank);  // max_a max_z |Xi_a + PsiG_a*PsiPrime_a - 1|

// number of grid points where a real spectrum is >= half its peak
std::size_t half_power_area(const std::vector<double>& spectrum);

// Per-image empirical filters LP = U/F, HP = E/F, BP_s = V_s/F, masked where
// |F| <= guard * max|F|; unity_mse averages |LP + HP + sum BP - 1|^2 over the
// unmasked points.
struct EmpiricalFilters {
  Spectrum lp, hp;
  std::vector<Spectrum> bp;
  std::vector<std::uint8_t> valid;
  std::size_t masked_count = 0;
  double unity_mse = 0.0;
};

EmpiricalFilters empirical_filters(const Image& f, const Image& u,
                                   const std::vector<Image>& v_parts, const Image& eps,
                                   double guard = 1e-8);

// Histogram, moments and a normal QQ summary for samples in a region
// (region == nullptr takes the whole grid; set pixels are included).
struct DensityReport {
  std::size_t samples = 0;
  double mean = 0.0, variance = 0.0, excess_kurtosis = 0.0;
  double lo = 0.0, hi = 0.0;
  std::vector<std::size_t> counts;  // bins over [lo, hi]
};

struct QqReport {
  std::vector<double> theoretical;  // standardized normal quantiles
  std::vector<double> sample;       // sorted samples
  double correlation = 0.0;
};

DensityReport density_report(const Image& x, const Mask* region, int bins = 64);
QqReport qq_normal(const Image& x, const Mask* region);

// AS241-style inverse normal CDF (absolute error ~1e-9)
double inverse_normal_cdf(double p);

}  // namespace dg3pd
