#include "core/filters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/directional.hpp"

namespace dg3pd {

FilterBank build_u_filters(int L, double beta1, double beta4, int rows, int cols) {
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  if (!(beta4 > 0.0) || beta1 < 0.0) throw std::invalid_argument("need beta4 > 0 and beta1 >= 0");
  FilterBank bank;
  bank.rows = rows;
  bank.cols = cols;
  bank.tv_directions = L;
  bank.beta1 = beta1;
  bank.beta4 = beta4;

  std::vector<double> x = dir_symbol_sq_sum(rows, cols, L);
  for (auto& v : x) v = beta4 + beta1 * v;

  bank.phi.resize(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) bank.phi[k] = beta4 / x[k];

  bank.psi.reserve(static_cast<std::size_t>(L));
  bank.psi_dual.reserve(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    Spectrum p = dir_symbol(rows, cols, l, L);
    Spectrum dual(rows, cols);
    for (std::size_t k = 0; k < p.size(); ++k) dual[k] = beta1 * std::conj(p[k]) / x[k];
    bank.psi.push_back(std::move(p));
    bank.psi_dual.push_back(std::move(dual));
  }
  return bank;
}

FilterBank build_g_filters(int S, double beta2, double beta3, int rows, int cols) {
  if (S < 1) throw std::invalid_argument("S must be >= 1");
  if (!(beta2 > 0.0) || beta3 < 0.0) throw std::invalid_argument("need beta2 > 0 and beta3 >= 0");
  FilterBank bank;
  bank.rows = rows;
  bank.cols = cols;
  bank.g_directions = S;
  bank.beta2 = beta2;
  bank.beta3 = beta3;

  for (int a = 0; a < S; ++a) {
    Spectrum p = dir_symbol(rows, cols, a, S);
    std::vector<double> xi(p.size());
    Spectrum prime(rows, cols);
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double A = beta2 + beta3 * std::norm(p[k]);
      xi[k] = beta2 / A;
      prime[k] = beta3 * std::conj(p[k]) / A;
    }
    bank.xi.push_back(std::move(xi));
    bank.psi_g.push_back(std::move(p));
    bank.psi_prime.push_back(std::move(prime));
  }
  return bank;
}

double unity_error_u(const FilterBank& bank) {
  if (bank.phi.empty()) throw std::invalid_argument("bank has no u-part");
  double worst = 0.0;
  for (std::size_t k = 0; k < bank.phi.size(); ++k) {
    cd s(bank.phi[k], 0.0);
    for (std::size_t l = 0; l < bank.psi.size(); ++l) s += bank.psi_dual[l][k] * bank.psi[l][k];
    worst = std::max(worst, std::abs(s - cd(1.0, 0.0)));
  }
  return worst;
}

double unity_error_g(const FilterBank& bank) {
  if (bank.xi.empty()) throw std::invalid_argument("bank has no g-part");
  double worst = 0.0;
  for (std::size_t a = 0; a < bank.xi.size(); ++a) {
    for (std::size_t k = 0; k < bank.xi[a].size(); ++k) {
      const cd s = cd(bank.xi[a][k], 0.0) + bank.psi_g[a][k] * bank.psi_prime[a][k];
      worst = std::max(worst, std::abs(s - cd(1.0, 0.0)));
    }
  }
  return worst;
}

std::size_t half_power_area(const std::vector<double>& spectrum) {
  double peak = 0.0;
  for (double v : spectrum) peak = std::max(peak, v);
  std::size_t n = 0;
  for (double v : spectrum)
    if (v >= 0.5 * peak) ++n;
  return n;
}

EmpiricalFilters empirical_filters(const Image& f, const Image& u,
                                   const std::vector<Image>& v_parts, const Image& eps,
                                   double guard) {
  require_same_shape(f, u, "empirical_filters");
  require_same_shape(f, eps, "empirical_filters");
  for (const auto& vp : v_parts) require_same_shape(f, vp, "empirical_filters");

  const Spectrum F = dft2(f);
  double peak = 0.0;
  for (std::size_t k = 0; k < F.size(); ++k) peak = std::max(peak, std::abs(F[k]));
  if (peak == 0.0) throw std::invalid_argument("degenerate spectrum: f is identically zero");
  const double cut = guard * peak;

  EmpiricalFilters out;
  out.lp = Spectrum(f.rows(), f.cols());
  out.hp = Spectrum(f.rows(), f.cols());
  out.bp.assign(v_parts.size(), Spectrum(f.rows(), f.cols()));
  out.valid.assign(F.size(), 0);

  const Spectrum U = dft2(u);
  const Spectrum E = dft2(eps);
  std::vector<Spectrum> V;
  V.reserve(v_parts.size());
  for (const auto& vp : v_parts) V.push_back(dft2(vp));

  double mse = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < F.size(); ++k) {
    if (std::abs(F[k]) <= cut) {
      ++out.masked_count;
      continue;
    }
    out.valid[k] = 1;
    out.lp[k] = U[k] / F[k];
    out.hp[k] = E[k] / F[k];
    cd s = out.lp[k] + out.hp[k];
    for (std::size_t p = 0; p < V.size(); ++p) {
      out.bp[p][k] = V[p][k] / F[k];
      s += out.bp[p][k];
    }
    mse += std::norm(s - cd(1.0, 0.0));
    ++used;
  }
  if (used == 0) throw std::invalid_argument("degenerate spectrum: everything masked");
  out.unity_mse = mse / static_cast<double>(used);
  return out;
}

namespace {

std::vector<double> collect(const Image& x, const Mask* region) {
  std::vector<double> s;
  if (region != nullptr) {
    require_same_shape(x, *region, "diagnostics region");
    for (std::size_t k = 0; k < x.size(); ++k)
      if ((*region)[k]) s.push_back(x[k]);
  } else {
    s.assign(x.data(), x.data() + x.size());
  }
  return s;
}

}  // namespace

DensityReport density_report(const Image& x, const Mask* region, int bins) {
  if (bins < 1) throw std::invalid_argument("bins must be >= 1");
  std::vector<double> s = collect(x, region);
  if (s.size() < 100) throw std::invalid_argument("too few samples in region (need >= 100)");

  DensityReport rep;
  rep.samples = s.size();
  const double n = static_cast<double>(s.size());
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : s) {
    const double d = v - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m4 /= n;
  rep.mean = mean;
  rep.variance = m2;
  rep.excess_kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;

  rep.lo = *std::min_element(s.begin(), s.end());
  rep.hi = *std::max_element(s.begin(), s.end());
  rep.counts.assign(static_cast<std::size_t>(bins), 0);
  const double span = rep.hi - rep.lo;
  for (double v : s) {
    int b = span > 0.0 ? static_cast<int>((v - rep.lo) / span * bins) : 0;
    b = std::clamp(b, 0, bins - 1);
    ++rep.counts[static_cast<std::size_t>(b)];
  }
  return rep;
}

QqReport qq_normal(const Image& x, const Mask* region) {
  std::vector<double> s = collect(x, region);
  if (s.size() < 100) throw std::invalid_argument("too few samples in region (need >= 100)");
  std::sort(s.begin(), s.end());

  QqReport rep;
  const std::size_t n = s.size();
  rep.sample = std::move(s);
  rep.theoretical.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    rep.theoretical[i] = inverse_normal_cdf((static_cast<double>(i) + 0.5) / static_cast<double>(n));

  // Pearson correlation between sorted samples and normal quantiles
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rep.theoretical[i];
    my += rep.sample[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = rep.theoretical[i] - mx, dy = rep.sample[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  rep.correlation = (sxx > 0.0 && syy > 0.0) ? sxy / std::sqrt(sxx * syy) : 0.0;
  return rep;
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inverse_normal_cdf needs p in (0,1)");
  // Wichura's PPND16 rational approximations
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
                45921.953931549871457) *
                   r +
               13731.693765509461125) *
                  r +
              1971.5909503065514427) *
                 r +
             133.14166789178437745) *
                r +
            3.387132872796366608) /
           (((((((5226.495278852545703 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
                21213.794301586595867) *
                   r +
               5394.1960214247511077) *
                  r +
              687.1870074920579083) *
                 r +
             42.313330701600911252) *
                r +
            1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                0.24178072517745061177) *
                   r +
               1.27045825245236838258) *
                  r +
              3.64784832476320460504) *
                 r +
             5.7694972214606914055) *
                r +
            4.6303378461565452959) *
               r +
           1.42343711074968357734) /
          (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                0.0151986665636164571966) *
                   r +
               0.14810397642748007459) *
                  r +
              0.68976733498510000455) *
                 r +
             1.6763848301838038494) *
                r +
            2.05319162663775882187) *
               r +
           1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                0.0012426609473880784386) *
                   r +
               0.026532189526576123093) *
                  r +
              0.29656057182850489123) *
                 r +
             1.7848265399172913358) *
                r +
            5.4637849111641143699) *
               r +
           6.6579046435011037772) /
          (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                1.8463183175100546818e-5) *
                   r +
               7.868691311456132591e-4) *
                  r +
              0.0148753612908506148525) *
                 r +
             0.13692988092273580531) *
                r +
            0.59983220655588793769) *
               r +
           1.0);
  }
  return q < 0.0 ? -val : val;
}

}  // namespace dg3pd
