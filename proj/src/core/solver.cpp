#include "core/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "core/directional.hpp"
#include "core/errors.hpp"

namespace dg3pd {

void SolverParams::validate() const {
  if (tv_directions < 1) throw std::invalid_argument("L must be >= 1");
  if (g_directions < 1) throw std::invalid_argument("S must be >= 1");
  if (!(beta4 > 0.0)) throw std::invalid_argument("beta4 must be positive");
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0,1)");
  if (c1 < 0.0) throw std::invalid_argument("c1 must be nonnegative");
  if (!(c2 > 0.0)) throw std::invalid_argument("c2 must be positive");
  if (!(c3 > 0.0)) throw std::invalid_argument("c3 must be positive");
  if (c_mu1 < 0.0 || c_mu2 < 0.0) throw std::invalid_argument("c_mu must be nonnegative");
  if (gamma < 0.0) throw std::invalid_argument("gamma must be nonnegative");
  if (iterations < 1) throw std::invalid_argument("iteration count must be >= 1");
  if (nu.kind == NuPolicy::Kind::Fixed) {
    if (nu.value < 0.0) throw std::invalid_argument("fixed nu must be nonnegative");
  } else {
    if (!(nu.value > 0.0 && nu.value < 1.0)) throw std::invalid_argument("c_nu must lie in (0,1)");
  }
}

double shrink_scalar(double x, double tau) {
  const double a = std::abs(x) - tau;
  return a > 0.0 ? (x < 0.0 ? -a : a) : 0.0;
}

Image shrink(const Image& x, double tau) {
  if (tau < 0.0) throw std::invalid_argument("shrink threshold must be nonnegative");
  Image out(x.rows(), x.cols());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = shrink_scalar(x[k], tau);
  return out;
}

Image Decomposition::texture_direction(int s) const {
  if (s < 0 || s >= g_directions) throw std::invalid_argument("texture direction out of range");
  return dir_forward(g[static_cast<std::size_t>(s)], s, g_directions);
}

SolverState::SolverState(const Image& f_in, const Mask* missing, const SolverParams& params)
    : params_(params) {
  params_.validate();
  if (!f_in.all_finite()) throw std::invalid_argument("input image contains non-finite values");
  if (f_in.rows() < 4 || f_in.cols() < 4) throw std::invalid_argument("solver needs at least 4x4");

  f = f_in;
  if (missing != nullptr) {
    require_same_shape(f, *missing, "solver mask");
    has_mask_ = true;
    known = missing->complement().to_image();
  }

  const int L = params_.tv_directions, S = params_.g_directions;
  const int m = f.rows(), n = f.cols();

  u = f;  // initialization: u = f, everything else zero
  v = Image(m, n);
  eps = Image(m, n);
  e = Image(m, n);
  e1 = Image(m, n);
  r.assign(static_cast<std::size_t>(L), Image(m, n));
  w.assign(static_cast<std::size_t>(S), Image(m, n));
  g.assign(static_cast<std::size_t>(S), Image(m, n));
  lambda1.assign(static_cast<std::size_t>(L), Image(m, n));
  lambda2.assign(static_cast<std::size_t>(S), Image(m, n));
  lambda3 = Image(m, n);
  lambda4 = Image(m, n);
  lambda5 = Image(m, n);

  // iteration-invariant spectra; Riesz-type lower bounds hold at DC
  const double b1 = params_.beta1(), b2 = params_.beta2(), b3 = params_.beta3(), b4 = params_.beta4;
  x_sym_ = dir_symbol_sq_sum(m, n, L);
  double x_min = b4 + b1 * x_sym_[0];
  for (auto& xv : x_sym_) {
    xv = b4 + b1 * xv;
    x_min = std::min(x_min, xv);
  }
  if (x_min < b4 - 1e-12) throw NumericError("X(z) lower bound violated");

  a_sym_.resize(static_cast<std::size_t>(S));
  for (int a = 0; a < S; ++a) {
    Spectrum p = dir_symbol(m, n, a, S);
    auto& row = a_sym_[static_cast<std::size_t>(a)];
    row.resize(p.size());
    double a_min = b2;
    for (std::size_t k = 0; k < p.size(); ++k) {
      row[k] = b2 + b3 * std::norm(p[k]);
      a_min = std::min(a_min, row[k]);
    }
    if (a_min < b2 - 1e-12) throw NumericError("A_a(z) lower bound violated");
  }
}

std::shared_ptr<const MsdtPlan> SolverState::msdt_plan() const {
  if (!plan_) plan_ = make_msdt_plan(f.rows(), f.cols(), params_.msdt);
  return plan_;
}

void SolverState::step_r() {
  const int L = params_.tv_directions;
  const double b1 = params_.beta1();
  if (b1 == 0.0) {
    for (auto& rl : r)
      for (std::size_t k = 0; k < rl.size(); ++k) rl[k] = 0.0;
    return;
  }
  const double inv_b1 = 1.0 / b1;
  for (int l = 0; l < L; ++l) {
    Image t = dir_forward(u, l, L);
    const Image& lam = lambda1[static_cast<std::size_t>(l)];
    Image& rl = r[static_cast<std::size_t>(l)];
    for (std::size_t k = 0; k < t.size(); ++k)
      rl[k] = shrink_scalar(t[k] - lam[k] * inv_b1, inv_b1);
  }
}

void SolverState::step_w() {
  const int S = params_.g_directions;
  const double b2 = params_.beta2();
  const double inv_b2 = 1.0 / b2;
  // t_w for all directions first; mu1 uses the global max across them
  double max_t = 0.0;
  for (int a = 0; a < S; ++a) {
    const Image& ga = g[static_cast<std::size_t>(a)];
    const Image& lam = lambda2[static_cast<std::size_t>(a)];
    Image& wa = w[static_cast<std::size_t>(a)];
    for (std::size_t k = 0; k < wa.size(); ++k) {
      wa[k] = ga[k] - lam[k] * inv_b2;
      max_t = std::max(max_t, std::abs(wa[k]));
    }
  }
  mu1 = params_.c_mu1 * b2 * max_t;
  const double tau = mu1 * inv_b2;
  if (tau > 0.0)
    for (auto& wa : w)
      for (std::size_t k = 0; k < wa.size(); ++k) wa[k] = shrink_scalar(wa[k], tau);
}

void SolverState::step_g() {
  const int S = params_.g_directions;
  const double b2 = params_.beta2(), b3 = params_.beta3();
  const double inv_b2 = 1.0 / b2, inv_b3 = 1.0 / b3;
  // Gauss-Seidel sweep: direction a consumes already-updated g_s for s < a
  for (int a = 0; a < S; ++a) {
    Image bracket(f.rows(), f.cols());
    for (std::size_t k = 0; k < bracket.size(); ++k) bracket[k] = v[k] + lambda3[k] * inv_b3;
    for (int s = 0; s < S; ++s) {
      if (s == a) continue;
      sub_in_place(bracket, dir_forward(g[static_cast<std::size_t>(s)], s, S));
    }
    Image rhs(f.rows(), f.cols());
    const Image& wa = w[static_cast<std::size_t>(a)];
    const Image& lam = lambda2[static_cast<std::size_t>(a)];
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] = b2 * (wa[k] + lam[k] * inv_b2);
    add_dir_transpose_scaled(rhs, bracket, a, S, b3);

    Spectrum B = dft2(rhs);
    const auto& A = a_sym_[static_cast<std::size_t>(a)];
    for (std::size_t k = 0; k < B.size(); ++k) B[k] /= A[k];
    g[static_cast<std::size_t>(a)] = idft2_real(B);
  }
}

void SolverState::step_v() {
  const int S = params_.g_directions;
  const double b3 = params_.beta3(), b4 = params_.beta4;
  const double w3 = b3 / (b3 + b4), w4 = b4 / (b3 + b4);
  const double inv_b3 = 1.0 / b3, inv_b4 = 1.0 / b4;
  Image div = div_forward(g, S);
  double max_t = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double tv = w3 * (div[k] - lambda3[k] * inv_b3) +
                      w4 * (f[k] - u[k] - eps[k] + lambda4[k] * inv_b4);
    v[k] = tv;
    max_t = std::max(max_t, std::abs(tv));
  }
  mu2 = params_.c_mu2 * (b3 + b4) * max_t;
  const double tau = mu2 / (b3 + b4);
  if (tau > 0.0)
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = shrink_scalar(v[k], tau);
}

void SolverState::step_u() {
  const int L = params_.tv_directions;
  const double b1 = params_.beta1(), b4 = params_.beta4;
  const double inv_b4 = 1.0 / b4;
  Image rhs(f.rows(), f.cols());
  for (std::size_t k = 0; k < rhs.size(); ++k)
    rhs[k] = b4 * (f[k] - v[k] - eps[k] + lambda4[k] * inv_b4);
  if (b1 > 0.0) {
    const double inv_b1 = 1.0 / b1;
    Image tmp(f.rows(), f.cols());
    for (int l = 0; l < L; ++l) {
      const Image& rl = r[static_cast<std::size_t>(l)];
      const Image& lam = lambda1[static_cast<std::size_t>(l)];
      for (std::size_t k = 0; k < tmp.size(); ++k) tmp[k] = rl[k] + lam[k] * inv_b1;
      add_dir_transpose_scaled(rhs, tmp, l, L, b1);
    }
  }
  Spectrum Y = dft2(rhs);
  for (std::size_t k = 0; k < Y.size(); ++k) Y[k] /= x_sym_[k];
  u = idft2_real(Y);
}

Image SolverState::masked_eps() const {
  if (!has_mask_) return eps;
  return pointwise_mul(eps, known);
}

void SolverState::step_e() {
  const double b5 = params_.beta5();
  const double inv_b5 = 1.0 / b5;
  const Image chi_eps = masked_eps();
  for (std::size_t k = 0; k < e1.size(); ++k) e1[k] = chi_eps[k] - lambda5[k] * inv_b5;

  CoeffPyramid pyr = msdt_forward(e1, msdt_plan());
  nu_used = params_.nu.kind == NuPolicy::Kind::Fixed ? params_.nu.value
                                                     : params_.nu.value * sup_coeff(pyr);
  shrink_pyramid(pyr, nu_used);
  Image smooth = msdt_inverse(pyr);
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = e1[k] - smooth[k];
}

void SolverState::step_eps() {
  const double b4 = params_.beta4, b5 = params_.beta5();
  const double inv_b4 = 1.0 / b4, inv_b5 = 1.0 / b5;
  if (has_mask_) {
    for (std::size_t k = 0; k < eps.size(); ++k) {
      const double chi = known[k];
      const double unity = f[k] - u[k] - v[k] + lambda4[k] * inv_b4;
      eps[k] = (b4 * unity + b5 * (chi * (e[k] + lambda5[k] * inv_b5))) / (b4 + b5 * chi);
    }
  } else {
    for (std::size_t k = 0; k < eps.size(); ++k) {
      const double unity = f[k] - u[k] - v[k] + lambda4[k] * inv_b4;
      eps[k] = (b4 * unity + b5 * (e[k] + lambda5[k] * inv_b5)) / (b4 + b5);
    }
  }
}

void SolverState::step_multipliers() {
  const int L = params_.tv_directions, S = params_.g_directions;
  const double b1 = params_.beta1(), b2 = params_.beta2(), b3 = params_.beta3(),
               b4 = params_.beta4, b5 = params_.beta5();
  const double gamma = params_.gamma;

  if (b1 > 0.0) {
    for (int l = 0; l < L; ++l) {
      Image du = dir_forward(u, l, L);
      Image& lam = lambda1[static_cast<std::size_t>(l)];
      const Image& rl = r[static_cast<std::size_t>(l)];
      for (std::size_t k = 0; k < lam.size(); ++k) lam[k] += gamma * b1 * (rl[k] - du[k]);
    }
  }
  for (int a = 0; a < S; ++a) {
    Image& lam = lambda2[static_cast<std::size_t>(a)];
    const Image& wa = w[static_cast<std::size_t>(a)];
    const Image& ga = g[static_cast<std::size_t>(a)];
    for (std::size_t k = 0; k < lam.size(); ++k) lam[k] += gamma * b2 * (wa[k] - ga[k]);
  }
  Image div = div_forward(g, S);
  for (std::size_t k = 0; k < lambda3.size(); ++k) lambda3[k] += gamma * b3 * (v[k] - div[k]);
  for (std::size_t k = 0; k < lambda4.size(); ++k)
    lambda4[k] += gamma * b4 * (f[k] - u[k] - v[k] - eps[k]);
  // lambda5 carries no gamma factor, exactly as printed
  const Image chi_eps = masked_eps();
  for (std::size_t k = 0; k < lambda5.size(); ++k) lambda5[k] += b5 * (e[k] - chi_eps[k]);
}

IterationMetrics SolverState::iterate() {
  const auto t0 = std::chrono::steady_clock::now();
  step_r();
  step_w();
  step_g();
  step_v();
  step_u();
  step_e();
  step_eps();
  step_multipliers();
  ++iteration_;

  IterationMetrics m;
  m.iteration = iteration_;
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double d = f[k] - u[k] - v[k] - eps[k];
    s += d * d;
  }
  m.unity_residual_l2 = std::sqrt(s);
  m.sup_coeff_e = sup_coeff(msdt_forward(e, msdt_plan()));
  m.nu = nu_used;
  m.mu1 = mu1;
  m.mu2 = mu2;
  m.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return m;
}

namespace {

Decomposition run_state(SolverState& st) {
  Decomposition d;
  const int T = st.params().iterations;
  d.trace.reserve(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    d.trace.push_back(st.iterate());
    if (!st.u.all_finite() || !st.v.all_finite() || !st.eps.all_finite())
      throw NumericError("non-finite values at iteration " + std::to_string(t + 1));
  }
  d.u = st.u;
  d.v = st.v;
  d.eps = st.eps;
  d.e = st.e;
  d.e1 = st.e1;
  d.g = st.g;
  d.g_directions = st.params().g_directions;
  return d;
}

}  // namespace

Decomposition run(const Image& f, const Mask& missing, const SolverParams& params) {
  SolverState st(f, &missing, params);
  return run_state(st);
}

Decomposition run_decompose(const Image& f, const SolverParams& params) {
  SolverState st(f, nullptr, params);
  return run_state(st);
}

double unity_residual_known(const Decomposition& d, const Image& f, const Mask& missing) {
  Mask region = missing.complement();
  Image resid = sub(sub(sub(f, d.u), d.v), d.eps);
  const double num = l2_norm_masked(resid, region);
  const double den = l2_norm_masked(f, region);
  if (den == 0.0) throw std::invalid_argument("unity_residual_known: zero reference norm");
  return num / den;
}

}  // namespace dg3pd
