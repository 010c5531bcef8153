#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "core/grid.hpp"
#include "core/msdt.hpp"

namespace dg3pd {

// Residual sup-norm bound: either an absolute nu or the adaptive form
// nu = c_nu * ||C{chi * eps - lambda5/beta5}||_inf recomputed per iteration.
// The adaptive default c_nu = 0.5 is an artifact choice.
struct NuPolicy {
  enum class Kind { Fixed, Adaptive };
  Kind kind = Kind::Adaptive;
  double value = 0.5;

  static NuPolicy fixed(double nu) { return {Kind::Fixed, nu}; }
  static NuPolicy adaptive(double c_nu) { return {Kind::Adaptive, c_nu}; }
};

// All scalars of the model. The betas are derived from (beta4, theta, c1,
// c2, c3) so the coupling beta3 = theta/(1-theta)*beta4 holds by
// construction. Defaults mirror the decomposition parameter set
// L = S = 4, beta1 = beta4 = 0.04, beta2 = beta3 = 0.3.
struct SolverParams {
  int tv_directions = 4;  // L
  int g_directions = 4;   // S
  double beta4 = 0.04;
  double theta = 0.3 / 0.34;
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;  // beta5 = c3*beta4; value is an artifact default
  double c_mu1 = 0.03;
  double c_mu2 = 0.03;
  double gamma = 1.0;
  NuPolicy nu;
  int iterations = 200;
  MsdtConfig msdt;

  double beta1() const { return c1 * beta4; }
  double beta3() const { return theta / (1.0 - theta) * beta4; }
  double beta2() const { return c2 * beta3(); }
  double beta5() const { return c3 * beta4; }

  void validate() const;
};

struct IterationMetrics {
  int iteration = 0;
  double unity_residual_l2 = 0.0;  // ||f - u - v - eps||_2 over the full grid
  double sup_coeff_e = 0.0;        // sup |C{e}|
  double nu = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double time_ms = 0.0;
};

struct Decomposition {
  Image u, v, eps;
  Image e;   // residual restricted to the known domain (after subtraction)
  Image e1;  // pre-subtraction term chi * eps - lambda5/beta5
  std::vector<Image> g;
  int g_directions = 0;
  std::vector<IterationMetrics> trace;

  // s-th directional texture part v_s = dir_forward(g_s, s, S)
  Image texture_direction(int s) const;
};

// Mutable ADMM state; one run owns it exclusively. The seven subproblem
// steps and the multiplier update are exposed individually so tests can
// compose an iteration by hand and compare with iterate().
class SolverState {
 public:
  // missing == nullptr selects the dedicated no-mask path (plain DG3PD
  // decomposition); an all-known mask runs the masked path and produces
  // bit-identical results.
  SolverState(const Image& f, const Mask* missing, const SolverParams& params);

  void step_r();
  void step_w();
  void step_g();
  void step_v();
  void step_u();
  void step_e();
  void step_eps();
  void step_multipliers();
  IterationMetrics iterate();

  const SolverParams& params() const { return params_; }
  bool has_mask() const { return has_mask_; }
  int iteration() const { return iteration_; }
  const std::vector<double>& x_symbol() const { return x_sym_; }
  const std::vector<double>& a_symbol(int a) const { return a_sym_[static_cast<std::size_t>(a)]; }
  // built on first use; only the e-subproblem needs the transform
  std::shared_ptr<const MsdtPlan> msdt_plan() const;

  Image f;
  Image known;  // chi_D^c as 0/1 doubles; empty on the no-mask path
  Image u, v, eps, e, e1;
  std::vector<Image> r, w, g;
  std::vector<Image> lambda1, lambda2;
  Image lambda3, lambda4, lambda5;
  double mu1 = 0.0, mu2 = 0.0, nu_used = 0.0;

 private:
  Image masked_eps() const;  // chi * eps (or eps on the no-mask path)

  SolverParams params_;
  bool has_mask_ = false;
  int iteration_ = 0;
  std::vector<double> x_sym_;
  std::vector<std::vector<double>> a_sym_;
  mutable std::shared_ptr<const MsdtPlan> plan_;
};

Decomposition run(const Image& f, const Mask& missing, const SolverParams& params);

// Dedicated no-mask path: the plain DG3PD decomposition of f.
Decomposition run_decompose(const Image& f, const SolverParams& params);

// sign(x) * max(|x| - tau, 0), elementwise
Image shrink(const Image& x, double tau);
double shrink_scalar(double x, double tau);

// relative unity residual ||f-u-v-eps|| / ||f|| over the known region
double unity_residual_known(const Decomposition& d, const Image& f, const Mask& missing);

}  // namespace dg3pd
