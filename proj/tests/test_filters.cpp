#include "doctest.h"

#include <cmath>

#include "core/directional.hpp"
#include "core/filters.hpp"
#include "core/rng.hpp"
#include "test_helpers.hpp"

using namespace dg3pd;

TEST_CASE("u-problem unity identity at the decomposition parameters") {
  for (int L : {4, 8}) {
    FilterBank bank = build_u_filters(L, 0.04, 0.04, 32, 32);
    CHECK(unity_error_u(bank) <= 1e-12);
    CHECK(bank.phi[0] == doctest::Approx(1.0).epsilon(1e-14));  // DC
    for (const auto& psi : bank.psi) CHECK(std::abs(psi.at(0, 0)) == 0.0);
    for (const auto& dual : bank.psi_dual) CHECK(std::abs(dual.at(0, 0)) == 0.0);
  }
}

TEST_CASE("g-problem unity identity at the decomposition parameters") {
  for (int S : {4, 8}) {
    FilterBank bank = build_g_filters(S, 0.3, 0.3, 32, 32);
    CHECK(unity_error_g(bank) <= 1e-12);
    for (const auto& xi : bank.xi) CHECK(xi[0] == doctest::Approx(1.0).epsilon(1e-14));
    for (const auto& prime : bank.psi_prime) CHECK(std::abs(prime.at(0, 0)) == 0.0);
  }
}

TEST_CASE("beta1 = 0 gives the identity lowpass") {
  FilterBank bank = build_u_filters(4, 0.0, 0.04, 16, 16);
  for (double p : bank.phi) CHECK(p == 1.0);
  for (const auto& dual : bank.psi_dual)
    for (std::size_t k = 0; k < dual.size(); ++k) CHECK(std::abs(dual[k]) == 0.0);
}

TEST_CASE("beta3 = 0 gives identity Xi") {
  FilterBank bank = build_g_filters(4, 0.3, 0.0, 16, 16);
  for (const auto& xi : bank.xi)
    for (double v : xi) CHECK(v == 1.0);
}

TEST_CASE("more directions narrow the scaling function") {
  FilterBank l4 = build_u_filters(4, 0.04, 0.04, 64, 64);
  FilterBank l8 = build_u_filters(8, 0.04, 0.04, 64, 64);
  CHECK(half_power_area(l8.phi) < half_power_area(l4.phi));
}

TEST_CASE("Riesz lower bounds are attained exactly at DC") {
  auto s4 = dir_symbol_sq_sum(32, 32, 4);
  const double beta1 = 0.04, beta4 = 0.04;
  double min_x = 1e300;
  std::size_t argmin = 0;
  for (std::size_t k = 0; k < s4.size(); ++k) {
    const double x = beta4 + beta1 * s4[k];
    if (x < min_x) {
      min_x = x;
      argmin = k;
    }
  }
  CHECK(argmin == 0);
  CHECK(min_x == beta4);

  for (int a = 0; a < 4; ++a) {
    Spectrum p = dir_symbol(32, 32, a, 4);
    double min_a = 1e300;
    std::size_t arg_a = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double v = 0.3 + 0.3 * std::norm(p[k]);
      if (v < min_a) {
        min_a = v;
        arg_a = k;
      }
    }
    CHECK(arg_a == 0);
    CHECK(min_a == 0.3);
  }
}

TEST_CASE("analytic spectra are conjugate symmetric") {
  FilterBank bu = build_u_filters(4, 0.04, 0.04, 12, 10);
  FilterBank bg = build_g_filters(4, 0.3, 0.3, 12, 10);
  auto check_sym = [&](const Spectrum& s) {
    for (int i = 0; i < s.rows(); ++i)
      for (int j = 0; j < s.cols(); ++j) {
        const int mi = (s.rows() - i) % s.rows();
        const int mj = (s.cols() - j) % s.cols();
        CHECK(std::abs(s.at(i, j) - std::conj(s.at(mi, mj))) <= 1e-12);
      }
  };
  for (const auto& s : bu.psi) check_sym(s);
  for (const auto& s : bu.psi_dual) check_sym(s);
  for (const auto& s : bg.psi_prime) check_sym(s);
}

TEST_CASE("empirical filters: u = f gives LP == 1 and the rest zero") {
  Rng rng(211);
  Image f = testutil::random_image(16, 16, rng, 1.0, 255.0);
  std::vector<Image> parts{Image(16, 16), Image(16, 16)};
  EmpiricalFilters emp = empirical_filters(f, f, parts, Image(16, 16));
  for (std::size_t k = 0; k < emp.valid.size(); ++k) {
    if (!emp.valid[k]) continue;
    CHECK(std::abs(emp.lp[k] - cd(1.0, 0.0)) <= 1e-10);
    CHECK(std::abs(emp.hp[k]) <= 1e-10);
    for (const auto& bp : emp.bp) CHECK(std::abs(bp[k]) <= 1e-10);
  }
}

TEST_CASE("empirical filters: exact decomposition has vanishing unity MSE") {
  Rng rng(223);
  Image f = testutil::random_image(32, 32, rng, 0.0, 255.0);
  Image u = testutil::random_image(32, 32, rng, 0.0, 100.0);
  std::vector<Image> parts;
  parts.push_back(testutil::random_image(32, 32, rng, -20.0, 20.0));
  parts.push_back(testutil::random_image(32, 32, rng, -20.0, 20.0));
  Image eps = sub(sub(sub(f, u), parts[0]), parts[1]);
  EmpiricalFilters emp = empirical_filters(f, u, parts, eps);
  CHECK(emp.unity_mse <= 1e-20);
}

TEST_CASE("empirical filters: jointly scale invariant") {
  Rng rng(227);
  Image f = testutil::random_image(16, 16, rng, 1.0, 255.0);
  Image u = testutil::random_image(16, 16, rng, 0.0, 100.0);
  std::vector<Image> parts{testutil::random_image(16, 16, rng)};
  Image eps = testutil::random_image(16, 16, rng);
  EmpiricalFilters a = empirical_filters(f, u, parts, eps);
  const double c = -7.5;
  std::vector<Image> parts_s{scale(parts[0], c)};
  EmpiricalFilters b = empirical_filters(scale(f, c), scale(u, c), parts_s, scale(eps, c));
  for (std::size_t k = 0; k < a.valid.size(); ++k) {
    if (!a.valid[k] || !b.valid[k]) continue;
    CHECK(std::abs(a.lp[k] - b.lp[k]) <= 1e-12);
    CHECK(std::abs(a.hp[k] - b.hp[k]) <= 1e-12);
    CHECK(std::abs(a.bp[0][k] - b.bp[0][k]) <= 1e-12);
  }
}

TEST_CASE("empirical filters reject a zero image") {
  Image z(16, 16);
  CHECK_THROWS_AS(empirical_filters(z, z, {}, z), std::invalid_argument);
}

TEST_CASE("inverse normal cdf reference values") {
  CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963985).epsilon(1e-8));
  CHECK(inverse_normal_cdf(0.001) == doctest::Approx(-3.090232306).epsilon(1e-8));
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), std::invalid_argument);
}

TEST_CASE("qq machinery: standard normal samples correlate >= 0.99") {
  Rng rng(229);
  Image x(100, 100);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = rng.normal(0.0, 1.0);
  QqReport rep = qq_normal(x, nullptr);
  CHECK(rep.correlation >= 0.99);
}

TEST_CASE("density report: Laplace kurtosis near 3 at 1e4 samples") {
  Rng rng(233);
  Image x(100, 100);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double u = rng.uniform() - 0.5;
    x[k] = -std::copysign(1.0, u) * std::log(1.0 - 2.0 * std::abs(u));
  }
  DensityReport rep = density_report(x, nullptr);
  CHECK(rep.excess_kurtosis == doctest::Approx(3.0).epsilon(0.5 / 3.0));
  std::size_t total = 0;
  for (auto c : rep.counts) total += c;
  CHECK(total == rep.samples);
  CHECK(rep.counts.size() == 64);
}

TEST_CASE("density report rejects tiny regions") {
  Image x(5, 5);
  CHECK_THROWS_AS(density_report(x, nullptr), std::invalid_argument);
  Mask tiny(64, 64);
  tiny.set(0, 0, true);
  CHECK_THROWS_AS(qq_normal(Image(64, 64), &tiny), std::invalid_argument);
}
