#include "core/directional.hpp"

#include <cmath>
#include <stdexcept>

namespace dg3pd {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_direction(int l, int L) {
  if (L < 1) throw std::invalid_argument("direction count must be >= 1");
  if (l < 0 || l >= L) throw std::invalid_argument("direction index out of range");
}

}  // namespace

Image dir_forward(const Image& x, int l, int L) {
  check_direction(l, L);
  const double c = std::cos(kPi * l / L), s = std::sin(kPi * l / L);
  const int m = x.rows(), n = x.cols();
  Image out(m, n);
  for (int i = 0; i < m; ++i) {
    const int ip = (i + 1 == m) ? 0 : i + 1;
    for (int j = 0; j < n; ++j) {
      const int jp = (j + 1 == n) ? 0 : j + 1;
      out.at(i, j) = c * (x.at(i, jp) - x.at(i, j)) + s * (x.at(ip, j) - x.at(i, j));
    }
  }
  return out;
}

Image dir_backward(const Image& x, int l, int L) {
  check_direction(l, L);
  const double c = std::cos(kPi * l / L), s = std::sin(kPi * l / L);
  const int m = x.rows(), n = x.cols();
  Image out(m, n);
  for (int i = 0; i < m; ++i) {
    const int im = (i == 0) ? m - 1 : i - 1;
    for (int j = 0; j < n; ++j) {
      const int jm = (j == 0) ? n - 1 : j - 1;
      out.at(i, j) = c * (x.at(i, j) - x.at(i, jm)) + s * (x.at(i, j) - x.at(im, j));
    }
  }
  return out;
}

void add_dir_transpose_scaled(Image& acc, const Image& y, int l, int L, double c_scale) {
  check_direction(l, L);
  require_same_shape(acc, y, "add_dir_transpose_scaled");
  const double c = std::cos(kPi * l / L), s = std::sin(kPi * l / L);
  const int m = y.rows(), n = y.cols();
  for (int i = 0; i < m; ++i) {
    const int im = (i == 0) ? m - 1 : i - 1;
    for (int j = 0; j < n; ++j) {
      const int jm = (j == 0) ? n - 1 : j - 1;
      const double back = c * (y.at(i, j) - y.at(i, jm)) + s * (y.at(i, j) - y.at(im, j));
      acc.at(i, j) -= c_scale * back;
    }
  }
}

Image div_forward(const std::vector<Image>& g, int S) {
  if (S < 1 || g.size() != static_cast<std::size_t>(S))
    throw std::invalid_argument("div_forward: field size does not match S");
  Image out(g[0].rows(), g[0].cols());
  for (int s = 0; s < S; ++s) add_in_place(out, dir_forward(g[static_cast<std::size_t>(s)], s, S));
  return out;
}

Spectrum dir_symbol(int rows, int cols, int l, int L) {
  check_direction(l, L);
  const double c = std::cos(kPi * l / L), s = std::sin(kPi * l / L);
  Spectrum out(rows, cols);
  for (int k1 = 0; k1 < rows; ++k1) {
    const double w1 = 2.0 * kPi * k1 / rows;
    const cd z1m1 = std::polar(1.0, w1) - cd(1.0, 0.0);
    for (int k2 = 0; k2 < cols; ++k2) {
      const double w2 = 2.0 * kPi * k2 / cols;
      const cd z2m1 = std::polar(1.0, w2) - cd(1.0, 0.0);
      out.at(k1, k2) = c * z2m1 + s * z1m1;
    }
  }
  return out;
}

std::vector<double> dir_symbol_sq_sum(int rows, int cols, int L) {
  if (L < 1) throw std::invalid_argument("direction count must be >= 1");
  std::vector<double> acc(static_cast<std::size_t>(rows) * cols, 0.0);
  for (int l = 0; l < L; ++l) {
    Spectrum p = dir_symbol(rows, cols, l, L);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += std::norm(p[k]);
  }
  return acc;
}

}  // namespace dg3pd
