#pragma once

#include <vector>

#include "core/fft.hpp"
#include "core/grid.hpp"

namespace dg3pd {

// Discrete directional derivatives over L half-circle directions,
// theta_l = pi*l/L, with periodic boundaries. The forward operator is
//   cos(theta_l) * (x[i, j+1] - x[i, j]) + sin(theta_l) * (x[i+1, j] - x[i, j])
// and the backward operator is the matching backward difference, i.e. the
// spatial realization of -conj(P_l) on the frequency grid.

Image dir_forward(const Image& x, int l, int L);
Image dir_backward(const Image& x, int l, int L);

// acc += c * adjoint(dir_forward_l)(y); the adjoint equals -dir_backward_l.
void add_dir_transpose_scaled(Image& acc, const Image& y, int l, int L, double c);

// sum_s dir_forward(g_s, s, S) -- div^+_S of the field g
Image div_forward(const std::vector<Image>& g, int S);

// Forward symbol P_l(z) = cos(pi l/L)(z2 - 1) + sin(pi l/L)(z1 - 1) with
// z1 = exp(i 2 pi k1 / m) on rows, z2 = exp(i 2 pi k2 / n) on cols.
Spectrum dir_symbol(int rows, int cols, int l, int L);

// sum_l |P_l(z)|^2, real and nonnegative, zero at DC
std::vector<double> dir_symbol_sq_sum(int rows, int cols, int L);

}  // namespace dg3pd
