#pragma once

#include <complex>
#include <vector>

#include "core/grid.hpp"

namespace dg3pd {

using cd = std::complex<double>;

// Complex grid over the DFT frequency grid omega = (2*pi*k1/m, 2*pi*k2/n),
// row-major like Image. Convention: forward transform unnormalized, inverse
// scaled by 1/(m*n).
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(int rows, int cols, cd fill = {});
  static Spectrum from_image(const Image& x);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return v_.size(); }
  cd& operator[](std::size_t k) { return v_[k]; }
  cd operator[](std::size_t k) const { return v_[k]; }
  cd& at(int i, int j) { return v_[static_cast<std::size_t>(i) * cols_ + j]; }
  cd at(int i, int j) const { return v_[static_cast<std::size_t>(i) * cols_ + j]; }
  cd* data() { return v_.data(); }
  const cd* data() const { return v_.data(); }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cd> v_;
};

// c2c transforms; plans are cached per size and shared across threads.
Spectrum fft_forward(const Spectrum& in);   // unnormalized
Spectrum fft_inverse(const Spectrum& in);   // scaled by 1/(m*n)

Spectrum dft2(const Image& x);
// Inverse transform of a (nominally conjugate-symmetric) spectrum; returns
// the real part. Debug builds check that the imaginary residue is small.
Image idft2_real(const Spectrum& X);

}  // namespace dg3pd
