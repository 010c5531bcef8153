#include "core/fft.hpp"

#include <fftw3.h>

#include <cassert>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace dg3pd {

Spectrum::Spectrum(int rows, int cols, cd fill) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("spectrum dimensions must be positive");
  v_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
}

Spectrum Spectrum::from_image(const Image& x) {
  Spectrum s(x.rows(), x.cols());
  for (std::size_t k = 0; k < x.size(); ++k) s[k] = cd(x[k], 0.0);
  return s;
}

namespace {

// fftw_execute_dft is thread-safe; plan creation is not and is mutex-guarded.
// Plans are created with FFTW_UNALIGNED so they run on ordinary vectors.
class PlanCache {
 public:
  static fftw_plan get(int rows, int cols, int sign) {
    static PlanCache cache;
    std::lock_guard<std::mutex> lock(cache.mu_);
    auto key = std::tuple<int, int, int>(rows, cols, sign);
    auto it = cache.plans_.find(key);
    if (it != cache.plans_.end()) return it->second;
    std::vector<cd> in(static_cast<std::size_t>(rows) * cols), out(in.size());
    fftw_plan p = fftw_plan_dft_2d(rows, cols, reinterpret_cast<fftw_complex*>(in.data()),
                                   reinterpret_cast<fftw_complex*>(out.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fftw plan creation failed");
    cache.plans_.emplace(key, p);
    return p;
  }

 private:
  PlanCache() = default;
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

Spectrum execute(const Spectrum& in, int sign) {
  Spectrum out(in.rows(), in.cols());
  fftw_plan p = PlanCache::get(in.rows(), in.cols(), sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cd*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

Spectrum fft_forward(const Spectrum& in) { return execute(in, FFTW_FORWARD); }

Spectrum fft_inverse(const Spectrum& in) {
  Spectrum out = execute(in, FFTW_BACKWARD);
  const double s = 1.0 / (static_cast<double>(in.rows()) * static_cast<double>(in.cols()));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= s;
  return out;
}

Spectrum dft2(const Image& x) { return fft_forward(Spectrum::from_image(x)); }

Image idft2_real(const Spectrum& X) {
  Spectrum full = fft_inverse(X);
  Image out(X.rows(), X.cols());
  for (std::size_t k = 0; k < full.size(); ++k) out[k] = full[k].real();
#ifndef NDEBUG
  double max_imag = 0.0, max_real = 0.0;
  for (std::size_t k = 0; k < full.size(); ++k) {
    max_imag = std::max(max_imag, std::abs(full[k].imag()));
    max_real = std::max(max_real, std::abs(full[k].real()));
  }
  assert(max_imag <= 1e-9 * std::max(1.0, max_real) && "idft2_real on non-symmetric spectrum");
#endif
  return out;
}

}  // namespace dg3pd
