#include "core/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dg3pd {

namespace {

void require_positive_dims(int rows, int cols) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("grid dimensions must be positive, got " + std::to_string(rows) +
                                "x" + std::to_string(cols));
}

}  // namespace

Image::Image(int rows, int cols, double fill) : rows_(rows), cols_(cols) {
  require_positive_dims(rows, cols);
  samples_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
}

Image Image::from_data(int rows, int cols, std::vector<double> samples) {
  require_positive_dims(rows, cols);
  if (samples.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw std::invalid_argument("sample count does not match grid dimensions");
  Image out;
  out.rows_ = rows;
  out.cols_ = cols;
  out.samples_ = std::move(samples);
  return out;
}

bool Image::all_finite() const {
  for (double v : samples_)
    if (!std::isfinite(v)) return false;
  return true;
}

Mask::Mask(int rows, int cols, bool fill) : rows_(rows), cols_(cols) {
  require_positive_dims(rows, cols);
  bits_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill ? 1 : 0);
}

Mask Mask::complement() const {
  Mask out = *this;
  for (auto& b : out.bits_) b = static_cast<std::uint8_t>(1 - b);
  return out;
}

std::size_t Mask::count() const {
  std::size_t n = 0;
  for (auto b : bits_) n += b;
  return n;
}

double Mask::fraction() const {
  return bits_.empty() ? 0.0 : static_cast<double>(count()) / static_cast<double>(bits_.size());
}

Image Mask::to_image() const {
  Image out(rows_, cols_);
  for (std::size_t k = 0; k < bits_.size(); ++k) out[k] = bits_[k] ? 1.0 : 0.0;
  return out;
}

bool same_shape(const Image& a, const Image& b) { return a.rows() == b.rows() && a.cols() == b.cols(); }
bool same_shape(const Image& a, const Mask& b) { return a.rows() == b.rows() && a.cols() == b.cols(); }
bool same_shape(const Mask& a, const Mask& b) { return a.rows() == b.rows() && a.cols() == b.cols(); }

namespace {
[[noreturn]] void throw_mismatch(const char* what) {
  throw std::invalid_argument(std::string("dimension mismatch in ") + what);
}
}  // namespace

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!same_shape(a, b)) throw_mismatch(what);
}
void require_same_shape(const Image& a, const Mask& b, const char* what) {
  if (!same_shape(a, b)) throw_mismatch(what);
}
void require_same_shape(const Mask& a, const Mask& b, const char* what) {
  if (!same_shape(a, b)) throw_mismatch(what);
}

Image pointwise_mul(const Image& a, const Image& b) {
  require_same_shape(a, b, "pointwise_mul");
  Image out(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
  return out;
}

Image pointwise_mul(const Image& a, const Mask& b) {
  require_same_shape(a, b, "pointwise_mul");
  Image out(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * (b[k] ? 1.0 : 0.0);
  return out;
}

Image quantize_preview(const Image& a) {
  Image out(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = std::round(std::clamp(a[k], 0.0, 255.0));
  return out;
}

Image add(const Image& a, const Image& b) {
  require_same_shape(a, b, "add");
  Image out(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
  return out;
}

Image sub(const Image& a, const Image& b) {
  require_same_shape(a, b, "sub");
  Image out(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

Image scale(const Image& a, double c) {
  Image out(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = c * a[k];
  return out;
}

void add_in_place(Image& a, const Image& b) {
  require_same_shape(a, b, "add_in_place");
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
}

void sub_in_place(Image& a, const Image& b) {
  require_same_shape(a, b, "sub_in_place");
  for (std::size_t k = 0; k < a.size(); ++k) a[k] -= b[k];
}

void add_scaled_in_place(Image& a, const Image& b, double c) {
  require_same_shape(a, b, "add_scaled_in_place");
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += c * b[k];
}

double dot(const Image& a, const Image& b) {
  require_same_shape(a, b, "dot");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double l2_norm(const Image& a) { return std::sqrt(dot(a, a)); }

double linf_norm(const Image& a) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k]));
  return m;
}

double l2_norm_masked(const Image& a, const Mask& region) {
  require_same_shape(a, region, "l2_norm_masked");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (region[k]) s += a[k] * a[k];
  return std::sqrt(s);
}

}  // namespace dg3pd
