#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dg3pd {

// Real-valued m x n raster stored row-major. Values are nominally [0,255]
// for inputs and unbounded for solver intermediates.
class Image {
 public:
  Image() = default;
  Image(int rows, int cols, double fill = 0.0);
  static Image from_data(int rows, int cols, std::vector<double> samples);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return samples_.size(); }

  double& operator[](std::size_t k) { return samples_[k]; }
  double operator[](std::size_t k) const { return samples_[k]; }
  double& at(int i, int j) { return samples_[idx(i, j)]; }
  double at(int i, int j) const { return samples_[idx(i, j)]; }

  double* data() { return samples_.data(); }
  const double* data() const { return samples_.data(); }

  bool empty() const { return samples_.empty(); }
  bool all_finite() const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> samples_;
};

// Binary grid. The meaning of a set bit depends on context: for the missing
// region D a set pixel is missing, for an ROI a set pixel belongs to the
// region. Helpers that care about the distinction say so in their name.
class Mask {
 public:
  Mask() = default;
  Mask(int rows, int cols, bool fill = false);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return bits_.size(); }

  bool at(int i, int j) const { return bits_[idx(i, j)] != 0; }
  void set(int i, int j, bool v) { bits_[idx(i, j)] = v ? 1 : 0; }
  std::uint8_t operator[](std::size_t k) const { return bits_[k]; }
  std::uint8_t& operator[](std::size_t k) { return bits_[k]; }

  Mask complement() const;
  std::size_t count() const;
  double fraction() const;
  bool empty_set() const { return count() == 0; }
  Image to_image() const;  // 0.0 / 1.0 samples

  bool operator==(const Mask& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && bits_ == o.bits_;
  }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

bool same_shape(const Image& a, const Image& b);
bool same_shape(const Image& a, const Mask& b);
bool same_shape(const Mask& a, const Mask& b);
void require_same_shape(const Image& a, const Image& b, const char* what);
void require_same_shape(const Image& a, const Mask& b, const char* what);
void require_same_shape(const Mask& a, const Mask& b, const char* what);

Image pointwise_mul(const Image& a, const Image& b);
Image pointwise_mul(const Image& a, const Mask& b);

// round(clamp(x, 0, 255)), round half away from zero; output integral in [0,255].
Image quantize_preview(const Image& a);

Image add(const Image& a, const Image& b);
Image sub(const Image& a, const Image& b);
Image scale(const Image& a, double c);
void add_in_place(Image& a, const Image& b);
void sub_in_place(Image& a, const Image& b);
void add_scaled_in_place(Image& a, const Image& b, double c);  // a += c*b

double dot(const Image& a, const Image& b);
double l2_norm(const Image& a);
double linf_norm(const Image& a);
double l2_norm_masked(const Image& a, const Mask& region);  // over set pixels

}  // namespace dg3pd
