#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "patchlab/errors.hpp"

namespace patchlab {

/// Pixel coordinates, row first.
struct Coord {
  int row = 0;
  int col = 0;

  friend bool operator==(const Coord&, const Coord&) = default;
  friend auto operator<=>(const Coord&, const Coord&) = default;
};

/// Single-channel image of real luminance samples in row-major order.
/// Nominal range is [0,255] but samples are never clamped in memory.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, double fill = 0.0)
      : width_(width), height_(height) {
    require(width >= 1 && height >= 1, "GrayImage: dimensions must be >= 1");
    samples_.assign(static_cast<std::size_t>(width) * height, fill);
  }
  GrayImage(int width, int height, std::vector<double> samples)
      : width_(width), height_(height), samples_(std::move(samples)) {
    require(width >= 1 && height >= 1, "GrayImage: dimensions must be >= 1");
    require(samples_.size() == static_cast<std::size_t>(width) * height,
            "GrayImage: sample count does not match width*height");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  double& at(int row, int col) { return samples_[index(row, col)]; }
  double at(int row, int col) const { return samples_[index(row, col)]; }
  double& operator[](std::size_t i) { return samples_[i]; }
  double operator[](std::size_t i) const { return samples_[i]; }

  std::span<double> samples() { return samples_; }
  std::span<const double> samples() const { return samples_; }
  std::span<const double> row(int r) const {
    return std::span<const double>(samples_).subspan(index(r, 0), width_);
  }

  bool contains(Coord c) const {
    return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
  }
  bool same_shape(const GrayImage& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> samples_;
};

/// Three planes of equal shape: red, green, blue.
struct RgbImage {
  GrayImage red;
  GrayImage green;
  GrayImage blue;

  int width() const { return green.width(); }
  int height() const { return green.height(); }
  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// Whole-sample symmetric reflection of an index into [0, n): -1 -> 1, n -> n-2.
inline int mirror_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

// Elementwise helpers used by boosting and residual computations.
GrayImage operator+(const GrayImage& a, const GrayImage& b);
GrayImage operator-(const GrayImage& a, const GrayImage& b);
GrayImage operator*(double s, const GrayImage& a);
GrayImage crop(const GrayImage& image, int row, int col, int height, int width);
double mean_value(const GrayImage& image);
/// Luma with Rec. 601 weights.
GrayImage luminance(const RgbImage& rgb);

}  // namespace patchlab
