#include "patchlab/image.hpp"

#include <numeric>

namespace patchlab {

namespace {

template <typename Op>
GrayImage zip(const GrayImage& a, const GrayImage& b, Op op) {
  require(a.same_shape(b), "image arithmetic: dimension mismatch");
  GrayImage out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
  return out;
}

}  // namespace

GrayImage operator+(const GrayImage& a, const GrayImage& b) {
  return zip(a, b, [](double x, double y) { return x + y; });
}

GrayImage operator-(const GrayImage& a, const GrayImage& b) {
  return zip(a, b, [](double x, double y) { return x - y; });
}

GrayImage operator*(double s, const GrayImage& a) {
  GrayImage out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

GrayImage crop(const GrayImage& image, int row, int col, int height, int width) {
  require(row >= 0 && col >= 0 && height >= 1 && width >= 1 &&
              row + height <= image.height() && col + width <= image.width(),
          "crop: window outside image");
  GrayImage out(width, height);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) out.at(r, c) = image.at(row + r, col + c);
  return out;
}

double mean_value(const GrayImage& image) {
  const auto s = image.samples();
  return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

GrayImage luminance(const RgbImage& rgb) {
  require(rgb.red.same_shape(rgb.green) && rgb.blue.same_shape(rgb.green),
          "luminance: channel shape mismatch");
  GrayImage out(rgb.width(), rgb.height());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = 0.299 * rgb.red[i] + 0.587 * rgb.green[i] + 0.114 * rgb.blue[i];
  return out;
}

}  // namespace patchlab
