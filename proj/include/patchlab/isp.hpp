#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patchlab/benchmark.hpp"
#include "patchlab/image.hpp"

namespace patchlab {

enum class BayerChannel { red, green, blue };

/// GRGB mosaic: row 0 = G R G R ..., row 1 = G B G B ...
/// Samples use the same 0..255 scale as GrayImage.
class BayerImage {
 public:
  BayerImage(int width, int height, std::vector<double> mosaic);

  int width() const { return width_; }
  int height() const { return height_; }
  double at(int row, int col) const { return mosaic_[index(row, col)]; }
  double& at(int row, int col) { return mosaic_[index(row, col)]; }
  std::span<const double> samples() const { return mosaic_; }

  static BayerChannel channel_at(int row, int col) {
    if (col % 2 == 0) return BayerChannel::green;
    return row % 2 == 0 ? BayerChannel::red : BayerChannel::blue;
  }

  /// The four same-colour sub-lattices, each (width/2) x (height/2), in the
  /// order (even row, even col), (even, odd), (odd, even), (odd, odd):
  /// G, R, G, B.
  std::array<GrayImage, 4> planes() const;
  static BayerImage from_planes(const std::array<GrayImage, 4>& planes);

  /// Mosaic sampled from a full-colour scene.
  static BayerImage mosaic_of(const RgbImage& scene);

  friend bool operator==(const BayerImage&, const BayerImage&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }
  int width_;
  int height_;
  std::vector<double> mosaic_;
};

/// Reads a 8/16-bit PGM mosaic plus the sidecar "<file>.bayer" holding
/// "pattern=grgb". `pattern`, when given, must agree with the sidecar.
BayerImage load_bayer(const std::filesystem::path& path,
                      const std::optional<std::string>& pattern = std::nullopt);

/// Bicubic demosaic: every channel is interpolated separably
/// with Catmull-Rom taps on its own lattice, mirrored at the borders. Native
/// samples pass through.
RgbImage demosaic_bicubic_grgb(const BayerImage& raw);

struct WhiteBalance {
  RgbImage image;
  std::array<double, 3> gains{1.0, 1.0, 1.0};  // r, g, b
};

/// Gray world anchored on green: gain_c = mean(G) / mean(c).
WhiteBalance gray_world_white_balance(const RgbImage& rgb);

struct NrMetricPlugin {
  std::string name;
  std::function<double(const GrayImage&)> evaluate;
};

/// Variance of the 4-neighbour Laplacian over the interior.
double builtin_sharpness_proxy(const GrayImage& image);

class NrMetricRegistry {
 public:
  /// Contains "sharpness_proxy".
  static NrMetricRegistry builtin();
  void add(NrMetricPlugin plugin);
  const NrMetricPlugin* find(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::vector<NrMetricPlugin> plugins_;
};

struct LabeledBayer {
  std::string label;
  BayerImage raw;
};

/// Denoise each of the four colour planes as a grayscale image.
BayerImage denoise_bayer(const BayerImage& raw, const DenoiseConfig& config);

/// denoise_bayer, demosaic, white balance.
RgbImage process_raw(const BayerImage& raw, const DenoiseConfig& config);

struct NrTable {
  std::vector<std::string> images;
  std::vector<std::string> methods;
  std::string metric;
  std::vector<std::vector<std::optional<double>>> cells;  // [image][method]
};

/// Raw noise is unknown, so every method runs with an estimated sigma. A
/// plug-in failure leaves the cell empty.
NrTable run_nr_evaluation(const std::vector<LabeledBayer>& raws,
                          const std::vector<MethodSpec>& methods, const NrMetricPlugin& metric);

/// Image rows, method columns, "-" for empty cells.
void write_table5_csv(std::ostream& out, const NrTable& table);

}  // namespace patchlab
