#pragma once

#include <filesystem>
#include <string>

#include "patchlab/image.hpp"

namespace patchlab {

/// Reads a P2 or P5 graymap. Samples are scaled so maxval maps to 255.0;
/// 16-bit payloads keep full precision after scaling.
GrayImage load_pgm(const std::filesystem::path& path);

/// Raw graymap as stored on disk, before scaling.
struct RawGraymap {
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::vector<double> samples;
};
RawGraymap read_graymap(const std::filesystem::path& path);

/// Writes P5, maxval 255. Samples are clamped to [0,255] and rounded half-up.
void save_pgm(const GrayImage& image, const std::filesystem::path& path);

/// Writes P6, maxval 255, same clamp/round rule per channel.
void save_ppm(const RgbImage& image, const std::filesystem::path& path);

/// In-memory P5 / P6 files, as written by save_pgm / save_ppm.
std::string encode_pgm(const GrayImage& image);
std::string encode_ppm(const RgbImage& image);

/// Clamp to [0,255] and round half-up.
unsigned char to_byte(double sample);

}  // namespace patchlab
