#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "patchlab/image.hpp"
#include "patchlab/labstats.hpp"
#include "patchlab/pgm.hpp"
#include "patchlab/random.hpp"

namespace testsupport {

namespace fs = std::filesystem;

inline fs::path data_dir() { return fs::path(PATCHLAB_DATA_DIR); }

inline std::vector<fs::path> standard_paths() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(data_dir() / "standard"))
    if (e.path().extension() == ".pgm") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<patchlab::LabeledImage> standard_set() {
  std::vector<patchlab::LabeledImage> out;
  for (const auto& p : standard_paths()) out.push_back({p.stem().string(), patchlab::load_pgm(p)});
  return out;
}

/// Centre crop of a standard image.
inline patchlab::GrayImage natural_crop(std::size_t index, int size) {
  const auto img = patchlab::load_pgm(standard_paths().at(index));
  return patchlab::crop(img, (img.height() - size) / 2, (img.width() - size) / 2, size, size);
}

inline std::vector<patchlab::LabeledImage> cropped_set(int size, std::size_t count = 10) {
  std::vector<patchlab::LabeledImage> out;
  const auto paths = standard_paths();
  for (std::size_t i = 0; i < std::min(count, paths.size()); ++i)
    out.push_back({paths[i].stem().string(), natural_crop(i, size)});
  return out;
}

inline patchlab::GrayImage random_image(int w, int h, std::uint64_t seed, double lo = 0.0,
                                        double hi = 255.0) {
  patchlab::Rng rng(seed);
  patchlab::GrayImage out(w, h);
  for (auto& v : out.samples()) v = lo + (hi - lo) * rng.uniform01();
  return out;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = fs::temp_directory_path() /
            ("patchlab_test_" + std::to_string(stamp) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

}  // namespace testsupport
