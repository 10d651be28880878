#include "patchlab/pgm.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

namespace patchlab {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L) fail(std::string("value too large for ") + what, start);
      ++pos_;
    }
    if (pos_ == start) fail(std::string("expected ") + what, start);
    return value;
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw ParseError("PGM parse error at byte offset " + std::to_string(at) + ": " + msg);
  }

  void advance(std::size_t n) { pos_ += n; }

 private:
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 0;
};

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

RawGraymap read_graymap(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  HeaderReader reader(bytes);
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    reader.fail("magic number is not P2 or P5", 0);
  const bool binary = bytes[1] == '5';
  reader.advance(2);

  RawGraymap raw;
  const std::size_t width_at = reader.offset();
  raw.width = static_cast<int>(reader.read_uint("width"));
  raw.height = static_cast<int>(reader.read_uint("height"));
  if (raw.width < 1 || raw.height < 1) reader.fail("zero image dimension", width_at);
  const std::size_t maxval_at = reader.offset();
  raw.maxval = static_cast<int>(reader.read_uint("maxval"));
  if (raw.maxval < 1 || raw.maxval > 65535) reader.fail("maxval outside 1..65535", maxval_at);

  const std::size_t count = static_cast<std::size_t>(raw.width) * raw.height;
  raw.samples.resize(count);
  if (binary) {
    if (reader.offset() >= bytes.size() || !std::isspace(bytes[reader.offset()]))
      reader.fail("expected single whitespace before payload", reader.offset());
    reader.advance(1);
    const std::size_t bps = raw.maxval > 255 ? 2 : 1;
    const std::size_t available = bytes.size() - reader.offset();
    if (available < count * bps)
      throw IoError("PGM size mismatch: expected " + std::to_string(count * bps) +
                    " payload bytes, found " + std::to_string(available));
    const unsigned char* p = bytes.data() + reader.offset();
    for (std::size_t i = 0; i < count; ++i)
      raw.samples[i] = bps == 2 ? static_cast<double>((p[2 * i] << 8) | p[2 * i + 1])
                                : static_cast<double>(p[i]);
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      reader.skip_space_and_comments();
      if (reader.offset() >= bytes.size())
        throw IoError("PGM size mismatch: expected " + std::to_string(count) +
                      " samples, found " + std::to_string(i));
      const std::size_t at = reader.offset();
      const long v = reader.read_uint("sample");
      if (v > raw.maxval) reader.fail("sample exceeds maxval", at);
      raw.samples[i] = static_cast<double>(v);
    }
    reader.skip_space_and_comments();
    if (reader.offset() != bytes.size())
      throw IoError("PGM size mismatch: trailing data after " + std::to_string(count) +
                    " samples");
  }
  return raw;
}

GrayImage load_pgm(const std::filesystem::path& path) {
  RawGraymap raw = read_graymap(path);
  if (raw.maxval != 255) {
    const double scale = 255.0 / raw.maxval;
    for (double& s : raw.samples) s *= scale;
  }
  return GrayImage(raw.width, raw.height, std::move(raw.samples));
}

unsigned char to_byte(double sample) {
  if (!(sample > 0.0)) return 0;
  if (sample >= 255.0) return 255;
  return static_cast<unsigned char>(std::floor(sample + 0.5));
}

std::string encode_pgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.width()) + " " +
                    std::to_string(image.height()) + "\n255\n";
  out.reserve(out.size() + image.size());
  for (std::size_t i = 0; i < image.size(); ++i) out.push_back(static_cast<char>(to_byte(image[i])));
  return out;
}

std::string encode_ppm(const RgbImage& image) {
  require(image.red.same_shape(image.green) && image.blue.same_shape(image.green),
          "encode_ppm: channel shape mismatch");
  std::string out = "P6\n" + std::to_string(image.width()) + " " +
                    std::to_string(image.height()) + "\n255\n";
  out.reserve(out.size() + 3 * image.green.size());
  for (std::size_t i = 0; i < image.green.size(); ++i) {
    out.push_back(static_cast<char>(to_byte(image.red[i])));
    out.push_back(static_cast<char>(to_byte(image.green[i])));
    out.push_back(static_cast<char>(to_byte(image.blue[i])));
  }
  return out;
}

void save_pgm(const GrayImage& image, const std::filesystem::path& path) {
  write_bytes(path, encode_pgm(image));
}

void save_ppm(const RgbImage& image, const std::filesystem::path& path) {
  write_bytes(path, encode_ppm(image));
}

}  // namespace patchlab
