#include "patchlab/isp.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <ostream>

#include "patchlab/labstats.hpp"
#include "patchlab/noise.hpp"
#include "patchlab/pgm.hpp"

namespace patchlab {

BayerImage::BayerImage(int width, int height, std::vector<double> mosaic)
    : width_(width), height_(height), mosaic_(std::move(mosaic)) {
  require(width >= 2 && height >= 2, "Bayer mosaic must be at least 2x2");
  require(width % 2 == 0 && height % 2 == 0, "Bayer mosaic dimensions must be even");
  require(mosaic_.size() == static_cast<std::size_t>(width) * height,
          "Bayer mosaic sample count does not match width*height");
}

std::array<GrayImage, 4> BayerImage::planes() const {
  const int w = width_ / 2, h = height_ / 2;
  std::array<GrayImage, 4> out{GrayImage(w, h), GrayImage(w, h), GrayImage(w, h), GrayImage(w, h)};
  for (int r = 0; r < height_; ++r)
    for (int c = 0; c < width_; ++c) out[2 * (r % 2) + c % 2].at(r / 2, c / 2) = at(r, c);
  return out;
}

BayerImage BayerImage::from_planes(const std::array<GrayImage, 4>& planes) {
  for (const auto& p : planes)
    require(p.same_shape(planes[0]), "from_planes: plane shapes differ");
  const int w = 2 * planes[0].width(), h = 2 * planes[0].height();
  BayerImage out(w, h, std::vector<double>(static_cast<std::size_t>(w) * h));
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) out.at(r, c) = planes[2 * (r % 2) + c % 2].at(r / 2, c / 2);
  return out;
}

BayerImage BayerImage::mosaic_of(const RgbImage& scene) {
  const int w = scene.width(), h = scene.height();
  require(scene.red.same_shape(scene.green) && scene.blue.same_shape(scene.green),
          "mosaic_of: channel shape mismatch");
  std::vector<double> m(static_cast<std::size_t>(w) * h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const GrayImage& src = channel_at(r, c) == BayerChannel::green ? scene.green
                             : channel_at(r, c) == BayerChannel::red ? scene.red
                                                                     : scene.blue;
      m[static_cast<std::size_t>(r) * w + c] = src.at(r, c);
    }
  return BayerImage(w, h, std::move(m));
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Value at full-grid position x of a lattice v[0..n) sampled at x = offset + 2j.
// Between samples the Catmull-Rom half-way taps (-1, 9, 9, -1)/16 apply,
// written so that constant input is reproduced exactly.
double lattice_sample(const double* v, std::ptrdiff_t stride, int n, int offset, int x) {
  const int d = x - offset;
  if (d % 2 == 0) return v[stride * (d / 2)];
  const int i = (d - 1) / 2;  // exact: d - 1 is even
  const double a = v[stride * mirror_index(i, n)];
  const double b = v[stride * mirror_index(i + 1, n)];
  const double p = v[stride * mirror_index(i - 1, n)];
  const double q = v[stride * mirror_index(i + 2, n)];
  return 0.5 * (a + b) + ((a + b) - (p + q)) / 16.0;
}

// Channel sampled at rows row_offset + 2i (every row when row_step is 1) and
// columns col_offset + 2j.
GrayImage upsample_channel(const BayerImage& raw, int row_step, int row_offset, int col_offset) {
  const int w = raw.width(), h = raw.height();
  const int lat_rows = row_step == 1 ? h : h / 2;
  const int lat_cols = w / 2;
  std::vector<double> lattice(static_cast<std::size_t>(lat_rows) * lat_cols);
  for (int i = 0; i < lat_rows; ++i)
    for (int j = 0; j < lat_cols; ++j)
      lattice[static_cast<std::size_t>(i) * lat_cols + j] =
          raw.at(row_step == 1 ? i : row_offset + 2 * i, col_offset + 2 * j);

  // Rows first on the native rows, then columns.
  std::vector<double> wide(static_cast<std::size_t>(lat_rows) * w);
  for (int i = 0; i < lat_rows; ++i)
    for (int x = 0; x < w; ++x)
      wide[static_cast<std::size_t>(i) * w + x] =
          lattice_sample(&lattice[static_cast<std::size_t>(i) * lat_cols], 1, lat_cols, col_offset, x);
  if (row_step == 1) return GrayImage(w, h, std::move(wide));
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.at(y, x) = lattice_sample(&wide[static_cast<std::size_t>(x)], w, lat_rows, row_offset, y);
  return out;
}

}  // namespace

BayerImage load_bayer(const std::filesystem::path& path, const std::optional<std::string>& pattern) {
  std::optional<std::string> declared;
  const std::filesystem::path sidecar = path.string() + ".bayer";
  if (std::ifstream in(sidecar); in) {
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError(sidecar.string() + ": expected key=value");
      if (lower(trim(line.substr(0, eq))) == "pattern") declared = lower(trim(line.substr(eq + 1)));
    }
    if (!declared) throw ParseError(sidecar.string() + ": no pattern declared");
  }
  if (pattern && declared && lower(*pattern) != *declared)
    throw ContractError("Bayer pattern " + *pattern + " disagrees with sidecar (" + *declared + ")");
  const std::optional<std::string> chosen = declared ? declared : pattern;
  if (!chosen) throw IoError("no Bayer pattern: missing sidecar " + sidecar.string());
  require(lower(*chosen) == "grgb", "unsupported Bayer pattern '" + *chosen + "' (supported: grgb)");
  const GrayImage mosaic = load_pgm(path);
  return BayerImage(mosaic.width(), mosaic.height(),
                    std::vector<double>(mosaic.samples().begin(), mosaic.samples().end()));
}

RgbImage demosaic_bicubic_grgb(const BayerImage& raw) {
  return RgbImage{upsample_channel(raw, 2, 0, 1), upsample_channel(raw, 1, 0, 0),
                  upsample_channel(raw, 2, 1, 1)};
}

WhiteBalance gray_world_white_balance(const RgbImage& rgb) {
  const double mr = mean_value(rgb.red);
  const double mg = mean_value(rgb.green);
  const double mb = mean_value(rgb.blue);
  require(mr != 0.0 && mg != 0.0 && mb != 0.0, "gray-world white balance: zero-mean channel");
  WhiteBalance out{rgb, {mg / mr, 1.0, mg / mb}};
  for (auto& v : out.image.red.samples()) v *= out.gains[0];
  for (auto& v : out.image.blue.samples()) v *= out.gains[2];
  return out;
}

double builtin_sharpness_proxy(const GrayImage& image) {
  const auto lap = laplacian_interior(image);
  const double m = std::accumulate(lap.begin(), lap.end(), 0.0) / static_cast<double>(lap.size());
  double ss = 0.0;
  for (double v : lap) ss += (v - m) * (v - m);
  return ss / static_cast<double>(lap.size());
}

NrMetricRegistry NrMetricRegistry::builtin() {
  NrMetricRegistry reg;
  reg.add({"sharpness_proxy", builtin_sharpness_proxy});
  return reg;
}

void NrMetricRegistry::add(NrMetricPlugin plugin) {
  require(!plugin.name.empty() && plugin.evaluate, "NR metric plug-in needs a name and a function");
  require(find(plugin.name) == nullptr, "NR metric " + plugin.name + " already registered");
  plugins_.push_back(std::move(plugin));
}

const NrMetricPlugin* NrMetricRegistry::find(const std::string& name) const {
  for (const auto& p : plugins_)
    if (p.name == name) return &p;
  return nullptr;
}

std::vector<std::string> NrMetricRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& p : plugins_) out.push_back(p.name);
  return out;
}

BayerImage denoise_bayer(const BayerImage& raw, const DenoiseConfig& config) {
  auto planes = raw.planes();
  for (auto& p : planes) p = denoise(p, config);
  return BayerImage::from_planes(planes);
}

RgbImage process_raw(const BayerImage& raw, const DenoiseConfig& config) {
  return gray_world_white_balance(demosaic_bicubic_grgb(denoise_bayer(raw, config))).image;
}

NrTable run_nr_evaluation(const std::vector<LabeledBayer>& raws,
                          const std::vector<MethodSpec>& methods, const NrMetricPlugin& metric) {
  require(static_cast<bool>(metric.evaluate), "run_nr_evaluation: metric has no function");
  NrTable table;
  table.metric = metric.name;
  for (const auto& r : raws) table.images.push_back(r.label);
  for (const auto& m : methods) table.methods.push_back(m.name);
  for (const auto& r : raws) {
    auto& row = table.cells.emplace_back();
    for (const auto& m : methods) {
      const GrayImage y = luminance(process_raw(r.raw, m.make(-1.0)));
      try {
        row.push_back(metric.evaluate(y));
      } catch (const std::exception&) {
        row.push_back(std::nullopt);
      }
    }
  }
  return table;
}

void write_table5_csv(std::ostream& out, const NrTable& table) {
  std::string header = "image_id";
  for (const auto& m : table.methods) header += "," + m;
  out << "# table5 schema: " << header << "; metric " << table.metric << '\n' << header << '\n';
  for (std::size_t i = 0; i < table.images.size(); ++i) {
    out << table.images[i];
    for (const auto& cell : table.cells[i]) out << ',' << (cell ? format_number(*cell) : "-");
    out << '\n';
  }
}

}  // namespace patchlab
