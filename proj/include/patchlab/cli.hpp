#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "patchlab/labstats.hpp"
#include "patchlab/pipelines.hpp"

namespace patchlab {

/// Bad flags or configuration; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Plain "key = value" lines; '#' starts a comment. Later keys win.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Apply one override to a denoiser configuration. Returns false for keys
/// that are not denoiser settings; throws UsageError for malformed values.
bool apply_denoise_setting(DenoiseConfig& config, const std::string& key, const std::string& value);
/// Effective settings as key=value lines, in a fixed order.
std::string describe(const DenoiseConfig& config);

bool apply_stats_setting(StatsConfig& config, const std::string& key, const std::string& value);
std::string describe(const StatsConfig& config);

std::vector<double> parse_number_list(const std::string& text);
std::vector<std::string> parse_name_list(const std::string& text);

/// PGM files of a directory sorted by name, labelled by file stem.
std::vector<LabeledImage> load_image_dir(const std::filesystem::path& dir);

/// Entry point of the patchlab tool. Returns the process exit status:
/// 0 success, 1 I/O or pipeline failure, 2 invalid usage.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace patchlab
