#pragma once

#include "rsa/analysis.hpp"
#include "rsa/config.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rsa {

/// Sampled curve in figure units: x in units of the final size, y as
/// final_size^2 * G (1D) or P2 (2D), err its standard error.
struct Curve {
  std::string source;  // sim1d, sim2d, kinetics, exact
  Schedule schedule;
  double t_over_tau = 0.0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;
  std::vector<std::pair<std::string, std::string>> header;
};

/// `# key=value` header lines, a `# columns=` line, then rows of
/// x, y, err with 9 significant digits.
void write_curve_csv(const std::filesystem::path& path, const Curve& curve);
Curve read_curve_csv(const std::filesystem::path& path);

/// Peak values over a set of curves from one source and schedule.
PeakSeries peak_series(const std::vector<Curve>& curves);

std::string fit_report_json(const LogFit& fit, const PeakSeries& series, std::optional<double> reference_slope);

struct ManifestEntry {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct Manifest {
  std::string inputs_hash;
  std::uint64_t seed = 0;
  std::string version;
  unsigned threads = 1;
  double wall_seconds = 0.0;
  std::vector<ManifestEntry> files;
  std::vector<Curve> curves;
  std::vector<LogFit> fits;
};

std::string sha256_hex(std::string_view data);

/// Run a configuration end to end and write its artifacts plus
/// manifest.json into config.output_dir. On an I/O failure every file this
/// call created is removed before the error propagates.
Manifest execute(const RunConfig& config);

}  // namespace rsa
