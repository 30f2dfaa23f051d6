#pragma once

#include "rsa/analysis.hpp"
#include "rsa/schedule.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rsa {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { Sim1D, Sim2D, Kinetics, Exact, Analyze, Figure };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view name);

/// A batch run. Lengths are in units of the schedule's final size and times
/// in units of tau; the schedule itself carries the physical values.
struct RunConfig {
  Mode mode = Mode::Sim1D;
  Schedule schedule;
  double box = 10000.0;
  std::size_t replicas = 10;
  std::uint64_t seed = 0;
  std::vector<double> snapshots;
  double bin_width = 0.02;  // gap bin (1D) or dr (2D)
  double hist_max = 20.0;   // gap range (1D), r_max (2D), curve range (kinetics, exact)
  double dx = 0.005;        // kinetics and exact grids
  double t0 = 0.01;         // kinetics start time
  std::string output_dir = "out";
  unsigned threads = 1;
  std::string input_dir;    // analyze
  double t_min = 4.0;       // analyze / fits
  std::string figure;       // figure
  bool desk_scale = false;  // figure

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parse a JSON document. `seed` is mandatory, unknown keys are rejected and
/// everything else falls back to mode-specific defaults.
RunConfig parse_config(std::string_view text);

/// Canonical JSON form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Compact JSON of a schedule, as written into output headers.
std::string serialize_schedule(const Schedule& schedule);

struct FitRequest {
  PeakSource source = PeakSource::Sim1D;
  double t_min = 4.0;
  std::optional<double> reference_slope;
};

/// Runs needed to regenerate one figure, plus an optional peak fit.
struct FigurePlan {
  std::string name;
  std::vector<RunConfig> runs;
  std::optional<FitRequest> fit;
};

inline constexpr double kDeskBoxFactor2D = 2.5;       // 500 -> 200 D(inf)
inline constexpr std::size_t kDeskReplicaFactor2D = 5;  // 100 -> 20
inline constexpr double kDeskBoxFactor1D = 1.0;       // 10^4 l(inf) kept
inline constexpr std::size_t kDeskReplicaFactor1D = 20; // 10^4 -> 500

/// Parameter sets of fig2 ... fig7. `base` supplies seed, threads and the
/// output directory.
FigurePlan figure_preset(std::string_view name, bool desk_scale, const RunConfig& base);

}  // namespace rsa
