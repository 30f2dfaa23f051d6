#include "rsa/runner.hpp"

#include "rsa/ensemble.hpp"
#include "rsa/exact1d.hpp"
#include "rsa/kinetics.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rsa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Label used in file names, e.g. 8 -> "8", 0.5 -> "0.5".
std::string time_label(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Tracks files written by one execute() call for the manifest and cleanup.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

  const fs::path& dir() const { return dir_; }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    created_.push_back(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    out.close();
    if (!out) throw std::runtime_error("write failed for " + path.string());
    entries_.push_back({name, sha256_hex(content), content.size()});
  }

  void write_curve(const std::string& name, const Curve& curve) {
    const fs::path path = dir_ / name;
    created_.push_back(path);
    write_curve_csv(path, curve);
    const std::string content = read_file(path);
    entries_.push_back({name, sha256_hex(content), content.size()});
  }

  void cleanup() noexcept {
    std::error_code ec;
    for (const auto& p : created_) fs::remove(p, ec);
  }

  std::vector<ManifestEntry> entries() const { return entries_; }

 private:
  fs::path dir_;
  std::vector<fs::path> created_;
  std::vector<ManifestEntry> entries_;
};

std::vector<double> physical_times(const RunConfig& c) {
  std::vector<double> out;
  const double tau = time_scale(c.schedule);
  for (double t : c.snapshots) out.push_back(t * tau);
  return out;
}

std::vector<std::pair<std::string, std::string>> base_header(const RunConfig& c, const std::string& source,
                                                             double t) {
  return {{"source", source},
          {"schedule", serialize_schedule(c.schedule)},
          {"seed", std::to_string(c.seed)},
          {"t_over_tau", fmt9(t)}};
}

Curve histogram_curve(const RunConfig& c, const std::string& source, const DistributionHistogram& h, double t,
                      double density, double density_error) {
  const double unit = c.schedule.final_size;
  const double y_scale = h.kind == HistogramKind::GapDensity ? unit * unit : 1.0;
  Curve curve;
  curve.source = source;
  curve.schedule = c.schedule;
  curve.t_over_tau = t;
  curve.header = base_header(c, source, t);
  curve.header.emplace_back("kind", std::string(to_string(h.kind)));
  curve.header.emplace_back("box_over_final_size",
                            fmt9(c.box));
  curve.header.emplace_back("replicas", std::to_string(h.normalization.replicas));
  curve.header.emplace_back(h.kind == HistogramKind::GapDensity ? "density_times_final_size" : "coverage",
                            fmt9(h.kind == HistogramKind::GapDensity ? density * unit : density));
  curve.header.emplace_back(h.kind == HistogramKind::GapDensity ? "density_error_times_final_size" : "coverage_error",
                            fmt9(h.kind == HistogramKind::GapDensity ? density_error * unit : density_error));
  for (Eigen::Index i = 0; i < h.bins(); ++i) {
    curve.x.push_back(h.bin_center(i) / unit);
    curve.y.push_back(h.values[i] * y_scale);
    curve.err.push_back(h.std_error[i] * y_scale);
  }
  return curve;
}

std::string series_csv(const RunConfig& c, const std::string& source, const std::string& quantity,
                       const std::vector<double>& value, const std::vector<double>& error) {
  std::ostringstream out;
  out << "# source=" << source << "\n# schedule=" << serialize_schedule(c.schedule) << "\n# seed=" << c.seed
      << "\n# box_over_final_size=" << fmt9(c.box) << "\n# replicas=" << c.replicas << "\n# columns=t_over_tau,"
      << quantity << ",std_error\n";
  for (std::size_t i = 0; i < value.size(); ++i)
    out << fmt9(c.snapshots[i]) << ',' << fmt9(value[i]) << ',' << fmt9(error[i]) << '\n';
  return out.str();
}

std::string prefix(const std::string& source, const Schedule& s) {
  return source + "_" + std::string(to_string(s.kind));
}

void run_sim(const RunConfig& c, OutputSet& out, std::vector<Curve>& curves) {
  const bool line = c.mode == Mode::Sim1D;
  const std::string source = line ? "sim1d" : "sim2d";
  const double unit = c.schedule.final_size;
  const auto times = physical_times(c);
  const EnsembleResult ens =
      line ? line_ensemble(c.schedule, c.box * unit, c.replicas, c.seed, times, c.bin_width * unit,
                           c.hist_max * unit, c.threads)
           : plane_ensemble(c.schedule, c.box * unit, c.replicas, c.seed, times, c.hist_max * unit,
                            c.bin_width * unit, c.threads);

  std::vector<double> scaled(ens.density), scaled_err(ens.density_error);
  if (line)
    for (std::size_t i = 0; i < scaled.size(); ++i) {
      scaled[i] *= unit;
      scaled_err[i] *= unit;
    }
  for (std::size_t i = 0; i < times.size(); ++i) {
    Curve curve = histogram_curve(c, source, ens.histograms[i], c.snapshots[i], ens.density[i], ens.density_error[i]);
    out.write_curve(prefix(source, c.schedule) + "_t" + time_label(c.snapshots[i]) + ".csv", curve);
    curves.push_back(std::move(curve));
  }
  out.write(prefix(source, c.schedule) + (line ? "_density.csv" : "_coverage.csv"),
            series_csv(c, source, line ? "density_times_final_size" : "coverage", scaled, scaled_err));
}

void run_kinetics(const RunConfig& c, OutputSet& out, std::vector<Curve>& curves) {
  const double unit = c.schedule.final_size;
  const double tau = time_scale(c.schedule);
  KineticState state = initialize(c.schedule, c.t0 * tau, c.dx * unit);
  std::ostringstream diag;
  diag << "# source=kinetics\n# schedule=" << serialize_schedule(c.schedule) << "\n# dx_over_final_size="
       << fmt9(c.dx) << "\n# t0_over_tau=" << fmt9(c.t0) << "\n# columns=t_over_tau,density_times_final_size,"
       << "conservation_residual\n";
  for (double t : c.snapshots) {
    if (t < c.t0) throw ConfigError("kinetics snapshot t = " + fmt9(t) + " precedes the start time t0");
    state = advance_to(std::move(state), t * tau);
    const auto& d = state.diagnostics();
    std::cout << "kinetics t/tau=" << fmt9(t) << " n=" << fmt9(d.density * unit) << " residual=" << fmt9(d.residual)
              << '\n';
    diag << fmt9(t) << ',' << fmt9(d.density * unit) << ',' << fmt9(d.residual) << '\n';

    Curve curve;
    curve.source = "kinetics";
    curve.schedule = c.schedule;
    curve.t_over_tau = t;
    curve.header = base_header(c, "kinetics", t);
    curve.header.emplace_back("dx_over_final_size", fmt9(c.dx));
    curve.header.emplace_back("conservation_residual", fmt9(d.residual));
    for (const auto& [x, g] : gap_curve(state)) {
      if (x / unit > c.hist_max) break;
      curve.x.push_back(x / unit);
      curve.y.push_back(g * unit * unit);
      curve.err.push_back(0.0);
    }
    out.write_curve(prefix("kinetics", c.schedule) + "_t" + time_label(t) + ".csv", curve);
    curves.push_back(std::move(curve));
  }
  out.write(prefix("kinetics", c.schedule) + "_diagnostics.csv", diag.str());
}

void run_exact(const RunConfig& c, OutputSet& out, std::vector<Curve>& curves) {
  const auto nodes = static_cast<std::size_t>(std::llround(c.hist_max / c.dx)) + 1;
  for (double t : c.snapshots) {
    Curve curve;
    curve.source = "exact";
    curve.schedule = c.schedule;
    curve.t_over_tau = t;
    curve.header = base_header(c, "exact", t);
    curve.header.emplace_back("coverage", fmt9(exact::coverage_exact(t)));
    for (std::size_t j = 0; j < nodes; ++j) {
      const double x = static_cast<double>(j) * c.dx;
      curve.x.push_back(x);
      curve.y.push_back(exact::gap_exact(x, t));
      curve.err.push_back(0.0);
    }
    out.write_curve(prefix("exact", c.schedule) + "_t" + time_label(t) + ".csv", curve);
    curves.push_back(std::move(curve));
  }
}

// Fits every (source, schedule) group with enough points past t_min.
void fit_groups(const std::vector<Curve>& curves, double t_min, std::optional<double> reference, OutputSet& out,
                std::vector<LogFit>& fits) {
  std::map<std::string, std::vector<Curve>> groups;
  for (const auto& c : curves) groups[prefix(c.source, c.schedule)].push_back(c);
  for (auto& [name, group] : groups) {
    std::sort(group.begin(), group.end(), [](const Curve& a, const Curve& b) { return a.t_over_tau < b.t_over_tau; });
    const auto usable = std::count_if(group.begin(), group.end(), [&](const Curve& c) { return c.t_over_tau >= t_min; });
    if (usable < 3) continue;
    const PeakSeries series = peak_series(group);
    const LogFit fit = log_fit(series, t_min);
    out.write("fit_" + name + ".json", fit_report_json(fit, series, reference));
    fits.push_back(fit);
  }
}

}  // namespace

void write_curve_csv(const fs::path& path, const Curve& curve) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (const auto& [k, v] : curve.header) out << "# " << k << '=' << v << '\n';
  out << "# columns=x_over_final_size,value,std_error\n";
  for (std::size_t i = 0; i < curve.x.size(); ++i)
    out << fmt9(curve.x[i]) << ',' << fmt9(curve.y[i]) << ',' << fmt9(curve.err[i]) << '\n';
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Curve read_curve_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  Curve curve;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "columns") continue;
      curve.header.emplace_back(key, value);
      if (key == "source") curve.source = value;
      if (key == "t_over_tau") curve.t_over_tau = std::stod(value);
      if (key == "schedule") {
        const json s = json::parse(value);
        curve.schedule = Schedule(schedule_kind_from_string(s.at("kind").get<std::string>()),
                                  s.at("final_size").get<double>(), s.at("flux").get<double>(),
                                  s.at("dimension").get<int>());
      }
      continue;
    }
    std::istringstream row(line);
    std::string field;
    std::vector<double> cols;
    while (std::getline(row, field, ',')) cols.push_back(std::stod(field));
    if (cols.size() < 2) throw std::runtime_error("malformed row in " + path.string());
    curve.x.push_back(cols[0]);
    curve.y.push_back(cols[1]);
    curve.err.push_back(cols.size() > 2 ? cols[2] : 0.0);
  }
  return curve;
}

PeakSeries peak_series(const std::vector<Curve>& curves) {
  PeakSeries series;
  if (!curves.empty()) series.source = peak_source_from_string(curves.front().source);
  for (const auto& c : curves) {
    const Peak p = find_peak(c.x, c.y, c.err);
    series.add(c.t_over_tau, p.y, p.error);
  }
  return series;
}

std::string fit_report_json(const LogFit& fit, const PeakSeries& series, std::optional<double> reference_slope) {
  json points = json::array();
  for (const auto& p : series.points) points.push_back({{"t_over_tau", p.t_over_tau}, {"peak", p.value}, {"error", p.error}});
  json j = {{"slope", fit.slope},
            {"intercept", fit.intercept},
            {"slope_error", fit.slope_error},
            {"t_min", fit.t_min},
            {"source", std::string(to_string(fit.source))},
            {"n_points", fit.n_points},
            {"r_squared", fit.r_squared},
            {"low_reliability", fit.low_reliability},
            {"points", points}};
  if (reference_slope) j["reference_slope"] = *reference_slope;
  return j.dump(2) + "\n";
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

Manifest execute(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  fs::create_directories(config.output_dir);
  OutputSet out(config.output_dir);

  Manifest manifest;
  manifest.inputs_hash = sha256_hex(serialize_config(config));
  manifest.seed = config.seed;
  manifest.version = kVersion;
  manifest.threads = config.threads;

  try {
    switch (config.mode) {
      case Mode::Sim1D:
      case Mode::Sim2D: run_sim(config, out, manifest.curves); break;
      case Mode::Kinetics: run_kinetics(config, out, manifest.curves); break;
      case Mode::Exact: run_exact(config, out, manifest.curves); break;
      case Mode::Analyze: {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(config.input_dir))
          if (entry.path().extension() == ".csv") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        std::vector<Curve> curves;
        for (const auto& f : files) {
          Curve c = read_curve_csv(f);
          if (!c.source.empty() && c.t_over_tau > 0.0 && !c.x.empty()) curves.push_back(std::move(c));
        }
        fit_groups(curves, config.t_min, std::nullopt, out, manifest.fits);
        break;
      }
      case Mode::Figure: {
        const FigurePlan plan = figure_preset(config.figure, config.desk_scale, config);
        for (const auto& run : plan.runs) {
          switch (run.mode) {
            case Mode::Sim1D:
            case Mode::Sim2D: run_sim(run, out, manifest.curves); break;
            case Mode::Exact: run_exact(run, out, manifest.curves); break;
            default: break;
          }
        }
        if (plan.fit) fit_groups(manifest.curves, plan.fit->t_min, plan.fit->reference_slope, out, manifest.fits);
        break;
      }
    }

    manifest.files = out.entries();
    manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json files = json::array();
    for (const auto& f : manifest.files) files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    json m = {{"inputs_hash", manifest.inputs_hash}, {"seed", manifest.seed},         {"version", manifest.version},
              {"threads", manifest.threads},         {"wall_seconds", manifest.wall_seconds}, {"files", files},
              {"config", json::parse(serialize_config(config))}};
    out.write("manifest.json", m.dump(2) + "\n");
  } catch (...) {
    out.cleanup();
    throw;
  }
  return manifest;
}

}  // namespace rsa
