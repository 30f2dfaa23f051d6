#include "rsa/config.hpp"

#include "rsa/exact1d.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace rsa {

using nlohmann::json;

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Sim1D: return "sim1d";
    case Mode::Sim2D: return "sim2d";
    case Mode::Kinetics: return "kinetics";
    case Mode::Exact: return "exact";
    case Mode::Analyze: return "analyze";
    case Mode::Figure: return "figure";
  }
  return "sim1d";
}

Mode mode_from_string(std::string_view name) {
  for (Mode m : {Mode::Sim1D, Mode::Sim2D, Mode::Kinetics, Mode::Exact, Mode::Analyze, Mode::Figure})
    if (to_string(m) == name) return m;
  throw ConfigError("unknown mode '" + std::string(name) + "'");
}

namespace {

const std::vector<double> kFigureTimes = {1, 2, 4, 6, 8, 12, 18, 24};

RunConfig defaults_for(Mode mode) {
  RunConfig c;
  c.mode = mode;
  c.snapshots = kFigureTimes;
  switch (mode) {
    case Mode::Sim1D:
    case Mode::Kinetics:
      c.schedule = Schedule(ScheduleKind::Exponential, 1.0, 1.0, 1);
      break;
    case Mode::Sim2D:
      c.schedule = Schedule(ScheduleKind::Exponential, 1.0, 1.0, 2);
      c.box = 500.0;
      c.hist_max = 5.0;
      break;
    case Mode::Exact:
      c.schedule = Schedule(ScheduleKind::Constant, 1.0, 1.0, 1);
      c.snapshots = {1, 2, 4, 6, 8, 1000};
      c.hist_max = 5.0;
      break;
    case Mode::Analyze:
    case Mode::Figure:
      c.schedule = Schedule(ScheduleKind::Exponential, 1.0, 1.0, 1);
      break;
  }
  return c;
}

template <typename T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw ConfigError(std::string(what) + " must be positive");
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  static const std::set<std::string> known = {"mode",     "seed",      "schedule",   "box",     "replicas",
                                              "snapshots", "bin_width", "hist_max",   "dx",      "t0",
                                              "output_dir", "threads",  "input_dir",  "t_min",   "figure",
                                              "desk_scale"};
  for (const auto& [key, value] : doc.items())
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");

  if (!doc.contains("mode")) throw ConfigError("config is missing 'mode'");
  if (!doc.contains("seed")) throw ConfigError("config is missing 'seed' (no default, runs must be reproducible)");

  RunConfig c = defaults_for(mode_from_string(get<std::string>(doc, "mode")));
  const json& seed = doc.at("seed");
  if (!seed.is_number_integer()) throw ConfigError("seed must be an integer");
  if (seed.is_number_unsigned())
    c.seed = seed.get<std::uint64_t>();
  else if (seed.get<std::int64_t>() < 0)
    throw ConfigError("seed must be non-negative");
  else
    c.seed = static_cast<std::uint64_t>(seed.get<std::int64_t>());

  if (doc.contains("schedule")) {
    const json& s = doc.at("schedule");
    if (!s.is_object()) throw ConfigError("schedule must be an object");
    for (const auto& [key, value] : s.items())
      if (key != "kind" && key != "final_size" && key != "flux" && key != "dimension")
        throw ConfigError("unknown schedule key '" + key + "'");
    ScheduleKind kind = c.schedule.kind;
    if (s.contains("kind")) {
      try {
        kind = schedule_kind_from_string(get<std::string>(s, "kind"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    const double final_size = s.contains("final_size") ? get<double>(s, "final_size") : c.schedule.final_size;
    const double flux = s.contains("flux") ? get<double>(s, "flux") : c.schedule.flux;
    const int dimension = s.contains("dimension") ? get<int>(s, "dimension") : c.schedule.dimension;
    require_positive(final_size, "schedule.final_size");
    require_positive(flux, "schedule.flux");
    try {
      c.schedule = Schedule(kind, final_size, flux, dimension);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (c.mode == Mode::Sim1D && c.schedule.dimension != 1) throw ConfigError("sim1d needs a 1D schedule");
  if (c.mode == Mode::Kinetics && c.schedule.dimension != 1) throw ConfigError("kinetics needs a 1D schedule");
  if (c.mode == Mode::Sim2D && c.schedule.dimension != 2) throw ConfigError("sim2d needs a 2D schedule");
  if (c.mode == Mode::Exact && c.schedule.kind != ScheduleKind::Constant)
    throw ConfigError("exact mode solves the constant-length case only");

  if (doc.contains("box")) c.box = get<double>(doc, "box");
  if (doc.contains("replicas")) {
    const auto r = get<std::int64_t>(doc, "replicas");
    if (r <= 0) throw ConfigError("replicas must be positive");
    c.replicas = static_cast<std::size_t>(r);
  }
  if (doc.contains("snapshots")) c.snapshots = get<std::vector<double>>(doc, "snapshots");
  if (doc.contains("bin_width")) c.bin_width = get<double>(doc, "bin_width");
  if (doc.contains("hist_max")) c.hist_max = get<double>(doc, "hist_max");
  if (doc.contains("dx")) c.dx = get<double>(doc, "dx");
  if (doc.contains("t0")) c.t0 = get<double>(doc, "t0");
  if (doc.contains("output_dir")) c.output_dir = get<std::string>(doc, "output_dir");
  if (doc.contains("threads")) {
    const auto t = get<std::int64_t>(doc, "threads");
    if (t <= 0) throw ConfigError("threads must be positive");
    c.threads = static_cast<unsigned>(t);
  }
  if (doc.contains("input_dir")) c.input_dir = get<std::string>(doc, "input_dir");
  if (doc.contains("t_min")) c.t_min = get<double>(doc, "t_min");
  if (doc.contains("figure")) c.figure = get<std::string>(doc, "figure");
  if (doc.contains("desk_scale")) c.desk_scale = get<bool>(doc, "desk_scale");

  require_positive(c.box, "box");
  require_positive(c.bin_width, "bin_width");
  require_positive(c.hist_max, "hist_max");
  require_positive(c.dx, "dx");
  require_positive(c.t0, "t0");
  require_positive(c.t_min, "t_min");
  for (double t : c.snapshots)
    if (!(t >= 0.0)) throw ConfigError("snapshot times must be non-negative");
  if (!std::is_sorted(c.snapshots.begin(), c.snapshots.end()))
    throw ConfigError("snapshot times must be ascending");
  if (c.mode == Mode::Analyze && c.input_dir.empty()) throw ConfigError("analyze needs 'input_dir'");
  if (c.mode == Mode::Figure && c.figure.empty()) throw ConfigError("figure mode needs 'figure'");
  return c;
}

std::string serialize_schedule(const Schedule& s) {
  json j = {{"kind", std::string(to_string(s.kind))},
            {"final_size", s.final_size},
            {"flux", s.flux},
            {"dimension", s.dimension}};
  return j.dump();
}

std::string serialize_config(const RunConfig& c) {
  json j = {{"mode", std::string(to_string(c.mode))},
            {"seed", c.seed},
            {"schedule", json::parse(serialize_schedule(c.schedule))},
            {"box", c.box},
            {"replicas", c.replicas},
            {"snapshots", c.snapshots},
            {"bin_width", c.bin_width},
            {"hist_max", c.hist_max},
            {"dx", c.dx},
            {"t0", c.t0},
            {"output_dir", c.output_dir},
            {"threads", c.threads},
            {"input_dir", c.input_dir},
            {"t_min", c.t_min},
            {"figure", c.figure},
            {"desk_scale", c.desk_scale}};
  return j.dump(2);
}

FigurePlan figure_preset(std::string_view name, bool desk_scale, const RunConfig& base) {
  FigurePlan plan;
  plan.name = std::string(name);

  auto make = [&](Mode mode, ScheduleKind kind, std::vector<double> times) {
    RunConfig c = defaults_for(mode);
    c.seed = base.seed;
    c.threads = base.threads;
    c.output_dir = base.output_dir;
    c.schedule.kind = kind;
    c.snapshots = std::move(times);
    if (mode == Mode::Sim2D) {
      c.box = desk_scale ? 500.0 / kDeskBoxFactor2D : 500.0;
      c.replicas = desk_scale ? 100 / kDeskReplicaFactor2D : 100;
    } else if (mode == Mode::Sim1D) {
      c.box = desk_scale ? 10000.0 / kDeskBoxFactor1D : 10000.0;
      c.replicas = desk_scale ? 10000 / kDeskReplicaFactor1D : 10000;
    }
    return c;
  };

  if (name == "fig2") {
    plan.runs.push_back(make(Mode::Sim2D, ScheduleKind::Exponential, kFigureTimes));
  } else if (name == "fig3") {
    plan.runs.push_back(make(Mode::Sim2D, ScheduleKind::Exponential, {4, 6, 8, 10, 12, 18, 24}));
    plan.fit = FitRequest{PeakSource::Sim2D, 4.0, std::nullopt};
  } else if (name == "fig4") {
    for (ScheduleKind k : {ScheduleKind::Exponential, ScheduleKind::Logarithmic, ScheduleKind::Reciprocal})
      plan.runs.push_back(make(Mode::Sim2D, k, {10}));
  } else if (name == "fig5") {
    plan.runs.push_back(make(Mode::Sim1D, ScheduleKind::Exponential, kFigureTimes));
  } else if (name == "fig6") {
    plan.runs.push_back(make(Mode::Exact, ScheduleKind::Constant, {1, 2, 4, 6, 8, 1000}));
  } else if (name == "fig7") {
    plan.runs.push_back(make(Mode::Sim1D, ScheduleKind::Exponential, {4, 6, 8, 12, 18, 24}));
    plan.fit = FitRequest{PeakSource::Sim1D, 4.0, exact::contact_log_slope<double>()};
  } else {
    throw ConfigError("unknown figure preset '" + std::string(name) + "'");
  }
  return plan;
}

}  // namespace rsa
