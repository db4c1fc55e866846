#include "saferoute/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "saferoute/error.hpp"

namespace saferoute {

namespace {

using nlohmann::json;

constexpr std::array<const char*, kMoveKinds> kMoveKeys{"insertion", "swap", "two_opt",
                                                        "three_opt", "reversion", "split"};

template <typename T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw SpecError(std::string("config key '") + key + "' has the wrong type");
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw SpecError("unknown config key '" + key + "' in " + where);
  }
}

}  // namespace

SolverConfig parse_solver_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SpecError("config must be a JSON object");
  reject_unknown(j,
                 {"max_outer_iterations", "initial_temperature", "final_temperature", "iterations_per_temperature",
                  "population_size", "moves_per_iteration", "seed", "objective", "weights", "schedule_grid",
                  "schedule_every_candidate", "improvements_only", "basic", "move_weights"},
                 "solver config");
  SolverConfig c;
  if (j.contains("max_outer_iterations")) c.max_outer_iterations = get<int>(j, "max_outer_iterations");
  if (j.contains("initial_temperature")) c.initial_temperature = get<double>(j, "initial_temperature");
  if (j.contains("final_temperature")) c.final_temperature = get<double>(j, "final_temperature");
  if (j.contains("iterations_per_temperature")) {
    c.iterations_per_temperature = get<int>(j, "iterations_per_temperature");
  }
  if (j.contains("population_size")) c.population_size = get<int>(j, "population_size");
  if (j.contains("moves_per_iteration")) c.moves_per_iteration = get<int>(j, "moves_per_iteration");
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("objective")) c.objective = parse_objective(get<std::string>(j, "objective"));
  if (j.contains("schedule_grid")) c.schedule_grid = get<int>(j, "schedule_grid");
  if (j.contains("schedule_every_candidate")) c.schedule_every_candidate = get<bool>(j, "schedule_every_candidate");
  if (j.contains("improvements_only")) c.improvements_only = get<bool>(j, "improvements_only");
  if (j.contains("basic")) c.basic = get<bool>(j, "basic");
  if (j.contains("weights")) {
    const json& w = j.at("weights");
    if (!w.is_object()) throw SpecError("config 'weights' must be an object");
    reject_unknown(w, {"crash", "tti", "crash_scale"}, "weights");
    if (w.contains("crash")) c.weights.w_crash = get<double>(w, "crash");
    if (w.contains("tti")) c.weights.w_tti = get<double>(w, "tti");
    if (w.contains("crash_scale")) {
      const json& s = w.at("crash_scale");
      if (s.is_string() && s.get<std::string>() == "auto") {
        c.auto_crash_scale = true;
      } else if (s.is_number()) {
        c.auto_crash_scale = false;
        c.weights.crash_scale = s.get<double>();
      } else {
        throw SpecError("weights.crash_scale must be a number or \"auto\"");
      }
    }
  }
  if (j.contains("move_weights")) {
    const json& mw = j.at("move_weights");
    if (!mw.is_object()) throw SpecError("config 'move_weights' must be an object");
    reject_unknown(mw, {"insertion", "swap", "two_opt", "three_opt", "reversion", "split"}, "move_weights");
    for (std::size_t k = 0; k < kMoveKinds; ++k) {
      if (mw.contains(kMoveKeys[k])) c.move_weights[k] = get<double>(mw, kMoveKeys[k]);
    }
  }
  validate_config(c);
  return c;
}

SolverConfig load_solver_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_solver_config(ss.str());
}

std::string solver_config_to_json(const SolverConfig& c) {
  json j;
  j["max_outer_iterations"] = c.max_outer_iterations;
  j["initial_temperature"] = c.initial_temperature;
  j["final_temperature"] = c.final_temperature;
  j["iterations_per_temperature"] = c.iterations_per_temperature;
  j["population_size"] = c.population_size;
  j["moves_per_iteration"] = c.moves_per_iteration;
  j["seed"] = c.seed;
  j["objective"] = std::string(objective_name(c.objective));
  j["weights"]["crash"] = c.weights.w_crash;
  j["weights"]["tti"] = c.weights.w_tti;
  if (c.auto_crash_scale) j["weights"]["crash_scale"] = "auto";
  else j["weights"]["crash_scale"] = c.weights.crash_scale;
  j["schedule_grid"] = c.schedule_grid;
  j["schedule_every_candidate"] = c.schedule_every_candidate;
  j["improvements_only"] = c.improvements_only;
  j["basic"] = c.basic;
  for (std::size_t k = 0; k < kMoveKinds; ++k) j["move_weights"][kMoveKeys[k]] = c.move_weights[k];
  return j.dump(2) + "\n";
}

void apply_environment(SolverConfig& config) {
  const char* raw = std::getenv(kSeedEnvironmentVariable);
  if (raw == nullptr || *raw == '\0') return;
  const std::string_view text(raw);
  std::uint64_t seed = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw SpecError(std::string(kSeedEnvironmentVariable) + " must be a nonnegative integer, got '" + raw + "'");
  }
  config.seed = seed;
}

}  // namespace saferoute
