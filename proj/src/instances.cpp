#include "saferoute/instances.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "saferoute/error.hpp"
#include "saferoute/instance_io.hpp"

namespace saferoute {

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream ss{std::string(line)};
  for (std::string t; ss >> t;) out.push_back(std::move(t));
  return out;
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return out;
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream ss{std::string(text)};
  for (std::string l; std::getline(ss, l);) lines.push_back(l);
  return lines;
}

bool is_blank(std::string_view s) { return s.find_first_not_of(" \t\r") == std::string_view::npos; }

double euclid(const Node& a, const Node& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- Solomon -------------------------------------------------------------

Instance parse_solomon(std::string_view text, const SolomonOptions& options) {
  const auto lines = lines_of(text);
  std::size_t i = 0;
  const auto skip_blank = [&] {
    while (i < lines.size() && is_blank(lines[i])) ++i;
  };

  skip_blank();
  if (i >= lines.size()) throw ParseError("empty Solomon file", 1);
  const auto name_tokens = split_ws(lines[i]);
  const std::string name = name_tokens.at(0);
  ++i;

  skip_blank();
  if (i >= lines.size() || split_ws(lines[i]).at(0) != "VEHICLE") {
    throw ParseError("missing VEHICLE header", static_cast<int>(i + 1));
  }
  ++i;
  skip_blank();
  if (i >= lines.size() || split_ws(lines[i]).at(0) != "NUMBER") {
    throw ParseError("missing NUMBER/CAPACITY header", static_cast<int>(i + 1));
  }
  ++i;
  skip_blank();
  if (i >= lines.size()) throw ParseError("missing vehicle count and capacity", static_cast<int>(i + 1));
  const auto vehicle = split_ws(lines[i]);
  const int vehicle_line = static_cast<int>(i + 1);
  if (vehicle.size() != 2) throw ParseError("vehicle line needs NUMBER and CAPACITY", vehicle_line);
  const double vehicle_count = parse_number(vehicle[0], vehicle_line);
  const double capacity = parse_number(vehicle[1], vehicle_line);
  ++i;

  skip_blank();
  if (i >= lines.size() || split_ws(lines[i]).at(0) != "CUSTOMER") {
    throw ParseError("missing CUSTOMER header", static_cast<int>(i + 1));
  }
  ++i;
  skip_blank();
  if (i >= lines.size() || split_ws(lines[i]).at(0) != "CUST") {
    throw ParseError("missing customer column header", static_cast<int>(i + 1));
  }
  ++i;

  std::vector<Node> nodes;
  std::set<int> seen;
  for (; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    const int ln = static_cast<int>(i + 1);
    const auto f = split_ws(lines[i]);
    if (f.size() != 7) throw ParseError("customer row needs 7 fields, found " + std::to_string(f.size()), ln);
    Node n;
    const double id = parse_number(f[0], ln);
    n.id = static_cast<int>(id);
    if (static_cast<double>(n.id) != id) throw ParseError("customer id must be an integer", ln);
    n.x = parse_number(f[1], ln);
    n.y = parse_number(f[2], ln);
    n.demand = parse_number(f[3], ln);
    n.window_open = parse_number(f[4], ln);
    n.window_close = parse_number(f[5], ln);
    n.service_time = parse_number(f[6], ln);
    if (!seen.insert(n.id).second) throw ParseError("duplicate customer id " + std::to_string(n.id), ln);
    if (n.id != static_cast<int>(nodes.size())) {
      throw ParseError("customer ids must be consecutive from 0", ln);
    }
    nodes.push_back(n);
  }
  if (nodes.size() < 2) throw ParseError("Solomon file has no customer rows", static_cast<int>(lines.size()));

  Fleet fleet{static_cast<int>(vehicle_count), capacity, nodes[0].window_close};
  std::vector<Arc> arcs;
  arcs.reserve(nodes.size() * (nodes.size() - 1));
  const TimeProfile speed = TimeProfile::constant(options.speed);
  const TimeProfile tti = TimeProfile::constant(1.0);
  const TimeProfile crash = TimeProfile::constant(options.crash);
  for (const Node& a : nodes) {
    for (const Node& b : nodes) {
      if (a.id == b.id) continue;
      // Coincident customers keep a tiny positive distance.
      const double d = std::max(euclid(a, b), 1e-9);
      arcs.push_back(Arc{a.id, b.id, d, speed, tti, crash});
    }
  }
  return Instance(name, std::move(nodes), std::move(arcs), fleet, options.dummy_count);
}

Instance read_solomon_file(const std::string& path, const SolomonOptions& options) {
  return parse_solomon(read_text_file(path), options);
}

// ---- Step-function profiles ---------------------------------------------

namespace {

void validate_step_spec(const StepFunctionSpec& spec, ProfileKind kind) {
  int covered = 0;
  for (const auto& iv : spec.intervals) {
    if (iv.start_hour != covered || iv.end_hour <= iv.start_hour || iv.end_hour > kHoursPerDay) {
      throw SpecError("step intervals must partition [0, 24) in order");
    }
    if (iv.level < 0 || iv.level > 2) throw SpecError("step interval level must be 0, 1 or 2");
    covered = iv.end_hour;
  }
  if (covered != kHoursPerDay) throw SpecError("step intervals must cover the whole day");
  if (!(spec.noise_amplitude >= 0.0) || spec.noise_amplitude >= 1.0) {
    throw SpecError("noise amplitude must lie in [0, 1)");
  }
  const auto& l = spec.levels;
  for (double v : l) {
    if (!std::isfinite(v)) throw SpecError("step levels must be finite");
  }
  switch (kind) {
    case ProfileKind::Speed:
      if (!(l[2] > 0.0) || l[2] > l[1] || l[1] > l[0]) {
        throw SpecError("speed levels must be positive and drop toward the rush-hour level");
      }
      break;
    case ProfileKind::Tti:
      if (!(l[0] >= 1.0) || l[1] < l[0] || l[2] < l[1]) {
        throw SpecError("TTI levels must be >= 1 and rise toward the rush-hour level");
      }
      break;
    case ProfileKind::Crash:
      if (!(l[0] > 0.0) || l[1] < l[0] || l[2] < l[1] || l[2] > 1.0) {
        throw SpecError("crash levels must lie in (0, 1] and rise toward the rush-hour level");
      }
      break;
  }
}

}  // namespace

TimeProfile step_function(const StepFunctionSpec& spec) {
  std::array<double, kHoursPerDay> v{};
  for (const auto& iv : spec.intervals) {
    for (int h = iv.start_hour; h < iv.end_hour; ++h) {
      v[static_cast<std::size_t>(h)] = spec.levels[static_cast<std::size_t>(iv.level)];
    }
  }
  return TimeProfile(v);
}

TimeProfile generate_profiles(const StepFunctionSpec& spec, ProfileKind kind) {
  validate_step_spec(spec, kind);
  const TimeProfile base = step_function(spec);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> noise(-spec.noise_amplitude, spec.noise_amplitude);
  std::array<double, kHoursPerDay> v{};
  for (int h = 0; h < kHoursPerDay; ++h) {
    double x = base.at_hour(h);
    if (spec.noise_amplitude > 0.0) x *= 1.0 + noise(rng);
    switch (kind) {
      case ProfileKind::Speed: x = std::max(x, kMinGeneratedSpeed); break;
      case ProfileKind::Tti: x = std::max(x, 1.0); break;
      case ProfileKind::Crash: x = std::clamp(x, kMinGeneratedCrash, 1.0); break;
    }
    v[static_cast<std::size_t>(h)] = x;
  }
  return TimeProfile(v);
}

int default_fleet_size(int customers) {
  switch (customers) {
    case 10: return 2;
    case 25: return 3;
    case 50: return 5;
    case 80: return 12;
    default: return std::max(1, (customers + 6) / 7);
  }
}

Instance generate_instance(const GeneratorSpec& spec) {
  if (spec.customers < 1) throw SpecError("generated instance needs at least one customer");
  if (!(spec.area > 0.0) || !(spec.horizon > 0.0) || !(spec.capacity > 0.0)) {
    throw SpecError("area, horizon and capacity must be positive");
  }
  if (spec.demand_min < 0.0 || spec.demand_max < spec.demand_min || spec.demand_max > spec.capacity) {
    throw SpecError("demand range must satisfy 0 <= min <= max <= capacity");
  }
  if (spec.window_min < 0.0 || spec.window_max < spec.window_min) throw SpecError("bad window range");
  if (spec.fleet < 0) throw SpecError("fleet size must be nonnegative");

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> coord(0.0, spec.area);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Node> nodes;
  nodes.push_back(Node{0, spec.area / 2.0, spec.area / 2.0, 0.0, 0.0, 0.0, spec.horizon});
  for (int i = 1; i <= spec.customers; ++i) {
    Node n;
    n.id = i;
    n.x = coord(rng);
    n.y = coord(rng);
    n.demand = std::round(spec.demand_min + unit(rng) * (spec.demand_max - spec.demand_min));
    n.service_time = spec.service_time;
    nodes.push_back(n);
  }

  std::vector<Arc> arcs;
  arcs.reserve(nodes.size() * (nodes.size() - 1));
  std::uint64_t stream = spec.seed * 0x9E3779B97F4A7C15ULL;
  for (const Node& a : nodes) {
    for (const Node& b : nodes) {
      if (a.id == b.id) continue;
      Arc arc;
      arc.from = a.id;
      arc.to = b.id;
      arc.distance = std::max(euclid(a, b), 0.01);
      const double amplitude =
          spec.randomize_noise_proportion ? spec.noise_amplitude * (0.25 + 0.75 * unit(rng)) : spec.noise_amplitude;
      StepFunctionSpec s;
      s.noise_amplitude = amplitude;
      s.levels = spec.speed_levels;
      s.seed = ++stream;
      arc.speed = generate_profiles(s, ProfileKind::Speed);
      s.levels = spec.tti_levels;
      s.seed = ++stream;
      arc.tti = generate_profiles(s, ProfileKind::Tti);
      s.levels = spec.crash_levels;
      s.noise_amplitude = spec.randomize_noise_proportion ? spec.noise_amplitude * unit(rng) : spec.noise_amplitude;
      s.seed = ++stream;
      arc.crash = generate_profiles(s, ProfileKind::Crash);
      arcs.push_back(std::move(arc));
    }
  }

  // Windows: open late enough to be reachable directly from the depot at the
  // slowest hour and close early enough to return in time.
  const double slowest = std::max(kMinGeneratedSpeed, spec.speed_levels[2] * (1.0 - spec.noise_amplitude));
  for (int i = 1; i <= spec.customers; ++i) {
    Node& n = nodes[static_cast<std::size_t>(i)];
    const double reach = euclid(nodes[0], n) / slowest;
    const double width = spec.window_min + unit(rng) * (spec.window_max - spec.window_min);
    const double latest_open = spec.horizon - reach - n.service_time - width;
    if (latest_open < reach) {
      n.window_open = reach;
      n.window_close = std::max(reach, spec.horizon - reach - n.service_time);
    } else {
      n.window_open = reach + unit(rng) * (latest_open - reach);
      n.window_close = n.window_open + width;
    }
    n.window_open = std::floor(n.window_open * 100.0) / 100.0;
    n.window_close = std::ceil(n.window_close * 100.0) / 100.0;
  }

  const int fleet = spec.fleet > 0 ? spec.fleet : default_fleet_size(spec.customers);
  std::string name = spec.name.empty() ? "R" + std::to_string(spec.customers) : spec.name;
  return Instance(name, std::move(nodes), std::move(arcs), Fleet{fleet, spec.capacity, spec.horizon});
}

GeneratorSpec read_generator_spec(std::string_view text) {
  GeneratorSpec spec;
  const auto lines = lines_of(text);
  const auto levels = [](const std::string& v, int ln) {
    const auto f = split_csv(v);
    if (f.size() != 3) throw ParseError("levels need three comma-separated values", ln);
    return std::array<double, 3>{parse_number(f[0], ln), parse_number(f[1], ln), parse_number(f[2], ln)};
  };
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int ln = static_cast<int>(i + 1);
    std::string line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (is_blank(line)) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", ln);
    const auto kv = split_ws(line.substr(0, eq));
    const auto vv = split_ws(line.substr(eq + 1));
    if (kv.size() != 1 || vv.size() != 1) throw ParseError("expected key = value", ln);
    const std::string& key = kv[0];
    const std::string& value = vv[0];
    const auto number = [&] { return parse_number(value, ln); };
    const auto integer = [&] {
      const double d = number();
      if (d != std::floor(d)) throw ParseError(key + " must be an integer", ln);
      return static_cast<int>(d);
    };
    if (key == "name") spec.name = value;
    else if (key == "customers") spec.customers = integer();
    else if (key == "fleet") spec.fleet = integer();
    else if (key == "capacity") spec.capacity = number();
    else if (key == "area") spec.area = number();
    else if (key == "horizon") spec.horizon = number();
    else if (key == "demand_min") spec.demand_min = number();
    else if (key == "demand_max") spec.demand_max = number();
    else if (key == "service_time") spec.service_time = number();
    else if (key == "window_min") spec.window_min = number();
    else if (key == "window_max") spec.window_max = number();
    else if (key == "noise_amplitude") spec.noise_amplitude = number();
    else if (key == "randomize_noise_proportion") spec.randomize_noise_proportion = integer() != 0;
    else if (key == "speed_levels") spec.speed_levels = levels(value, ln);
    else if (key == "tti_levels") spec.tti_levels = levels(value, ln);
    else if (key == "crash_levels") spec.crash_levels = levels(value, ln);
    else if (key == "seed") spec.seed = static_cast<std::uint64_t>(integer());
    else throw ParseError("unknown generator key '" + key + "'", ln);
  }
  return spec;
}

// ---- Scenarios ---------------------------------------------------------

std::vector<Scenario> build_scenarios(std::shared_ptr<const Instance> instance) {
  std::vector<Scenario> out;
  out.reserve(kHoursPerDay);
  for (int h = 0; h < kHoursPerDay; ++h) out.push_back(Scenario{h, instance});
  return out;
}

// ---- Case study ---------------------------------------------------------

namespace {

std::map<std::string, std::string> read_key_values(const std::string& path) {
  std::map<std::string, std::string> out;
  const auto lines = lines_of(read_text_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (is_blank(line)) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(path + ": expected key = value", static_cast<int>(i + 1));
    const auto k = split_ws(line.substr(0, eq));
    const auto v = split_ws(line.substr(eq + 1));
    if (k.size() != 1 || v.size() != 1) throw ParseError(path + ": expected key = value", static_cast<int>(i + 1));
    out[k[0]] = v[0];
  }
  return out;
}

}  // namespace

CaseStudyLoad load_case_study(const std::string& directory) {
  namespace fs = std::filesystem;
  const fs::path dir(directory);
  const auto cfg = read_key_values((dir / "case.cfg").string());
  const auto get = [&](const std::string& k) {
    auto it = cfg.find(k);
    if (it == cfg.end()) throw LoadError("case.cfg is missing '" + k + "'");
    return it->second;
  };

  std::vector<Node> nodes;
  {
    const auto lines = lines_of(read_text_file((dir / "nodes.csv").string()));
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (is_blank(lines[i])) continue;
      const int ln = static_cast<int>(i + 1);
      const auto f = split_csv(lines[i]);
      if (f.size() != 7) throw ParseError("nodes.csv row needs 7 fields", ln);
      Node n;
      n.id = static_cast<int>(parse_number(f[0], ln));
      n.x = parse_number(f[1], ln);
      n.y = parse_number(f[2], ln);
      n.demand = parse_number(f[3], ln);
      n.service_time = parse_number(f[4], ln);
      n.window_open = parse_number(f[5], ln);
      n.window_close = parse_number(f[6], ln);
      nodes.push_back(n);
    }
  }
  const std::size_t n = nodes.size();

  std::vector<std::vector<double>> dist;
  {
    const auto lines = lines_of(read_text_file((dir / "distances.csv").string()));
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (is_blank(lines[i])) continue;
      const int ln = static_cast<int>(i + 1);
      const auto f = split_csv(lines[i]);
      if (f.size() != n + 1) throw ParseError("distances.csv row needs " + std::to_string(n + 1) + " fields", ln);
      std::vector<double> row;
      for (std::size_t j = 1; j < f.size(); ++j) row.push_back(f[j].empty() ? 0.0 : parse_number(f[j], ln));
      dist.push_back(std::move(row));
    }
    if (dist.size() != n) throw LoadError("distances.csv must be a square matrix over the nodes");
  }

  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !(dist[i][j] > 0.0)) continue;
      const std::string label = "arc_" + std::to_string(i) + "_" + std::to_string(j);
      const fs::path p = dir / "profiles" / (label + ".csv");
      if (!fs::exists(p)) throw LoadError("missing profile file for arc " + std::to_string(i) + "->" + std::to_string(j) + " (" + p.string() + ")");
      const auto lines = lines_of(read_text_file(p.string()));
      std::array<double, kHoursPerDay> speed{}, tti{}, crash{};
      int rows = 0;
      for (std::size_t k = 1; k < lines.size(); ++k) {
        if (is_blank(lines[k])) continue;
        const int ln = static_cast<int>(k + 1);
        const auto f = split_csv(lines[k]);
        if (f.size() != 4) throw ParseError(label + ".csv row needs hour,speed,tti,crash", ln);
        const int h = static_cast<int>(parse_number(f[0], ln));
        if (h < 0 || h >= kHoursPerDay) throw ParseError(label + ".csv hour out of range", ln);
        speed[static_cast<std::size_t>(h)] = parse_number(f[1], ln);
        tti[static_cast<std::size_t>(h)] = parse_number(f[2], ln);
        crash[static_cast<std::size_t>(h)] = parse_number(f[3], ln);
        ++rows;
      }
      if (rows != kHoursPerDay) throw LoadError(label + ".csv must have 24 hourly rows");
      arcs.push_back(Arc{static_cast<int>(i), static_cast<int>(j), dist[i][j], TimeProfile(speed), TimeProfile(tti),
                         TimeProfile(crash)});
    }
  }

  const auto num = [&](const std::string& k) { return parse_number(get(k), 0); };
  Fleet fleet{static_cast<int>(num("vehicles")), num("capacity"), num("latest")};
  CaseStudyLoad out{Instance(get("name"), std::move(nodes), std::move(arcs), fleet,
                             static_cast<int>(num("dummies"))),
                    {}};
  double demand = 0.0;
  for (const Node& node : out.instance.nodes()) demand += node.demand;
  if (demand > fleet.capacity * fleet.count) {
    out.warnings.push_back("total demand " + format_number(demand) + " exceeds fleet capacity " +
                           format_number(fleet.capacity * fleet.count));
  }
  return out;
}

// ---- Flow inputs ------------------------------------------------------------

std::vector<queueing::FlowSeries> read_flow_csv(std::string_view text) {
  const auto lines = lines_of(text);
  std::size_t i = 0;
  while (i < lines.size() && is_blank(lines[i])) ++i;
  if (i >= lines.size()) throw ParseError("flow CSV is empty", 1);
  const auto header = split_csv(lines[i]);
  if (header != std::vector<std::string>{"arc", "direction", "hour", "flow"}) {
    throw ParseError("flow CSV header must be arc,direction,hour,flow", static_cast<int>(i + 1));
  }
  std::vector<queueing::FlowSeries> series;
  std::vector<std::array<bool, kHoursPerDay>> filled;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (++i; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    const int ln = static_cast<int>(i + 1);
    const auto f = split_csv(lines[i]);
    if (f.size() != 4) throw ParseError("flow row needs 4 fields", ln);
    const double hour = parse_number(f[2], ln);
    if (hour != std::floor(hour) || hour < 0 || hour >= kHoursPerDay) throw ParseError("hour must be 0..23", ln);
    const double flow = parse_number(f[3], ln);
    if (!(flow >= 0.0)) throw ParseError("flow must be nonnegative", ln);
    auto key = std::make_pair(f[0], f[1]);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, series.size()).first;
      queueing::FlowSeries s;
      s.arc_id = f[0];
      s.direction = f[1];
      series.push_back(s);
      filled.push_back({});
    }
    const auto h = static_cast<std::size_t>(hour);
    if (filled[it->second][h]) throw ParseError("duplicate hour for " + f[0] + " " + f[1], ln);
    filled[it->second][h] = true;
    series[it->second].hourly_flows[h] = flow;
  }
  if (series.empty()) throw ParseError("flow CSV has no data rows", static_cast<int>(lines.size()));
  for (std::size_t k = 0; k < series.size(); ++k) {
    for (bool b : filled[k]) {
      if (!b) throw ParseError("series " + series[k].arc_id + " " + series[k].direction + " is missing hours", 0);
    }
  }
  return series;
}

std::vector<NominalSpeed> read_nominal_csv(std::string_view text) {
  const auto lines = lines_of(text);
  std::vector<NominalSpeed> out;
  bool header = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    const int ln = static_cast<int>(i + 1);
    const auto f = split_csv(lines[i]);
    if (header) {
      if (f != std::vector<std::string>{"arc", "direction", "nominal_speed"}) {
        throw ParseError("nominal CSV header must be arc,direction,nominal_speed", ln);
      }
      header = false;
      continue;
    }
    if (f.size() != 3) throw ParseError("nominal row needs 3 fields", ln);
    out.push_back({f[0], f[1], parse_number(f[2], ln)});
  }
  if (header) throw ParseError("nominal CSV is empty", 1);
  return out;
}

}  // namespace saferoute
