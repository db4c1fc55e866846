#include "saferoute/model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "saferoute/error.hpp"

namespace saferoute {

int hour_of_day(double clock) {
  const double h = std::floor(clock);
  const auto slot = static_cast<long long>(h) % kHoursPerDay;
  return static_cast<int>(slot < 0 ? slot + kHoursPerDay : slot);
}

TimeProfile::TimeProfile() { values_.fill(1.0); }

TimeProfile::TimeProfile(const std::array<double, kHoursPerDay>& values) : values_(values) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidProfile("time profile value is not finite");
  }
  constant_ = std::all_of(values_.begin(), values_.end(), [&](double v) { return v == values_[0]; });
}

TimeProfile TimeProfile::constant(double value) {
  std::array<double, kHoursPerDay> values;
  values.fill(value);
  return TimeProfile(values);
}

double TimeProfile::min() const { return *std::min_element(values_.begin(), values_.end()); }
double TimeProfile::max() const { return *std::max_element(values_.begin(), values_.end()); }
double TimeProfile::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / kHoursPerDay;
}

void validate_arc(const Arc& arc) {
  const std::string label = "arc " + std::to_string(arc.from) + "->" + std::to_string(arc.to);
  if (!(arc.distance > 0.0) || !std::isfinite(arc.distance)) {
    throw InvalidInstance(label + ": distance must be positive");
  }
  if (!(arc.speed.min() > 0.0)) throw InvalidProfile(label + ": speed must be positive in every hour");
  if (!(arc.tti.min() >= 1.0)) throw InvalidProfile(label + ": TTI must be >= 1 in every hour");
  if (!(arc.crash.min() > 0.0) || arc.crash.max() > 1.0) {
    throw InvalidProfile(label + ": crash probability must lie in (0, 1]");
  }
}

Instance::Instance(std::string name, std::vector<Node> nodes, std::vector<Arc> arcs, Fleet fleet,
                   int dummy_count)
    : name_(std::move(name)),
      nodes_(std::move(nodes)),
      arcs_(std::move(arcs)),
      fleet_(fleet),
      dummy_count_(dummy_count) {
  if (nodes_.empty()) throw InvalidInstance("instance has no depot");
  if (dummy_count_ < 0) throw InvalidInstance("dummy count must be nonnegative");
  if (fleet_.count < 1) throw InvalidInstance("fleet count must be >= 1");
  if (!(fleet_.capacity > 0.0)) throw InvalidInstance("vehicle capacity must be positive");
  if (!(fleet_.latest_time > 0.0)) throw InvalidInstance("latest time must be positive");

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    const std::string label = "node " + std::to_string(n.id);
    if (n.id != static_cast<int>(i)) throw InvalidInstance(label + ": ids must be 0..n in order");
    if (n.demand < 0.0) throw InvalidInstance(label + ": negative demand");
    if (n.service_time < 0.0) throw InvalidInstance(label + ": negative service time");
    if (n.window_open > n.window_close) throw InvalidInstance(label + ": window opens after it closes");
  }
  if (nodes_[0].demand != 0.0 || nodes_[0].service_time != 0.0) {
    throw InvalidInstance("depot must have zero demand and service time");
  }

  const std::size_t n = nodes_.size();
  arc_index_.assign(n * n, -1);
  for (std::size_t k = 0; k < arcs_.size(); ++k) {
    const Arc& a = arcs_[k];
    if (a.from < 0 || a.to < 0 || a.from >= static_cast<int>(n) || a.to >= static_cast<int>(n) ||
        a.from == a.to) {
      throw InvalidInstance("arc " + std::to_string(a.from) + "->" + std::to_string(a.to) +
                            " references an unknown node or is a loop");
    }
    validate_arc(a);
    auto& slot = arc_index_[static_cast<std::size_t>(a.from) * n + static_cast<std::size_t>(a.to)];
    if (slot != -1) {
      throw InvalidInstance("duplicate arc " + std::to_string(a.from) + "->" + std::to_string(a.to));
    }
    slot = static_cast<int>(k);
  }

  std::vector<char> seen(n, 0);
  std::deque<std::size_t> queue{0};
  seen[0] = 1;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v = 0; v < n; ++v) {
      if (!seen[v] && arc_index_[u * n + v] >= 0) {
        seen[v] = 1;
        queue.push_back(v);
      }
    }
  }
  for (std::size_t v = 1; v < n; ++v) {
    if (!seen[v]) throw InvalidInstance("customer " + std::to_string(v) + " is unreachable from the depot");
  }
}

const Arc* Instance::physical_arc(int from_node, int to_node) const {
  const auto n = nodes_.size();
  const int k = arc_index_[static_cast<std::size_t>(from_node) * n + static_cast<std::size_t>(to_node)];
  return k < 0 ? nullptr : &arcs_[static_cast<std::size_t>(k)];
}

const Arc* Instance::arc(int from_vertex, int to_vertex) const {
  if (from_vertex < 0 || to_vertex < 0 || from_vertex >= vertex_count() || to_vertex >= vertex_count()) {
    return nullptr;
  }
  const int a = physical(from_vertex);
  const int b = physical(to_vertex);
  if (a == b) return nullptr;
  return physical_arc(a, b);
}

Instance augment_depot(const Instance& instance, int m) {
  if (m < 0) throw InvalidInstance("dummy count must be nonnegative");
  return Instance(instance.name(), instance.nodes(), instance.arcs(), instance.fleet(), m);
}

namespace {

// Walks the hourly pieces of a traversal; f(hour_of_day, distance, duration).
// Without `pieces` a constant-speed arc is timed in one step.
template <typename F>
double integrate(const Arc& arc, double depart_clock, F&& f, bool pieces = true) {
  if (!(depart_clock >= 0.0)) throw InvalidProfile("departure time must be nonnegative");
  if (arc.speed.is_constant() && !pieces) {
    const double v = arc.speed.at_hour(0);
    if (!(v > 0.0)) throw InvalidProfile("nonpositive speed");
    return arc.distance / v;
  }
  double clock = depart_clock;
  double remaining = arc.distance;
  double elapsed = 0.0;
  while (true) {
    const double hour_start = std::floor(clock);
    const int hour = hour_of_day(hour_start);
    const double v = arc.speed.at_hour(hour);
    if (!(v > 0.0)) throw InvalidProfile("nonpositive speed in hour " + std::to_string(hour));
    const double window = hour_start + 1.0 - clock;
    const double reach = v * window;
    if (reach >= remaining) {
      const double dt = remaining / v;
      f(hour, remaining, dt);
      return elapsed + dt;
    }
    f(hour, reach, window);
    remaining -= reach;
    elapsed += window;
    clock = hour_start + 1.0;
  }
}

double exposure(const Arc& arc, const TimeProfile& profile, double depart_clock, ExposureRule rule) {
  if (rule == ExposureRule::DepartureHour || profile.is_constant()) {
    integrate(arc, depart_clock, [](int, double, double) {}, false);
    return profile.at(depart_clock);
  }
  double weighted = 0.0;
  integrate(arc, depart_clock, [&](int hour, double d, double) { weighted += d * profile.at_hour(hour); });
  return weighted / arc.distance;
}

}  // namespace

Traversal traverse(const Arc& arc, double depart_clock) {
  Traversal t;
  t.depart = depart_clock;
  t.duration = integrate(arc, depart_clock, [&](int hour, double d, double dt) {
    t.segments.push_back({hour, d, dt});
  });
  return t;
}

double travel_time(const Arc& arc, double depart_clock) {
  return integrate(arc, depart_clock, [](int, double, double) {}, false);
}

double tti_at(const Arc& arc, double depart_clock, ExposureRule rule) {
  return exposure(arc, arc.tti, depart_clock, rule);
}

double crash_at(const Arc& arc, double depart_clock, ExposureRule rule) {
  return exposure(arc, arc.crash, depart_clock, rule);
}

}  // namespace saferoute
