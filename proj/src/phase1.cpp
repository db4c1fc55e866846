#include "saferoute/phase1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <iterator>
#include <numeric>

#include "saferoute/error.hpp"

namespace saferoute {

namespace {

constexpr double kTimeTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename F>
void for_each_leg(const RoutingSolution& s, const Instance& instance, F&& f) {
  for (std::size_t v = 0; v < s.routes.size(); ++v) {
    if (s.routes[v].empty()) continue;
    const auto stops = s.stops(instance, v);
    for (std::size_t k = 0; k + 1 < stops.size(); ++k) {
      const Arc* arc = instance.arc(stops[k], stops[k + 1]);
      if (arc == nullptr) continue;
      const double depart = s.timed ? s.timings[v][k].departure : 0.0;
      f(*arc, stops[k], s.dispatch_hour + depart);
    }
  }
}

}  // namespace

int RoutingSolution::used_vehicles() const {
  return static_cast<int>(std::count_if(routes.begin(), routes.end(), [](const auto& r) { return !r.empty(); }));
}

std::vector<int> RoutingSolution::stops(const Instance& instance, std::size_t vehicle) const {
  std::vector<int> out;
  out.reserve(routes[vehicle].size() + 2);
  out.push_back(0);
  out.insert(out.end(), routes[vehicle].begin(), routes[vehicle].end());
  out.push_back(instance.terminal());
  return out;
}

RoutingSolution make_solution(std::vector<std::vector<int>> routes) {
  RoutingSolution s;
  s.routes = std::move(routes);
  return s;
}

std::vector<StopTiming> propagate_route(const std::vector<int>& route, const Instance& instance,
                                        double dispatch_hour) {
  std::vector<StopTiming> timing;
  if (route.empty()) return timing;
  double load = 0.0;
  for (int vert : route) {
    if (instance.is_customer(vert)) load += instance.node_of(vert).demand;
  }
  timing.resize(route.size() + 2);
  const Node& depot = instance.node_of(0);
  timing[0].arrival = 0.0;
  timing[0].service_start = std::max(0.0, depot.window_open);
  timing[0].departure = timing[0].service_start;
  timing[0].load = load;
  int prev = 0;
  for (std::size_t k = 1; k < timing.size(); ++k) {
    const int vert = k <= route.size() ? route[k - 1] : instance.terminal();
    const bool valid = vert >= 0 && vert < instance.vertex_count();
    const Arc* arc = valid && prev >= 0 && prev < instance.vertex_count() ? instance.arc(prev, vert) : nullptr;
    StopTiming& t = timing[k];
    const double depart = timing[k - 1].departure;
    t.arrival = (arc == nullptr || !std::isfinite(depart)) ? kInf : depart + travel_time(*arc, dispatch_hour + depart);
    prev = vert;
    if (!valid) {
      t.service_start = t.departure = kInf;
      t.load = load;
      continue;
    }
    const Node& node = instance.node_of(vert);
    t.service_start = std::max(t.arrival, node.window_open);
    t.departure = t.service_start + (instance.is_customer(vert) ? node.service_time : 0.0);
    if (instance.is_customer(vert)) load -= node.demand;
    t.load = load;
  }
  return timing;
}

RoutingSolution propagate_schedule(const RoutingSolution& solution, const Instance& instance,
                                   double dispatch_hour) {
  RoutingSolution out;
  out.routes = solution.routes;
  out.dispatch_hour = dispatch_hour;
  out.timed = true;
  out.timings.resize(out.routes.size());
  for (std::size_t v = 0; v < out.routes.size(); ++v) {
    out.timings[v] = propagate_route(out.routes[v], instance, dispatch_hour);
  }
  return out;
}

std::vector<Violation> check_route(const std::vector<int>& route, const std::vector<StopTiming>& timing,
                                   const Instance& instance, double dispatch_hour, int vid) {
  std::vector<Violation> out;
  if (route.empty()) return out;
  const Fleet& fleet = instance.fleet();
  double demand = 0.0;
  bool structural = true;
  for (int vert : route) {
    if (vert < 0 || vert >= instance.vertex_count()) {
      out.push_back({Constraint::ArcDomain, vid, vert, "unknown vertex"});
      structural = false;
      continue;
    }
    if (vert == 0 || vert == instance.terminal()) {
      out.push_back({Constraint::DepotMisuse, vid, vert, "depot start/terminal used inside a route"});
      structural = false;
      continue;
    }
    if (instance.is_customer(vert)) demand += instance.node_of(vert).demand;
  }
  if (demand > fleet.capacity + 1e-9) {
    out.push_back({Constraint::Capacity, vid, -1,
                   "route demand " + std::to_string(demand) + " exceeds capacity " + std::to_string(fleet.capacity)});
  }
  if (!structural) return out;

  std::vector<int> stops;
  stops.reserve(route.size() + 2);
  stops.push_back(0);
  stops.insert(stops.end(), route.begin(), route.end());
  stops.push_back(instance.terminal());
  for (std::size_t k = 0; k + 1 < stops.size(); ++k) {
    if (instance.arc(stops[k], stops[k + 1]) == nullptr) {
      out.push_back({Constraint::ArcDomain, vid, stops[k + 1],
                     "no arc " + std::to_string(stops[k]) + "->" + std::to_string(stops[k + 1])});
      structural = false;
    }
  }
  if (!structural) return out;
  if (timing.size() != stops.size()) {
    out.push_back({Constraint::TimingChain, vid, -1, "timing does not match the route"});
    return out;
  }

  for (std::size_t k = 0; k < stops.size(); ++k) {
    const int vert = stops[k];
    const Node& node = instance.node_of(vert);
    const StopTiming& t = timing[k];
    const double service = instance.is_customer(vert) ? node.service_time : 0.0;
    if (t.service_start < -kTimeTol || t.arrival < -kTimeTol || t.departure < -kTimeTol) {
      out.push_back({Constraint::Nonnegativity, vid, vert, "negative time"});
    }
    if (t.load < -1e-9) out.push_back({Constraint::LoadNonnegativity, vid, vert, "negative load"});
    if (t.service_start < node.window_open - kTimeTol || t.service_start > node.window_close + kTimeTol) {
      out.push_back({Constraint::TimeWindow, vid, vert,
                     "service start " + std::to_string(t.service_start) + " outside [" +
                         std::to_string(node.window_open) + ", " + std::to_string(node.window_close) + "]"});
    }
    if (k + 1 < stops.size()) {
      if (t.departure < t.service_start + service - kTimeTol) {
        out.push_back({Constraint::DepartureBound, vid, vert, "departure before service completes"});
      }
      if (instance.is_customer(vert)) {
        const Arc* back = instance.arc(vert, instance.terminal());
        const double back_time = travel_time(*back, dispatch_hour + std::max(0.0, t.departure));
        if (t.departure + back_time > fleet.latest_time + kTimeTol) {
          out.push_back({Constraint::DepartureBound, vid, vert, "departure too late to return by L"});
        }
      }
      const Arc* arc = instance.arc(vert, stops[k + 1]);
      const double reach = t.departure + travel_time(*arc, dispatch_hour + std::max(0.0, t.departure));
      if (timing[k + 1].service_start < reach - kTimeTol) {
        out.push_back({Constraint::TimingChain, vid, stops[k + 1], "service starts before the vehicle can arrive"});
      }
    } else if (t.service_start > fleet.latest_time + kTimeTol) {
      out.push_back({Constraint::TimingChain, vid, vert, "return after latest time L"});
    }
  }
  return out;
}

std::vector<Violation> check_feasibility(const RoutingSolution& s, const Instance& instance) {
  RoutingSolution timed_copy;
  const RoutingSolution* timed = &s;
  if (!s.timed) {
    timed_copy = propagate_schedule(s, instance, s.dispatch_hour);
    timed = &timed_copy;
  }

  std::vector<Violation> out;
  const int n = instance.customer_count();
  const Fleet& fleet = instance.fleet();
  std::vector<int> visits(static_cast<std::size_t>(instance.vertex_count()), 0);

  if (s.used_vehicles() > fleet.count) {
    out.push_back({Constraint::FleetBound, -1, -1,
                   std::to_string(s.used_vehicles()) + " vehicles used, fleet has " + std::to_string(fleet.count)});
  }

  for (std::size_t v = 0; v < s.routes.size(); ++v) {
    const auto& route = s.routes[v];
    for (int vert : route) {
      if (vert > 0 && vert < instance.vertex_count()) ++visits[static_cast<std::size_t>(vert)];
    }
    const std::vector<StopTiming> none;
    const auto& timing = v < timed->timings.size() ? timed->timings[v] : none;
    auto found = check_route(route, timing, instance, s.dispatch_hour, static_cast<int>(v));
    out.insert(out.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
  }

  for (int c = 1; c <= n; ++c) {
    if (visits[static_cast<std::size_t>(c)] != 1) {
      out.push_back({Constraint::VisitCount, -1, c,
                     "customer visited " + std::to_string(visits[static_cast<std::size_t>(c)]) + " times"});
    }
  }
  for (int d = instance.first_dummy(); d < instance.vertex_count(); ++d) {
    if (visits[static_cast<std::size_t>(d)] > 1) {
      out.push_back({Constraint::VisitCount, -1, d, "dummy depot vertex used more than once"});
    }
  }
  return out;
}

bool is_feasible(const RoutingSolution& solution, const Instance& instance) {
  return check_feasibility(solution, instance).empty();
}

void validate_weights(const ObjectiveWeights& w) {
  if (w.w_crash < 0.0 || w.w_tti < 0.0 || std::abs(w.w_crash + w.w_tti - 1.0) > 1e-12) {
    throw SpecError("objective weights must be nonnegative and sum to 1");
  }
  if (!(w.crash_scale > 0.0)) throw SpecError("crash scale must be positive");
}

double default_crash_scale(const Instance& instance) {
  double tti = 0.0;
  double crash = 0.0;
  for (const Arc& a : instance.arcs()) {
    tti += a.tti.mean();
    crash += a.crash.mean();
  }
  return crash > 0.0 ? tti / crash : 1.0;
}

std::string_view objective_name(Objective objective) {
  switch (objective) {
    case Objective::Crash: return "crash";
    case Objective::Tti: return "tti";
    case Objective::Weighted: return "weighted";
    case Objective::Distance: return "distance";
    case Objective::Time: return "time";
  }
  return "unknown";
}

const std::vector<Objective>& all_objectives() {
  static const std::vector<Objective> all{Objective::Crash, Objective::Tti, Objective::Weighted,
                                          Objective::Distance, Objective::Time};
  return all;
}

Objective parse_objective(std::string_view name) {
  for (Objective o : all_objectives()) {
    if (objective_name(o) == name) return o;
  }
  throw SpecError("unknown objective '" + std::string(name) + "' (valid: crash, tti, weighted, distance, time)");
}

double crash_log_cost(double xi) { return xi >= 1.0 ? kInf : -std::log1p(-xi); }

double crash_objective(const RoutingSolution& solution, const Instance& instance) {
  double log_survival = 0.0;
  bool absorbed = false;
  for_each_leg(solution, instance, [&](const Arc& arc, int, double clock) {
    const double xi = crash_at(arc, clock);
    if (xi >= 1.0) absorbed = true;
    else log_survival += std::log1p(-xi);
  });
  if (absorbed) return 1.0;
  return -std::expm1(log_survival);
}

double tti_objective(const RoutingSolution& solution, const Instance& instance) {
  double sum = 0.0;
  for_each_leg(solution, instance, [&](const Arc& arc, int, double clock) { sum += tti_at(arc, clock); });
  return sum;
}

double distance_objective(const RoutingSolution& solution, const Instance& instance) {
  double sum = 0.0;
  for_each_leg(solution, instance, [&](const Arc& arc, int, double) { sum += arc.distance; });
  return sum;
}

double time_objective(const RoutingSolution& solution, const Instance& instance) {
  double sum = 0.0;
  for_each_leg(solution, instance, [&](const Arc& arc, int tail, double clock) {
    const double service = instance.is_customer(tail) ? instance.node_of(tail).service_time : 0.0;
    sum += service + travel_time(arc, clock);
  });
  return sum;
}

double route_duration(const RoutingSolution& solution, const Instance& instance) {
  const RoutingSolution timed =
      solution.timed ? solution : propagate_schedule(solution, instance, solution.dispatch_hour);
  double sum = 0.0;
  for (const auto& t : timed.timings) {
    if (!t.empty()) sum += t.back().service_start - t.front().departure;
  }
  return sum;
}

double weighted_objective(const RoutingSolution& solution, const Instance& instance,
                          const ObjectiveWeights& weights) {
  double value = 0.0;
  if (weights.w_crash > 0.0) value += weights.w_crash * weights.crash_scale * crash_objective(solution, instance);
  if (weights.w_tti > 0.0) value += weights.w_tti * tti_objective(solution, instance);
  return value;
}

double evaluate_objective(Objective objective, const RoutingSolution& solution, const Instance& instance,
                          const ObjectiveWeights& weights) {
  switch (objective) {
    case Objective::Crash: return crash_objective(solution, instance);
    case Objective::Tti: return tti_objective(solution, instance);
    case Objective::Weighted: return weighted_objective(solution, instance, weights);
    case Objective::Distance: return distance_objective(solution, instance);
    case Objective::Time: return time_objective(solution, instance);
  }
  return kInf;
}

double CostModel::arc_cost(const Instance& instance, int from_vertex, int to_vertex, double depart_clock) const {
  const Arc* arc = instance.arc(from_vertex, to_vertex);
  if (arc == nullptr) return kInf;
  switch (objective) {
    case Objective::Crash: return crash_log_cost(crash_at(*arc, depart_clock));
    case Objective::Tti: return tti_at(*arc, depart_clock);
    case Objective::Weighted: {
      double cost = 0.0;
      if (weights.w_crash > 0.0) {
        cost += weights.w_crash * weights.crash_scale * crash_log_cost(crash_at(*arc, depart_clock));
      }
      if (weights.w_tti > 0.0) cost += weights.w_tti * tti_at(*arc, depart_clock);
      return cost;
    }
    case Objective::Distance: return arc->distance;
    case Objective::Time: {
      const double service = instance.is_customer(from_vertex) ? instance.node_of(from_vertex).service_time : 0.0;
      return service + travel_time(*arc, depart_clock);
    }
  }
  return kInf;
}

}  // namespace saferoute
