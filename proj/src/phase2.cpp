#include "saferoute/phase2.hpp"

#include <algorithm>
#include <cmath>

#include "saferoute/error.hpp"

namespace saferoute {

namespace {

constexpr double kTol = 1e-9;

double window_close(const Instance& instance, int vertex) {
  const double close = instance.node_of(vertex).window_close;
  return instance.is_depot_copy(vertex) ? std::min(close, instance.fleet().latest_time) : close;
}

// Service-start time at `position` -> physical arrival at the next stop.
double reach(const std::vector<int>& stops, std::size_t position, double service_start, const Instance& instance,
             double dispatch_hour) {
  const double depart = service_start + service_time_at(instance, stops[position]);
  const Arc* arc = instance.arc(stops[position], stops[position + 1]);
  return depart + travel_time(*arc, dispatch_hour + depart);
}

// Departure bound: leaving a customer must still allow a direct return by L.
bool can_return(const std::vector<int>& stops, std::size_t position, double service_start,
                const Instance& instance, double dispatch_hour) {
  const int v = stops[position];
  if (!instance.is_customer(v)) return true;
  const Arc* back = instance.arc(v, instance.terminal());
  if (back == nullptr) return true;
  const double depart = service_start + service_time_at(instance, v);
  return depart + travel_time(*back, dispatch_hour + depart) <= instance.fleet().latest_time + kTol;
}

}  // namespace

double service_time_at(const Instance& instance, int vertex) {
  return instance.is_customer(vertex) ? instance.node_of(vertex).service_time : 0.0;
}

TimeBounds feasible_time_bounds(const std::vector<int>& stops, const Instance& instance, double dispatch_hour) {
  const std::size_t r = stops.size();
  for (std::size_t k = 0; k + 1 < r; ++k) {
    if (instance.arc(stops[k], stops[k + 1]) == nullptr) {
      throw ScheduleInfeasible("route uses a missing arc " + std::to_string(stops[k]) + "->" +
                               std::to_string(stops[k + 1]));
    }
  }
  TimeBounds b;
  b.earliest.resize(r);
  b.latest.resize(r);
  b.earliest[0] = std::max(0.0, instance.node_of(stops[0]).window_open);
  for (std::size_t k = 1; k < r; ++k) {
    const double arrival = reach(stops, k - 1, b.earliest[k - 1], instance, dispatch_hour);
    b.earliest[k] = std::max(arrival, instance.node_of(stops[k]).window_open);
    if (b.earliest[k] > window_close(instance, stops[k]) + kTol) {
      throw ScheduleInfeasible("no feasible service time at route position " + std::to_string(k) + " (vertex " +
                               std::to_string(stops[k]) + ")");
    }
  }

  b.latest[r - 1] = std::max(b.earliest[r - 1], window_close(instance, stops[r - 1]));
  for (std::size_t k = r - 1; k-- > 0;) {
    const auto ok = [&](double t) {
      return reach(stops, k, t, instance, dispatch_hour) <= b.latest[k + 1] &&
             can_return(stops, k, t, instance, dispatch_hour);
    };
    if (!ok(b.earliest[k])) {
      throw ScheduleInfeasible("route cannot be completed from position " + std::to_string(k));
    }
    const double upper = std::max(b.earliest[k], window_close(instance, stops[k]));
    if (ok(upper)) {
      b.latest[k] = upper;
      continue;
    }
    double lo = b.earliest[k];
    double hi = upper;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (ok(mid) ? lo : hi) = mid;
    }
    b.latest[k] = lo;
  }
  return b;
}

ScheduleGraph build_schedule_graph(const std::vector<int>& route, const Instance& instance, double dispatch_hour,
                                   int m, const CostModel& cost) {
  if (m < 1) throw SpecError("schedule discretization m must be >= 1");
  ScheduleGraph g;
  g.dispatch_hour = dispatch_hour;
  g.stops.reserve(route.size() + 2);
  g.stops.push_back(0);
  g.stops.insert(g.stops.end(), route.begin(), route.end());
  g.stops.push_back(instance.terminal());

  const TimeBounds b = feasible_time_bounds(g.stops, instance, dispatch_hour);
  const std::size_t r = g.stops.size();
  g.times.resize(r);
  for (std::size_t k = 0; k < r; ++k) {
    auto& t = g.times[k];
    if (m == 1) {
      t.push_back(b.earliest[k]);
      continue;
    }
    const double span = b.latest[k] - b.earliest[k];
    for (int j = 0; j < m - 1; ++j) t.push_back(b.earliest[k] + span * j / (m - 1));
    t.push_back(b.latest[k]);
  }

  g.cost.resize(r - 1);
  for (std::size_t k = 0; k + 1 < r; ++k) {
    const std::size_t ms = g.times[k].size();
    const std::size_t mp = g.times[k + 1].size();
    g.cost[k].assign(ms * mp, kInfiniteCost);
    for (std::size_t s = 0; s < ms; ++s) {
      const double ts = g.times[k][s];
      const double arrive = reach(g.stops, k, ts, instance, dispatch_hour);
      const bool returnable = can_return(g.stops, k, ts, instance, dispatch_hour);
      const double depart = ts + service_time_at(instance, g.stops[k]);
      double c = kInfiniteCost;
      bool priced = false;
      for (std::size_t p = 0; p < mp; ++p) {
        if (!returnable || g.times[k + 1][p] < arrive - kTol) continue;
        if (!priced) {
          c = cost.arc_cost(instance, g.stops[k], g.stops[k + 1], dispatch_hour + depart);
          priced = true;
        }
        g.cost[k][s * mp + p] = c;
      }
    }
  }
  return g;
}

double arc_cost(const ScheduleGraph& graph, std::size_t position, std::size_t s, std::size_t p,
                const Instance& instance, const CostModel& cost) {
  const auto& stops = graph.stops;
  const double ts = graph.times[position][s];
  const double arrive = reach(stops, position, ts, instance, graph.dispatch_hour);
  if (graph.times[position + 1][p] < arrive - kTol ||
      !can_return(stops, position, ts, instance, graph.dispatch_hour)) {
    return kInfiniteCost;
  }
  const double depart = ts + service_time_at(instance, stops[position]);
  return cost.arc_cost(instance, stops[position], stops[position + 1], graph.dispatch_hour + depart);
}

Schedule realize_path(const ScheduleGraph& graph, const std::vector<std::size_t>& states, const Instance& instance) {
  const std::size_t r = graph.positions();
  Schedule out;
  out.stops = graph.stops;
  out.states = states;
  out.service_start.resize(r);
  out.departure.resize(r);
  out.arrival.resize(r);
  out.implied_speed.resize(r - 1);
  for (std::size_t k = 0; k < r; ++k) {
    out.service_start[k] = graph.times[k][states[k]];
    out.departure[k] = out.service_start[k] + (k + 1 < r ? service_time_at(instance, graph.stops[k]) : 0.0);
  }
  out.arrival[0] = 0.0;
  for (std::size_t k = 0; k + 1 < r; ++k) {
    const Arc* arc = instance.arc(graph.stops[k], graph.stops[k + 1]);
    out.arrival[k + 1] = out.departure[k] + travel_time(*arc, graph.dispatch_hour + out.departure[k]);
    const double span = out.service_start[k + 1] - out.departure[k];
    out.implied_speed[k] = span > 0.0 ? arc->distance / span : 0.0;
  }
  out.cost = path_cost(graph, states);
  return out;
}

double path_cost(const ScheduleGraph& graph, const std::vector<std::size_t>& states) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < graph.positions(); ++k) total += graph.edge(k, states[k], states[k + 1]);
  return total;
}

Schedule optimize_schedule(const ScheduleGraph& graph, const Instance& instance) {
  const std::size_t r = graph.positions();
  std::vector<std::vector<double>> best(r);
  std::vector<std::vector<std::size_t>> pred(r);
  best[0].assign(graph.states(0), 0.0);
  pred[0].assign(graph.states(0), 0);
  for (std::size_t k = 0; k + 1 < r; ++k) {
    const std::size_t ms = graph.states(k);
    const std::size_t mp = graph.states(k + 1);
    best[k + 1].assign(mp, kInfiniteCost);
    pred[k + 1].assign(mp, 0);
    for (std::size_t p = 0; p < mp; ++p) {
      for (std::size_t s = 0; s < ms; ++s) {
        const double c = best[k][s] + graph.edge(k, s, p);
        if (c < best[k + 1][p]) {
          best[k + 1][p] = c;
          pred[k + 1][p] = s;
        }
      }
    }
  }
  std::size_t sink = 0;
  for (std::size_t p = 1; p < graph.states(r - 1); ++p) {
    if (best[r - 1][p] < best[r - 1][sink]) sink = p;
  }
  if (!(best[r - 1][sink] < kInfiniteCost)) throw ScheduleInfeasible("schedule graph has no source-sink path");
  std::vector<std::size_t> states(r);
  states[r - 1] = sink;
  for (std::size_t k = r - 1; k > 0; --k) states[k - 1] = pred[k][states[k]];
  Schedule out = realize_path(graph, states, instance);
  out.cost = best[r - 1][sink];
  return out;
}

Schedule optimize_schedule(const std::vector<int>& route, const Instance& instance, double dispatch_hour, int m,
                           const CostModel& cost) {
  return optimize_schedule(build_schedule_graph(route, instance, dispatch_hour, m, cost), instance);
}

void apply_schedule(RoutingSolution& solution, std::size_t vehicle, const Schedule& schedule,
                    const Instance& instance) {
  auto& timing = solution.timings[vehicle];
  timing.resize(schedule.stops.size());
  double load = 0.0;
  for (int v : solution.routes[vehicle]) {
    if (instance.is_customer(v)) load += instance.node_of(v).demand;
  }
  for (std::size_t k = 0; k < schedule.stops.size(); ++k) {
    const int v = schedule.stops[k];
    if (instance.is_customer(v)) load -= instance.node_of(v).demand;
    timing[k] = StopTiming{schedule.arrival[k], schedule.service_start[k], schedule.departure[k], load};
  }
  // The vehicle is back when it reaches the terminal; its grid time only
  // bounds the return.
  StopTiming& last = timing.back();
  last.service_start = last.departure = last.arrival;
}

RoutingSolution schedule_solution(const RoutingSolution& solution, const Instance& instance, double dispatch_hour,
                                  int m, const CostModel& cost) {
  RoutingSolution out = propagate_schedule(solution, instance, dispatch_hour);
  for (std::size_t v = 0; v < out.routes.size(); ++v) {
    if (out.routes[v].empty()) continue;
    apply_schedule(out, v, optimize_schedule(out.routes[v], instance, dispatch_hour, m, cost), instance);
  }
  return out;
}

}  // namespace saferoute
