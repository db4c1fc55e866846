#pragma once

#include <limits>
#include <vector>

#include "saferoute/model.hpp"
#include "saferoute/phase1.hpp"

namespace saferoute {

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

// Time-expanded DAG for one fixed route. Position i runs over the full stop
// sequence (depot start, interior vertices, terminal); each position carries
// sorted candidate service-start times (hours after dispatch). State p at
// position i+1 is reachable from state s at position i iff
//   time(p) >= time(s) + service_i + travel_time(departure at time(s) + service_i).
struct ScheduleGraph {
  std::vector<int> stops;
  std::vector<std::vector<double>> times;
  // cost[i][s * m_next + p]: cost of ((i, s), (i+1, p)); kInfiniteCost when
  // the pair is time-inconsistent.
  std::vector<std::vector<double>> cost;
  double dispatch_hour = 0.0;

  std::size_t positions() const { return stops.size(); }
  std::size_t states(std::size_t position) const { return times[position].size(); }
  double edge(std::size_t position, std::size_t s, std::size_t p) const {
    return cost[position][s * states(position + 1) + p];
  }
};

double service_time_at(const Instance& instance, int vertex);

// Earliest service-start times with immediate departures and the latest
// service-start times from which the rest of the route still meets its
// windows. Throws ScheduleInfeasible when some position has no feasible time.
struct TimeBounds {
  std::vector<double> earliest;
  std::vector<double> latest;
};
TimeBounds feasible_time_bounds(const std::vector<int>& stops, const Instance& instance, double dispatch_hour);

// `route` is the interior vertex sequence; m equally spaced candidates per
// position over [earliest, latest] (m = 1 keeps the earliest time only).
ScheduleGraph build_schedule_graph(const std::vector<int>& route, const Instance& instance,
                                   double dispatch_hour, int m, const CostModel& cost);

// Cost of the state pair, departing at time(s) + service with the shortest
// in-motion traversal; kInfiniteCost when the pair is inconsistent.
double arc_cost(const ScheduleGraph& graph, std::size_t position, std::size_t s, std::size_t p,
                const Instance& instance, const CostModel& cost);

struct Schedule {
  std::vector<int> stops;
  std::vector<std::size_t> states;
  std::vector<double> service_start;
  std::vector<double> departure;
  std::vector<double> arrival;  // physical arrival (before any waiting)
  // Per arc: distance over (next service start - departure), the average
  // speed if the slack were driven instead of waited.
  std::vector<double> implied_speed;
  double cost = 0.0;
};

// Minimum-cost source-to-sink path by dynamic programming over positions.
// Ties break toward earlier times.
Schedule optimize_schedule(const ScheduleGraph& graph, const Instance& instance);
Schedule optimize_schedule(const std::vector<int>& route, const Instance& instance, double dispatch_hour, int m,
                           const CostModel& cost);

// Cost of a path of states, summed over its edges.
double path_cost(const ScheduleGraph& graph, const std::vector<std::size_t>& states);

// Schedule realized along a path of states.
Schedule realize_path(const ScheduleGraph& graph, const std::vector<std::size_t>& states, const Instance& instance);

// Writes a route's schedule into a timed solution.
void apply_schedule(RoutingSolution& solution, std::size_t vehicle, const Schedule& schedule,
                    const Instance& instance);

// Optimizes every nonempty route of a solution; throws ScheduleInfeasible.
RoutingSolution schedule_solution(const RoutingSolution& solution, const Instance& instance, double dispatch_hour,
                                  int m, const CostModel& cost);

}  // namespace saferoute
