#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "saferoute/model.hpp"

namespace saferoute {

// Timing of one stop. `service_start` is a_ik (arrival before the window
// opens waits until e_i), `departure` is p_ik.
struct StopTiming {
  double arrival = 0.0;
  double service_start = 0.0;
  double departure = 0.0;
  double load = 0.0;  // w_ik: load carried after leaving the stop
};

// Routes hold the interior vertices of each vehicle's tour; the depot start
// v_0 and terminal v_{n+1} are implicit. An empty route is an unused vehicle.
struct RoutingSolution {
  std::vector<std::vector<int>> routes;
  // Per vehicle, one entry per stop including depot start and terminal.
  std::vector<std::vector<StopTiming>> timings;
  double dispatch_hour = 0.0;
  bool timed = false;

  int used_vehicles() const;
  // Full vertex sequence of a vehicle: 0, interior..., terminal.
  std::vector<int> stops(const Instance& instance, std::size_t vehicle) const;

  friend bool operator==(const RoutingSolution& a, const RoutingSolution& b) { return a.routes == b.routes; }
};

RoutingSolution make_solution(std::vector<std::vector<int>> routes);

// Immediate-departure timing with waiting for window openings; loads
// accumulated. Times are hours after dispatch; profiles are read at
// dispatch_hour + t.
RoutingSolution propagate_schedule(const RoutingSolution& solution, const Instance& instance,
                                   double dispatch_hour);
std::vector<StopTiming> propagate_route(const std::vector<int>& route, const Instance& instance,
                                        double dispatch_hour);

// Constraint families of the routing model.
enum class Constraint {
  VisitCount,
  FleetBound,
  DispatchBalance,
  FlowConservation,
  DepotMisuse,
  Capacity,
  TimeWindow,
  TimingChain,
  DepartureBound,
  Nonnegativity,
  ArcDomain,
  LoadNonnegativity,
};

struct Violation {
  Constraint constraint;
  int vehicle = -1;
  int vertex = -1;
  std::string detail;
};

std::vector<Violation> check_feasibility(const RoutingSolution& solution, const Instance& instance);
// Per-route constraints for one timed route; visit counts, the fleet bound
// and dummy reuse are solution-level checks.
std::vector<Violation> check_route(const std::vector<int>& route, const std::vector<StopTiming>& timing,
                                   const Instance& instance, double dispatch_hour, int vehicle = -1);
bool is_feasible(const RoutingSolution& solution, const Instance& instance);

struct ObjectiveWeights {
  double w_crash = 0.5;
  double w_tti = 0.5;
  double crash_scale = 1.0;
  friend bool operator==(const ObjectiveWeights&, const ObjectiveWeights&) = default;
};

void validate_weights(const ObjectiveWeights& w);

// Scale making the mean scaled crash probability equal the mean TTI over all
// arcs and hours of the instance.
double default_crash_scale(const Instance& instance);

enum class Objective { Crash, Tti, Weighted, Distance, Time };

std::string_view objective_name(Objective objective);
Objective parse_objective(std::string_view name);  // throws SpecError
const std::vector<Objective>& all_objectives();

// 1 - prod(1 - xi) over used arcs, evaluated in log space.
double crash_objective(const RoutingSolution& solution, const Instance& instance);
// Sum of TTI over used arcs.
double tti_objective(const RoutingSolution& solution, const Instance& instance);
// Sum of arc distances.
double distance_objective(const RoutingSolution& solution, const Instance& instance);
// Sum of (service at tail + travel time); waiting excluded.
double time_objective(const RoutingSolution& solution, const Instance& instance);
// Last return minus first dispatch, summed over used vehicles (includes waiting).
double route_duration(const RoutingSolution& solution, const Instance& instance);
double weighted_objective(const RoutingSolution& solution, const Instance& instance,
                          const ObjectiveWeights& weights);

double evaluate_objective(Objective objective, const RoutingSolution& solution, const Instance& instance,
                          const ObjectiveWeights& weights);

// Additive per-arc cost whose route sum is minimized by scheduling. Crash
// exposure enters as -ln(1 - xi), which maps back to probability space via
// 1 - exp(-sum).
struct CostModel {
  Objective objective = Objective::Weighted;
  ObjectiveWeights weights;

  double arc_cost(const Instance& instance, int from_vertex, int to_vertex, double depart_clock) const;
};

double crash_log_cost(double xi);

}  // namespace saferoute
