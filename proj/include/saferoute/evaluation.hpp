#pragma once

#include <vector>

#include "saferoute/model.hpp"
#include "saferoute/phase1.hpp"

namespace saferoute {

struct EvaluationOptions {
  Objective objective = Objective::Weighted;
  ObjectiveWeights weights;
  int schedule_grid = 3;          // Phase-2 discretization m
  bool optimize_schedule = true;  // run Phase 2 on the candidate
};

// Objective components of one timed route. Crash exposure is kept as a log
// survival sum so that routes combine exactly.
struct RouteEvaluation {
  bool feasible = true;
  bool scheduled = false;  // Phase-2 timing adopted
  bool absorbed = false;   // some arc has crash probability 1
  double log_survival = 0.0;
  double tti = 0.0;
  double distance = 0.0;
  double time = 0.0;
  std::vector<StopTiming> timing;
};

struct Evaluation {
  bool feasible = false;
  double objective = 0.0;
  RoutingSolution solution;  // timed (scheduled where Phase 2 improved a route)
};

// Phase-1 timing and feasibility filter followed by Phase-2 scheduling of
// each route. A route adopts its scheduled timing when that lowers the
// additive arc cost the scheduler minimizes.
class Evaluator {
 public:
  Evaluator(const Instance& instance, double dispatch_hour, EvaluationOptions options);

  RouteEvaluation evaluate_route(const std::vector<int>& route) const;
  // Objective of a solution assembled from per-route evaluations; infinity
  // when any route is infeasible.
  double combine(const std::vector<RouteEvaluation>& routes) const;
  double combine(const std::vector<const RouteEvaluation*>& routes) const;
  // Solution-level checks (visit counts, fleet bound, dummy reuse).
  bool structurally_valid(const RoutingSolution& candidate) const;

  Evaluation evaluate(const RoutingSolution& candidate) const;
  Evaluation assemble(const RoutingSolution& candidate, const std::vector<RouteEvaluation>& routes) const;

  const Instance& instance() const { return *instance_; }
  double dispatch_hour() const { return dispatch_hour_; }
  const EvaluationOptions& options() const { return options_; }

 private:
  RouteEvaluation measure(const std::vector<int>& route, std::vector<StopTiming> timing) const;
  double surrogate(const RouteEvaluation& r) const;

  const Instance* instance_;
  double dispatch_hour_;
  EvaluationOptions options_;
};

}  // namespace saferoute
