#include "saferoute/evaluation.hpp"

#include <cmath>
#include <limits>

#include "saferoute/error.hpp"
#include "saferoute/phase2.hpp"

namespace saferoute {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Evaluator::Evaluator(const Instance& instance, double dispatch_hour, EvaluationOptions options)
    : instance_(&instance), dispatch_hour_(dispatch_hour), options_(options) {
  if (options_.objective == Objective::Weighted) validate_weights(options_.weights);
  if (options_.schedule_grid < 1) throw SpecError("schedule grid must be >= 1");
}

RouteEvaluation Evaluator::measure(const std::vector<int>& route, std::vector<StopTiming> timing) const {
  RouteEvaluation r;
  r.timing = std::move(timing);
  int prev = 0;
  for (std::size_t k = 0; k <= route.size(); ++k) {
    const int next = k < route.size() ? route[k] : instance_->terminal();
    const Arc& arc = *instance_->arc(prev, next);
    const double clock = dispatch_hour_ + r.timing[k].departure;
    r.distance += arc.distance;
    if (options_.objective == Objective::Crash || options_.objective == Objective::Weighted) {
      const double xi = crash_at(arc, clock);
      if (xi >= 1.0) r.absorbed = true;
      else r.log_survival += std::log1p(-xi);
    }
    if (options_.objective == Objective::Tti || options_.objective == Objective::Weighted) r.tti += tti_at(arc, clock);
    if (options_.objective == Objective::Time) r.time += service_time_at(*instance_, prev) + travel_time(arc, clock);
    prev = next;
  }
  return r;
}

double Evaluator::surrogate(const RouteEvaluation& r) const {
  const auto& w = options_.weights;
  const double crash_cost = r.absorbed ? kInf : -r.log_survival;
  switch (options_.objective) {
    case Objective::Crash: return crash_cost;
    case Objective::Tti: return r.tti;
    case Objective::Distance: return r.distance;
    case Objective::Time: return r.time;
    case Objective::Weighted: {
      double c = 0.0;
      if (w.w_crash > 0.0) c += w.w_crash * w.crash_scale * crash_cost;
      if (w.w_tti > 0.0) c += w.w_tti * r.tti;
      return c;
    }
  }
  return kInf;
}

RouteEvaluation Evaluator::evaluate_route(const std::vector<int>& route) const {
  if (route.empty()) return RouteEvaluation{};
  auto timing = propagate_route(route, *instance_, dispatch_hour_);
  if (!check_route(route, timing, *instance_, dispatch_hour_).empty()) {
    RouteEvaluation bad;
    bad.feasible = false;
    bad.timing = std::move(timing);
    return bad;
  }
  RouteEvaluation best = measure(route, std::move(timing));
  if (!options_.optimize_schedule || options_.objective == Objective::Distance) return best;

  const CostModel cost{options_.objective, options_.weights};
  try {
    const Schedule schedule = optimize_schedule(route, *instance_, dispatch_hour_, options_.schedule_grid, cost);
    RoutingSolution holder;
    holder.routes = {route};
    holder.timings.resize(1);
    apply_schedule(holder, 0, schedule, *instance_);
    if (!check_route(route, holder.timings[0], *instance_, dispatch_hour_).empty()) return best;
    RouteEvaluation alt = measure(route, std::move(holder.timings[0]));
    if (surrogate(alt) < surrogate(best)) {
      alt.scheduled = true;
      return alt;
    }
  } catch (const ScheduleInfeasible&) {
    // The immediate-departure timing already passed the feasibility filter.
  }
  return best;
}

double Evaluator::combine(const std::vector<RouteEvaluation>& routes) const {
  std::vector<const RouteEvaluation*> view;
  view.reserve(routes.size());
  for (const auto& r : routes) view.push_back(&r);
  return combine(view);
}

double Evaluator::combine(const std::vector<const RouteEvaluation*>& routes) const {
  double log_survival = 0.0, tti = 0.0, distance = 0.0, time = 0.0;
  bool absorbed = false;
  for (const RouteEvaluation* r : routes) {
    if (!r->feasible) return kInf;
    absorbed = absorbed || r->absorbed;
    log_survival += r->log_survival;
    tti += r->tti;
    distance += r->distance;
    time += r->time;
  }
  const double crash = absorbed ? 1.0 : -std::expm1(log_survival);
  const auto& w = options_.weights;
  switch (options_.objective) {
    case Objective::Crash: return crash;
    case Objective::Tti: return tti;
    case Objective::Distance: return distance;
    case Objective::Time: return time;
    case Objective::Weighted: {
      double value = 0.0;
      if (w.w_crash > 0.0) value += w.w_crash * w.crash_scale * crash;
      if (w.w_tti > 0.0) value += w.w_tti * tti;
      return value;
    }
  }
  return kInf;
}

bool Evaluator::structurally_valid(const RoutingSolution& candidate) const {
  const Instance& inst = *instance_;
  if (candidate.used_vehicles() > inst.fleet().count) return false;
  std::vector<int> visits(static_cast<std::size_t>(inst.vertex_count()), 0);
  for (const auto& route : candidate.routes) {
    for (int v : route) {
      if (v <= 0 || v >= inst.vertex_count() || v == inst.terminal()) return false;
      ++visits[static_cast<std::size_t>(v)];
    }
  }
  for (int c = 1; c <= inst.customer_count(); ++c) {
    if (visits[static_cast<std::size_t>(c)] != 1) return false;
  }
  for (int d = inst.first_dummy(); d < inst.vertex_count(); ++d) {
    if (visits[static_cast<std::size_t>(d)] > 1) return false;
  }
  return true;
}

Evaluation Evaluator::assemble(const RoutingSolution& candidate, const std::vector<RouteEvaluation>& routes) const {
  Evaluation out;
  out.solution.routes = candidate.routes;
  out.solution.dispatch_hour = dispatch_hour_;
  out.solution.timed = true;
  out.solution.timings.resize(routes.size());
  for (std::size_t v = 0; v < routes.size(); ++v) out.solution.timings[v] = routes[v].timing;
  out.objective = combine(routes);
  out.feasible = true;
  for (const auto& r : routes) out.feasible = out.feasible && r.feasible;
  if (!out.feasible) out.objective = kInf;
  return out;
}

Evaluation Evaluator::evaluate(const RoutingSolution& candidate) const {
  std::vector<RouteEvaluation> routes;
  routes.reserve(candidate.routes.size());
  for (const auto& route : candidate.routes) routes.push_back(evaluate_route(route));
  Evaluation out = assemble(candidate, routes);
  if (!structurally_valid(candidate)) {
    out.feasible = false;
    out.objective = kInf;
  }
  return out;
}

}  // namespace saferoute
