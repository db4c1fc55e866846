#include "saferoute/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "saferoute/error.hpp"

namespace saferoute {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Routes = std::vector<std::vector<int>>;

double leg_distance(const Instance& inst, int from, int to) {
  const Arc* arc = inst.arc(from, to);
  return arc == nullptr ? kInf : arc->distance;
}

double route_distance(const Instance& inst, const std::vector<int>& route) {
  if (route.empty()) return 0.0;
  double d = 0.0;
  int prev = 0;
  for (int v : route) {
    d += leg_distance(inst, prev, v);
    prev = v;
  }
  return d + leg_distance(inst, prev, inst.terminal());
}

// First-improvement 2-opt on distance with the depot fixed at both ends.
void two_opt_distance(const Instance& inst, std::vector<int>& route) {
  const int n = static_cast<int>(route.size());
  if (n < 2) return;
  const auto at = [&](int k) { return k < 0 ? 0 : (k >= n ? inst.terminal() : route[static_cast<std::size_t>(k)]); };
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 0; i < n - 1 && !improved; ++i) {
      for (int j = i + 1; j < n && !improved; ++j) {
        const double before = leg_distance(inst, at(i - 1), at(i)) + leg_distance(inst, at(j), at(j + 1));
        const double after = leg_distance(inst, at(i - 1), at(j)) + leg_distance(inst, at(i), at(j + 1));
        if (after < before - 1e-12) {
          std::reverse(route.begin() + i, route.begin() + j + 1);
          improved = true;
        }
      }
    }
  }
}

bool route_ok(const Instance& inst, const std::vector<int>& route, double dispatch_hour) {
  if (route.empty()) return true;
  return check_route(route, propagate_route(route, inst, dispatch_hour), inst, dispatch_hour).empty();
}

// Keeps the feasible prefix-greedy subsequence of each route; dropped nodes
// are reinserted at their cheapest feasible position.
void repair(const Instance& inst, Routes& routes, double dispatch_hour) {
  std::vector<int> pending;
  for (auto& route : routes) {
    std::vector<int> kept;
    for (int v : route) {
      kept.push_back(v);
      if (!route_ok(inst, kept, dispatch_hour)) {
        kept.pop_back();
        pending.push_back(v);
      }
    }
    route = std::move(kept);
  }
  std::stable_sort(pending.begin(), pending.end(), [&](int a, int b) {
    return inst.node_of(a).window_close < inst.node_of(b).window_close;
  });
  for (int v : pending) {
    double best = kInf;
    double fallback = kInf;
    std::size_t best_r = 0, best_p = 0, fb_r = 0, fb_p = 0;
    for (std::size_t r = 0; r < routes.size(); ++r) {
      const double base = route_distance(inst, routes[r]);
      for (std::size_t p = 0; p <= routes[r].size(); ++p) {
        auto trial = routes[r];
        trial.insert(trial.begin() + static_cast<std::ptrdiff_t>(p), v);
        const double delta = route_distance(inst, trial) - base;
        if (delta < fallback) {
          fallback = delta;
          fb_r = r;
          fb_p = p;
        }
        if (delta < best && route_ok(inst, trial, dispatch_hour)) {
          best = delta;
          best_r = r;
          best_p = p;
        }
      }
    }
    if (best == kInf) {
      best_r = fb_r;
      best_p = fb_p;
    }
    routes[best_r].insert(routes[best_r].begin() + static_cast<std::ptrdiff_t>(best_p), v);
  }
}

struct State {
  RoutingSolution solution;
  std::vector<RouteEvaluation> routes;
  double objective = kInf;
  int bad_routes = 0;

  bool feasible() const { return bad_routes == 0; }
};

State make_state(const Evaluator& ev, Routes routes, long long& evaluations) {
  State s;
  s.solution.routes = std::move(routes);
  s.solution.dispatch_hour = ev.dispatch_hour();
  for (const auto& r : s.solution.routes) {
    s.routes.push_back(ev.evaluate_route(r));
    ++evaluations;
    if (!s.routes.back().feasible) ++s.bad_routes;
  }
  s.objective = s.bad_routes == 0 && ev.structurally_valid(s.solution) ? ev.combine(s.routes) : kInf;
  return s;
}

// Best `capacity` distinct feasible solutions seen so far, sorted ascending.
class Elite {
 public:
  explicit Elite(std::size_t capacity) : capacity_(capacity) {}

  void offer(const State& s) {
    if (!s.feasible()) return;
    if (members_.size() == capacity_ && !(s.objective < members_.back().objective)) return;
    for (const auto& m : members_) {
      if (m.solution.routes == s.solution.routes) return;
    }
    auto pos = std::upper_bound(members_.begin(), members_.end(), s.objective,
                                [](double v, const State& m) { return v < m.objective; });
    members_.insert(pos, s);
    if (members_.size() > capacity_) members_.pop_back();
  }

  bool empty() const { return members_.empty(); }
  const std::vector<State>& members() const { return members_; }

 private:
  std::size_t capacity_;
  std::vector<State> members_;
};

}  // namespace

void validate_config(const SolverConfig& c) {
  if (!(c.initial_temperature > c.final_temperature && c.final_temperature > 0.0)) {
    throw SpecError("temperatures must satisfy T_0 > T_f > 0");
  }
  if (c.max_outer_iterations < 0) throw SpecError("max_outer_iterations must be >= 0");
  if (c.iterations_per_temperature < 1) throw SpecError("iterations_per_temperature must be >= 1");
  if (c.population_size < 1) throw SpecError("population_size must be >= 1");
  if (c.moves_per_iteration < 0) throw SpecError("moves_per_iteration must be >= 0 (0 = automatic)");
  if (c.schedule_grid < 1) throw SpecError("schedule_grid must be >= 1");
  double total = 0.0;
  for (double w : c.move_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw SpecError("move weights must be finite and nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw SpecError("at least one move weight must be positive");
  if (c.objective == Objective::Weighted) {
    ObjectiveWeights w = c.weights;
    if (c.auto_crash_scale) w.crash_scale = 1.0;
    validate_weights(w);
  }
}

int effective_moves_per_iteration(const SolverConfig& c, const Instance& instance) {
  return c.moves_per_iteration > 0 ? c.moves_per_iteration : std::max(10, 20 * instance.customer_count());
}

EvaluationOptions evaluation_options(const SolverConfig& c, const Instance& instance) {
  EvaluationOptions o;
  o.objective = c.objective;
  o.weights = c.weights;
  if (c.auto_crash_scale) o.weights.crash_scale = default_crash_scale(instance);
  o.schedule_grid = c.schedule_grid;
  o.optimize_schedule = true;
  return o;
}

double cooling_factor(double t0, double tf, int max_iterations) {
  if (!(t0 >= tf && tf > 0.0)) throw SpecError("cooling requires T_0 >= T_f > 0");
  if (max_iterations < 1) throw SpecError("cooling requires at least one iteration");
  return std::pow(tf / t0, 1.0 / max_iterations);
}

bool accept(double delta, double temperature, std::mt19937_64& rng) {
  if (!(temperature > 0.0)) throw SpecError("temperature must be positive");
  if (delta < 0.0) return true;
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return u < std::exp(-delta / temperature);
}

int polar_subslice(double angle, int vehicles) {
  if (vehicles < 1) throw SpecError("polar sweep needs at least one vehicle");
  const int slices = 2 * vehicles;
  double a = std::fmod(angle, 2.0 * std::numbers::pi);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  const int s = static_cast<int>(std::floor(a / (std::numbers::pi / vehicles)));
  return std::clamp(s, 0, slices - 1);
}

RoutingSolution polar_initial_solution(const Instance& inst, int vehicles) {
  if (vehicles < 1) throw SpecError("initial solution needs at least one vehicle");
  const int n = inst.customer_count();
  const Node& depot = inst.node_of(0);
  std::vector<std::vector<int>> slices(static_cast<std::size_t>(2 * vehicles));
  std::vector<double> dist(static_cast<std::size_t>(n + 1), 0.0);
  for (int c = 1; c <= n; ++c) {
    const Node& node = inst.node_of(c);
    const double dx = node.x - depot.x;
    const double dy = node.y - depot.y;
    dist[static_cast<std::size_t>(c)] = std::hypot(dx, dy);
    slices[static_cast<std::size_t>(polar_subslice(std::atan2(dy, dx), vehicles))].push_back(c);
  }
  const auto d = [&](int c) { return dist[static_cast<std::size_t>(c)]; };
  Routes routes(static_cast<std::size_t>(vehicles));
  for (int i = 0; i < vehicles; ++i) {
    auto near = slices[static_cast<std::size_t>(2 * i)];
    auto far = slices[static_cast<std::size_t>(2 * i + 1)];
    std::stable_sort(near.begin(), near.end(), [&](int a, int b) { return d(a) < d(b); });
    std::stable_sort(far.begin(), far.end(), [&](int a, int b) { return d(a) > d(b); });
    auto& r = routes[static_cast<std::size_t>(i)];
    r = near;
    r.insert(r.end(), far.begin(), far.end());
    two_opt_distance(inst, r);
  }

  const double cap = inst.fleet().capacity;
  std::vector<int> carry;
  for (auto& r : routes) {
    std::vector<int> seq = carry;
    seq.insert(seq.end(), r.begin(), r.end());
    carry.clear();
    r.clear();
    double load = 0.0;
    for (int c : seq) {
      const double q = inst.node_of(c).demand;
      if (load + q <= cap + 1e-9) {
        r.push_back(c);
        load += q;
      } else {
        carry.push_back(c);
      }
    }
  }
  for (int c : carry) {  // leftovers: first vehicle with room, else the last one
    auto it = std::find_if(routes.begin(), routes.end(), [&](const std::vector<int>& r) {
      double load = 0.0;
      for (int v : r) load += inst.node_of(v).demand;
      return load + inst.node_of(c).demand <= cap + 1e-9;
    });
    (it == routes.end() ? routes.back() : *it).push_back(c);
  }
  return make_solution(std::move(routes));
}

RoutingSolution initial_solution(const Instance& inst, int vehicles, double dispatch_hour) {
  RoutingSolution s = polar_initial_solution(inst, vehicles);
  repair(inst, s.routes, dispatch_hour);
  s.dispatch_hour = dispatch_hour;
  return s;
}

RoutingSolution random_initial_solution(const Instance& inst, int vehicles, double dispatch_hour,
                                        std::mt19937_64& rng) {
  if (vehicles < 1) throw SpecError("initial solution needs at least one vehicle");
  std::vector<int> order(static_cast<std::size_t>(inst.customer_count()));
  std::iota(order.begin(), order.end(), 1);
  std::shuffle(order.begin(), order.end(), rng);
  Routes routes(static_cast<std::size_t>(vehicles));
  std::size_t current = 0;
  for (int c : order) {
    while (true) {
      auto& r = routes[current];
      r.push_back(c);
      if (route_ok(inst, r, dispatch_hour) || current + 1 == routes.size()) break;
      r.pop_back();
      ++current;
    }
  }
  RoutingSolution s = make_solution(std::move(routes));
  s.dispatch_hour = dispatch_hour;
  return s;
}

SolveResult solve(const Instance& instance, double dispatch_hour, const SolverConfig& config) {
  validate_config(config);
  SolveResult result;
  std::mt19937_64 rng(config.seed);
  EvaluationOptions options = evaluation_options(config, instance);
  options.optimize_schedule = config.schedule_every_candidate;
  const Evaluator evaluator(instance, dispatch_hour, options);
  const int vehicles = instance.fleet().count;
  const int moves = effective_moves_per_iteration(config, instance);
  std::discrete_distribution<int> pick_kind(config.move_weights.begin(), config.move_weights.end());

  const RoutingSolution start = config.basic ? random_initial_solution(instance, vehicles, dispatch_hour, rng)
                                             : initial_solution(instance, vehicles, dispatch_hour);
  State initial = make_state(evaluator, start.routes, result.evaluations);
  State best = initial;
  const std::size_t pool_size = config.basic ? 1 : static_cast<std::size_t>(config.population_size);
  Elite elite(pool_size);
  elite.offer(initial);
  result.incumbent_history.push_back(best.objective);

  std::vector<State> chains{initial};
  double temperature = config.initial_temperature;
  const double alpha = config.max_outer_iterations > 0
                           ? cooling_factor(config.initial_temperature, config.final_temperature,
                                            config.max_outer_iterations)
                           : 1.0;

  for (int outer = 0; outer < config.max_outer_iterations; ++outer) {
    std::vector<State> starts;
    if (config.basic || elite.empty()) starts = chains;
    else starts = elite.members();
    chains.clear();
    for (State current : starts) {
      for (int it = 0; it < config.iterations_per_temperature; ++it) {
        for (int k = 0; k < moves; ++k) {
          const auto kind = static_cast<MoveKind>(pick_kind(rng));
          const auto move = random_move(current.solution, instance, kind, rng);
          if (!move) continue;
          Routes routes = current.solution.routes;
          apply_move_in_place(routes, *move, instance);
          const auto touched = touched_routes(*move);
          const std::size_t ta = static_cast<std::size_t>(touched[0]);
          const std::size_t tb = static_cast<std::size_t>(touched[1]);
          RouteEvaluation ea = evaluator.evaluate_route(routes[ta]);
          ++result.evaluations;
          RouteEvaluation eb;
          if (tb != ta) {
            eb = evaluator.evaluate_route(routes[tb]);
            ++result.evaluations;
          }
          std::vector<const RouteEvaluation*> view(current.routes.size());
          int bad = 0;
          for (std::size_t r = 0; r < view.size(); ++r) {
            view[r] = r == ta ? &ea : (r == tb ? &eb : &current.routes[r]);
            if (!view[r]->feasible) ++bad;
          }
          const double value = bad == 0 ? evaluator.combine(view) : kInf;

          bool take;
          if (!current.feasible()) {
            take = bad <= current.bad_routes;  // walk toward feasibility
          } else if (bad > 0) {
            take = false;  // infeasible candidates are rejected
          } else if (config.improvements_only) {
            take = value < current.objective;
          } else {
            take = accept(value - current.objective, temperature, rng);
          }
          if (!take) continue;

          current.solution.routes = std::move(routes);
          current.routes[ta] = std::move(ea);
          if (tb != ta) current.routes[tb] = std::move(eb);
          current.bad_routes = bad;
          current.objective = value;
          result.trajectory.push_back(value);
          if (current.feasible()) {
            elite.offer(current);
            if (value < best.objective) best = current;
          }
        }
      }
      chains.push_back(std::move(current));
    }
    temperature *= alpha;
    result.incumbent_history.push_back(best.objective);
  }

  if (!best.feasible()) {
    // Best effort: the chain state with the fewest infeasible routes.
    for (const auto& c : chains) {
      if (c.bad_routes < best.bad_routes) best = c;
    }
  }
  EvaluationOptions final_options = evaluation_options(config, instance);
  const Evaluator final_evaluator(instance, dispatch_hour, final_options);
  result.best = final_evaluator.evaluate(best.solution);
  result.feasible = result.best.feasible;
  return result;
}

}  // namespace saferoute
