#include "saferoute/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "saferoute/error.hpp"

namespace saferoute {

namespace {

bool tied(double a, double b) { return std::abs(a - b) <= kOracleTieTolerance * std::max(1.0, std::abs(b)); }

class RouteEnumerator {
 public:
  RouteEnumerator(const Instance& instance, const Evaluator& evaluator, const OracleOptions& limits,
                  OracleResult& out)
      : inst_(instance), eval_(evaluator), limits_(limits), out_(out) {}

  void run() {
    std::vector<int> perm(static_cast<std::size_t>(inst_.customer_count()));
    std::iota(perm.begin(), perm.end(), 1);
    const int k = inst_.fleet().count;
    do {
      std::vector<std::vector<int>> routes;
      split(perm, 0, k, routes);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

 private:
  // Cuts perm[from..] into at most `left` further segments.
  void split(const std::vector<int>& perm, std::size_t from, int left, std::vector<std::vector<int>>& routes) {
    if (from == perm.size()) {
      place_dummies(routes);
      return;
    }
    if (left == 0) return;
    if (!routes.empty() && perm[from] < routes.back().front()) return;  // canonical vehicle order
    for (std::size_t end = from + 1; end <= perm.size(); ++end) {
      routes.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(from),
                          perm.begin() + static_cast<std::ptrdiff_t>(end));
      split(perm, end, left - 1, routes);
      routes.pop_back();
    }
  }

  void place_dummies(const std::vector<std::vector<int>>& routes) {
    std::vector<std::pair<std::size_t, std::size_t>> gaps;  // (route, insert before index)
    for (std::size_t r = 0; r < routes.size(); ++r) {
      for (std::size_t p = 1; p < routes[r].size(); ++p) gaps.emplace_back(r, p);
    }
    std::vector<std::size_t> chosen;
    choose(routes, gaps, 0, chosen);
  }

  void choose(const std::vector<std::vector<int>>& routes, const std::vector<std::pair<std::size_t, std::size_t>>& gaps,
              std::size_t next, std::vector<std::size_t>& chosen) {
    score(routes, gaps, chosen);
    if (static_cast<int>(chosen.size()) == inst_.dummy_count()) return;
    for (std::size_t g = next; g < gaps.size(); ++g) {
      chosen.push_back(g);
      choose(routes, gaps, g + 1, chosen);
      chosen.pop_back();
    }
  }

  void score(const std::vector<std::vector<int>>& routes, const std::vector<std::pair<std::size_t, std::size_t>>& gaps,
             const std::vector<std::size_t>& chosen) {
    if (++out_.enumerated > limits_.budget) {
      throw BudgetExceeded("oracle enumeration exceeded its budget of " + std::to_string(limits_.budget) +
                           " candidates");
    }
    std::vector<std::vector<int>> full(static_cast<std::size_t>(inst_.fleet().count));
    int dummy = inst_.first_dummy();
    std::size_t c = 0;
    for (std::size_t r = 0; r < routes.size(); ++r) {
      for (std::size_t p = 0; p < routes[r].size(); ++p) {
        if (c < chosen.size() && gaps[chosen[c]] == std::make_pair(r, p)) {
          full[r].push_back(dummy++);
          ++c;
        }
        full[r].push_back(routes[r][p]);
      }
    }
    Evaluation e = eval_.evaluate(make_solution(std::move(full)));
    if (!e.feasible) return;
    if (!out_.feasible || (e.objective < out_.objective && !tied(e.objective, out_.objective))) {
      out_.feasible = true;
      out_.objective = e.objective;
      out_.optima.clear();
      out_.optima.push_back(std::move(e));
    } else if (tied(e.objective, out_.objective)) {
      out_.objective = std::min(out_.objective, e.objective);
      out_.optima.push_back(std::move(e));
    }
  }

  const Instance& inst_;
  const Evaluator& eval_;
  const OracleOptions& limits_;
  OracleResult& out_;
};

}  // namespace

OracleResult enumerate_routes(const Instance& instance, double dispatch_hour, const EvaluationOptions& options,
                              const OracleOptions& limits) {
  if (instance.customer_count() > limits.max_customers) {
    throw OracleRefusal("instance has " + std::to_string(instance.customer_count()) +
                        " customers; the exhaustive oracle is limited to " + std::to_string(limits.max_customers));
  }
  const auto t0 = std::chrono::steady_clock::now();
  OracleResult out;
  const Evaluator evaluator(instance, dispatch_hour, options);
  RouteEnumerator(instance, evaluator, limits, out).run();
  if (!out.feasible) out.objective = std::numeric_limits<double>::infinity();
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

ScheduleOracleResult enumerate_schedules(const ScheduleGraph& graph, long long budget) {
  ScheduleOracleResult out;
  const std::size_t r = graph.positions();
  long double paths = 1.0L;
  for (std::size_t k = 0; k < r; ++k) paths *= static_cast<long double>(graph.states(k));
  if (paths > static_cast<long double>(budget)) {
    throw BudgetExceeded("schedule enumeration needs " + std::to_string(static_cast<double>(paths)) +
                         " paths, budget is " + std::to_string(budget));
  }
  std::vector<std::size_t> states(r, 0);
  while (true) {
    ++out.enumerated;
    const double c = path_cost(graph, states);
    if (c < kInfiniteCost) {
      if (!out.feasible || (c < out.cost && !tied(c, out.cost))) {
        out.feasible = true;
        out.cost = c;
        out.optima = {states};
      } else if (tied(c, out.cost)) {
        out.cost = std::min(out.cost, c);
        out.optima.push_back(states);
      }
    }
    std::size_t k = r;
    while (k > 0) {
      --k;
      if (++states[k] < graph.states(k)) break;
      states[k] = 0;
      if (k == 0) {
        k = r;  // wrapped around
        break;
      }
    }
    if (k == r) break;
  }
  if (!out.feasible) out.cost = kInfiniteCost;
  return out;
}

ScheduleOracleResult enumerate_schedules(const std::vector<int>& route, const Instance& instance,
                                         double dispatch_hour, int m, const CostModel& cost, long long budget) {
  ScheduleGraph graph;
  try {
    graph = build_schedule_graph(route, instance, dispatch_hour, m, cost);
  } catch (const ScheduleInfeasible&) {
    ScheduleOracleResult out;
    out.cost = kInfiniteCost;
    return out;
  }
  return enumerate_schedules(graph, budget);
}

}  // namespace saferoute
