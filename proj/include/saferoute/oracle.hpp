#pragma once

#include <cstddef>
#include <vector>

#include "saferoute/evaluation.hpp"
#include "saferoute/model.hpp"
#include "saferoute/phase1.hpp"
#include "saferoute/phase2.hpp"

namespace saferoute {

struct OracleOptions {
  long long budget = 50'000'000;  // candidate cap; exceeding it throws BudgetExceeded
  int max_customers = 8;          // larger instances throw OracleRefusal
};

struct OracleResult {
  bool feasible = false;
  double objective = 0.0;
  std::vector<Evaluation> optima;  // every candidate within the tie tolerance
  long long enumerated = 0;
  double seconds = 0.0;
};

// Relative tolerance under which two objective values count as tied.
inline constexpr double kOracleTieTolerance = 1e-12;

// Every assignment of customers to at most K vehicles, every order within a
// route and every placement of up to m dummy depot vertices between
// consecutive customers, each scored by the same Evaluator the solver uses.
// Vehicles are interchangeable, so only assignments with increasing first
// customers are generated.
OracleResult enumerate_routes(const Instance& instance, double dispatch_hour, const EvaluationOptions& options,
                              const OracleOptions& limits = {});

struct ScheduleOracleResult {
  bool feasible = false;
  double cost = 0.0;
  std::vector<std::vector<std::size_t>> optima;  // tied state paths
  long long enumerated = 0;
};

// Evaluates every source-sink state path of the graph. Throws BudgetExceeded
// when the path count exceeds `budget`.
ScheduleOracleResult enumerate_schedules(const ScheduleGraph& graph, long long budget = 10'000'000);
// Builds the graph first; a route without feasible service times yields an
// infeasible result, as the DP reports ScheduleInfeasible.
ScheduleOracleResult enumerate_schedules(const std::vector<int>& route, const Instance& instance,
                                         double dispatch_hour, int m, const CostModel& cost,
                                         long long budget = 10'000'000);

}  // namespace saferoute
