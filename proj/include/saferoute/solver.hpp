#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "saferoute/evaluation.hpp"
#include "saferoute/model.hpp"
#include "saferoute/moves.hpp"
#include "saferoute/phase1.hpp"

namespace saferoute {

struct SolverConfig {
  int max_outer_iterations = 10;
  double initial_temperature = 10.0;
  double final_temperature = 0.01;
  int iterations_per_temperature = 5;
  int population_size = 4;
  // Move proposals per inner iteration; 0 selects max(10, 20 * customers).
  int moves_per_iteration = 0;
  std::uint64_t seed = 1;
  Objective objective = Objective::Weighted;
  ObjectiveWeights weights;
  // Replace weights.crash_scale with default_crash_scale(instance).
  bool auto_crash_scale = true;
  int schedule_grid = 3;  // Phase-2 discretization m
  // false: candidates are timed by immediate departure and only the final
  // incumbent is scheduled.
  bool schedule_every_candidate = true;
  bool improvements_only = false;  // hill climbing
  bool basic = false;              // basic SA: random start, no population
  std::array<double, kMoveKinds> move_weights{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

// Throws SpecError.
void validate_config(const SolverConfig& config);
int effective_moves_per_iteration(const SolverConfig& config, const Instance& instance);
// Evaluation settings a solve uses on this instance (shared with the oracle
// so both score candidates identically).
EvaluationOptions evaluation_options(const SolverConfig& config, const Instance& instance);

// alpha = (T_f / T_0)^(1 / n).
double cooling_factor(double initial_temperature, double final_temperature, int max_iterations);
// Boltzmann criterion: improvements always, otherwise exp(-delta / t).
bool accept(double delta, double temperature, std::mt19937_64& rng);

// Sub-slice index of a polar angle in [0, 2 pi) for K vehicles (2K slices).
int polar_subslice(double angle, int vehicles);

// Polar-sweep construction: vehicle i takes sub-slices 2i (increasing depot
// distance) and 2i+1 (decreasing), a 2-opt pass orders each route, capacity
// overflow spills to the next vehicle and nodes that break windows are
// reinserted at their cheapest feasible position.
RoutingSolution polar_initial_solution(const Instance& instance, int vehicles);
RoutingSolution initial_solution(const Instance& instance, int vehicles, double dispatch_hour);
// Random permutation packed greedily into vehicles (basic SA start).
RoutingSolution random_initial_solution(const Instance& instance, int vehicles, double dispatch_hour,
                                        std::mt19937_64& rng);

struct SolveResult {
  Evaluation best;
  bool feasible = false;
  // Best objective before the first and after each outer iteration.
  std::vector<double> incumbent_history;
  // Objective of every accepted move, in order (trajectory for determinism checks).
  std::vector<double> trajectory;
  long long evaluations = 0;
};

SolveResult solve(const Instance& instance, double dispatch_hour, const SolverConfig& config);

}  // namespace saferoute
