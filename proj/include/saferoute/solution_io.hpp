#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "saferoute/evaluation.hpp"
#include "saferoute/model.hpp"
#include "saferoute/phase1.hpp"

namespace saferoute {

// "0-3-2-1-0": physical node ids of the full tour; depot copies print as 0.
std::string format_route(const Instance& instance, const std::vector<int>& route);
// Routes of all used vehicles joined by " | ".
std::string format_routes(const Instance& instance, const RoutingSolution& solution);

// Solution file (version 1): header, the optimized objective, every
// objective metric, and per-vehicle stop timings with the implied average
// speed to the next stop. See docs/formats.md.
void write_solution(std::ostream& out, const Instance& instance, const Evaluation& evaluation,
                    Objective objective, const ObjectiveWeights& weights = {});
std::string write_solution(const Instance& instance, const Evaluation& evaluation, Objective objective,
                           const ObjectiveWeights& weights = {});

struct SolutionFile {
  std::string instance_name;
  double dispatch_hour = 0.0;
  Objective objective = Objective::Weighted;
  double value = 0.0;
  bool feasible = false;
  RoutingSolution solution;  // routes plus recorded timings
};
SolutionFile read_solution(std::istream& in);
SolutionFile read_solution_text(const std::string& text);

}  // namespace saferoute
