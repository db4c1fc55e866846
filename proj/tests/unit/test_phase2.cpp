#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "saferoute/error.hpp"
#include "saferoute/instances.hpp"
#include "saferoute/oracle.hpp"
#include "saferoute/phase2.hpp"

using namespace saferoute;

namespace {

const CostModel kWeighted{Objective::Weighted, {0.5, 0.5, 20.0}};

Instance random_instance(std::uint64_t seed) {
  GeneratorSpec g;
  g.customers = 6;
  g.area = 10.0;
  g.horizon = 8.0;
  g.window_min = 2.0;
  g.window_max = 5.0;
  g.noise_amplitude = 0.3;
  g.seed = seed;
  return generate_instance(g);
}

std::vector<int> random_route(std::mt19937_64& rng, int customers, int max_len) {
  std::vector<int> all(static_cast<std::size_t>(customers));
  for (int i = 0; i < customers; ++i) all[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(all.begin(), all.end(), rng);
  const int len = std::uniform_int_distribution<int>(1, max_len)(rng);
  return {all.begin(), all.begin() + len};
}

double immediate_cost(const std::vector<int>& route, const Instance& inst, double hour, const CostModel& cost) {
  const auto t = propagate_route(route, inst, hour);
  std::vector<int> stops{0};
  stops.insert(stops.end(), route.begin(), route.end());
  stops.push_back(inst.terminal());
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < stops.size(); ++k) sum += cost.arc_cost(inst, stops[k], stops[k + 1], hour + t[k].departure);
  return sum;
}

}  // namespace

TEST_SUITE("phase2") {
  TEST_CASE("m = 1 reproduces immediate departure") {
    const Instance inst = random_instance(1);
    std::mt19937_64 rng(1);
    int checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const auto route = random_route(rng, 6, 3);
      Schedule s;
      try {
        s = optimize_schedule(route, inst, 7.0, 1, kWeighted);
      } catch (const ScheduleInfeasible&) {
        continue;
      }
      ++checked;
      const auto t = propagate_route(route, inst, 7.0);
      for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        CHECK(s.service_start[k] == t[k].service_start);
        CHECK(s.departure[k] == t[k].departure);
      }
      CHECK(s.cost == doctest::Approx(immediate_cost(route, inst, 7.0, kWeighted)).epsilon(1e-12));
    }
    CHECK(checked > 0);
  }

  TEST_CASE("graph shape and path counts") {
    const Instance inst = test::euclidean_instance({{0, 0}, {1, 0}, {2, 0}});
    const ScheduleGraph g = build_schedule_graph({1}, inst, 0.0, 2, kWeighted);
    CHECK(g.positions() == 3);
    for (std::size_t k = 0; k < g.positions(); ++k) {
      CHECK(g.states(k) == 2);
      CHECK(std::is_sorted(g.times[k].begin(), g.times[k].end()));
    }
    const auto all = enumerate_schedules(g);
    // The depot start carries its own states (delayed dispatch), so a route
    // with one customer has 2^3 candidate paths.
    CHECK(all.enumerated == 8);
    CHECK(all.feasible);
    CHECK_THROWS_AS(build_schedule_graph({1}, inst, 0.0, 0, kWeighted), SpecError);
  }

  TEST_CASE("state times stay inside the windows") {
    const Instance inst = random_instance(4);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
      const auto route = random_route(rng, 6, 4);
      try {
        const ScheduleGraph g = build_schedule_graph(route, inst, 8.0, 4, kWeighted);
        for (std::size_t k = 0; k < g.positions(); ++k) {
          const Node& n = inst.node_of(g.stops[k]);
          for (double t : g.times[k]) {
            CHECK(t >= n.window_open - 1e-9);
            CHECK(t <= std::max(n.window_close, g.times[k].front()) + 1e-9);
          }
        }
      } catch (const ScheduleInfeasible&) {
      }
    }
  }

  TEST_CASE("tight windows make the graph infeasible") {
    const Instance inst = test::euclidean_instance({{0, 0}, {5, 0}}, 1, 1000.0, 100.0, 0, 1.0, 2.0);
    CHECK_THROWS_AS(build_schedule_graph({1}, inst, 0.0, 3, kWeighted), ScheduleInfeasible);
    CHECK_THROWS_AS(optimize_schedule({1}, inst, 0.0, 3, kWeighted), ScheduleInfeasible);
    CHECK_FALSE(enumerate_schedules({1}, inst, 0.0, 3, kWeighted).feasible);
  }

  TEST_CASE("arc cost") {
    const Instance base = test::euclidean_instance({{0, 0}, {1, 0}});
    std::vector<Arc> arcs = base.arcs();
    for (Arc& a : arcs) {
      a.crash = test::two_level(9, 0.05, 0.01);  // peak before 9:00
      a.tti = test::two_level(9, 1.6, 1.0);
    }
    const Instance inst(base.name(), base.nodes(), arcs, base.fleet());
    const CostModel tti{Objective::Weighted, {0.0, 1.0, 1.0}};
    const CostModel crash{Objective::Weighted, {1.0, 0.0, 1.0}};
    CHECK(tti.arc_cost(inst, 0, 1, 10.0) == 1.0);
    CHECK(crash.arc_cost(inst, 0, 1, 3.0) == doctest::Approx(-std::log(0.95)));
    CHECK(1.0 - std::exp(-crash.arc_cost(inst, 0, 1, 3.0)) == doctest::Approx(0.05));

    // Waiting past the peak: depart 8.0 vs 9.0 from a schedule graph.
    std::vector<Node> nodes = inst.nodes();
    nodes[1].window_close = 5.0;
    const Instance waits(inst.name(), nodes, arcs, Fleet{1, 100.0, 10.0});
    const ScheduleGraph g = build_schedule_graph({1}, waits, 7.0, 5, tti);
    const double early = arc_cost(g, 1, 0, 0, waits, tti);
    const double late = arc_cost(g, 1, g.states(1) - 1, g.states(2) - 1, waits, tti);
    CHECK(early == doctest::Approx(1.6));
    CHECK(late == doctest::Approx(1.0));
    const Schedule best = optimize_schedule(g, waits);
    CHECK(best.cost < immediate_cost({1}, waits, 7.0, tti));
    CHECK(arc_cost(g, 0, g.states(0) - 1, 0, waits, tti) == kInfiniteCost);
  }

  TEST_CASE("zero costs tie-break to the earliest times") {
    const Instance inst = test::euclidean_instance({{0, 0}, {1, 0}, {2, 0}});
    ScheduleGraph g = build_schedule_graph({1, 2}, inst, 0.0, 4, kWeighted);
    for (auto& layer : g.cost) {
      for (double& c : layer) {
        if (c < kInfiniteCost) c = 0.0;
      }
    }
    const Schedule s = optimize_schedule(g, inst);
    CHECK(s.cost == 0.0);
    for (std::size_t st : s.states) CHECK(st == 0);
  }

  TEST_CASE("DP equals exhaustive enumeration") {
    std::mt19937_64 rng(99);
    int compared = 0;
    for (int trial = 0; trial < 300; ++trial) {
      const Instance inst = random_instance(static_cast<std::uint64_t>(trial % 10) + 1);
      const auto route = random_route(rng, 6, 3);
      const int m = std::uniform_int_distribution<int>(1, 4)(rng);
      const double hour = std::uniform_int_distribution<int>(0, 23)(rng);
      const auto oracle = enumerate_schedules(route, inst, hour, m, kWeighted);
      Schedule dp;
      try {
        dp = optimize_schedule(route, inst, hour, m, kWeighted);
      } catch (const ScheduleInfeasible&) {
        CHECK_FALSE(oracle.feasible);
        continue;
      }
      REQUIRE(oracle.feasible);
      CHECK(dp.cost == oracle.cost);
      ++compared;
    }
    CHECK(compared > 100);
  }

  TEST_CASE("refining nested grids never raises the cost") {
    std::mt19937_64 rng(5);
    int compared = 0;
    for (int trial = 0; trial < 300; ++trial) {
      const Instance inst = random_instance(static_cast<std::uint64_t>(trial % 7) + 20);
      const auto route = random_route(rng, 6, 4);
      const double hour = std::uniform_int_distribution<int>(0, 23)(rng);
      try {
        const auto cost = [&](int m) { return optimize_schedule(route, inst, hour, m, kWeighted).cost; };
        const double c1 = cost(1), c2 = cost(2), c3 = cost(3), c4 = cost(4), c5 = cost(5), c8 = cost(8), c9 = cost(9);
        const double eps = 1e-12 * std::max(1.0, c1);
        CHECK(c2 <= c1 + eps);
        CHECK(c4 <= c2 + eps);
        CHECK(c8 <= c2 + eps);
        CHECK(c3 <= c2 + eps);
        CHECK(c5 <= c3 + eps);
        CHECK(c9 <= c5 + eps);
        ++compared;
      } catch (const ScheduleInfeasible&) {
      }
    }
    CHECK(compared > 100);
  }

  TEST_CASE("optimal schedules dominate immediate departure and re-validate") {
    std::mt19937_64 rng(8);
    int compared = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const Instance inst = random_instance(static_cast<std::uint64_t>(trial % 13) + 40);
      const auto route = random_route(rng, 6, 4);
      const double hour = std::uniform_int_distribution<int>(0, 23)(rng);
      const int m = std::uniform_int_distribution<int>(1, 5)(rng);
      Schedule s;
      try {
        s = optimize_schedule(route, inst, hour, m, kWeighted);
      } catch (const ScheduleInfeasible&) {
        continue;
      }
      ++compared;
      CHECK(s.cost <= immediate_cost(route, inst, hour, kWeighted) + 1e-12);
      RoutingSolution sol = make_solution({route});
      sol.dispatch_hour = hour;
      sol.timed = true;
      sol.timings.resize(1);
      apply_schedule(sol, 0, s, inst);
      const auto v = check_route(route, sol.timings[0], inst, hour);
      CHECK(v.empty());
      for (std::size_t k = 0; k + 1 < s.stops.size(); ++k) {
        const Arc& arc = *inst.arc(s.stops[k], s.stops[k + 1]);
        const double fastest = arc.distance / travel_time(arc, hour + s.departure[k]);
        CHECK(s.implied_speed[k] <= fastest * (1.0 + 1e-9));
      }
    }
    CHECK(compared > 300);
  }

  TEST_CASE("schedule_solution optimizes every route") {
    const Instance inst = random_instance(2);
    const RoutingSolution s = schedule_solution(make_solution({{1}, {}}), inst, 7.0, 3, kWeighted);
    CHECK(s.timings[0].size() == 3);
    CHECK(s.timings[1].empty());
  }
}
