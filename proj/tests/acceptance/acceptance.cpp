// Acceptance harness: one line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "saferoute/error.hpp"
#include "saferoute/instances.hpp"
#include "saferoute/moves.hpp"
#include "saferoute/oracle.hpp"
#include "saferoute/phase2.hpp"
#include "saferoute/queueing.hpp"
#include "saferoute/solver.hpp"

using namespace saferoute;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v, int precision = 6) {
  std::ostringstream ss;
  ss.precision(precision);
  ss << v;
  return ss.str();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const Outcome& o) {
  std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
  if (!o.pass) ++failures;
}

std::string data(const std::string& rel) { return std::string(SAFEROUTE_DATA_DIR) + "/" + rel; }

// 1. Closed forms at beta = 1.
Outcome queueing_consistency() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const queueing::QueueModel q(5.0 + 95.0 * u(rng), 10.0 + 290.0 * u(rng));
    const double k = q.jam_density() * u(rng) * (1.0 - 1e-9);
    const double linear = q.nominal_speed() * (1.0 - k / q.jam_density());
    worst = std::max(worst, std::abs(queueing::speed_from_density(q, k) - linear));
    worst = std::max(worst, std::abs((1.0 / q.jam_density()) / queueing::waiting_time(q, k) - linear));
  }
  const double t = seconds_since(start);
  return {worst <= 1e-9 && t < 1.0, "max deviation " + fmt(worst, 3) + " over 1e4 triples in " + fmt(t, 3) + " s"};
}

// 2. Capacity flow and the double root.
Outcome capacity() {
  const queueing::QueueModel q(60.0, 200.0);
  const double f = queueing::max_flow(q);
  const auto r = queueing::speeds_from_flow(q, f);
  const double dev = std::max(std::abs(r.congested - 30.0), std::abs(r.uncongested - 30.0));
  return {f == 3000.0 && dev <= 1e-9, "F_max = " + fmt(f, 17) + ", root deviation from 30 = " + fmt(dev, 3)};
}

// 3. Flow round trip.
Outcome round_trip() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const queueing::QueueModel q(5.0 + 95.0 * u(rng), 10.0 + 290.0 * u(rng));
    double s = q.nominal_speed() * u(rng);
    if (s <= 0.0) s = q.nominal_speed() * 0.5;
    const double flow = queueing::density_from_speed(q, s) * s;
    const auto roots = queueing::speeds_from_flow(q, std::min(flow, queueing::max_flow(q)));
    const double err = std::min(std::abs(roots.congested - s), std::abs(roots.uncongested - s));
    worst = std::max(worst, err);
    if (err > 1e-9) ++bad;
  }
  return {bad == 0, std::to_string(10000 - bad) + "/10000 recovered within 1e-9, max error " + fmt(worst, 3)};
}

// 4. Phase-2 DP against path enumeration.
Outcome phase2_exactness() {
  const auto start = Clock::now();
  std::mt19937_64 rng(4);
  std::vector<Instance> pool;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GeneratorSpec g;
    g.customers = 6;
    g.area = 10.0;
    g.horizon = 8.0;
    g.window_min = 2.0;
    g.window_max = 5.0;
    g.noise_amplitude = 0.3;
    g.seed = seed;
    pool.push_back(generate_instance(g));
  }
  const CostModel cost{Objective::Weighted, {0.5, 0.5, 20.0}};
  int routes = 0, mismatches = 0, infeasible_agree = 0;
  while (routes < 500) {
    const Instance& inst = pool[static_cast<std::size_t>(routes % 10)];
    std::vector<int> all{1, 2, 3, 4, 5, 6};
    std::shuffle(all.begin(), all.end(), rng);
    const int len = std::uniform_int_distribution<int>(1, 3)(rng);  // at most 5 positions
    const std::vector<int> route(all.begin(), all.begin() + len);
    const int m = std::uniform_int_distribution<int>(1, 4)(rng);
    const double hour = std::uniform_int_distribution<int>(0, 23)(rng);
    ++routes;
    const auto brute = enumerate_schedules(route, inst, hour, m, cost);
    try {
      const Schedule dp = optimize_schedule(route, inst, hour, m, cost);
      if (!brute.feasible || dp.cost != brute.cost) ++mismatches;
    } catch (const ScheduleInfeasible&) {
      if (brute.feasible) ++mismatches;
      else ++infeasible_agree;
    }
  }
  const double t = seconds_since(start);
  return {mismatches == 0 && t < 30.0, std::to_string(routes - mismatches) + "/" + std::to_string(routes) +
                                           " routes equal (" + std::to_string(infeasible_agree) +
                                           " agreed infeasible) in " + fmt(t, 3) + " s"};
}

// 5. Solver against oracle on the case study.
Outcome oracle_equivalence() {
  const Instance inst = load_case_study(data("case_study")).instance;
  double slowest_oracle = 0.0;
  int worst = 24;
  std::string per_objective;
  for (Objective o : all_objectives()) {
    int objective_worst = 24;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      SolverConfig c;
      c.seed = seed;
      c.objective = o;
      int matched = 0;
      for (int hour = 0; hour < 24; ++hour) {
        const OracleResult best = enumerate_routes(inst, hour, evaluation_options(c, inst));
        slowest_oracle = std::max(slowest_oracle, best.seconds);
        const SolveResult r = solve(inst, hour, c);
        if (best.feasible && r.feasible &&
            std::abs(r.best.objective - best.objective) <= 1e-9 * std::max(1.0, std::abs(best.objective))) {
          ++matched;
        }
      }
      objective_worst = std::min(objective_worst, matched);
    }
    worst = std::min(worst, objective_worst);
    per_objective += std::string(per_objective.empty() ? "" : ", ") + std::string(objective_name(o)) + " " +
                     std::to_string(objective_worst) + "/24";
  }
  return {worst >= 22 && slowest_oracle < 2.0,
          "worst seed per objective: " + per_objective + "; slowest oracle " + fmt(slowest_oracle, 3) + " s"};
}

// 6. Minimum distance on the case study.
Outcome distance_anchor() {
  const Instance inst = load_case_study(data("case_study")).instance;
  // Independent optimum straight from the matrix: best single tour, with or
  // without depot returns between customers.
  std::vector<int> order{1, 2, 3};
  double matrix_best = std::numeric_limits<double>::infinity();
  do {
    for (int mask = 0; mask < 4; ++mask) {
      double d = inst.physical_arc(0, order[0])->distance;
      for (int k = 0; k < 2; ++k) {
        if (mask & (1 << k)) {
          d += inst.physical_arc(order[static_cast<std::size_t>(k)], 0)->distance +
               inst.physical_arc(0, order[static_cast<std::size_t>(k + 1)])->distance;
        } else {
          d += inst.physical_arc(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k + 1)])->distance;
        }
      }
      d += inst.physical_arc(order[2], 0)->distance;
      matrix_best = std::min(matrix_best, d);
    }
  } while (std::next_permutation(order.begin(), order.end()));
  EvaluationOptions opt;
  opt.objective = Objective::Distance;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int hour = 0; hour < 24; ++hour) {
    const OracleResult r = enumerate_routes(inst, hour, opt);
    if (!r.feasible) return {false, "scenario " + std::to_string(hour) + " infeasible"};
    lo = std::min(lo, r.objective);
    hi = std::max(hi, r.objective);
  }
  const bool pass = lo == hi && std::abs(lo - matrix_best) <= 1e-9 && std::abs(lo - 32.30) < 0.005;
  return {pass, "oracle optimum " + fmt(lo, 8) + " mi in all 24 scenarios (spread " + fmt(hi - lo, 3) +
                    "), matrix optimum " + fmt(matrix_best, 8)};
}

// 7. Solomon R101 under minimum distance.
Outcome solomon() {
  const Instance inst = read_solomon_file(data("solomon/R101.txt"));
  std::string detail;
  bool pass = true;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    SolverConfig c;
    c.seed = seed;
    c.objective = Objective::Distance;
    const auto start = Clock::now();
    const SolveResult r = solve(inst, 0.0, c);
    const double t = seconds_since(start);
    const double d = r.best.objective;
    const bool ok = r.feasible && d >= 1645.7 && d <= 1.35 * 1645.7 && t <= 600.0;
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + std::string("seed ") + std::to_string(seed) + ": " + fmt(d, 7) +
              (r.feasible ? "" : " infeasible") + " with " + std::to_string(r.best.solution.used_vehicles()) +
              " vehicles in " + fmt(t, 3) + " s";
  }
  return {pass, detail + " (band [1645.7, " + fmt(1.35 * 1645.7, 6) + "])"};
}

// 8. Property suites.
Outcome properties() {
  std::vector<std::string> failed;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  // FIFO travel time on random profiles.
  for (int i = 0; i < 2000; ++i) {
    std::array<double, kHoursPerDay> v{};
    for (double& x : v) x = 1.0 + 59.0 * u(rng);
    const Arc arc{0, 1, 0.5 + 50.0 * u(rng), TimeProfile(v), TimeProfile::constant(1.0), TimeProfile::constant(0.01)};
    const double t1 = 48.0 * u(rng);
    const double t2 = t1 + 3.0 * u(rng);
    if (t2 + travel_time(arc, t2) < t1 + travel_time(arc, t1) - 1e-9) {
      failed.push_back("fifo");
      break;
    }
  }

  // Subtour freedom, incumbent monotonicity and move invariants on solver runs.
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    GeneratorSpec g;
    g.customers = 10;
    g.area = 10.0;
    g.window_min = 2.0;
    g.window_max = 6.0;
    g.seed = seed;
    const Instance inst = generate_instance(g);
    SolverConfig c;
    c.seed = seed;
    c.max_outer_iterations = 4;
    const SolveResult r = solve(inst, 7.0, c);
    for (std::size_t k = 1; k < r.incumbent_history.size(); ++k) {
      if (r.incumbent_history[k] > r.incumbent_history[k - 1]) failed.push_back("monotone incumbent");
    }
    if (r.feasible) {
      if (!check_feasibility(r.best.solution, inst).empty()) failed.push_back("subtour/feasibility");
      for (std::size_t v = 0; v < r.best.solution.routes.size(); ++v) {
        const auto& t = r.best.solution.timings[v];
        for (std::size_t k = 1; k < t.size(); ++k) {
          if (!(t[k].service_start > t[k - 1].service_start)) failed.push_back("subtour clock");
        }
      }
    }
    RoutingSolution s = r.best.solution;
    for (int i = 0; i < 2000; ++i) {
      for (MoveKind kind : {MoveKind::Swap, MoveKind::Reversion}) {
        const auto m = random_move(s, inst, kind, rng);
        if (m && !(apply_move(apply_move(s, *m, inst), *m, inst) == s)) failed.push_back("involution");
      }
    }
  }

  // Boltzmann acceptance rate at delta = t = 1.
  int taken = 0;
  for (int i = 0; i < 100000; ++i) taken += accept(1.0, 1.0, rng) ? 1 : 0;
  const double rate = taken / 100000.0;
  if (std::abs(rate - std::exp(-1.0)) > 0.01) failed.push_back("acceptance rate");

  // Cooling endpoint.
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double tf = 1e-3 + u(rng);
    const double t0 = tf * (1.0 + 1000.0 * u(rng));
    const int n = 1 + static_cast<int>(50 * u(rng));
    worst = std::max(worst, std::abs(t0 * std::pow(cooling_factor(t0, tf, n), n) - tf));
  }
  if (worst > 1e-12) failed.push_back("cooling endpoint");

  std::sort(failed.begin(), failed.end());
  failed.erase(std::unique(failed.begin(), failed.end()), failed.end());
  std::string detail = "acceptance rate " + fmt(rate, 5) + ", cooling endpoint error " + fmt(worst, 3);
  for (const auto& f : failed) detail += "; failed: " + f;
  return {failed.empty(), detail};
}

// 9. CLI determinism: each command run twice must produce identical files.
Outcome determinism() {
#ifndef SAFEROUTE_CLI
  return {false, "CLI not built"};
#else
  namespace fs = std::filesystem;
  const fs::path work = fs::temp_directory_path() / "saferoute_acceptance_determinism";
  fs::remove_all(work);
  fs::create_directories(work);
  const std::string cli = SAFEROUTE_CLI;
  {
    std::ofstream(work / "gen.spec") << "customers = 10\nseed = 5\n";
  }
  const std::vector<std::pair<std::string, std::string>> commands{
      {"speeds", "speeds --flows " + data("case_study/flows.csv") + " --nominal " + data("case_study/nominal.csv") +
                     " --out @"},
      {"solve", "solve --instance " + data("case_study") + " --objective weighted --all-scenarios --seed 3 --out @"},
      {"generate", "generate --spec " + (work / "gen.spec").string() + " --seed 11 --out @"},
      {"convert", "convert-solomon --input " + data("solomon/R101.txt") + " --out @"},
      {"verify", "verify --instance " + data("case_study") + " --objective crash --scenario 8 --seed 2 --out @"},
  };
  std::vector<std::string> failed;
  for (const auto& [name, args] : commands) {
    std::string contents[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = work / (name + std::to_string(run) + ".out");
      std::string line = args;
      line.replace(line.find('@'), 1, out.string());
      const int rc = std::system(("\"" + cli + "\" " + line + " > " + (work / "log").string() + " 2>&1").c_str());
      std::ifstream in(out, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      contents[run] = ss.str();
      if (rc != 0 || contents[run].empty()) failed.push_back(name + " (exit or empty output)");
    }
    if (contents[0] != contents[1]) failed.push_back(name + " (outputs differ)");
  }
  fs::remove_all(work);
  std::string detail = std::to_string(commands.size()) + " commands run twice";
  for (const auto& f : failed) detail += "; failed: " + f;
  return {failed.empty(), detail};
#endif
}

}  // namespace

int main(int argc, char** argv) {
  // Optional list of criterion numbers to run.
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const auto wanted = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };
  const std::vector<Outcome (*)()> criteria{queueing_consistency, capacity, round_trip, phase2_exactness,
                                            oracle_equivalence, distance_anchor, solomon, properties, determinism};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!wanted(id)) continue;
    try {
      report(id, criteria[i]());
    } catch (const std::exception& e) {
      report(id, {false, std::string("exception: ") + e.what()});
    }
  }
  return failures == 0 ? 0 : 1;
}
