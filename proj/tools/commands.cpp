#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "saferoute/config.hpp"
#include "saferoute/error.hpp"
#include "saferoute/instance_io.hpp"
#include "saferoute/instances.hpp"
#include "saferoute/oracle.hpp"
#include "saferoute/queueing.hpp"
#include "saferoute/solution_io.hpp"
#include "saferoute/solver.hpp"

namespace saferoute::cli {

namespace {

namespace fs = std::filesystem;

// Runs fn(0..n-1) on worker threads; results are written by index so output
// order never depends on completion order. Rethrows the lowest-index failure.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, std::max(n, 1));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string fixed(double v, int digits) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Aligned plain-text table.
void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) return;
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c > 0) line += "  ";
      line += r[c];
      if (c + 1 < r.size()) line.append(width[c] - r[c].size(), ' ');
    }
    out << line << "\n";
  }
}

void write_tsv(const std::string& path, const std::vector<std::vector<std::string>>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw LoadError("cannot write '" + path + "'");
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) f << (c ? "\t" : "") << r[c];
    f << "\n";
  }
}

SolverConfig load_config(const RunOptions& o) {
  SolverConfig config = o.config.empty() ? SolverConfig{} : load_solver_config(o.config);
  apply_environment(config);
  if (o.seed) config.seed = *o.seed;
  return config;
}

std::vector<int> scenario_hours(const RunOptions& o) {
  if (o.scenario) return {*o.scenario};
  std::vector<int> hours(kHoursPerDay);
  for (int h = 0; h < kHoursPerDay; ++h) hours[static_cast<std::size_t>(h)] = h;
  return hours;
}

std::string two_digit(int h) {
  std::ostringstream ss;
  ss << std::setw(2) << std::setfill('0') << h;
  return ss.str();
}

}  // namespace

Instance load_instance_any(const std::string& path, std::ostream& log) {
  if (fs::is_directory(path)) {
    CaseStudyLoad load = load_case_study(path);
    for (const auto& w : load.warnings) log << "warning: " << w << "\n";
    return std::move(load.instance);
  }
  if (!fs::exists(path)) throw LoadError("instance '" + path + "' does not exist");
  const std::string text = read_text_file(path);
  std::istringstream ss(text);
  std::string first;
  ss >> first;
  if (first == "saferoute-instance") return read_instance_text(text);
  return parse_solomon(text);
}

int cmd_speeds(const SpeedsOptions& o, std::ostream& out, std::ostream& log) {
  if (!(o.quantile >= 0.5 && o.quantile < 1.0)) throw SpecError("quantile must lie in [0.5, 1)");
  const auto series = read_flow_csv(read_text_file(o.flows));
  const auto nominal = read_nominal_csv(read_text_file(o.nominal));
  std::ostringstream csv;
  csv << "arc,direction,hour,flow,nominal_speed,jam_density,speed,regime\n";
  for (const auto& s : series) {
    const auto it = std::find_if(nominal.begin(), nominal.end(), [&](const NominalSpeed& n) {
      return n.arc_id == s.arc_id && n.direction == s.direction;
    });
    if (it == nominal.end()) {
      throw LoadError("no nominal speed for arc " + s.arc_id + " direction " + s.direction);
    }
    const queueing::QueueModel q = queueing::calibrate(s, it->speed, o.beta);
    const auto profile = queueing::build_speed_profile(q, s, o.quantile);
    if (profile.clamped_hours > 0) {
      log << "warning: arc " << s.arc_id << " " << s.direction << ": " << profile.clamped_hours
          << " hours above capacity were clamped\n";
    }
    for (int h = 0; h < kHoursPerDay; ++h) {
      const auto hh = static_cast<std::size_t>(h);
      csv << s.arc_id << "," << s.direction << "," << h << "," << format_number(s.hourly_flows[hh]) << ","
          << format_number(q.nominal_speed()) << "," << format_number(q.jam_density()) << ","
          << format_number(profile.speeds.at_hour(h)) << "," << (profile.congested[hh] ? "congested" : "free")
          << "\n";
    }
  }
  if (o.out.empty()) {
    out << csv.str();
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw LoadError("cannot write '" + o.out + "'");
    f << csv.str();
    out << "wrote " << series.size() << " speed profiles to " << o.out << "\n";
  }
  return kOk;
}

int cmd_solve(const RunOptions& o, std::ostream& out, std::ostream& log) {
  const Instance instance = load_instance_any(o.instance, log);
  SolverConfig config = load_config(o);
  if (o.objective) config.objective = parse_objective(*o.objective);
  validate_config(config);
  const auto hours = scenario_hours(o);
  const int n = static_cast<int>(hours.size());

  struct Row {
    SolveResult result;
    double time = 0, crash = 0, tti = 0, distance = 0;
    double best_time = 0, best_crash = 0, best_distance = 0;
  };
  std::vector<Row> rows(static_cast<std::size_t>(n));
  parallel_for(n, o.threads, [&](int i) {
    const double hour = hours[static_cast<std::size_t>(i)];
    Row& row = rows[static_cast<std::size_t>(i)];
    row.result = solve(instance, hour, config);
    const RoutingSolution& s = row.result.best.solution;
    row.time = time_objective(s, instance);
    row.crash = crash_objective(s, instance);
    row.tti = tti_objective(s, instance);
    row.distance = distance_objective(s, instance);
    if (!o.gaps) return;
    const auto baseline = [&](Objective objective) {
      if (objective == config.objective) return row.result.best.objective;
      SolverConfig c = config;
      c.objective = objective;
      return solve(instance, hour, c).best.objective;
    };
    row.best_time = baseline(Objective::Time);
    row.best_crash = baseline(Objective::Crash);
    row.best_distance = baseline(Objective::Distance);
  });

  std::vector<std::vector<std::string>> tsv, view;
  std::vector<std::string> head{"hour", "objective", "value", "feasible", "route", "travel_time_h", "crash", "tti",
                                "distance"};
  if (o.gaps) head.insert(head.end(), {"tt_gap_min", "cr_gap", "td_gap"});
  tsv.push_back(head);
  view.push_back(head);
  bool all_feasible = true;
  for (int i = 0; i < n; ++i) {
    const Row& r = rows[static_cast<std::size_t>(i)];
    const bool ok = r.result.feasible;
    all_feasible = all_feasible && ok;
    const std::string route = format_routes(instance, r.result.best.solution);
    const std::string h = std::to_string(hours[static_cast<std::size_t>(i)]);
    const std::string obj(objective_name(config.objective));
    std::vector<std::string> t{h, obj, format_number(r.result.best.objective), ok ? "yes" : "NO", route,
                               format_number(r.time), format_number(r.crash), format_number(r.tti),
                               format_number(r.distance)};
    std::vector<std::string> v{h, obj, sci(r.result.best.objective), ok ? "yes" : "NO", route, fixed(r.time, 4),
                               sci(r.crash), fixed(r.tti, 4), fixed(r.distance, 4)};
    if (o.gaps) {
      const double tt = (r.time - r.best_time) * 60.0;
      const double cr = r.crash - r.best_crash;
      const double td = r.distance - r.best_distance;
      t.insert(t.end(), {format_number(tt), format_number(cr), format_number(td)});
      v.insert(v.end(), {fixed(tt, 3), sci(cr), fixed(td, 3)});
    }
    tsv.push_back(std::move(t));
    view.push_back(std::move(v));
  }
  print_table(out, view);
  if (!o.out.empty()) write_tsv(o.out, tsv);
  if (!o.solutions_dir.empty()) {
    fs::create_directories(o.solutions_dir);
    for (int i = 0; i < n; ++i) {
      const fs::path p = fs::path(o.solutions_dir) / ("scenario_" + two_digit(hours[static_cast<std::size_t>(i)]) + ".sol");
      std::ofstream f(p, std::ios::binary);
      if (!f) throw LoadError("cannot write '" + p.string() + "'");
      write_solution(f, instance, rows[static_cast<std::size_t>(i)].result.best, config.objective,
                     evaluation_options(config, instance).weights);
    }
  }
  if (!all_feasible) {
    log << "some scenarios have no feasible solution (rows flagged NO)\n";
    return kInfeasible;
  }
  return kOk;
}

int cmd_verify(const RunOptions& o, std::ostream& out, std::ostream& log) {
  const Instance instance = load_instance_any(o.instance, log);
  const OracleOptions limits;
  if (instance.customer_count() > limits.max_customers) {
    throw OracleRefusal("instance has " + std::to_string(instance.customer_count()) +
                        " customers; the exhaustive oracle is limited to " + std::to_string(limits.max_customers));
  }
  const SolverConfig base = load_config(o);
  std::vector<Objective> objectives;
  if (o.objective) objectives.push_back(parse_objective(*o.objective));
  else objectives = all_objectives();
  const auto hours = scenario_hours(o);

  struct Cell {
    Objective objective;
    int hour;
    SolveResult solver;
    OracleResult oracle;
  };
  std::vector<Cell> cells;
  for (Objective obj : objectives) {
    for (int h : hours) cells.push_back(Cell{obj, h, {}, {}});
  }
  parallel_for(static_cast<int>(cells.size()), o.threads, [&](int i) {
    Cell& c = cells[static_cast<std::size_t>(i)];
    SolverConfig config = base;
    config.objective = c.objective;
    c.solver = solve(instance, c.hour, config);
    c.oracle = enumerate_routes(instance, c.hour, evaluation_options(config, instance), limits);
  });

  std::vector<std::vector<std::string>> tsv, view;
  const std::vector<std::string> head{"objective", "hour", "solver", "oracle", "gap", "ok", "optima", "enumerated"};
  tsv.push_back(head);
  view.push_back(head);
  bool all_ok = true;
  std::vector<std::string> summary;
  for (Objective obj : objectives) {
    int matched = 0, total = 0;
    for (const Cell& c : cells) {
      if (c.objective != obj) continue;
      ++total;
      double gap = 0.0;
      if (c.oracle.feasible) {
        gap = c.solver.feasible ? c.solver.best.objective - c.oracle.objective
                                : std::numeric_limits<double>::infinity();
      } else if (c.solver.feasible) {
        gap = -std::numeric_limits<double>::infinity();  // cannot happen for a correct oracle
      }
      const bool ok = std::abs(gap) <= o.tolerance || gap == 0.0;
      matched += ok;
      all_ok = all_ok && ok;
      const std::string name(objective_name(obj));
      const std::string h = std::to_string(c.hour);
      tsv.push_back({name, h, format_number(c.solver.best.objective), format_number(c.oracle.objective),
                     format_number(gap), ok ? "yes" : "NO", std::to_string(c.oracle.optima.size()),
                     std::to_string(c.oracle.enumerated)});
      view.push_back({name, h, sci(c.solver.best.objective), sci(c.oracle.objective), sci(gap), ok ? "yes" : "NO",
                      std::to_string(c.oracle.optima.size()), std::to_string(c.oracle.enumerated)});
    }
    summary.push_back(std::string(objective_name(obj)) + ": " + std::to_string(matched) + "/" +
                      std::to_string(total) + " scenarios within tolerance");
  }
  print_table(out, view);
  for (const auto& s : summary) out << s << "\n";
  if (!o.out.empty()) write_tsv(o.out, tsv);
  return all_ok ? kOk : kGapExceeded;
}

int cmd_generate(const GenerateOptions& o, std::ostream& out, std::ostream&) {
  GeneratorSpec spec = read_generator_spec(read_text_file(o.spec));
  if (o.seed) spec.seed = *o.seed;
  if (spec.customers < 1) throw SpecError("generator spec needs customers >= 1");
  const Instance instance = generate_instance(spec);
  if (o.out.empty()) {
    write_instance(out, instance);
  } else {
    write_instance_file(o.out, instance);
    out << "wrote " << instance.name() << " (" << instance.customer_count() << " customers, "
        << instance.fleet().count << " vehicles) to " << o.out << "\n";
  }
  return kOk;
}

int cmd_convert_solomon(const ConvertOptions& o, std::ostream& out, std::ostream&) {
  SolomonOptions opts;
  opts.crash = o.crash;
  opts.dummy_count = o.dummies;
  const Instance instance = read_solomon_file(o.input, opts);
  if (o.out.empty()) write_instance(out, instance);
  else write_instance_file(o.out, instance);
  return kOk;
}

}  // namespace saferoute::cli
