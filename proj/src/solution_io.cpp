#include "saferoute/solution_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "saferoute/error.hpp"
#include "saferoute/instance_io.hpp"

namespace saferoute {

namespace {

constexpr std::string_view kMagic = "saferoute-solution";

class TokenLines {
 public:
  explicit TokenLines(std::istream& in) : in_(in) {}

  std::vector<std::string> expect(std::string_view key, std::size_t arity) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      std::istringstream ss(raw);
      std::vector<std::string> tokens;
      for (std::string t; ss >> t;) tokens.push_back(std::move(t));
      if (tokens.empty()) continue;
      if (tokens[0] != key) throw ParseError("expected '" + std::string(key) + "', got '" + tokens[0] + "'", line_);
      if (tokens.size() != arity + 1) {
        throw ParseError("'" + std::string(key) + "' takes " + std::to_string(arity) + " values", line_);
      }
      return tokens;
    }
    throw ParseError("unexpected end of input, expecting " + std::string(key), line_ + 1);
  }

  int line() const { return line_; }

 private:
  std::istream& in_;
  int line_ = 0;
};

int to_int(const std::string& token, int line) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError("expected an integer, got '" + token + "'", line);
  }
  return value;
}

}  // namespace

std::string format_route(const Instance& instance, const std::vector<int>& route) {
  std::string out = "0";
  for (int v : route) out += "-" + std::to_string(instance.physical(v));
  return out + "-0";
}

std::string format_routes(const Instance& instance, const RoutingSolution& solution) {
  std::string out;
  for (const auto& r : solution.routes) {
    if (r.empty()) continue;
    if (!out.empty()) out += " | ";
    out += format_route(instance, r);
  }
  return out.empty() ? "-" : out;
}

void write_solution(std::ostream& out, const Instance& instance, const Evaluation& e, Objective objective,
                    const ObjectiveWeights& weights) {
  const RoutingSolution& s = e.solution;
  out << kMagic << " 1\n";
  out << "instance " << (instance.name().empty() ? "unnamed" : instance.name()) << "\n";
  out << "dispatch_hour " << format_number(s.dispatch_hour) << "\n";
  out << "objective " << objective_name(objective) << " " << format_number(e.objective) << "\n";
  out << "feasible " << (e.feasible ? 1 : 0) << "\n";
  out << "metrics crash " << format_number(crash_objective(s, instance)) << " tti "
      << format_number(tti_objective(s, instance)) << " weighted "
      << format_number(weighted_objective(s, instance, weights)) << " distance "
      << format_number(distance_objective(s, instance)) << " time " << format_number(time_objective(s, instance))
      << " duration " << format_number(route_duration(s, instance)) << "\n";
  out << "vehicles " << s.routes.size() << "\n";
  for (std::size_t v = 0; v < s.routes.size(); ++v) {
    const auto& route = s.routes[v];
    out << "vehicle " << v << " " << route.size() << "\n";
    if (route.empty()) continue;
    const auto stops = s.stops(instance, v);
    const auto timing_at = [&](std::size_t k) {
      return s.timed && k < s.timings[v].size() ? s.timings[v][k] : StopTiming{};
    };
    for (std::size_t k = 0; k < stops.size(); ++k) {
      const StopTiming t = timing_at(k);
      double speed = 0.0;
      if (k + 1 < stops.size()) {
        const Arc* arc = instance.arc(stops[k], stops[k + 1]);
        const double span = timing_at(k + 1).service_start - t.departure;
        if (arc != nullptr && span > 0.0) speed = arc->distance / span;
      }
      out << "stop " << stops[k] << " " << format_number(t.arrival) << " " << format_number(t.service_start) << " "
          << format_number(t.departure) << " " << format_number(t.load) << " " << format_number(speed) << "\n";
    }
  }
  out << "end\n";
}

std::string write_solution(const Instance& instance, const Evaluation& evaluation, Objective objective,
                           const ObjectiveWeights& weights) {
  std::ostringstream ss;
  write_solution(ss, instance, evaluation, objective, weights);
  return ss.str();
}

SolutionFile read_solution(std::istream& in) {
  TokenLines lines(in);
  SolutionFile f;
  const auto magic = lines.expect(kMagic, 1);
  if (magic[1] != "1") throw ParseError("unsupported solution version " + magic[1], lines.line());
  f.instance_name = lines.expect("instance", 1)[1];
  f.dispatch_hour = parse_number(lines.expect("dispatch_hour", 1)[1], lines.line());
  const auto obj = lines.expect("objective", 2);
  try {
    f.objective = parse_objective(obj[1]);
  } catch (const SpecError& e) {
    throw ParseError(e.what(), lines.line());
  }
  f.value = parse_number(obj[2], lines.line());
  f.feasible = to_int(lines.expect("feasible", 1)[1], lines.line()) != 0;
  lines.expect("metrics", 12);
  const int vehicles = to_int(lines.expect("vehicles", 1)[1], lines.line());
  if (vehicles < 0) throw ParseError("negative vehicle count", lines.line());
  f.solution.dispatch_hour = f.dispatch_hour;
  f.solution.timed = true;
  f.solution.routes.resize(static_cast<std::size_t>(vehicles));
  f.solution.timings.resize(static_cast<std::size_t>(vehicles));
  for (int v = 0; v < vehicles; ++v) {
    const auto head = lines.expect("vehicle", 2);
    if (to_int(head[1], lines.line()) != v) throw ParseError("vehicles must be listed in order", lines.line());
    const int n = to_int(head[2], lines.line());
    if (n < 0) throw ParseError("negative stop count", lines.line());
    if (n == 0) continue;
    auto& route = f.solution.routes[static_cast<std::size_t>(v)];
    auto& timing = f.solution.timings[static_cast<std::size_t>(v)];
    for (int k = 0; k < n + 2; ++k) {
      const auto stop = lines.expect("stop", 6);
      const int line = lines.line();
      const int vertex = to_int(stop[1], line);
      if (k > 0 && k <= n) route.push_back(vertex);
      timing.push_back(StopTiming{parse_number(stop[2], line), parse_number(stop[3], line),
                                  parse_number(stop[4], line), parse_number(stop[5], line)});
    }
  }
  lines.expect("end", 0);
  return f;
}

SolutionFile read_solution_text(const std::string& text) {
  std::istringstream ss(text);
  return read_solution(ss);
}

}  // namespace saferoute
