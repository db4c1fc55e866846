#include "saferoute/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "saferoute/error.hpp"

namespace saferoute {

std::string format_number(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buf, end);
}

double parse_number(std::string_view token, int line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError("expected a number, got '" + std::string(token) + "'", line);
  }
  return value;
}

namespace {

constexpr std::string_view kMagic = "saferoute-instance";

int parse_int(std::string_view token, int line) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError("expected an integer, got '" + std::string(token) + "'", line);
  }
  return value;
}

struct Line {
  int number;
  std::vector<std::string> tokens;
};

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  Line next(std::string_view expecting) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++number_;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      std::istringstream ss(raw);
      std::vector<std::string> tokens;
      for (std::string t; ss >> t;) tokens.push_back(std::move(t));
      if (!tokens.empty()) return {number_, std::move(tokens)};
    }
    throw ParseError("unexpected end of input, expecting " + std::string(expecting), number_ + 1);
  }

  Line expect(std::string_view key, std::size_t arity) {
    Line l = next(key);
    if (l.tokens[0] != key) {
      throw ParseError("expected '" + std::string(key) + "', got '" + l.tokens[0] + "'", l.number);
    }
    if (arity != 0 && l.tokens.size() != arity + 1) {
      throw ParseError("'" + std::string(key) + "' takes " + std::to_string(arity) + " values", l.number);
    }
    return l;
  }

 private:
  std::istream& in_;
  int number_ = 0;
};

TimeProfile parse_profile(const Line& l) {
  try {
    if (l.tokens.size() == 3 && l.tokens[1] == "const") {
      return TimeProfile::constant(parse_number(l.tokens[2], l.number));
    }
    if (l.tokens.size() != kHoursPerDay + 1) {
      throw ParseError("profile '" + l.tokens[0] + "' needs 24 values or 'const <v>'", l.number);
    }
    std::array<double, kHoursPerDay> v{};
    for (int h = 0; h < kHoursPerDay; ++h) {
      v[static_cast<std::size_t>(h)] = parse_number(l.tokens[static_cast<std::size_t>(h) + 1], l.number);
    }
    return TimeProfile(v);
  } catch (const InvalidProfile& e) {
    throw ParseError(e.what(), l.number);
  }
}

}  // namespace

std::string format_profile_line(std::string_view key, const TimeProfile& profile) {
  std::string out(key);
  if (profile.is_constant()) {
    out += " const ";
    out += format_number(profile.at_hour(0));
    return out;
  }
  for (double v : profile.values()) {
    out += ' ';
    out += format_number(v);
  }
  return out;
}

void write_instance(std::ostream& out, const Instance& instance) {
  out << kMagic << " 1\n";
  out << "name " << (instance.name().empty() ? "unnamed" : instance.name()) << '\n';
  const Fleet& f = instance.fleet();
  out << "fleet " << f.count << ' ' << format_number(f.capacity) << ' ' << format_number(f.latest_time) << '\n';
  out << "dummies " << instance.dummy_count() << '\n';
  out << "nodes " << instance.nodes().size() << '\n';
  for (const Node& n : instance.nodes()) {
    out << n.id << ' ' << format_number(n.x) << ' ' << format_number(n.y) << ' ' << format_number(n.demand)
        << ' ' << format_number(n.service_time) << ' ' << format_number(n.window_open) << ' '
        << format_number(n.window_close) << '\n';
  }
  out << "arcs " << instance.arcs().size() << '\n';
  for (const Arc& a : instance.arcs()) {
    out << "arc " << a.from << ' ' << a.to << ' ' << format_number(a.distance) << '\n';
    out << format_profile_line("speed", a.speed) << '\n';
    out << format_profile_line("tti", a.tti) << '\n';
    out << format_profile_line("crash", a.crash) << '\n';
  }
  out << "end\n";
}

std::string write_instance(const Instance& instance) {
  std::ostringstream ss;
  write_instance(ss, instance);
  return ss.str();
}

Instance read_instance(std::istream& in) {
  LineReader r(in);
  Line header = r.next(kMagic);
  if (header.tokens[0] != kMagic || header.tokens.size() != 2 || header.tokens[1] != "1") {
    throw ParseError("not a saferoute-instance version 1 document", header.number);
  }
  Line name = r.expect("name", 1);
  Line fleet_line = r.expect("fleet", 3);
  Fleet fleet{parse_int(fleet_line.tokens[1], fleet_line.number),
              parse_number(fleet_line.tokens[2], fleet_line.number),
              parse_number(fleet_line.tokens[3], fleet_line.number)};
  Line dummies = r.expect("dummies", 1);
  const int dummy_count = parse_int(dummies.tokens[1], dummies.number);

  Line nodes_line = r.expect("nodes", 1);
  const int node_count = parse_int(nodes_line.tokens[1], nodes_line.number);
  if (node_count < 1) throw ParseError("instance needs at least the depot node", nodes_line.number);
  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(node_count));
  for (int i = 0; i < node_count; ++i) {
    Line l = r.next("node row");
    if (l.tokens.size() != 7) throw ParseError("node row needs 7 fields", l.number);
    Node n{parse_int(l.tokens[0], l.number),      parse_number(l.tokens[1], l.number),
           parse_number(l.tokens[2], l.number),   parse_number(l.tokens[3], l.number),
           parse_number(l.tokens[4], l.number),   parse_number(l.tokens[5], l.number),
           parse_number(l.tokens[6], l.number)};
    if (n.id != i) throw ParseError("node ids must be 0..n in order", l.number);
    nodes.push_back(n);
  }

  Line arcs_line = r.expect("arcs", 1);
  const int arc_count = parse_int(arcs_line.tokens[1], arcs_line.number);
  std::vector<Arc> arcs;
  arcs.reserve(static_cast<std::size_t>(std::max(arc_count, 0)));
  for (int k = 0; k < arc_count; ++k) {
    Line l = r.expect("arc", 3);
    Arc a;
    a.from = parse_int(l.tokens[1], l.number);
    a.to = parse_int(l.tokens[2], l.number);
    a.distance = parse_number(l.tokens[3], l.number);
    a.speed = parse_profile(r.expect("speed", 0));
    a.tti = parse_profile(r.expect("tti", 0));
    a.crash = parse_profile(r.expect("crash", 0));
    arcs.push_back(std::move(a));
  }
  r.expect("end", 0);
  try {
    return Instance(name.tokens[1], std::move(nodes), std::move(arcs), fleet, dummy_count);
  } catch (const InvalidInstance& e) {
    throw ParseError(e.what(), 0);
  } catch (const InvalidProfile& e) {
    throw ParseError(e.what(), 0);
  }
}

Instance read_instance_text(std::string_view text) {
  std::istringstream ss{std::string(text)};
  return read_instance(ss);
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open instance file " + path);
  return read_instance(in);
}

void write_instance_file(const std::string& path, const Instance& instance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write " + path);
  write_instance(out, instance);
}

}  // namespace saferoute
