#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace saferoute {

inline constexpr int kHoursPerDay = 24;

// Hour-of-day slot for an absolute clock value in hours. Clocks beyond 24 h
// wrap onto the next day.
int hour_of_day(double clock);

// 24 hourly values of one arc attribute. Slot l covers [l, l+1) hours.
class TimeProfile {
 public:
  TimeProfile();
  explicit TimeProfile(const std::array<double, kHoursPerDay>& values);
  static TimeProfile constant(double value);

  double at_hour(int hour) const { return values_[static_cast<std::size_t>(hour % kHoursPerDay)]; }
  double at(double clock) const { return at_hour(hour_of_day(clock)); }
  const std::array<double, kHoursPerDay>& values() const { return values_; }
  bool is_constant() const { return constant_; }
  double min() const;
  double max() const;
  double mean() const;

  friend bool operator==(const TimeProfile& a, const TimeProfile& b) { return a.values_ == b.values_; }

 private:
  std::array<double, kHoursPerDay> values_;
  bool constant_ = true;
};

struct Node {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  double demand = 0.0;
  double service_time = 0.0;
  double window_open = 0.0;
  double window_close = 0.0;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Arc {
  int from = 0;
  int to = 0;
  double distance = 0.0;
  TimeProfile speed;
  TimeProfile tti;
  TimeProfile crash;

  friend bool operator==(const Arc&, const Arc&) = default;
};

struct Fleet {
  int count = 1;
  double capacity = 1.0;
  double latest_time = 24.0;

  friend bool operator==(const Fleet&, const Fleet&) = default;
};

// Checks the value ranges of an arc's profiles; throws InvalidProfile.
void validate_arc(const Arc& arc);

// Graph G' = (V', A). Physical nodes are the depot (id 0) and customers
// 1..n. Vertex ids extend them with the terminal depot copy n+1 and
// `dummy_count` depot copies n+2.., all colocated with the depot and sharing
// its incident arcs.
class Instance {
 public:
  Instance() = default;
  Instance(std::string name, std::vector<Node> nodes, std::vector<Arc> arcs, Fleet fleet,
           int dummy_count = 0);

  const std::string& name() const { return name_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const Fleet& fleet() const { return fleet_; }
  int dummy_count() const { return dummy_count_; }

  int customer_count() const { return static_cast<int>(nodes_.size()) - 1; }
  int terminal() const { return customer_count() + 1; }
  int first_dummy() const { return customer_count() + 2; }
  int vertex_count() const { return static_cast<int>(nodes_.size()) + 1 + dummy_count_; }

  bool is_customer(int v) const { return v >= 1 && v <= customer_count(); }
  bool is_dummy(int v) const { return v >= first_dummy() && v < vertex_count(); }
  bool is_depot_copy(int v) const { return v == 0 || v == terminal() || is_dummy(v); }

  // Physical node behind a vertex id.
  int physical(int vertex) const { return is_customer(vertex) ? vertex : 0; }
  const Node& node_of(int vertex) const { return nodes_[static_cast<std::size_t>(physical(vertex))]; }

  // Arc between two vertices, or nullptr when the graph has none.
  const Arc* arc(int from_vertex, int to_vertex) const;
  const Arc* physical_arc(int from_node, int to_node) const;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.name_ == b.name_ && a.nodes_ == b.nodes_ && a.arcs_ == b.arcs_ &&
           a.fleet_ == b.fleet_ && a.dummy_count_ == b.dummy_count_;
  }

 private:
  std::string name_;
  std::vector<Node> nodes_;
  std::vector<Arc> arcs_;
  Fleet fleet_;
  int dummy_count_ = 0;
  std::vector<int> arc_index_;  // dense node x node, -1 when absent
};

// Returns a copy with `m` dummy depot vertices (Proposition-1 augmentation).
Instance augment_depot(const Instance& instance, int m);

// One hourly piece of a traversal.
struct TraversalSegment {
  int hour = 0;  // hour of day
  double distance = 0.0;
  double duration = 0.0;
};

struct Traversal {
  double depart = 0.0;
  double duration = 0.0;
  std::vector<TraversalSegment> segments;

  double arrive() const { return depart + duration; }
};

// How a traversal spanning several hours maps hourly TTI / crash values to
// one value for the arc.
enum class ExposureRule { DistanceWeighted, DepartureHour };

// Piecewise-constant-speed integration: distance is consumed at the speed of
// the current hour until the hour boundary, then at the next hour's speed.
Traversal traverse(const Arc& arc, double depart_clock);
double travel_time(const Arc& arc, double depart_clock);
double tti_at(const Arc& arc, double depart_clock, ExposureRule rule = ExposureRule::DistanceWeighted);
double crash_at(const Arc& arc, double depart_clock, ExposureRule rule = ExposureRule::DistanceWeighted);

}  // namespace saferoute
