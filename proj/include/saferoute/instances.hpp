#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saferoute/model.hpp"
#include "saferoute/queueing.hpp"

namespace saferoute {

// ---- Solomon benchmarks -------------------------------------------------

struct SolomonOptions {
  double speed = 1.0;         // distance units per time unit
  double crash = 1e-4;        // constant per-traversal crash probability
  int dummy_count = 0;
};

// Reads the standard Solomon VRPTW layout (name, VEHICLE block, CUSTOMER
// rows: id x y demand ready due service). Customer 0 is the depot; the
// depot's due date becomes the fleet's latest time. Arcs form a complete
// Euclidean graph with constant profiles.
Instance parse_solomon(std::string_view text, const SolomonOptions& options = {});
Instance read_solomon_file(const std::string& path, const SolomonOptions& options = {});

// ---- Noisy step-function profiles ---------------------------------------

enum class ProfileKind { Speed, Tti, Crash };

struct StepInterval {
  int start_hour = 0;
  int end_hour = 0;  // exclusive
  int level = 0;     // index into StepFunctionSpec::levels
};

// Three levels over five intervals partitioning the day. Level 0 is the
// off-peak value, level 1 the shoulder value and level 2 the rush-hour value
// (adverse: lowest speed, highest TTI and crash probability).
struct StepFunctionSpec {
  std::array<double, 3> levels{};
  std::array<StepInterval, 5> intervals{{{0, 6, 0}, {6, 9, 2}, {9, 15, 1}, {15, 19, 2}, {19, 24, 1}}};
  double noise_amplitude = 0.15;
  std::uint64_t seed = 1;
};

inline constexpr double kMinGeneratedSpeed = 1.0;
inline constexpr double kMinGeneratedCrash = 1e-9;

// Step function with multiplicative uniform noise (1 + U(-a, a)) per hour,
// clipped into the kind's admissible range. Deterministic in the seed.
TimeProfile generate_profiles(const StepFunctionSpec& spec, ProfileKind kind);
TimeProfile step_function(const StepFunctionSpec& spec);

struct GeneratorSpec {
  std::string name;
  int customers = 10;
  int fleet = 0;  // 0: 2/3/5/12 for 10/25/50/80 customers, else ceil(n/7)
  double capacity = 200.0;
  double area = 20.0;          // square side, miles
  double horizon = 10.0;       // latest return, hours after dispatch
  double demand_min = 5.0;
  double demand_max = 30.0;
  double service_time = 0.1;
  double window_min = 1.0;
  double window_max = 3.0;
  double noise_amplitude = 0.15;
  bool randomize_noise_proportion = true;
  std::array<double, 3> speed_levels{55.0, 40.0, 25.0};
  std::array<double, 3> tti_levels{1.0, 1.3, 1.9};
  std::array<double, 3> crash_levels{0.01, 0.02, 0.04};
  std::uint64_t seed = 1;
};

int default_fleet_size(int customers);

// Solomon-style random (R-type) instance with noisy time-dependent profiles
// on every directed arc.
Instance generate_instance(const GeneratorSpec& spec);

// Reads "key = value" lines into a GeneratorSpec.
GeneratorSpec read_generator_spec(std::string_view text);

// ---- Scenarios ------------------------------------------------------------

struct Scenario {
  int start_hour = 0;
  std::shared_ptr<const Instance> instance;
};

// One scenario per dispatch hour 0..23.
std::vector<Scenario> build_scenarios(std::shared_ptr<const Instance> instance);

// ---- Case study and flow inputs -------------------------------------------

struct CaseStudyLoad {
  Instance instance;
  std::vector<std::string> warnings;
};

// Directory with case.cfg, nodes.csv, distances.csv and
// profiles/arc_<i>_<j>.csv for every arc of the distance matrix.
CaseStudyLoad load_case_study(const std::string& directory);

// Flow rows "arc,direction,hour,flow" (hour 0..23, header line required).
std::vector<queueing::FlowSeries> read_flow_csv(std::string_view text);

// Nominal speeds "arc,direction,nominal_speed".
struct NominalSpeed {
  std::string arc_id;
  std::string direction;
  double speed = 0.0;
};
std::vector<NominalSpeed> read_nominal_csv(std::string_view text);

std::string read_text_file(const std::string& path);

}  // namespace saferoute
