#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "saferoute/error.hpp"
#include "saferoute/instances.hpp"

using namespace saferoute;
namespace fs = std::filesystem;

namespace {

const char* kSmallSolomon =
    "TINY\n\nVEHICLE\nNUMBER     CAPACITY\n  2         50\n\nCUSTOMER\n"
    "CUST NO.  XCOORD.   YCOORD.    DEMAND   READY TIME  DUE DATE   SERVICE   TIME\n\n"
    "    0      0         0          0          0        100          0\n"
    "    1      3         4         10          5         50         10\n"
    "    2      0         6         20          0         60          5\n";

}  // namespace

TEST_SUITE("instances") {
  TEST_CASE("Solomon parsing") {
    const Instance tiny = parse_solomon(kSmallSolomon);
    CHECK(tiny.name() == "TINY");
    CHECK(tiny.customer_count() == 2);
    CHECK(tiny.fleet().count == 2);
    CHECK(tiny.fleet().capacity == 50.0);
    CHECK(tiny.fleet().latest_time == 100.0);
    CHECK(tiny.node_of(1).window_open == 5.0);
    CHECK(tiny.node_of(1).service_time == 10.0);
    CHECK(tiny.arc(0, 1)->distance == doctest::Approx(5.0));
    CHECK(travel_time(*tiny.arc(0, 1), 0.0) == doctest::Approx(5.0));

    const Instance r101 = read_solomon_file(test::data_path("solomon/R101.txt"));
    CHECK(r101.customer_count() == 100);
    CHECK(r101.fleet().count == 25);
    CHECK(r101.fleet().capacity == 200.0);
  }

  TEST_CASE("Solomon parse errors") {
    const std::string header(kSmallSolomon, std::string(kSmallSolomon).find("    0"));
    CHECK_THROWS_AS(parse_solomon(header), ParseError);  // no customer rows
    CHECK_THROWS_AS(parse_solomon(""), ParseError);
    try {
      parse_solomon(header + "    0 0 0 0 0 100 0\n    1 3 4 10\n");
      FAIL("truncated row accepted");
    } catch (const ParseError& e) {
      CHECK(e.line() == 11);
    }
    CHECK_THROWS_AS(parse_solomon(header + "    0 0 0 0 0 100 0\n    0 3 4 10 0 5 0\n"), ParseError);
    CHECK_THROWS_AS(parse_solomon(header + "    0 0 0 0 0 100 0\n    1 x 4 10 0 5 0\n"), ParseError);
    CHECK_THROWS_AS(parse_solomon("NAME\nCUSTOMER\n"), ParseError);
  }

  TEST_CASE("zero-noise step functions are exact") {
    StepFunctionSpec s;
    s.levels = {55.0, 40.0, 25.0};
    s.noise_amplitude = 0.0;
    const TimeProfile p = generate_profiles(s, ProfileKind::Speed);
    CHECK(p == step_function(s));
    CHECK(p.at_hour(3) == 55.0);
    CHECK(p.at_hour(7) == 25.0);
    CHECK(p.at_hour(12) == 40.0);
    CHECK(p.at_hour(17) == 25.0);
    CHECK(p.at_hour(22) == 40.0);
  }

  TEST_CASE("generated profiles are deterministic and in range") {
    StepFunctionSpec s;
    s.levels = {0.01, 0.02, 0.04};
    s.noise_amplitude = 0.3;
    s.seed = 42;
    CHECK(generate_profiles(s, ProfileKind::Crash) == generate_profiles(s, ProfileKind::Crash));
    s.seed = 43;
    const TimeProfile other = generate_profiles(s, ProfileKind::Crash);
    s.seed = 42;
    CHECK_FALSE(other == generate_profiles(s, ProfileKind::Crash));

    GeneratorSpec g;
    g.customers = 10;
    g.seed = 9;
    const Instance inst = generate_instance(g);
    CHECK(inst.fleet().count == 2);
    for (const Arc& a : inst.arcs()) {
      for (int h = 0; h < kHoursPerDay; ++h) {
        CHECK(a.speed.at_hour(h) > 0.0);
        CHECK(a.tti.at_hour(h) >= 1.0);
        CHECK(a.crash.at_hour(h) > 0.0);
        CHECK(a.crash.at_hour(h) <= 1.0);
      }
    }
    CHECK(generate_instance(g) == inst);
  }

  TEST_CASE("invalid step levels are rejected") {
    StepFunctionSpec s;
    s.levels = {0.9, 1.2, 1.5};
    CHECK_THROWS_AS(generate_profiles(s, ProfileKind::Tti), SpecError);
    s.levels = {0.1, 0.2, 1.5};
    CHECK_THROWS_AS(generate_profiles(s, ProfileKind::Crash), SpecError);
    s.levels = {25.0, 40.0, 55.0};
    CHECK_THROWS_AS(generate_profiles(s, ProfileKind::Speed), SpecError);
    s.levels = {55.0, 40.0, 25.0};
    s.intervals[1].start_hour = 7;
    CHECK_THROWS_AS(generate_profiles(s, ProfileKind::Speed), SpecError);
    GeneratorSpec g;
    g.customers = 0;
    CHECK_THROWS_AS(generate_instance(g), SpecError);
  }

  TEST_CASE("noise is uniform within the amplitude") {
    StepFunctionSpec s;
    s.levels = {0.01, 0.02, 0.04};
    s.noise_amplitude = 0.2;
    const TimeProfile base = step_function(s);
    std::vector<double> u;
    for (std::uint64_t seed = 1; u.size() < 10000; ++seed) {
      s.seed = seed;
      const TimeProfile p = generate_profiles(s, ProfileKind::Crash);
      for (int h = 0; h < kHoursPerDay && u.size() < 10000; ++h) {
        const double dev = p.at_hour(h) / base.at_hour(h) - 1.0;
        REQUIRE(std::abs(dev) <= 0.2 + 1e-12);
        u.push_back((dev + 0.2) / 0.4);
      }
    }
    std::sort(u.begin(), u.end());
    double ks = 0.0;
    const double n = static_cast<double>(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      ks = std::max({ks, (i + 1) / n - u[i], u[i] - i / n});
    }
    CHECK(ks < 1.628 / std::sqrt(n));  // alpha = 0.01
  }

  TEST_CASE("fleet sizes follow the benchmark configurations") {
    CHECK(default_fleet_size(10) == 2);
    CHECK(default_fleet_size(25) == 3);
    CHECK(default_fleet_size(50) == 5);
    CHECK(default_fleet_size(80) == 12);
  }

  TEST_CASE("generator spec text") {
    const GeneratorSpec g = read_generator_spec("customers = 25 # mid\nseed = 4\nspeed_levels = 50,40,20\n");
    CHECK(g.customers == 25);
    CHECK(g.seed == 4);
    CHECK(g.speed_levels[2] == 20.0);
    CHECK_THROWS_AS(read_generator_spec("bogus = 1\n"), ParseError);
    CHECK_THROWS_AS(read_generator_spec("customers 4\n"), ParseError);
  }

  TEST_CASE("24 scenarios; constant profiles make start hours equivalent") {
    auto inst = std::make_shared<const Instance>(test::euclidean_instance({{0, 0}, {1, 0}}));
    const auto sc = build_scenarios(inst);
    REQUIRE(sc.size() == 24);
    for (int h = 0; h < 24; ++h) CHECK(sc[static_cast<std::size_t>(h)].start_hour == h);
    CHECK(sc[7].start_hour == 7);
    const Arc& a = *inst->arc(0, 1);
    CHECK(travel_time(a, 0.0) == travel_time(a, 12.0));
    CHECK(crash_at(a, 0.0) == crash_at(a, 12.0));
  }

  TEST_CASE("case study load") {
    const CaseStudyLoad cs = load_case_study(test::data_path("case_study"));
    const Instance& inst = cs.instance;
    CHECK(inst.customer_count() == 3);
    CHECK(inst.fleet().count == 1);
    CHECK(inst.fleet().capacity == 300.0);
    CHECK(inst.dummy_count() == 2);
    CHECK(inst.is_dummy(inst.first_dummy()));
    CHECK(inst.is_dummy(inst.first_dummy() + 1));
    CHECK(inst.vertex_count() == 7);
    double demand = 0.0;
    for (int c = 1; c <= 3; ++c) {
      demand += inst.node_of(c).demand;
      CHECK(inst.node_of(c).service_time == 0.1);
      CHECK(inst.node_of(c).window_open == 0.0);
      CHECK(inst.node_of(c).window_close == 1.3);
    }
    CHECK(demand == 300.0);
    CHECK(cs.warnings.empty());
    CHECK(inst.arcs().size() == 12);
  }

  TEST_CASE("case study with a missing profile names the arc") {
    const fs::path tmp = fs::temp_directory_path() / "saferoute_missing_profile";
    fs::remove_all(tmp);
    fs::copy(test::data_path("case_study"), tmp, fs::copy_options::recursive);
    fs::remove(tmp / "profiles" / "arc_1_2.csv");
    try {
      load_case_study(tmp.string());
      FAIL("missing profile accepted");
    } catch (const LoadError& e) {
      CHECK(std::string(e.what()).find("1->2") != std::string::npos);
    }
    fs::remove_all(tmp);
  }

  TEST_CASE("demand above fleet capacity warns") {
    const fs::path tmp = fs::temp_directory_path() / "saferoute_overfull";
    fs::remove_all(tmp);
    fs::copy(test::data_path("case_study"), tmp, fs::copy_options::recursive);
    std::ofstream(tmp / "case.cfg") << "name = over\nvehicles = 1\ncapacity = 250\nlatest = 3.0\ndummies = 2\n";
    const CaseStudyLoad cs = load_case_study(tmp.string());
    CHECK(cs.warnings.size() == 1);
    fs::remove_all(tmp);
  }

  TEST_CASE("flow and nominal CSV") {
    std::string csv = "arc,direction,hour,flow\n";
    for (int h = 0; h < 24; ++h) csv += "1,ab," + std::to_string(h) + "," + std::to_string(100 + h) + "\n";
    const auto s = read_flow_csv(csv);
    REQUIRE(s.size() == 1);
    CHECK(s[0].hourly_flows[23] == 123.0);
    CHECK_THROWS_AS(read_flow_csv(""), ParseError);
    CHECK_THROWS_AS(read_flow_csv("arc,direction,hour,flow\n"), ParseError);
    CHECK_THROWS_AS(read_flow_csv("arc,direction,hour,flow\n1,ab,0,5\n"), ParseError);  // missing hours
    try {
      read_flow_csv(csv + "1,ab,3,-4\n");
      FAIL("negative flow accepted");
    } catch (const ParseError& e) {
      CHECK(e.line() == 26);
    }
    const auto nominal = read_nominal_csv("arc,direction,nominal_speed\n1,ab,40\n");
    REQUIRE(nominal.size() == 1);
    CHECK(nominal[0].speed == 40.0);
    CHECK_THROWS_AS(read_nominal_csv(""), ParseError);
  }
}
