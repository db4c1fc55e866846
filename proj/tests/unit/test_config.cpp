#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "saferoute/config.hpp"
#include "saferoute/error.hpp"

using namespace saferoute;

TEST_SUITE("config") {
  TEST_CASE("empty object keeps the defaults") {
    const SolverConfig c = parse_solver_config("{}");
    CHECK(c == SolverConfig{});
    CHECK(c.max_outer_iterations == 10);
    CHECK(c.initial_temperature == 10.0);
    CHECK(c.final_temperature == 0.01);
    CHECK(c.iterations_per_temperature == 5);
    CHECK(c.population_size == 4);
  }

  TEST_CASE("values, weights and move weights") {
    const SolverConfig c = parse_solver_config(R"({
      "seed": 77, "objective": "crash", "schedule_grid": 5,
      "weights": {"crash": 0.25, "tti": 0.75, "crash_scale": 40},
      "move_weights": {"split": 0, "three_opt": 2.5}
    })");
    CHECK(c.seed == 77);
    CHECK(c.objective == Objective::Crash);
    CHECK(c.schedule_grid == 5);
    CHECK(c.weights.w_crash == 0.25);
    CHECK_FALSE(c.auto_crash_scale);
    CHECK(c.weights.crash_scale == 40.0);
    CHECK(c.move_weights[static_cast<std::size_t>(MoveKind::Split)] == 0.0);
    CHECK(c.move_weights[static_cast<std::size_t>(MoveKind::ThreeOpt)] == 2.5);
    CHECK(parse_solver_config(R"({"weights": {"crash_scale": "auto"}})").auto_crash_scale);
  }

  TEST_CASE("round trip through JSON text") {
    SolverConfig c;
    c.seed = 5;
    c.objective = Objective::Time;
    c.auto_crash_scale = false;
    c.weights.crash_scale = 3.5;
    c.move_weights[2] = 0.5;
    c.basic = true;
    CHECK(parse_solver_config(solver_config_to_json(c)) == c);
    CHECK(parse_solver_config(solver_config_to_json(SolverConfig{})) == SolverConfig{});
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(parse_solver_config("{"), SpecError);
    CHECK_THROWS_AS(parse_solver_config("[]"), SpecError);
    CHECK_THROWS_AS(parse_solver_config(R"({"sede": 1})"), SpecError);
    CHECK_THROWS_AS(parse_solver_config(R"({"seed": "one"})"), SpecError);
    CHECK_THROWS_AS(parse_solver_config(R"({"objective": "fastest"})"), SpecError);
    CHECK_THROWS_AS(parse_solver_config(R"({"weights": {"crash": 0.9}})"), SpecError);
    CHECK_THROWS_AS(parse_solver_config(R"({"weights": {"crash_scale": "big"}})"), SpecError);
    CHECK_THROWS_AS(parse_solver_config(R"({"move_weights": {"jump": 1}})"), SpecError);
    CHECK_THROWS_AS(parse_solver_config(R"({"initial_temperature": 0.001})"), SpecError);
    CHECK_THROWS_AS(load_solver_config("/nonexistent/config.json"), SpecError);
  }

  TEST_CASE("shipped default config equals the built-in defaults") {
    CHECK(load_solver_config(std::string(SAFEROUTE_SOURCE_DIR) + "/configs/default.json") == SolverConfig{});
  }

  TEST_CASE("seed environment override") {
    SolverConfig c;
    ::setenv(kSeedEnvironmentVariable, "4242", 1);
    apply_environment(c);
    CHECK(c.seed == 4242);
    ::setenv(kSeedEnvironmentVariable, "x1", 1);
    CHECK_THROWS_AS(apply_environment(c), SpecError);
    ::unsetenv(kSeedEnvironmentVariable);
    c.seed = 3;
    apply_environment(c);
    CHECK(c.seed == 3);
  }
}
