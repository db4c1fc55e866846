#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "fixtures.hpp"
#include "saferoute/moves.hpp"

using namespace saferoute;

namespace {

Instance six() {
  return augment_depot(test::euclidean_instance({{0, 0}, {1, 0}, {2, 1}, {0, 2}, {-1, 1}, {1, -2}, {3, 3}}, 3), 2);
}

std::map<int, int> visit_counts(const RoutingSolution& s) {
  std::map<int, int> c;
  for (const auto& r : s.routes) {
    for (int v : r) ++c[v];
  }
  return c;
}

std::optional<Move> inverse(const Move& m, const RoutingSolution& before, const Instance& inst) {
  Move inv = m;
  switch (m.kind) {
    case MoveKind::Insertion:
      inv.route_a = m.route_b;
      inv.pos_a = m.pos_b;
      inv.route_b = m.route_a;
      inv.pos_b = m.pos_a;
      return inv;
    case MoveKind::Swap:
    case MoveKind::TwoOpt:
    case MoveKind::Reversion: return inv;
    case MoveKind::ThreeOpt:
      inv.pos_a = m.pos_c;
      inv.pos_b = m.pos_c + (m.pos_b - m.pos_a);
      inv.pos_c = m.pos_a;
      return inv;
    case MoveKind::Split: {
      const int at = before.routes[static_cast<std::size_t>(m.route_a)][static_cast<std::size_t>(m.pos_a)];
      if (inst.is_dummy(at)) return std::nullopt;  // removal of a depot visit
      if (m.route_b >= 0) {
        inv.kind = MoveKind::Insertion;
        inv.count = static_cast<int>(before.routes[static_cast<std::size_t>(m.route_a)].size()) - m.pos_a;
        inv.route_a = m.route_b;
        inv.pos_a = 0;
        inv.route_b = m.route_a;
        inv.pos_b = m.pos_a;
        return inv;
      }
      return inv;  // the inserted dummy sits at pos_a and the same move removes it
    }
  }
  return std::nullopt;
}

}  // namespace

TEST_SUITE("moves") {
  TEST_CASE("identity and equivalences") {
    const Instance inst = six();
    const RoutingSolution s = make_solution({{1, 2, 3}, {4, 5, 6}, {}});
    CHECK(apply_move(s, Move{MoveKind::Swap, 1, 0, 1, 0, 1}, inst) == s);
    const RoutingSolution rev = apply_move(s, Move{MoveKind::Reversion, 1, 0, 1, 0, 2}, inst);
    const RoutingSolution swp = apply_move(s, Move{MoveKind::Swap, 1, 0, 1, 0, 2}, inst);
    CHECK(rev == swp);
    CHECK(rev.routes[0] == std::vector<int>{1, 3, 2});
  }

  TEST_CASE("move semantics") {
    const Instance inst = six();
    const RoutingSolution s = make_solution({{1, 2, 3}, {4, 5, 6}, {}});
    CHECK(apply_move(s, Move{MoveKind::Insertion, 2, 0, 0, 1, 1}, inst).routes ==
          std::vector<std::vector<int>>{{3}, {4, 1, 2, 5, 6}, {}});
    CHECK(apply_move(s, Move{MoveKind::Swap, 2, 0, 1, 1, 0}, inst).routes ==
          std::vector<std::vector<int>>{{1, 4, 5}, {2, 3, 6}, {}});
    CHECK(apply_move(s, Move{MoveKind::TwoOpt, 1, 0, 1, 1, 2}, inst).routes ==
          std::vector<std::vector<int>>{{1, 6}, {4, 5, 2, 3}, {}});
    CHECK(apply_move(s, Move{MoveKind::ThreeOpt, 1, 0, 0, 0, 0, 2}, inst).routes[0] == std::vector<int>{2, 3, 1});
    CHECK(apply_move(s, Move{MoveKind::Split, 1, 0, 1, 2}, inst).routes ==
          std::vector<std::vector<int>>{{1}, {4, 5, 6}, {2, 3}});
    const int d = inst.first_dummy();
    const RoutingSolution with_dummy = apply_move(s, Move{MoveKind::Split, 1, 0, 2, -1, 0, 0, d}, inst);
    CHECK(with_dummy.routes[0] == std::vector<int>{1, 2, d, 3});
    CHECK(apply_move(with_dummy, Move{MoveKind::Split, 1, 0, 2, -1}, inst) == s);
    CHECK_THROWS_AS(apply_move(s, Move{MoveKind::Swap, 1, 0, 5, 1, 0}, inst), std::out_of_range);
    CHECK_THROWS_AS(apply_move(s, Move{MoveKind::Split, 1, 0, 1, 1}, inst), std::out_of_range);
    CHECK_THROWS_AS(apply_move(s, Move{MoveKind::Swap, 2, 0, 0, 0, 1}, inst), std::out_of_range);
  }

  TEST_CASE("2-opt on a crossing route shortens it") {
    // Square visited 1 -> 3 -> 2 -> 4 crosses itself.
    const Instance inst = test::euclidean_instance({{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 0}});
    const RoutingSolution crossing = make_solution({{1, 3, 2, 4}});
    const RoutingSolution fixed = apply_move(crossing, Move{MoveKind::TwoOpt, 1, 0, 1, 0, 2}, inst);
    CHECK(fixed.routes[0] == std::vector<int>{1, 2, 3, 4});
    CHECK(distance_objective(fixed, inst) < distance_objective(crossing, inst));
  }

  TEST_CASE("random moves keep visit counts and have inverses") {
    const Instance inst = six();
    std::mt19937_64 rng(2024);
    RoutingSolution s = make_solution({{1, 2, 3}, {4, 5}, {6}});
    int applied = 0, inverted = 0;
    for (int trial = 0; trial < 20000; ++trial) {
      const auto kind = static_cast<MoveKind>(trial % static_cast<int>(kMoveKinds));
      const auto m = random_move(s, inst, kind, rng);
      if (!m) continue;
      const RoutingSolution next = apply_move(s, *m, inst);
      ++applied;
      auto before = visit_counts(s), after = visit_counts(next);
      for (int c = 1; c <= inst.customer_count(); ++c) CHECK(after[c] == 1);
      for (int d = inst.first_dummy(); d < inst.vertex_count(); ++d) CHECK(after[d] <= 1);
      // Routes outside touched_routes are untouched.
      const auto touched = touched_routes(*m);
      for (std::size_t r = 0; r < s.routes.size(); ++r) {
        if (static_cast<int>(r) != touched[0] && static_cast<int>(r) != touched[1]) CHECK(next.routes[r] == s.routes[r]);
      }
      if (const auto inv = inverse(*m, s, inst)) {
        CHECK(apply_move(next, *inv, inst) == s);
        ++inverted;
      }
      s = next;
    }
    CHECK(applied > 15000);
    CHECK(inverted > 10000);
  }

  TEST_CASE("swap and reversion are involutions") {
    const Instance inst = six();
    std::mt19937_64 rng(7);
    const RoutingSolution s = make_solution({{1, 2, 3, 4}, {5, 6}, {}});
    for (int trial = 0; trial < 2000; ++trial) {
      for (MoveKind kind : {MoveKind::Swap, MoveKind::Reversion}) {
        const auto m = random_move(s, inst, kind, rng);
        REQUIRE(m);
        CHECK(apply_move(apply_move(s, *m, inst), *m, inst) == s);
      }
    }
  }

  TEST_CASE("moves without a valid target report none") {
    const Instance inst = test::euclidean_instance({{0, 0}, {1, 0}});
    std::mt19937_64 rng(1);
    const RoutingSolution s = make_solution({{1}});
    CHECK_FALSE(random_move(s, inst, MoveKind::Reversion, rng).has_value());
    CHECK_FALSE(random_move(s, inst, MoveKind::ThreeOpt, rng).has_value());
    CHECK_FALSE(random_move(s, inst, MoveKind::Split, rng).has_value());
    CHECK(move_name(MoveKind::TwoOpt) == "two_opt");
  }
}
