#pragma once

#include <array>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "saferoute/model.hpp"
#include "saferoute/phase1.hpp"

namespace saferoute {

enum class MoveKind { Insertion, Swap, TwoOpt, ThreeOpt, Reversion, Split };
inline constexpr std::size_t kMoveKinds = 6;

std::string_view move_name(MoveKind kind);

// Neighborhood move on the interior route vectors. Positions index
// RoutingSolution::routes.
//   Insertion: remove `count` nodes at (route_a, pos_a) and insert them into
//     route_b at pos_b (an index into route_b after the removal).
//   Swap: exchange the `count`-node blocks at (route_a, pos_a) and
//     (route_b, pos_b); blocks in one route must not overlap.
//   TwoOpt: route_a == route_b reverses [pos_a, pos_b] (edge exchange inside a
//     route); otherwise the tails from pos_a and pos_b are exchanged.
//   ThreeOpt: segment [pos_a, pos_b] of route_a is relocated to index pos_c of
//     the remaining sequence (three edges exchanged).
//   Reversion: reverses [pos_a, pos_b] of route_a.
//   Split: at cut pos_a of route_a. If the vertex there is a dummy depot it is
//     removed (the two trips merge). Otherwise when route_b >= 0 the tail
//     from pos_a moves to the empty vehicle route_b, else dummy vertex
//     `dummy` is inserted at pos_a so the vehicle passes the depot there.
struct Move {
  MoveKind kind = MoveKind::Swap;
  int count = 1;
  int route_a = 0;
  int pos_a = 0;
  int route_b = 0;
  int pos_b = 0;
  int pos_c = 0;
  int dummy = -1;

  friend bool operator==(const Move&, const Move&) = default;
};

// Throws std::out_of_range when indices are invalid.
RoutingSolution apply_move(const RoutingSolution& solution, const Move& move, const Instance& instance);
void apply_move_in_place(std::vector<std::vector<int>>& routes, const Move& move, const Instance& instance);

// Routes a move may modify.
std::array<int, 2> touched_routes(const Move& move);

// Draws a valid move of the given kind; nullopt when the solution admits
// none (e.g. a two-node swap with fewer than four nodes).
std::optional<Move> random_move(const RoutingSolution& solution, const Instance& instance, MoveKind kind,
                                std::mt19937_64& rng);

}  // namespace saferoute
