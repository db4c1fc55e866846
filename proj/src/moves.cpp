#include "saferoute/moves.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace saferoute {

namespace {

using Routes = std::vector<std::vector<int>>;

void require(bool ok, const char* what) {
  if (!ok) throw std::out_of_range(std::string("invalid move: ") + what);
}

int uniform(std::mt19937_64& rng, int lo, int hi) {  // inclusive
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::vector<int> routes_with_at_least(const Routes& routes, std::size_t n) {
  std::vector<int> out;
  for (std::size_t r = 0; r < routes.size(); ++r) {
    if (routes[r].size() >= n) out.push_back(static_cast<int>(r));
  }
  return out;
}

int pick(const std::vector<int>& v, std::mt19937_64& rng) {
  return v[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(v.size()) - 1))];
}

int size_of(const Routes& routes, int r) { return static_cast<int>(routes[static_cast<std::size_t>(r)].size()); }

std::vector<int> unused_dummies(const Routes& routes, const Instance& instance) {
  std::vector<bool> used(static_cast<std::size_t>(instance.vertex_count()), false);
  for (const auto& r : routes) {
    for (int v : r) {
      if (v >= 0 && v < instance.vertex_count()) used[static_cast<std::size_t>(v)] = true;
    }
  }
  std::vector<int> out;
  for (int d = instance.first_dummy(); d < instance.vertex_count(); ++d) {
    if (!used[static_cast<std::size_t>(d)]) out.push_back(d);
  }
  return out;
}

}  // namespace

std::string_view move_name(MoveKind kind) {
  switch (kind) {
    case MoveKind::Insertion: return "insertion";
    case MoveKind::Swap: return "swap";
    case MoveKind::TwoOpt: return "two_opt";
    case MoveKind::ThreeOpt: return "three_opt";
    case MoveKind::Reversion: return "reversion";
    case MoveKind::Split: return "split";
  }
  return "unknown";
}

std::array<int, 2> touched_routes(const Move& m) {
  switch (m.kind) {
    case MoveKind::Insertion:
    case MoveKind::Swap:
    case MoveKind::TwoOpt: return {m.route_a, m.route_b};
    case MoveKind::ThreeOpt:
    case MoveKind::Reversion: return {m.route_a, m.route_a};
    case MoveKind::Split: return {m.route_a, m.route_b >= 0 ? m.route_b : m.route_a};
  }
  return {m.route_a, m.route_a};
}

void apply_move_in_place(Routes& routes, const Move& m, const Instance& instance) {
  const int k = static_cast<int>(routes.size());
  require(m.route_a >= 0 && m.route_a < k, "route_a");
  auto& a = routes[static_cast<std::size_t>(m.route_a)];
  const int na = static_cast<int>(a.size());
  switch (m.kind) {
    case MoveKind::Insertion: {
      require(m.count >= 1 && m.pos_a >= 0 && m.pos_a + m.count <= na, "insertion source");
      require(m.route_b >= 0 && m.route_b < k, "route_b");
      std::vector<int> block(a.begin() + m.pos_a, a.begin() + m.pos_a + m.count);
      auto& b = routes[static_cast<std::size_t>(m.route_b)];
      const int nb_after = static_cast<int>(b.size()) - (m.route_a == m.route_b ? m.count : 0);
      require(m.pos_b >= 0 && m.pos_b <= nb_after, "insertion target");
      a.erase(a.begin() + m.pos_a, a.begin() + m.pos_a + m.count);
      b.insert(b.begin() + m.pos_b, block.begin(), block.end());
      return;
    }
    case MoveKind::Swap: {
      require(m.route_b >= 0 && m.route_b < k, "route_b");
      auto& b = routes[static_cast<std::size_t>(m.route_b)];
      require(m.count >= 1 && m.pos_a >= 0 && m.pos_a + m.count <= na, "swap block a");
      require(m.pos_b >= 0 && m.pos_b + m.count <= static_cast<int>(b.size()), "swap block b");
      if (m.route_a == m.route_b) {
        if (m.pos_a == m.pos_b) return;
        require(std::abs(m.pos_a - m.pos_b) >= m.count, "overlapping swap blocks");
      }
      std::swap_ranges(a.begin() + m.pos_a, a.begin() + m.pos_a + m.count, b.begin() + m.pos_b);
      return;
    }
    case MoveKind::TwoOpt: {
      require(m.route_b >= 0 && m.route_b < k, "route_b");
      if (m.route_a == m.route_b) {
        require(m.pos_a >= 0 && m.pos_a <= m.pos_b && m.pos_b < na, "two-opt segment");
        std::reverse(a.begin() + m.pos_a, a.begin() + m.pos_b + 1);
        return;
      }
      auto& b = routes[static_cast<std::size_t>(m.route_b)];
      require(m.pos_a >= 0 && m.pos_a <= na && m.pos_b >= 0 && m.pos_b <= static_cast<int>(b.size()),
              "two-opt cut");
      std::vector<int> tail_a(a.begin() + m.pos_a, a.end());
      a.erase(a.begin() + m.pos_a, a.end());
      a.insert(a.end(), b.begin() + m.pos_b, b.end());
      b.erase(b.begin() + m.pos_b, b.end());
      b.insert(b.end(), tail_a.begin(), tail_a.end());
      return;
    }
    case MoveKind::ThreeOpt: {
      require(m.pos_a >= 0 && m.pos_a <= m.pos_b && m.pos_b < na, "three-opt segment");
      const int len = m.pos_b - m.pos_a + 1;
      require(m.pos_c >= 0 && m.pos_c <= na - len, "three-opt target");
      std::vector<int> seg(a.begin() + m.pos_a, a.begin() + m.pos_b + 1);
      a.erase(a.begin() + m.pos_a, a.begin() + m.pos_b + 1);
      a.insert(a.begin() + m.pos_c, seg.begin(), seg.end());
      return;
    }
    case MoveKind::Reversion: {
      require(m.pos_a >= 0 && m.pos_a <= m.pos_b && m.pos_b < na, "reversion segment");
      std::reverse(a.begin() + m.pos_a, a.begin() + m.pos_b + 1);
      return;
    }
    case MoveKind::Split: {
      require(m.pos_a >= 0 && m.pos_a < na, "split cut");
      if (instance.is_dummy(a[static_cast<std::size_t>(m.pos_a)])) {
        a.erase(a.begin() + m.pos_a);
        return;
      }
      if (m.route_b >= 0) {
        require(m.route_b < k && m.route_b != m.route_a, "split target");
        auto& b = routes[static_cast<std::size_t>(m.route_b)];
        require(b.empty(), "split target vehicle in use");
        b.assign(a.begin() + m.pos_a, a.end());
        a.erase(a.begin() + m.pos_a, a.end());
        return;
      }
      require(instance.is_dummy(m.dummy), "split dummy");
      a.insert(a.begin() + m.pos_a, m.dummy);
      return;
    }
  }
}

RoutingSolution apply_move(const RoutingSolution& solution, const Move& move, const Instance& instance) {
  RoutingSolution out;
  out.routes = solution.routes;
  out.dispatch_hour = solution.dispatch_hour;
  apply_move_in_place(out.routes, move, instance);
  return out;
}

std::optional<Move> random_move(const RoutingSolution& solution, const Instance& instance, MoveKind kind,
                                std::mt19937_64& rng) {
  const Routes& routes = solution.routes;
  const int k = static_cast<int>(routes.size());
  if (k == 0) return std::nullopt;
  Move m;
  m.kind = kind;
  switch (kind) {
    case MoveKind::Insertion: {
      m.count = uniform(rng, 1, 2);
      const auto src = routes_with_at_least(routes, static_cast<std::size_t>(m.count));
      if (src.empty()) return std::nullopt;
      m.route_a = pick(src, rng);
      m.pos_a = uniform(rng, 0, size_of(routes, m.route_a) - m.count);
      m.route_b = uniform(rng, 0, k - 1);
      const int nb_after = size_of(routes, m.route_b) - (m.route_a == m.route_b ? m.count : 0);
      m.pos_b = uniform(rng, 0, nb_after);
      return m;
    }
    case MoveKind::Swap: {
      m.count = uniform(rng, 1, 2);
      const auto src = routes_with_at_least(routes, static_cast<std::size_t>(m.count));
      if (src.empty()) return std::nullopt;
      for (int attempt = 0; attempt < 16; ++attempt) {
        m.route_a = pick(src, rng);
        m.route_b = pick(src, rng);
        m.pos_a = uniform(rng, 0, size_of(routes, m.route_a) - m.count);
        m.pos_b = uniform(rng, 0, size_of(routes, m.route_b) - m.count);
        if (m.route_a != m.route_b || std::abs(m.pos_a - m.pos_b) >= m.count) return m;
      }
      return std::nullopt;
    }
    case MoveKind::TwoOpt: {
      const auto used = routes_with_at_least(routes, 1);
      if (used.empty()) return std::nullopt;
      const auto intra = routes_with_at_least(routes, 2);
      const bool cross = k >= 2 && (intra.empty() || uniform(rng, 0, 1) == 1);
      if (!cross) {
        if (intra.empty()) return std::nullopt;
        m.route_a = m.route_b = pick(intra, rng);
        const int n = size_of(routes, m.route_a);
        m.pos_a = uniform(rng, 0, n - 2);
        m.pos_b = uniform(rng, m.pos_a + 1, n - 1);
        return m;
      }
      m.route_a = pick(used, rng);
      do {
        m.route_b = uniform(rng, 0, k - 1);
      } while (m.route_b == m.route_a);
      m.pos_a = uniform(rng, 0, size_of(routes, m.route_a));
      m.pos_b = uniform(rng, 0, size_of(routes, m.route_b));
      return m;
    }
    case MoveKind::ThreeOpt: {
      const auto src = routes_with_at_least(routes, 3);
      if (src.empty()) return std::nullopt;
      m.route_a = m.route_b = pick(src, rng);
      const int n = size_of(routes, m.route_a);
      m.pos_a = uniform(rng, 0, n - 1);
      m.pos_b = uniform(rng, m.pos_a, std::min(n - 1, m.pos_a + n - 2));
      const int len = m.pos_b - m.pos_a + 1;
      m.pos_c = uniform(rng, 0, n - len - 1);
      if (m.pos_c >= m.pos_a) ++m.pos_c;
      return m;
    }
    case MoveKind::Reversion: {
      const auto src = routes_with_at_least(routes, 2);
      if (src.empty()) return std::nullopt;
      m.route_a = m.route_b = pick(src, rng);
      const int n = size_of(routes, m.route_a);
      m.pos_a = uniform(rng, 0, n - 2);
      m.pos_b = uniform(rng, m.pos_a + 1, n - 1);
      return m;
    }
    case MoveKind::Split: {
      const auto used = routes_with_at_least(routes, 1);
      if (used.empty()) return std::nullopt;
      std::vector<int> empty;
      for (int r = 0; r < k; ++r) {
        if (routes[static_cast<std::size_t>(r)].empty()) empty.push_back(r);
      }
      const auto dummies = unused_dummies(routes, instance);
      for (int attempt = 0; attempt < 16; ++attempt) {
        m.route_a = pick(used, rng);
        const int n = size_of(routes, m.route_a);
        m.pos_a = uniform(rng, 0, n - 1);
        m.route_b = -1;
        m.dummy = -1;
        if (instance.is_dummy(routes[static_cast<std::size_t>(m.route_a)][static_cast<std::size_t>(m.pos_a)])) {
          return m;
        }
        if (m.pos_a == 0) continue;
        const bool to_vehicle = !empty.empty() && (dummies.empty() || uniform(rng, 0, 1) == 0);
        if (to_vehicle) {
          m.route_b = pick(empty, rng);
          return m;
        }
        if (!dummies.empty()) {
          m.dummy = dummies.front();
          return m;
        }
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace saferoute
