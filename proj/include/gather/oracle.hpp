#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gather/algorithm.hpp"
#include "gather/configuration.hpp"
#include "gather/geometry.hpp"
#include "gather/simulation.hpp"
#include "gather/symmetry.hpp"

namespace gather::oracle {

// Reference formulas below deliberately avoid the grid-core helpers: they
// walk the raw node lists and sum distances directly.

inline std::vector<Node> brute_force_weber(const Configuration& c) {
  std::vector<std::pair<std::int64_t, Node>> scored;
  for (const Node& m : c.meeting_nodes()) {
    std::int64_t sum = 0;
    for (const auto& [p, k] : c.robots()) {
      std::int64_t dx = p.x > m.x ? p.x - m.x : m.x - p.x;
      std::int64_t dy = p.y > m.y ? p.y - m.y : m.y - p.y;
      sum += (dx + dy) * k;
    }
    scored.emplace_back(sum, m);
  }
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (auto& s : scored) best = std::min(best, s.first);
  std::set<Node> out;
  for (auto& [v, m] : scored)
    if (v == best) out.insert(m);
  return {out.begin(), out.end()};
}

inline std::int64_t optimal_cost(const Configuration& c) {
  std::int64_t best = -1;
  for (const Node& m : c.meeting_nodes()) {
    std::int64_t sum = 0;
    for (const auto& [p, k] : c.robots()) sum += (std::abs(p.x - m.x) + std::abs(p.y - m.y)) * k;
    if (best < 0 || sum < best) best = sum;
  }
  return best;
}

// True when a robot that sees every occupied node as holding a single robot
// would compute a different Weber set.
inline bool weak_vs_strong_divergence(const Configuration& c) {
  RobotMap weak;
  for (auto& [p, k] : c.robots()) weak[p] = 1;
  return brute_force_weber(c) != brute_force_weber(Configuration(c.meeting_nodes(), weak));
}

class ExplorationLimit : public std::runtime_error {
 public:
  explicit ExplorationLimit(const std::string& what, std::uint64_t states = 0, std::uint64_t depth = 0)
      : std::runtime_error(what), states(states), depth(depth) {}
  std::uint64_t states;
  std::uint64_t depth;
};

struct ExploreOptions {
  std::uint64_t max_states = 4'000'000;
  std::uint64_t max_depth = 100'000;
  // identify states related by an isometry fixing M; outcome nodes are then
  // reported as the smallest node of their orbit
  bool use_symmetry = false;
};

struct ExploreReport {
  std::vector<Outcome> outcomes;  // distinct by (kind, node, moves, reason)
  std::int64_t max_moves = 0;
  std::uint64_t states = 0;
  std::uint64_t configurations = 0;
  std::uint64_t depth = 0;
};

namespace detail {

using Key = unsigned __int128;

struct KeyHash {
  std::size_t operator()(Key k) const {
    auto lo = static_cast<std::uint64_t>(k), hi = static_cast<std::uint64_t>(k >> 64);
    return std::hash<std::uint64_t>()(lo * 0x9E3779B97F4A7C15ull ^ (hi + 0x632BE59BD9B4E019ull + (lo << 6)));
  }
};

// A robot is (position, pending step or none); a state is the sorted list of
// robot codes, so robots are anonymous.
class Codec {
 public:
  Codec(const Configuration& c, const std::vector<Isometry>& maps) {
    std::vector<Node> pts(c.meeting_nodes());
    for (auto& [p, k] : c.robots()) pts.push_back(p);
    std::vector<Node> all;
    for (auto& g : maps)
      for (auto& p : pts) all.push_back(g.apply(p));
    lo_ = hi_ = all.front();
    for (auto& p : all) {
      lo_.x = std::min(lo_.x, p.x);
      lo_.y = std::min(lo_.y, p.y);
      hi_.x = std::max(hi_.x, p.x);
      hi_.y = std::max(hi_.y, p.y);
    }
    coord_t span = std::max(hi_.x - lo_.x, hi_.y - lo_.y) + 1;
    while ((coord_t{1} << bits_) < span) ++bits_;
    width_ = 2 * bits_ + 3;
    n_ = static_cast<int>(c.robot_count());
    if (n_ * width_ > 128) throw ExplorationLimit("instance too large to encode (" + std::to_string(n_) + " robots)");
  }

  int robots() const { return n_; }

  std::uint32_t code(const Node& p, int dir) const {
    auto x = static_cast<std::uint32_t>(p.x - lo_.x), y = static_cast<std::uint32_t>(p.y - lo_.y);
    return (x << (bits_ + 3)) | (y << 3) | static_cast<std::uint32_t>(dir);
  }
  Node pos(std::uint32_t code) const {
    std::uint32_t mask = (1u << bits_) - 1;
    return {lo_.x + static_cast<coord_t>((code >> (bits_ + 3)) & mask), lo_.y + static_cast<coord_t>((code >> 3) & mask)};
  }
  static int dir(std::uint32_t code) { return static_cast<int>(code & 7); }

  Key pack(std::vector<std::uint32_t> codes) const {
    std::sort(codes.begin(), codes.end());
    Key k = 0;
    for (auto c : codes) k = (k << width_) | c;
    return k;
  }
  std::vector<std::uint32_t> unpack(Key k) const {
    std::vector<std::uint32_t> out(n_);
    Key mask = (Key{1} << width_) - 1;
    for (int i = n_ - 1; i >= 0; --i) {
      out[i] = static_cast<std::uint32_t>(k & mask);
      k >>= width_;
    }
    return out;
  }

 private:
  Node lo_, hi_;
  int bits_ = 1;
  int width_ = 0;
  int n_ = 0;
};

inline int dir_of(const Node& step) {
  for (int i = 0; i < 4; ++i)
    if (unit_steps[i] == step) return i + 1;
  throw std::logic_error("not a unit step");
}

}  // namespace detail

// Breadth-first search over every asynchronous interleaving of Look and Move
// events.  A Look fixes a robot's pending step from the current
// configuration; a Move applies a pending step later, whatever happened in
// between.
inline ExploreReport explore_schedules(const Configuration& initial, const ExploreOptions& opt = {}) {
  using detail::Key;
  ExploreReport report;
  std::set<std::tuple<int, Node, std::int64_t, std::string>> seen_outcomes;
  auto record = [&](Outcome o) {
    if (seen_outcomes.emplace(o.kind, o.node, o.total_moves, o.reason).second) report.outcomes.push_back(o);
    report.max_moves = std::max(report.max_moves, o.total_moves);
  };

  if (initial.is_final()) {
    record({Outcome::Gathered, initial.robots().begin()->first, 0, 0, {}});
    return report;
  }
  if (!is_gatherable(initial)) {
    record({Outcome::Ungatherable, {}, 0, 0, classify(initial).reason});
    return report;
  }

  std::vector<Isometry> maps{dihedral_group[0]};
  if (opt.use_symmetry)
    for (auto& g : meeting_symmetry(initial.meeting_nodes()).automorphisms) maps.push_back(g);
  detail::Codec codec(initial, maps);
  const auto& meeting = initial.meeting_nodes();

  auto orbit_min = [&](const Node& p) {
    Node best = p;
    for (auto& g : maps) best = std::min(best, g.apply(p));
    return best;
  };
  auto canonical = [&](const std::vector<std::uint32_t>& codes) {
    Key best = codec.pack(codes);
    for (std::size_t i = 1; i < maps.size(); ++i) {
      std::vector<std::uint32_t> img;
      for (auto c : codes) {
        int d = detail::Codec::dir(c);
        int nd = d == 0 ? 0 : detail::dir_of(maps[i].apply_linear(unit_steps[d - 1]));
        img.push_back(codec.code(maps[i].apply(codec.pos(c)), nd));
      }
      best = std::min(best, codec.pack(img));
    }
    return best;
  };
  auto config_of = [&](const std::vector<std::uint32_t>& codes) {
    RobotMap m;
    for (auto c : codes) ++m[codec.pos(c)];
    return Configuration(meeting, std::move(m));
  };

  // decisions per configuration: the step index for each occupied node
  // (0 = stay), or a refusal message
  struct Decisions {
    std::map<Node, int> step;
    std::string refusal;
  };
  std::unordered_map<Key, Decisions, detail::KeyHash> plans;
  auto decisions_for = [&](const std::vector<std::uint32_t>& codes, const Configuration& c) -> const Decisions& {
    std::vector<std::uint32_t> bare;
    for (auto x : codes) bare.push_back(x & ~7u);
    Key k = codec.pack(bare);
    auto it = plans.find(k);
    if (it != plans.end()) return it->second;
    Decisions d;
    try {
      Plan p = make_plan(c);
      for (auto& [q, dec] : p.decisions) d.step[q] = dec.action.move ? detail::dir_of(dec.action.destination - q) : 0;
    } catch (const RefusalError& e) {
      d.refusal = e.what();
    }
    return plans.emplace(k, std::move(d)).first->second;
  };

  std::vector<std::uint32_t> start;
  for (auto& [p, k] : initial.robots())
    for (std::int64_t i = 0; i < k; ++i) start.push_back(codec.code(p, 0));

  // per meeting node, the summed distance of the robots at `codes`
  auto costs_of = [&](const std::vector<std::uint32_t>& codes) {
    std::vector<std::int64_t> out(meeting.size(), 0);
    for (auto x : codes) {
      Node p = codec.pos(x);
      for (std::size_t j = 0; j < meeting.size(); ++j) out[j] += std::abs(p.x - meeting[j].x) + std::abs(p.y - meeting[j].y);
    }
    return out;
  };

  struct Item {
    Key key;
    std::int64_t moves;
    std::uint64_t depth;
  };
  std::unordered_map<Key, std::int64_t, detail::KeyHash> visited;  // state -> moves so far
  std::deque<Item> frontier;
  Key k0 = canonical(start);
  visited.emplace(k0, 0);
  frontier.push_back({k0, 0, 0});

  while (!frontier.empty()) {
    Item item = frontier.front();
    frontier.pop_front();
    report.depth = std::max(report.depth, item.depth);
    const std::int64_t moves = item.moves;
    const std::uint64_t depth = item.depth;
    std::vector<std::uint32_t> codes = codec.unpack(item.key);
    bool pending = false, gathered = true;
    for (auto x : codes) {
      pending = pending || detail::Codec::dir(x) != 0;
      gathered = gathered && (x & ~7u) == (codes.front() & ~7u);
    }
    Node first = codec.pos(codes.front());
    bool final_config = gathered && std::binary_search(meeting.begin(), meeting.end(), first);

    if (final_config && !pending) {
      record({Outcome::Gathered, orbit_min(first), moves, depth, {}});
      continue;
    }
    if (depth >= opt.max_depth) {
      record({Outcome::CapExceeded, {}, moves, depth, "depth cap reached"});
      continue;
    }
    const Decisions* dec = nullptr;
    if (!final_config) {
      dec = &decisions_for(codes, config_of(codes));
      if (!dec->refusal.empty()) {
        record({Outcome::CapExceeded, {}, moves, depth, "entered an ungatherable class"});
        continue;
      }
    }

    bool progressed = false;
    std::vector<std::int64_t> costs = costs_of(codes);
    const std::int64_t cost = *std::min_element(costs.begin(), costs.end());
    for (std::size_t i = 0; i < codes.size(); ++i) {
      if (i > 0 && codes[i] == codes[i - 1]) continue;
      int d = detail::Codec::dir(codes[i]);
      Node p = codec.pos(codes[i]);
      std::vector<std::uint32_t> next = codes;
      std::int64_t next_moves = moves;
      if (d == 0) {
        if (!dec) continue;
        int s = dec->step.at(p);
        if (s == 0) continue;
        next[i] = codec.code(p, s);
      } else {
        Node q = p + unit_steps[d - 1];
        next[i] = codec.code(q, 0);
        next_moves = moves + 1;
        std::int64_t after = std::numeric_limits<std::int64_t>::max();
        for (std::size_t j = 0; j < meeting.size(); ++j) {
          const Node& m = meeting[j];
          after = std::min(after, costs[j] + std::abs(q.x - m.x) + std::abs(q.y - m.y) - std::abs(p.x - m.x) -
                                      std::abs(p.y - m.y));
        }
        if (after != cost - 1) {
          record({Outcome::CapExceeded, {}, next_moves, depth + 1, "move off every shortest path to a Weber node"});
          continue;
        }
      }
      progressed = true;
      Key k = canonical(next);
      auto [it, fresh] = visited.emplace(k, next_moves);
      if (!fresh) {
        if (it->second != next_moves) record({Outcome::CapExceeded, {}, next_moves, depth + 1, "move count depends on the schedule"});
        continue;
      }
      if (visited.size() > opt.max_states)
        throw ExplorationLimit("state budget of " + std::to_string(opt.max_states) + " exceeded", visited.size(),
                               report.depth);
      frontier.push_back({k, next_moves, depth + 1});
    }
    if (!progressed) record({Outcome::CapExceeded, {}, moves, depth, "no robot can move"});
  }
  report.states = visited.size();
  report.configurations = plans.size();
  return report;
}

}  // namespace gather::oracle
