#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>

#include "classifier.hpp"

namespace gather {

class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Phase { GuardHold, TargetMove, LeadingMove, SymmetryBreak, Finalization, Done };

inline std::string to_string(Phase p) {
  switch (p) {
    case Phase::GuardHold: return "GuardHold";
    case Phase::TargetMove: return "TargetMove";
    case Phase::LeadingMove: return "LeadingMove";
    case Phase::SymmetryBreak: return "SymmetryBreak";
    case Phase::Finalization: return "Finalization";
    case Phase::Done: return "Done";
  }
  return "?";
}

struct Action {
  bool move = false;
  Node destination;

  static Action stay(const Node& at) { return {false, at}; }
  static Action go(const Node& to) { return {true, to}; }
  friend bool operator==(const Action&, const Action&) = default;
};

struct Decision {
  Action action;
  Phase phase = Phase::Done;
};

struct Plan {
  std::shared_ptr<const Analysis> analysis;
  std::optional<Node> target;
  std::vector<Node> guards;
  bool pinned = false;  // the MER must not change before guards are released
  bool finalizing = false;
  std::optional<Node> leading;
  std::optional<Node> breaker;
  std::map<Node, Decision> decisions;

  bool is_guard(const Node& p) const { return std::binary_search(guards.begin(), guards.end(), p); }
  const Decision& at(const Node& p) const {
    auto it = decisions.find(p);
    if (it == decisions.end()) throw std::invalid_argument("no robot at " + to_string(p));
    return it->second;
  }
};

namespace detail {

// Linear part of the isometry whose image of the configuration has the
// smallest encoding; used only to break ties between equally good steps.
inline Isometry canonical_orientation(const Configuration& c) {
  using Row = std::tuple<coord_t, coord_t, int, std::int64_t>;
  std::vector<Row> best;
  Isometry arg = dihedral_group[0];
  for (auto& g : dihedral_group) {
    std::vector<Row> rows;
    coord_t mx = std::numeric_limits<coord_t>::max(), my = mx;
    auto add = [&](const Node& p, int flag, std::int64_t k) {
      Node q = g.apply(p);
      mx = std::min(mx, q.x);
      my = std::min(my, q.y);
      rows.emplace_back(q.x, q.y, flag, k);
    };
    for (auto& m : c.meeting_nodes()) add(m, 1, c.count_at(m));
    for (auto& [p, k] : c.robots())
      if (!c.is_meeting(p)) add(p, 0, k);
    for (auto& r : rows) {
      std::get<0>(r) -= mx;
      std::get<1>(r) -= my;
    }
    std::sort(rows.begin(), rows.end());
    if (best.empty() || rows < best) {
      best = std::move(rows);
      arg = g;
    }
  }
  return arg;
}

// Default preference between geodesic steps: the axis with more remaining
// displacement, then the canonical x axis.
inline std::array<int, 2> default_rank(const Node& p, const Node& t, const Node& s, const Isometry& canon) {
  coord_t rem = s.x != 0 ? std::abs(t.x - p.x) : std::abs(t.y - p.y);
  coord_t other = s.x != 0 ? std::abs(t.y - p.y) : std::abs(t.x - p.x);
  int along_x = canon.apply_linear(s).x != 0 ? 0 : 1;
  return {rem > other ? 0 : rem == other ? 1 : 2, along_x};
}

inline std::vector<Node> geodesic_steps(const Node& p, const Node& t) {
  std::vector<Node> out;
  for (auto& s : unit_steps)
    if (manhattan_distance(p + s, t) < manhattan_distance(p, t)) out.push_back(s);
  return out;
}

// Among the geodesic steps from p toward t, the one minimising `rank`
// (lexicographic over the returned array, std::nullopt forbids the step),
// ties broken by the default rule.
template <class Rank>
std::optional<Node> pick_step(const Node& p, const Node& t, const Isometry& canon, Rank&& rank) {
  std::optional<Node> best;
  decltype(rank(p)) best_rank;
  std::array<int, 2> best_def{};
  for (auto& s : geodesic_steps(p, t)) {
    auto r = rank(s);
    if (!r) continue;
    auto d = default_rank(p, t, s, canon);
    if (!best || *r < *best_rank || (*r == *best_rank && d < best_def)) {
      best = s;
      best_rank = r;
      best_def = d;
    }
  }
  if (!best) return std::nullopt;
  return p + *best;
}

inline std::vector<Node> robots_on(const Analysis& a, const Axis& ax) {
  std::vector<Node> out;
  for (auto& [p, k] : a.config.robots())
    if (ax.contains(p)) out.push_back(p);
  return out;
}

inline std::vector<Node> weber_on(const Analysis& a, const Axis& ax) {
  std::vector<Node> out;
  for (auto& w : a.weber.nodes)
    if (ax.contains(w)) out.push_back(w);
  return out;
}

// Last of `nodes` in the scan order of the leading frames; the key frames
// decide when the leading frames disagree.
inline Node northernmost(const Analysis& a, const std::vector<Node>& nodes) {
  auto agree = [&](const std::vector<Frame>& fs) -> std::optional<Node> {
    std::optional<Node> r;
    for (auto& f : fs) {
      Node v = last_in_scan(f, nodes);
      if (r && *r != v) return std::nullopt;
      r = v;
    }
    return r;
  };
  if (auto v = agree(a.leading)) return *v;
  auto keys = a.key_frames();
  if (auto v = agree(keys)) return *v;
  return last_in_scan(keys.front(), nodes);
}

inline bool needs_break(const Analysis& a) {
  if (!a.label.gatherable || a.config.is_final()) return false;
  if (a.label.minor != Minor::b2) return false;
  return true;
}

inline std::vector<Frame> frames_in(const Analysis& a, const Signs& region) {
  std::vector<Frame> out;
  for (auto& f : a.leading)
    if (a.frame_region(f) == region) out.push_back(f);
  return out;
}

inline Frame reference_frame(const Analysis& a, const Signs& region) {
  auto in = frames_in(a, region);
  if (in.size() == 1) return in.front();
  auto keys = a.key_frames();
  for (auto& k : keys)
    if (std::find(in.begin(), in.end(), k) != in.end()) return k;
  return keys.front();
}

}  // namespace detail

// Target for configurations whose target is fixed without moving a
// designated robot first; std::nullopt when a symmetry must be broken.
inline std::optional<Node> static_target(const Analysis& a) {
  if (!a.label.gatherable) throw RefusalError("configuration is not gatherable: " + a.label.reason);
  if (a.config.is_final()) return a.config.robots().begin()->first;
  const auto& w = a.weber.nodes;
  switch (a.label.major) {
    case Major::I1: return w.front();
    case Major::I2: return a.wp.front();
    case Major::I3: {
      auto on = detail::weber_on(a, *a.axis);
      if (!on.empty()) return detail::northernmost(a, on);
      if (a.csym.symmetric()) return std::nullopt;
      if (a.wp.size() == 1) return a.wp.front();
      int plus = half_plane_plus_side(a);
      std::vector<Node> cand;
      for (auto& p : a.wp)
        if (a.axis->side(p) == plus) cand.push_back(p);
      if (cand.size() == 1) return cand.front();
      return last_in_scan(detail::reference_frame(a, {plus, 0}), cand);
    }
    case Major::I4: {
      if (a.center_is_weber()) return *a.center_node();
      if (a.csym.rotational()) return std::nullopt;
      if (a.csym.symmetric()) {
        auto on = detail::weber_on(a, *a.axis);
        if (on.empty()) return std::nullopt;
        return detail::northernmost(a, on);
      }
      if (a.wp.size() == 1) return a.wp.front();
      if (condition(a) == Condition::C3) {
        auto keys = a.key_frames();
        return last_in_scan(keys.front(), a.wp);
      }
      Signs pp = quadrant_plus_plus_signs(a);
      std::vector<Node> cand;
      for (auto& p : a.wp)
        if (a.quadrant(p) == pp) cand.push_back(p);
      if (cand.size() == 1) return cand.front();
      return last_in_scan(detail::reference_frame(a, pp), cand);
    }
  }
  return std::nullopt;
}

struct BreakMove {
  Node robot;
  Node destination;
  std::optional<Node> eventual_target;
};

std::optional<Node> eventual_target(const Analysis& a, int depth = 0);

// The designated robot of a symmetric configuration and its step off the
// axis (or centre).  Among the admissible steps the one that approaches the
// target the configuration will eventually settle on is preferred, then one
// that keeps the MER, then the canonical order.
inline BreakMove break_move(const Analysis& a, int depth = 0) {
  if (!detail::needs_break(a)) throw std::domain_error("no symmetry to break");
  Node r;
  std::vector<Node> steps;
  if (a.csym.rotational()) {
    r = *a.center_node();
    steps.assign(unit_steps.begin(), unit_steps.end());
  } else {
    r = detail::northernmost(a, detail::robots_on(a, *a.axis));
    for (auto& s : unit_steps)
      if (!a.axis->contains(r + s)) steps.push_back(s);
  }
  Isometry canon = detail::canonical_orientation(a.config);
  std::optional<BreakMove> best;
  std::tuple<int, int, Node> best_key;
  auto approaches_weber = [&](Node d) {
    for (auto& w : a.weber.nodes)
      if (manhattan_distance(d, w) < manhattan_distance(r, w)) return true;
    return false;
  };
  for (auto& s : steps) {
    Node d = r + s;
    if (!approaches_weber(d)) continue;
    Configuration next = a.config.moved(r, d);
    std::optional<Node> t;
    if (depth < 6) {
      try {
        t = eventual_target(Analysis(next), depth + 1);
      } catch (const RefusalError&) {
      }
    }
    int good = t && a.is_weber(*t) && manhattan_distance(d, *t) < manhattan_distance(r, *t) ? 0 : 1;
    int kept = compute_mer(next) == a.mer ? 0 : 1;
    auto key = std::make_tuple(good, kept, canon.apply_linear(s));
    if (!best || key < best_key) {
      best = BreakMove{r, d, t};
      best_key = key;
    }
  }
  if (!best) throw RefusalError("no symmetry-breaking step approaches a Weber node");
  return *best;
}

inline std::optional<Node> eventual_target(const Analysis& a, int depth) {
  if (detail::needs_break(a)) return break_move(a, depth).eventual_target;
  return static_target(a);
}

inline Node select_target(const Configuration& c) {
  Analysis a(c);
  auto t = eventual_target(a);
  if (!t) throw RefusalError("no target can be fixed");
  return *t;
}

inline std::pair<Node, Node> symmetry_break_action(const Configuration& c) {
  Analysis a(c);
  auto m = break_move(a);
  return {m.robot, m.destination};
}

// Robot positions that keep the MER fixed: on every side without a meeting
// node, the robot nearest to each adjacent leading corner, or failing an
// adjacent one, the robot farthest from each leading corner.
inline std::vector<Node> select_guards(const Analysis& a) {
  std::vector<Node> corners;
  for (auto& f : a.leading) corners.push_back(f.corner);
  std::sort(corners.begin(), corners.end());
  corners.erase(std::unique(corners.begin(), corners.end()), corners.end());
  const Rectangle& r = a.mer;
  // side as (is vertical side, coordinate)
  std::array<std::pair<bool, coord_t>, 4> sides{{{false, r.min_corner.y},
                                                  {false, r.max_corner.y},
                                                  {true, r.min_corner.x},
                                                  {true, r.max_corner.x}}};
  auto on_side = [](const std::pair<bool, coord_t>& s, const Node& p) { return (s.first ? p.x : p.y) == s.second; };
  std::vector<Node> guards;
  for (auto& s : sides) {
    bool covered = false;
    for (auto& m : a.config.meeting_nodes()) covered = covered || on_side(s, m);
    if (covered) continue;
    std::vector<Node> rs;
    for (auto& [p, k] : a.config.robots())
      if (on_side(s, p)) rs.push_back(p);
    if (rs.empty()) continue;
    std::vector<Node> adj;
    for (auto& k : corners)
      if (on_side(s, k)) adj.push_back(k);
    auto by_dist = [](const Node& k) {
      return [k](const Node& u, const Node& v) { return manhattan_distance(u, k) < manhattan_distance(v, k); };
    };
    if (!adj.empty()) {
      for (auto& k : adj) guards.push_back(*std::min_element(rs.begin(), rs.end(), by_dist(k)));
    } else {
      for (auto& k : corners) guards.push_back(*std::max_element(rs.begin(), rs.end(), by_dist(k)));
    }
  }
  std::sort(guards.begin(), guards.end());
  guards.erase(std::unique(guards.begin(), guards.end()), guards.end());
  return guards;
}

inline std::vector<Node> select_guards(const Configuration& c) { return select_guards(Analysis(c)); }

namespace detail {

// Which robots are currently allowed to head for the target.
struct Waves {
  enum Kind { all, halves, quadrants, on_lines } kind = all;
  int plus = 0;    // H+ side
  Signs pp{0, 0};  // H++ signs
};

inline Waves waves_for(const Analysis& a, const Node& target) {
  Waves w;
  if (a.label.major == Major::I3 && a.label.minor == Minor::a && !a.axis->contains(target) && a.wp.size() >= 2) {
    w.kind = Waves::halves;
    w.plus = a.axis->side(target);
  } else if (a.label.major == Major::I4 && a.label.minor == Minor::a && !a.center_is_weber() && a.wp.size() >= 2) {
    Condition cond = condition(a);
    w.pp = quadrant_plus_plus_signs(a);
    w.kind = cond == Condition::C3 ? Waves::on_lines : Waves::quadrants;
  }
  return w;
}

// 0 = H++, 1 = adjacent quadrant, 2 = opposite quadrant, 3 = on a line
inline int quadrant_relation(const Signs& q, const Signs& pp) {
  if (!Analysis::in_quadrant(q)) return 3;
  int diff = (q[0] != pp[0]) + (q[1] != pp[1]);
  return diff;
}

}  // namespace detail

inline std::optional<Node> leading_robot(const Analysis& a, const Node& target, const std::vector<Node>& guards) {
  if (a.label.minor != Minor::a || a.wp.size() < 2) return std::nullopt;
  bool i3 = a.label.major == Major::I3;
  if (i3 && a.axis->contains(target)) return std::nullopt;
  if (!i3 && (a.center_is_weber() || a.label.major != Major::I4)) return std::nullopt;
  if (condition(a) != Condition::C21) return std::nullopt;

  auto non_guard = [&](const Node& p) { return !std::binary_search(guards.begin(), guards.end(), p); };
  auto pick = [&](std::vector<Node> pool, auto&& better) -> std::optional<Node> {
    std::vector<Node> ng;
    for (auto& p : pool)
      if (non_guard(p)) ng.push_back(p);
    if (!ng.empty()) pool = ng;
    if (pool.empty()) return std::nullopt;
    return *std::min_element(pool.begin(), pool.end(), better);
  };

  if (i3) {
    int plus = a.axis->side(target);
    auto on = detail::robots_on(a, *a.axis);
    if (!on.empty()) return detail::northernmost(a, on);
    std::vector<Node> minus;
    for (auto& [p, k] : a.config.robots())
      if (a.axis->side(p) == -plus) minus.push_back(p);
    Frame f = detail::reference_frame(a, {-plus, 0});
    return pick(minus, [&](const Node& u, const Node& v) {
      auto ou = a.axis->offset2(u), ov = a.axis->offset2(v);
      if (ou != ov) return ou < ov;
      return f.index(u) > f.index(v);
    });
  }

  Signs pp = quadrant_plus_plus_signs(a);
  Frame f = detail::reference_frame(a, pp);
  auto closer = [&](const Node& u, const Node& v) {
    auto du = manhattan_distance(u, target), dv = manhattan_distance(v, target);
    if (du != dv) return du < dv;
    return f.index(u) < f.index(v);
  };
  std::vector<Node> tiers[3];
  for (auto& [p, k] : a.config.robots()) {
    int rel = detail::quadrant_relation(a.quadrant(p), pp);
    if (rel == 3) tiers[0].push_back(p);
    if (rel == 1) tiers[1].push_back(p);
    if (rel == 2) tiers[2].push_back(p);
  }
  if (!tiers[0].empty()) return pick(tiers[0], closer);
  for (int t = 1; t < 3; ++t) {
    std::vector<Node> ng;
    for (auto& p : tiers[t])
      if (non_guard(p)) ng.push_back(p);
    if (!ng.empty()) return *std::min_element(ng.begin(), ng.end(), closer);
  }
  for (int t = 1; t < 3; ++t)
    if (!tiers[t].empty()) return *std::min_element(tiers[t].begin(), tiers[t].end(), closer);
  return std::nullopt;
}

Plan make_plan(const Configuration& c);

inline std::pair<Node, Node> select_leading_robot(const Configuration& c) {
  Plan p = make_plan(c);
  if (!p.leading) throw std::domain_error("no leading robot in this configuration");
  return {*p.leading, p.at(*p.leading).action.destination};
}

namespace detail {

struct Candidate {
  Node from, to;
  Phase phase = Phase::TargetMove;
  std::array<int, 2> kept{1, 1};  // target kept, MER kept (0 = yes)
};

// Move selection for a pinned configuration with a fixed target.
class MovePlanner {
 public:
  MovePlanner(const Analysis& a, const Node& t, const std::vector<Node>& guards, const Isometry& canon)
      : a_(a), c_(a.config), t_(t), guards_(guards), canon_(canon), waves_(waves_for(a, t)) {
    auto nonguard_where = [&](auto&& pred) {
      for (auto& [p, k] : c_.robots())
        if (p != t_ && !is_guard(p) && pred(p)) return true;
      return false;
    };
    if (waves_.kind == Waves::halves)
      lagging_minus_ = nonguard_where([&](const Node& p) { return a_.axis->side(p) != waves_.plus; });
    if (waves_.kind == Waves::quadrants) {
      lagging_first_ = nonguard_where([&](const Node& p) {
        int rel = quadrant_relation(a_.quadrant(p), waves_.pp);
        return rel == 1 || rel == 3;
      });
      lagging_outside_ = nonguard_where([&](const Node& p) { return a_.quadrant(p) != waves_.pp; });
    }
    if (waves_.kind == Waves::on_lines)
      lagging_pp_ = nonguard_where([&](const Node& p) { return a_.quadrant(p) == waves_.pp; });
  }

  bool is_guard(const Node& p) const { return std::binary_search(guards_.begin(), guards_.end(), p); }

  bool lookahead() const { return a_.label.major == Major::I3 || a_.label.major == Major::I4; }

  // With an asymmetric configuration and several Weber nodes, concurrent
  // steps can hand the tie to another node, so one robot moves at a time.
  bool serialized() const { return lookahead() && a_.label.minor == Minor::a; }

  // A symmetric configuration with tied Weber nodes: one orbit of robots
  // moves at a time, since a scheduler may activate only part of it.
  bool orbit_serialized() const {
    return lookahead() && a_.csym.symmetric() && a_.weber.nodes.size() > 1;
  }

  bool finalizing() const {
    for (auto& [p, k] : c_.robots())
      if (p != t_ && !is_guard(p)) return false;
    return true;
  }

  // Robots sharing a node take the same step, but any number of them may
  // actually move before the others, so every partial move is checked.
  std::array<int, 2> keeps(const Node& from, const Node& to) const {
    std::array<int, 2> worst{0, 0};
    for (std::int64_t k = 1; k <= c_.count_at(from); ++k) {
      Configuration next = c_.moved(from, to, k);
      if (compute_mer(next) != a_.mer) worst[1] = 1;
      bool kept = false;
      try {
        auto nt = eventual_target(Analysis(next));
        kept = nt && *nt == t_;
      } catch (const RefusalError&) {
      }
      if (!kept) worst[0] = 1;
    }
    return worst;
  }

  // keeps() for a group of simultaneous steps, over every combination of
  // how many robots at each source actually move
  std::array<int, 2> keeps_all(const std::vector<std::pair<Node, Node>>& steps) const {
    std::array<int, 2> worst{0, 0};
    std::vector<std::int64_t> moved(steps.size(), 0);
    while (true) {
      std::size_t i = 0;
      while (i < steps.size() && moved[i] == c_.count_at(steps[i].first)) moved[i++] = 0;
      if (i == steps.size()) break;
      ++moved[i];
      Configuration next = c_;
      for (std::size_t j = 0; j < steps.size(); ++j)
        if (moved[j]) next = next.moved(steps[j].first, steps[j].second, moved[j]);
      if (compute_mer(next) != a_.mer) worst[1] = 1;
      bool kept = false;
      try {
        auto nt = eventual_target(Analysis(next));
        kept = nt && *nt == t_;
      } catch (const RefusalError&) {
      }
      if (!kept) worst[0] = 1;
    }
    return worst;
  }

  bool released(const Node& p) const {
    switch (waves_.kind) {
      case Waves::all: return true;
      case Waves::halves: return a_.axis->side(p) != waves_.plus || !lagging_minus_;
      case Waves::quadrants: {
        int rel = quadrant_relation(a_.quadrant(p), waves_.pp);
        if (rel == 1 || rel == 3) return true;
        if (rel == 2) return !lagging_first_;
        return !lagging_outside_;
      }
      case Waves::on_lines: return a_.quadrant(p) == waves_.pp || !lagging_pp_;
    }
    return true;
  }

  // 1 when the step from p to d crosses into a region that should fill later
  int region_penalty(const Node& p, const Node& d) const {
    if (waves_.kind == Waves::quadrants) {
      int from = quadrant_relation(a_.quadrant(p), waves_.pp);
      int to = quadrant_relation(a_.quadrant(d), waves_.pp);
      return from == 2 && to == 1 ? 1 : 0;
    }
    if (waves_.kind == Waves::on_lines) return a_.quadrant(p) != waves_.pp && a_.quadrant(d) == waves_.pp ? 1 : 0;
    return 0;
  }

  Node mover_step(const Node& p) const {
    return *pick_step(p, t_, canon_, [&](const Node& s) {
      Node d = p + s;
      int tgt = lookahead() ? keeps(p, d)[0] : 0;
      return std::optional<std::array<int, 2>>{{tgt, region_penalty(p, d)}};
    });
  }

  std::optional<Node> finalization_step(const Node& p) const {
    auto sides_kept = [&](const Node& d) {
      const Rectangle& r = a_.mer;
      return (p.x != r.min_corner.x || d.x == p.x) && (p.x != r.max_corner.x || d.x == p.x) &&
             (p.y != r.min_corner.y || d.y == p.y) && (p.y != r.max_corner.y || d.y == p.y);
    };
    return pick_step(p, t_, canon_, [&](const Node& s) -> std::optional<std::array<int, 1>> {
      Node d = p + s;
      if (sides_kept(d)) return std::array<int, 1>{0};
      auto w = weber_nodes(c_.moved(p, d));
      if (w.size() == 1 && w.front() == t_) return std::array<int, 1>{1};
      return std::nullopt;
    });
  }

  // The leading robot's step when it keeps both the target and the MER.
  std::optional<Candidate> leading_candidate() const {
    auto lead = leading_robot(a_, t_, guards_);
    if (!lead) return std::nullopt;
    bool i3 = a_.label.major == Major::I3;
    Signs pp{0, 0};
    if (!i3) pp = quadrant_plus_plus_signs(a_);
    Node p = *lead;
    auto step = pick_step(p, t_, canon_, [&](const Node& s) {
      Node d = p + s;
      auto k = keeps(p, d);
      int region = 0;
      if (i3)
        region = a_.axis->offset2(d) < a_.axis->offset2(p) || a_.axis->side(d) == a_.axis->side(t_) ? 0 : 1;
      else
        region = quadrant_relation(a_.quadrant(d), pp) == 3 || a_.quadrant(d) == pp ? 0 : 1;
      return std::optional<std::array<int, 3>>{{k[0], k[1], region}};
    });
    auto k = keeps(p, *step);
    if (k != std::array<int, 2>{0, 0}) return std::nullopt;
    return Candidate{p, *step, Phase::LeadingMove, k};
  }

  // Single-robot moves in preference order: the leading robot, then steps
  // keeping the target and the MER, separating the target from the other
  // Weber nodes, belonging to the current wave, leaving a single robot, and
  // finally the canonical order.
  std::vector<Candidate> candidates() const {
    std::vector<Candidate> out;
    if (auto l = leading_candidate()) out.push_back(*l);
    using Key = std::tuple<int, int, int, int, int, int, std::array<int, 2>, coord_t, coord_t>;
    std::vector<std::pair<Key, Candidate>> ranked;
    for (auto& [p, k] : c_.robots()) {
      if (is_guard(p) || p == t_) continue;
      for (auto& s : geodesic_steps(p, t_)) {
        Node d = p + s;
        if (!out.empty() && out.front().from == p && out.front().to == d) continue;
        auto kp = keeps(p, d);
        int separated = 0;
        for (auto& w : a_.weber.nodes)
          if (w != t_ && manhattan_distance(d, w) > manhattan_distance(p, w)) ++separated;
        Node q = canon_.apply_linear(p);
        Key key{kp[0],           kp[1],       -separated, released(p) ? 0 : 1, k > 1 ? 1 : 0, region_penalty(p, d),
                default_rank(p, t_, s, canon_), q.x,        q.y};
        ranked.push_back({key, Candidate{p, d, Phase::TargetMove, kp}});
      }
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& u, const auto& v) { return u.first < v.first; });
    for (auto& r : ranked) out.push_back(r.second);
    return out;
  }

  // Best orbit of robots under the automorphisms of C, each taking the image
  // of one geodesic step.  Ranked like candidates(), by the best member.
  std::vector<std::pair<Node, Node>> orbit_move() const {
    using Key = std::tuple<int, int, int, int, int, int, std::array<int, 2>, coord_t, coord_t>;
    std::optional<Key> best;
    std::vector<std::pair<Node, Node>> pick;
    for (auto& [p, k] : c_.robots()) {
      if (is_guard(p) || p == t_) continue;
      for (auto& s : geodesic_steps(p, t_)) {
        Node d = p + s;
        std::vector<std::pair<Node, Node>> group{{p, d}};
        for (auto& g : a_.csym.automorphisms) {
          std::pair<Node, Node> img{g.apply(p), g.apply(d)};
          if (std::find(group.begin(), group.end(), img) == group.end()) group.push_back(img);
        }
        bool clash = false;
        for (std::size_t i = 0; i < group.size(); ++i)
          for (std::size_t j = 0; j < i; ++j) clash = clash || group[i].first == group[j].first;
        if (clash) group.resize(1);  // a robot on an axis whose step leaves it moves alone
        auto kp = keeps_all(group);
        int separated = 0;
        for (auto& w : a_.weber.nodes)
          if (w != t_ && manhattan_distance(d, w) > manhattan_distance(p, w)) ++separated;
        Node q = canon_.apply_linear(p);
        Key key{kp[0],        kp[1], -separated, released(p) ? 0 : 1, k > 1 ? 1 : 0, region_penalty(p, d),
                default_rank(p, t_, s, canon_), q.x, q.y};
        if (!best || key < *best) {
          best = key;
          pick = group;
        }
      }
    }
    return pick;
  }

 private:
  const Analysis& a_;
  const Configuration& c_;
  Node t_;
  const std::vector<Node>& guards_;
  Isometry canon_;
  Waves waves_;
  bool lagging_minus_ = false, lagging_first_ = false, lagging_outside_ = false, lagging_pp_ = false;
};

}  // namespace detail

inline Plan make_plan(const Configuration& c) {
  Plan plan;
  auto ap = std::make_shared<const Analysis>(c);
  plan.analysis = ap;
  const Analysis& a = *ap;
  const auto& robots = c.robots();

  if (c.is_final()) {
    plan.target = robots.begin()->first;
    for (auto& [p, k] : robots) plan.decisions[p] = {Action::stay(p), Phase::Done};
    return plan;
  }
  if (!a.label.gatherable) throw RefusalError("configuration is not gatherable: " + a.label.reason);

  Isometry canon = detail::canonical_orientation(c);
  auto plain_step = [&](const Node& p, const Node& t) {
    return *detail::pick_step(p, t, canon, [](const Node&) { return std::optional<std::array<int, 1>>{{0}}; });
  };

  // every robot heads straight for a target that cannot change
  if (a.label.major == Major::I1 || a.center_is_weber()) {
    Node t = a.label.major == Major::I1 ? a.weber.nodes.front() : *a.center_node();
    plan.target = t;
    for (auto& [p, k] : robots)
      plan.decisions[p] = p == t ? Decision{Action::stay(p), Phase::TargetMove}
                                 : Decision{Action::go(plain_step(p, t)), Phase::TargetMove};
    return plan;
  }

  if (detail::needs_break(a)) {
    BreakMove bm = break_move(a);
    plan.target = bm.eventual_target;
    plan.breaker = bm.robot;
    plan.pinned = true;
    plan.guards = select_guards(a);
    for (auto& [p, k] : robots)
      plan.decisions[p] = {Action::stay(p), plan.is_guard(p) ? Phase::GuardHold : Phase::TargetMove};
    plan.decisions[bm.robot] = {Action::go(bm.destination), Phase::SymmetryBreak};
    return plan;
  }

  auto st = static_target(a);
  if (!st) throw RefusalError("no target can be fixed");
  const Node t = *st;
  plan.target = t;
  plan.pinned = true;
  plan.guards = select_guards(a);
  detail::MovePlanner mp(a, t, plan.guards, canon);

  if (mp.finalizing()) {
    plan.finalizing = true;
    for (auto& [p, k] : robots) {
      if (p == t) {
        plan.decisions[p] = {Action::stay(p), Phase::Finalization};
        continue;
      }
      auto step = mp.finalization_step(p);
      plan.decisions[p] = step ? Decision{Action::go(*step), Phase::Finalization} : Decision{Action::stay(p), Phase::GuardHold};
    }
    return plan;
  }

  for (auto& [p, k] : robots)
    plan.decisions[p] = {Action::stay(p), plan.is_guard(p) ? Phase::GuardHold : Phase::TargetMove};

  if (mp.serialized()) {
    auto cands = mp.candidates();
    if (!cands.empty()) {
      const detail::Candidate& pick = cands.front();
      plan.decisions[pick.from] = {Action::go(pick.to), pick.phase};
      if (pick.phase == Phase::LeadingMove) plan.leading = pick.from;
    }
    return plan;
  }

  if (mp.orbit_serialized()) {
    for (auto& [from, to] : mp.orbit_move()) plan.decisions[from] = {Action::go(to), Phase::TargetMove};
    return plan;
  }

  for (auto& [p, k] : robots)
    if (!plan.is_guard(p) && p != t && mp.released(p)) plan.decisions[p] = {Action::go(mp.mover_step(p)), Phase::TargetMove};
  return plan;
}

inline Action decide(const Configuration& c, const Node& self) { return make_plan(c).at(self).action; }

}  // namespace gather
