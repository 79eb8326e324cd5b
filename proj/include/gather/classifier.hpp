#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "corner_string.hpp"
#include "symmetry.hpp"

namespace gather {

enum class Major { I1, I2, I3, I4 };
enum class Minor { none, a, b1, b2, b3, b4 };
enum class Condition { C1, C21, C22, C3 };

inline std::string to_string(Condition c) {
  switch (c) {
    case Condition::C1: return "C1";
    case Condition::C21: return "C21";
    case Condition::C22: return "C22";
    case Condition::C3: return "C3";
  }
  return "?";
}

struct ClassLabel {
  Major major = Major::I1;
  Minor minor = Minor::none;
  bool gatherable = true;
  bool in_u_prime = false;
  std::string reason;

  friend bool operator==(const ClassLabel& a, const ClassLabel& b) {
    return a.major == b.major && a.minor == b.minor && a.gatherable == b.gatherable && a.in_u_prime == b.in_u_prime;
  }
};

inline std::string to_string(const ClassLabel& c) {
  static const char* maj[] = {"I1", "I2", "I3", "I4"};
  static const char* min[] = {"", "a", "b1", "b2", "b3", "b4"};
  return std::string(maj[static_cast<int>(c.major)]) + min[static_cast<int>(c.minor)];
}

// Quadrant or half-plane identified by its signs relative to the lines.
using Signs = std::array<int, 2>;

struct RegionTag {
  enum Kind { half_plane, quadrant } kind = half_plane;
  std::string id;
  Signs signs{0, 0};
  std::vector<Axis> lines;
};

// Everything a robot derives from one snapshot before choosing its action.
struct Analysis {
  Configuration config;
  Rectangle mer;
  WeberInfo weber;
  SymmetryDescriptor msym;
  SymmetryDescriptor csym;
  std::vector<Frame> frames;   // one per corner (two on a tied square corner)
  std::vector<Frame> leading;  // subset of frames with the minimal distance string
  std::vector<Node> wp;        // potential Weber nodes
  ClassLabel label;

  std::optional<Axis> axis;  // single relevant axis (I3, or the residual axis of an I4 configuration)
  Node center2;              // I4 rotation centre, doubled
  Axis l, lp;                // I4 quadrant lines

  explicit Analysis(Configuration c);

  bool is_weber(const Node& p) const { return std::binary_search(weber.nodes.begin(), weber.nodes.end(), p); }
  std::optional<Node> center_node() const {
    if (center2.x % 2 || center2.y % 2) return std::nullopt;
    return Node{center2.x / 2, center2.y / 2};
  }
  bool center_is_weber() const {
    auto c = center_node();
    return label.major == Major::I4 && c && is_weber(*c);
  }
  Signs quadrant(const Node& p) const { return {l.side(p), lp.side(p)}; }
  static bool in_quadrant(const Signs& s) { return s[0] != 0 && s[1] != 0; }

  // Half-plane (I3) or quadrant (I4) of a frame: its corner, or for a corner
  // lying on a line, where its first scan line heads.
  Signs frame_region(const Frame& f) const;

  int compare_full(const Frame& a, const Frame& b) const {
    if (!grid) grid.emplace(config, mer);
    return gather::compare_full(*grid, a, b);
  }
  std::vector<Frame> key_frames() const {
    if (!grid) grid.emplace(config, mer);
    return min_full_frames(*grid, leading);
  }

 private:
  mutable std::optional<detail::DenseGrid> grid;
};

namespace detail {

inline ClassLabel label_for(Analysis& a) {
  ClassLabel lab;
  const auto& c = a.config;
  if (a.weber.nodes.size() == 1) return {Major::I1, Minor::none, true, false, {}};
  if (!a.msym.symmetric()) return {Major::I2, Minor::none, true, false, {}};

  auto any_on = [&](const Axis& ax, auto&& pred) {
    for (auto& m : c.meeting_nodes())
      if (ax.contains(m) && pred(m)) return true;
    return false;
  };
  auto robot_on = [&](const Axis& ax) {
    for (auto& [p, k] : c.robots())
      if (ax.contains(p)) return true;
    return false;
  };
  auto axis_minor = [&](Major major, const Axis& ax) -> ClassLabel {
    if (any_on(ax, [&](const Node& m) { return a.is_weber(m); })) return {major, Minor::b1, true, false, {}};
    if (robot_on(ax)) return {major, Minor::b2, true, false, {}};
    bool meeting = any_on(ax, [](const Node&) { return true; });
    Minor m = meeting || major == Major::I4 ? Minor::b3 : Minor::b4;
    return {major, m, false, meeting, "single symmetry axis with no robot and no Weber node on it"};
  };

  if (a.msym.single_axis()) {
    a.axis = a.msym.axes.front();
    if (!a.csym.symmetric()) return {Major::I3, Minor::a, true, false, {}};
    return axis_minor(Major::I3, *a.axis);
  }

  // rotational meeting-node set
  if (!a.csym.symmetric()) return {Major::I4, Minor::a, true, false, {}};
  auto cn = a.center_node();
  if (a.csym.rotational()) {
    if (cn && c.is_meeting(*cn)) return {Major::I4, Minor::b1, true, false, {}};
    if (cn && c.has_robot(*cn)) return {Major::I4, Minor::b2, true, false, {}};
    return {Major::I4, Minor::b3, false, false, "rotational symmetry with no robot and no meeting node on the centre"};
  }
  // only a reflection of the configuration survives
  a.axis = a.csym.axes.front();
  if (cn && a.is_weber(*cn)) return {Major::I4, Minor::b1, true, false, {}};
  return axis_minor(Major::I4, *a.axis);
}

}  // namespace detail

inline Analysis::Analysis(Configuration c) : config(std::move(c)) {
  mer = compute_mer(config);
  weber = weber_info(config);
  msym = meeting_symmetry(config.meeting_nodes());
  csym = config_symmetry(config);
  frames = corner_frames(config, mer);
  leading = leading_frames(config, mer);
  wp = potential_weber_nodes(leading, weber.nodes);
  center2 = msym.center2;
  bool diagonal_pair = msym.axes.size() == 2;
  for (auto& ax : msym.axes)
    if (ax.orientation == AxisOrientation::horizontal || ax.orientation == AxisOrientation::vertical)
      diagonal_pair = false;
  if (diagonal_pair) {
    l = {AxisOrientation::diagonal, center2.y - center2.x};
    lp = {AxisOrientation::antidiagonal, center2.x + center2.y};
  } else {
    l = {AxisOrientation::vertical, center2.x};
    lp = {AxisOrientation::horizontal, center2.y};
  }
  label = detail::label_for(*this);
}

inline Signs Analysis::frame_region(const Frame& f) const {
  if (label.major == Major::I3 || (label.major == Major::I4 && axis && csym.symmetric())) {
    int s = axis->side(f.corner);
    if (s == 0) s = axis->side(f.line_end());
    return {s, 0};
  }
  // with diagonal lines every corner of a square lies on one of them
  Signs q = quadrant(f.corner);
  if (!in_quadrant(q) && f.line_len > 0) q = quadrant(f.corner + f.line);
  if (!in_quadrant(q)) q = quadrant(f.line_end());
  if (!in_quadrant(q)) return {0, 0};
  return q;
}

inline ClassLabel classify(const Configuration& c) { return Analysis(c).label; }

inline bool is_gatherable(const Configuration& c, std::string* reason = nullptr) {
  auto lab = classify(c);
  if (reason) *reason = lab.reason;
  return lab.gatherable;
}

// ---- half-planes (single axis) ----------------------------------------------

struct HalfCounts {
  std::int64_t wp_plus = 0, wp_minus = 0;
  std::int64_t robots_plus = 0, robots_minus = 0;
};

inline HalfCounts half_counts(const Analysis& a) {
  HalfCounts h;
  for (auto& w : a.wp) {
    int s = a.axis->side(w);
    if (s > 0) ++h.wp_plus;
    if (s < 0) ++h.wp_minus;
  }
  for (auto& [p, k] : a.config.robots()) {
    int s = a.axis->side(p);
    if (s > 0) h.robots_plus += k;
    if (s < 0) h.robots_minus += k;
  }
  return h;
}

// ---- quadrants -----------------------------------------------------------------

inline constexpr std::array<Signs, 4> all_quadrants{{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};

struct QuadrantCounts {
  std::array<std::int64_t, 4> wp{};
  std::array<std::int64_t, 4> robots{};
  std::vector<int> specified;  // indices with the maximum number of potential Weber nodes
};

inline int quadrant_index(const Signs& s) {
  for (int i = 0; i < 4; ++i)
    if (all_quadrants[i] == s) return i;
  return -1;
}

inline QuadrantCounts quadrant_counts(const Analysis& a) {
  QuadrantCounts q;
  for (auto& w : a.wp) {
    int i = quadrant_index(a.quadrant(w));
    if (i >= 0) ++q.wp[i];
  }
  for (auto& [p, k] : a.config.robots()) {
    int i = quadrant_index(a.quadrant(p));
    if (i >= 0) q.robots[i] += k;
  }
  auto mx = *std::max_element(q.wp.begin(), q.wp.end());
  for (int i = 0; i < 4; ++i)
    if (q.wp[i] == mx) q.specified.push_back(i);
  return q;
}

namespace detail {

inline bool uses_halves(const Analysis& a) { return a.label.major == Major::I3; }

inline void require_regions(const Analysis& a) {
  if (a.label.major != Major::I3 && a.label.major != Major::I4)
    throw std::domain_error("regions are defined only for symmetric meeting-node sets");
}

}  // namespace detail

inline bool is_balanced(const Analysis& a) {
  detail::require_regions(a);
  if (detail::uses_halves(a)) {
    auto h = half_counts(a);
    return h.robots_plus == h.robots_minus;
  }
  auto q = quadrant_counts(a);
  std::int64_t mx = -1, mn = -1;
  for (int i : q.specified) {
    if (mx < 0 || q.robots[i] > mx) mx = q.robots[i];
    if (mn < 0 || q.robots[i] < mn) mn = q.robots[i];
  }
  int at_max = 0, at_min = 0;
  for (int i : q.specified) {
    at_max += q.robots[i] == mx;
    at_min += q.robots[i] == mn;
  }
  return at_max > 1 || at_min > 1;
}

inline bool is_balanced(const Configuration& c) {
  Analysis a(c);
  if (a.label.minor != Minor::a) throw std::domain_error("balance is defined for asymmetric configurations only");
  return is_balanced(a);
}

inline Condition condition(const Analysis& a) {
  detail::require_regions(a);
  if (a.weber.nodes.size() < 2) throw std::domain_error("condition needs at least two Weber nodes");
  if (detail::uses_halves(a)) {
    auto h = half_counts(a);
    if (h.wp_plus == 0 && h.wp_minus == 0) return Condition::C3;
    if (h.wp_plus != h.wp_minus) return Condition::C1;
    return is_balanced(a) ? Condition::C21 : Condition::C22;
  }
  auto q = quadrant_counts(a);
  if (q.wp[q.specified.front()] == 0) return Condition::C3;
  if (q.specified.size() == 1) return Condition::C1;
  return is_balanced(a) ? Condition::C21 : Condition::C22;
}

inline Condition condition(const Configuration& c) { return condition(Analysis(c)); }

// Side (+1/-1) of the axis taken as H+.
inline int half_plane_plus_side(const Analysis& a) {
  auto h = half_counts(a);
  switch (condition(a)) {
    case Condition::C3: throw std::domain_error("H+ is undefined under condition C3");
    case Condition::C1: return h.wp_plus > h.wp_minus ? 1 : -1;
    case Condition::C22: return h.robots_plus > h.robots_minus ? 1 : -1;
    case Condition::C21: break;
  }
  // the half holding the leading frame with the largest full string
  std::optional<Frame> best;
  int side = 0;
  for (auto& f : a.leading) {
    int s = a.frame_region(f)[0];
    if (s == 0) continue;
    int cmp = best ? a.compare_full(f, *best) : 1;
    if (cmp > 0) {
      best = f;
      side = s;
    } else if (cmp == 0 && s != side) {
      side = 0;
    }
  }
  return side == 0 ? 1 : side;
}

inline RegionTag half_plane_plus(const Analysis& a) {
  if (!a.axis) throw std::domain_error("no single axis");
  return {RegionTag::half_plane, "H+", {half_plane_plus_side(a), 0}, {*a.axis}};
}

inline RegionTag half_plane_plus(const Configuration& c) {
  Analysis a(c);
  if (a.label.major != Major::I3) throw std::domain_error("H+ is defined for a single-axis meeting-node set");
  return half_plane_plus(a);
}

// Signs of H++ relative to (l, l').
inline Signs quadrant_plus_plus_signs(const Analysis& a) {
  auto q = quadrant_counts(a);
  Condition cond = condition(a);
  auto extreme = [&](const std::vector<int>& among, bool want_max) {
    std::int64_t e = want_max ? -1 : std::numeric_limits<std::int64_t>::max();
    for (int i : among) e = want_max ? std::max(e, q.robots[i]) : std::min(e, q.robots[i]);
    std::vector<int> out;
    for (int i : among)
      if (q.robots[i] == e) out.push_back(i);
    return out;
  };
  // quadrant among `cands` holding the frame (from `pool`) with the extreme full string
  auto by_string = [&](const std::vector<int>& cands, const std::vector<Frame>& pool, bool largest) -> int {
    std::optional<Frame> best;
    int idx = -1;
    for (auto& f : pool) {
      int i = quadrant_index(a.frame_region(f));
      if (std::find(cands.begin(), cands.end(), i) == cands.end()) continue;
      int cmp = best ? a.compare_full(f, *best) : 1;
      if (!largest) cmp = -cmp;
      if (cmp > 0) {
        best = f;
        idx = i;
      } else if (cmp == 0 && i != idx) {
        idx = -2;
      }
    }
    return idx;
  };
  std::vector<int> all{0, 1, 2, 3};
  int pick = -1;
  switch (cond) {
    case Condition::C1: pick = q.specified.front(); break;
    case Condition::C22: pick = extreme(q.specified, true).front(); break;
    case Condition::C21: {
      auto cands = extreme(q.specified, true);
      pick = by_string(cands, a.leading, true);
      if (pick == -1) {
        std::vector<Frame> others;
        for (auto& f : a.frames)
          if (std::find(a.leading.begin(), a.leading.end(), f) == a.leading.end()) others.push_back(f);
        pick = by_string(cands, others, true);
      }
      if (pick < 0) pick = cands.front();
      break;
    }
    case Condition::C3: {
      auto cands = extreme(all, false);
      if (cands.size() == 1) {
        pick = cands.front();
      } else {
        pick = by_string(cands, a.leading, false);
        if (pick < 0) pick = cands.front();
      }
      break;
    }
  }
  return all_quadrants[pick];
}

inline RegionTag quadrant_plus_plus(const Analysis& a) {
  return {RegionTag::quadrant, "H++", quadrant_plus_plus_signs(a), {a.l, a.lp}};
}

inline RegionTag quadrant_plus_plus(const Configuration& c) {
  Analysis a(c);
  if (a.label.major != Major::I4) throw std::domain_error("H++ is defined for a rotational meeting-node set");
  return quadrant_plus_plus(a);
}

}  // namespace gather
