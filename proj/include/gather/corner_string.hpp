#pragma once

#include <array>
#include <utility>
#include <vector>

#include "configuration.hpp"

namespace gather {

// A raster scan of a rectangle. Lines run parallel to `line`, starting at
// `corner`; successive lines are taken in the `sweep` direction.
struct Frame {
  Node corner;
  Node sweep;
  Node line;
  coord_t line_len = 0;   // edges along a line
  coord_t sweep_len = 0;  // edges across lines

  friend constexpr bool operator==(const Frame&, const Frame&) = default;

  std::int64_t size() const { return (line_len + 1) * (sweep_len + 1); }
  std::int64_t index(const Node& v) const {
    Node r = v - corner;
    return (r.x * sweep.x + r.y * sweep.y) * (line_len + 1) + (r.x * line.x + r.y * line.y);
  }
  Node node_at(std::int64_t i) const {
    coord_t s = i / (line_len + 1), l = i % (line_len + 1);
    return {corner.x + sweep.x * s + line.x * l, corner.y + sweep.y * s + line.y * l};
  }
  // far end of the first line: the other end of the side the scan parallels
  Node line_end() const { return {corner.x + line.x * line_len, corner.y + line.y * line_len}; }
};

// `line_dir` picks which of the corner's two sides the scan lines parallel.
inline Frame make_frame(const Rectangle& r, const Node& corner, const Node& line_dir) {
  Node inward{corner.x == r.min_corner.x ? 1 : -1, corner.y == r.min_corner.y ? 1 : -1};
  Frame f;
  f.corner = corner;
  if (line_dir.x != 0) {
    f.line = {inward.x, 0};
    f.sweep = {0, inward.y};
    f.line_len = r.width();
    f.sweep_len = r.height();
  } else {
    f.line = {0, inward.y};
    f.sweep = {inward.x, 0};
    f.line_len = r.height();
    f.sweep_len = r.width();
  }
  return f;
}

struct CornerString {
  Frame frame;
  std::vector<std::int64_t> distances;
  std::vector<std::pair<int, std::int64_t>> full;
};

inline std::vector<std::int64_t> distance_string(const Configuration& c, const Frame& f) {
  std::vector<std::int64_t> d;
  d.reserve(c.meeting_nodes().size());
  for (auto& m : c.meeting_nodes()) d.push_back(f.index(m));
  std::sort(d.begin(), d.end());
  return d;
}

inline CornerString corner_string(const Configuration& c, const Frame& f) {
  CornerString s{f, distance_string(c, f), {}};
  s.full.reserve(static_cast<std::size_t>(f.size()));
  for (std::int64_t i = 0; i < f.size(); ++i) {
    Node v = f.node_at(i);
    s.full.emplace_back(c.is_meeting(v) ? 1 : 0, c.count_at(v));
  }
  return s;
}

namespace detail {

// (meeting flag, count) for every node of the rectangle, row-major
struct DenseGrid {
  Rectangle rect;
  std::vector<std::pair<int, std::int64_t>> cells;

  DenseGrid(const Configuration& c, const Rectangle& r) : rect(r) {
    cells.assign(static_cast<std::size_t>((r.width() + 1) * (r.height() + 1)), {0, 0});
    for (auto& m : c.meeting_nodes()) at(m).first = 1;
    for (auto& [p, k] : c.robots()) at(p).second = k;
  }
  std::pair<int, std::int64_t>& at(const Node& p) {
    return cells[static_cast<std::size_t>((p.y - rect.min_corner.y) * (rect.width() + 1) + (p.x - rect.min_corner.x))];
  }
  const std::pair<int, std::int64_t>& at(const Node& p) const {
    return cells[static_cast<std::size_t>((p.y - rect.min_corner.y) * (rect.width() + 1) + (p.x - rect.min_corner.x))];
  }
};

}  // namespace detail

// Lexicographic comparison of the full strings of two frames over the same rectangle.
inline int compare_full(const detail::DenseGrid& g, const Frame& a, const Frame& b) {
  for (std::int64_t i = 0; i < a.size(); ++i) {
    auto x = g.at(a.node_at(i));
    auto y = g.at(b.node_at(i));
    if (x != y) return x < y ? -1 : 1;
  }
  return 0;
}

// One frame per corner: along the shorter side, or for a square the smaller
// of the two strings (both kept when they are equal).  Strips and single
// points collapse duplicate scans.
inline std::vector<Frame> corner_frames(const Configuration& c, const Rectangle& r) {
  std::vector<Frame> out;
  auto push_unique = [&](const Frame& f) {
    auto key = [](const Frame& h) {
      std::int64_t last = h.size() - 1;
      return std::array<Node, 3>{h.corner, h.node_at(std::min<std::int64_t>(1, last)),
                                 h.node_at(std::min<std::int64_t>(h.line_len + 1, last))};
    };
    for (auto& g : out)
      if (key(g) == key(f)) return;
    out.push_back(f);
  };
  for (auto& k : r.corners()) {
    if (r.width() < r.height()) {
      push_unique(make_frame(r, k, {1, 0}));
    } else if (r.height() < r.width()) {
      push_unique(make_frame(r, k, {0, 1}));
    } else {
      Frame fx = make_frame(r, k, {1, 0}), fy = make_frame(r, k, {0, 1});
      auto sx = distance_string(c, fx), sy = distance_string(c, fy);
      if (sx <= sy) push_unique(fx);
      if (sy <= sx) push_unique(fy);
    }
  }
  return out;
}

inline std::vector<Frame> leading_frames(const Configuration& c, const Rectangle& r) {
  auto all = corner_frames(c, r);
  std::vector<std::vector<std::int64_t>> s;
  for (auto& f : all) s.push_back(distance_string(c, f));
  auto best = *std::min_element(s.begin(), s.end());
  std::vector<Frame> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (s[i] == best) out.push_back(all[i]);
  return out;
}

inline std::vector<Frame> leading_frames(const Configuration& c) { return leading_frames(c, compute_mer(c)); }

inline std::vector<Node> leading_corners(const Configuration& c) {
  std::vector<Node> out;
  for (auto& f : leading_frames(c)) out.push_back(f.corner);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Frames among `frames` whose full string is minimal.
inline std::vector<Frame> min_full_frames(const detail::DenseGrid& g, const std::vector<Frame>& frames) {
  std::vector<Frame> out;
  for (auto& f : frames) {
    if (out.empty()) {
      out.push_back(f);
      continue;
    }
    int cmp = compare_full(g, f, out.front());
    if (cmp < 0) out.clear();
    if (cmp <= 0) out.push_back(f);
  }
  return out;
}

inline std::vector<Frame> key_frames(const Configuration& c) {
  Rectangle r = compute_mer(c);
  auto lead = leading_frames(c, r);
  if (lead.size() < 2) throw std::domain_error("key corner needs at least two leading corners");
  return min_full_frames(detail::DenseGrid(c, r), lead);
}

inline std::vector<Node> key_corners(const Configuration& c) {
  std::vector<Node> out;
  for (auto& f : key_frames(c)) out.push_back(f.corner);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Node of `nodes` that comes last in the scan of `f`.
inline Node last_in_scan(const Frame& f, const std::vector<Node>& nodes) {
  return *std::max_element(nodes.begin(), nodes.end(),
                           [&](const Node& a, const Node& b) { return f.index(a) < f.index(b); });
}

inline Node first_in_scan(const Frame& f, const std::vector<Node>& nodes) {
  return *std::min_element(nodes.begin(), nodes.end(),
                           [&](const Node& a, const Node& b) { return f.index(a) < f.index(b); });
}

inline std::vector<Node> potential_weber_nodes(const std::vector<Frame>& leading, const std::vector<Node>& weber) {
  std::vector<Node> out;
  for (auto& f : leading) out.push_back(last_in_scan(f, weber));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<Node> potential_weber_nodes(const Configuration& c) {
  return potential_weber_nodes(leading_frames(c), weber_nodes(c));
}

}  // namespace gather
