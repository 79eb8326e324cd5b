#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <string>

namespace gather {

using coord_t = std::int64_t;

struct Node {
  coord_t x = 0;
  coord_t y = 0;

  friend constexpr auto operator<=>(const Node&, const Node&) = default;
  constexpr Node operator+(const Node& o) const { return {x + o.x, y + o.y}; }
  constexpr Node operator-(const Node& o) const { return {x - o.x, y - o.y}; }
};

inline std::string to_string(const Node& n) {
  return "(" + std::to_string(n.x) + "," + std::to_string(n.y) + ")";
}

inline std::ostream& operator<<(std::ostream& os, const Node& n) { return os << to_string(n); }

constexpr coord_t manhattan_distance(const Node& u, const Node& v) {
  coord_t dx = u.x - v.x;
  coord_t dy = u.y - v.y;
  return (dx < 0 ? -dx : dx) + (dy < 0 ? -dy : dy);
}

inline constexpr std::array<Node, 4> unit_steps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

// Axis-aligned rectangle, inclusive on both ends.
struct Rectangle {
  Node min_corner;
  Node max_corner;

  friend constexpr bool operator==(const Rectangle&, const Rectangle&) = default;

  constexpr coord_t width() const { return max_corner.x - min_corner.x; }
  constexpr coord_t height() const { return max_corner.y - min_corner.y; }
  constexpr bool contains(const Node& n) const {
    return n.x >= min_corner.x && n.x <= max_corner.x && n.y >= min_corner.y && n.y <= max_corner.y;
  }
  constexpr bool on_boundary(const Node& n) const {
    return contains(n) && (n.x == min_corner.x || n.x == max_corner.x || n.y == min_corner.y ||
                           n.y == max_corner.y);
  }
  std::array<Node, 4> corners() const {
    return {{min_corner, {max_corner.x, min_corner.y}, max_corner, {min_corner.x, max_corner.y}}};
  }
};

// Element of the dihedral group of the square followed by a translation:
//   p -> A p + t, with A = [[a, b], [c, d]].
struct Isometry {
  int a = 1, b = 0, c = 0, d = 1;
  coord_t tx = 0, ty = 0;

  friend constexpr bool operator==(const Isometry&, const Isometry&) = default;

  constexpr Node apply(const Node& p) const { return {a * p.x + b * p.y + tx, c * p.x + d * p.y + ty}; }
  constexpr Node apply_linear(const Node& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  constexpr bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1 && tx == 0 && ty == 0; }
  constexpr bool is_reflection() const { return a * d - b * c == -1; }
};

// The eight linear parts, identity first.
inline constexpr std::array<Isometry, 8> dihedral_group{{
    {1, 0, 0, 1, 0, 0},    // identity
    {0, -1, 1, 0, 0, 0},   // rotate 90
    {-1, 0, 0, -1, 0, 0},  // rotate 180
    {0, 1, -1, 0, 0, 0},   // rotate 270
    {-1, 0, 0, 1, 0, 0},   // mirror x
    {1, 0, 0, -1, 0, 0},   // mirror y
    {0, 1, 1, 0, 0, 0},    // swap x,y
    {0, -1, -1, 0, 0, 0},  // anti-diagonal
}};

inline Isometry with_translation(Isometry g, coord_t tx, coord_t ty) {
  g.tx = tx;
  g.ty = ty;
  return g;
}

inline Rectangle apply(const Isometry& g, const Rectangle& r) {
  Node p = g.apply(r.min_corner), q = g.apply(r.max_corner);
  return {{std::min(p.x, q.x), std::min(p.y, q.y)}, {std::max(p.x, q.x), std::max(p.y, q.y)}};
}

}  // namespace gather
