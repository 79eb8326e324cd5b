#pragma once

#include <span>
#include <string>
#include <vector>

#include "configuration.hpp"

namespace gather {

enum class SymmetryKind { asymmetric, reflection, rotation90, rotation180, multiple_axes };

inline std::string to_string(SymmetryKind k) {
  switch (k) {
    case SymmetryKind::asymmetric: return "asymmetric";
    case SymmetryKind::reflection: return "reflection";
    case SymmetryKind::rotation90: return "rotation90";
    case SymmetryKind::rotation180: return "rotation180";
    case SymmetryKind::multiple_axes: return "multiple_axes";
  }
  return "?";
}

enum class AxisOrientation { horizontal, vertical, diagonal, antidiagonal };

// A line in doubled coordinates:
//   vertical 2x = pos2, horizontal 2y = pos2, diagonal 2(y-x) = pos2, antidiagonal 2(x+y) = pos2.
struct Axis {
  AxisOrientation orientation = AxisOrientation::vertical;
  coord_t pos2 = 0;

  friend constexpr bool operator==(const Axis&, const Axis&) = default;

  coord_t value2(const Node& p) const {
    switch (orientation) {
      case AxisOrientation::vertical: return 2 * p.x;
      case AxisOrientation::horizontal: return 2 * p.y;
      case AxisOrientation::diagonal: return 2 * (p.y - p.x);
      case AxisOrientation::antidiagonal: return 2 * (p.x + p.y);
    }
    return 0;
  }
  // -1, 0 (on the line) or +1
  int side(const Node& p) const {
    coord_t v = value2(p) - pos2;
    return (v > 0) - (v < 0);
  }
  bool contains(const Node& p) const { return side(p) == 0; }
  // |signed distance| in units where one grid step changes it by at most 2 (x2)
  coord_t offset2(const Node& p) const {
    coord_t v = value2(p) - pos2;
    return v < 0 ? -v : v;
  }
};

inline std::string to_string(const Axis& a) {
  const char* names[] = {"horizontal", "vertical", "diagonal", "antidiagonal"};
  return std::string(names[static_cast<int>(a.orientation)]) + "@" + std::to_string(a.pos2) + "/2";
}

struct SymmetryDescriptor {
  SymmetryKind kind = SymmetryKind::asymmetric;
  std::vector<Axis> axes;
  bool rot90 = false;
  bool rot180 = false;
  Node center2;                         // doubled centre of the bounding box
  std::vector<Isometry> automorphisms;  // non-identity only

  bool symmetric() const { return !automorphisms.empty(); }
  bool rotational() const { return rot90 || rot180; }
  bool single_axis() const { return axes.size() == 1 && !rotational(); }
};

namespace detail {

inline Axis axis_of(const Isometry& g, const Node& c2) {
  if (g.a == -1 && g.d == 1) return {AxisOrientation::vertical, c2.x};
  if (g.a == 1 && g.d == -1) return {AxisOrientation::horizontal, c2.y};
  if (g.b == 1 && g.c == 1) return {AxisOrientation::diagonal, c2.y - c2.x};
  return {AxisOrientation::antidiagonal, c2.x + c2.y};
}

// Candidate symmetries of a point set with bounding box r: the seven
// non-identity dihedral maps about the box centre that send nodes to nodes.
template <class Fixes>
SymmetryDescriptor detect(const Rectangle& r, std::size_t distinct_points, Fixes&& fixes) {
  SymmetryDescriptor s;
  s.center2 = {r.min_corner.x + r.max_corner.x, r.min_corner.y + r.max_corner.y};
  for (std::size_t i = 1; i < dihedral_group.size(); ++i) {
    Isometry g = dihedral_group[i];
    Node a = g.apply_linear(s.center2);
    coord_t tx2 = s.center2.x - a.x, ty2 = s.center2.y - a.y;
    if (tx2 % 2 != 0 || ty2 % 2 != 0) continue;
    g.tx = tx2 / 2;
    g.ty = ty2 / 2;
    if (!fixes(g)) continue;
    s.automorphisms.push_back(g);
    if (g.is_reflection())
      s.axes.push_back(axis_of(g, s.center2));
    else if (i == 2)
      s.rot180 = true;
    else
      s.rot90 = true;
  }
  if (s.rot90)
    s.kind = distinct_points == 1 ? SymmetryKind::multiple_axes : SymmetryKind::rotation90;
  else if (s.axes.size() >= 2)
    s.kind = SymmetryKind::multiple_axes;
  else if (s.rot180)
    s.kind = SymmetryKind::rotation180;
  else if (s.axes.size() == 1)
    s.kind = SymmetryKind::reflection;
  return s;
}

}  // namespace detail

inline SymmetryDescriptor meeting_symmetry(std::span<const Node> pts) {
  if (pts.empty()) throw std::invalid_argument("empty point set");
  std::vector<Node> v(pts.begin(), pts.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  Rectangle r{v.front(), v.front()};
  for (auto& p : v) {
    r.min_corner = {std::min(r.min_corner.x, p.x), std::min(r.min_corner.y, p.y)};
    r.max_corner = {std::max(r.max_corner.x, p.x), std::max(r.max_corner.y, p.y)};
  }
  return detail::detect(r, v.size(), [&](const Isometry& g) {
    for (auto& p : v)
      if (!std::binary_search(v.begin(), v.end(), g.apply(p))) return false;
    return true;
  });
}

inline SymmetryDescriptor config_symmetry(const Configuration& c) {
  Rectangle r = compute_mer(c);
  std::size_t distinct = c.meeting_nodes().size();
  for (auto& [p, k] : c.robots())
    if (!c.is_meeting(p)) ++distinct;
  return detail::detect(r, distinct, [&](const Isometry& g) {
    for (auto& m : c.meeting_nodes())
      if (!c.is_meeting(g.apply(m))) return false;
    for (auto& [p, k] : c.robots())
      if (c.count_at(g.apply(p)) != k) return false;
    return true;
  });
}

}  // namespace gather
