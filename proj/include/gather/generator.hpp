#pragma once

#include <optional>
#include <random>
#include <set>
#include <string>

#include "classifier.hpp"

namespace gather {

struct GenOptions {
  int n = 7;
  int meetings = 1;
  coord_t extent = 20;
  std::uint64_t seed = 0;
  std::optional<std::string> label;  // e.g. "I3b2"
  bool require_gatherable = true;
  int attempts = 200000;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  // uniform on [0, n) by rejection, identical on every platform
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t lim = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do v = rng_();
    while (v >= lim);
    return v % n;
  }
  coord_t in(coord_t lo, coord_t hi) { return lo + static_cast<coord_t>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

 private:
  std::mt19937_64 rng_;
};

// Symmetric proposal: a map of the box [0,e]^2 onto itself and the
// predicate for its fixed nodes.
struct Mirror {
  int kind;  // 0 vertical, 1 horizontal, 2 diagonal, 3 rot180, 4 rot90
  coord_t e;
  Node operator()(const Node& p) const {
    switch (kind) {
      case 0: return {e - p.x, p.y};
      case 1: return {p.x, e - p.y};
      case 2: return {p.y, p.x};
      case 3: return {e - p.x, e - p.y};
      default: return {e - p.y, p.x};
    }
  }
};

inline std::vector<Node> orbit(const Mirror& g, Node p) {
  std::vector<Node> out{p};
  for (Node q = g(p); q != p; q = g(q)) out.push_back(q);
  return out;
}

inline std::string label_name(const ClassLabel& l) { return to_string(l); }

}  // namespace detail

// Random initial configuration; with a label, rejection-sampled until the
// classifier agrees.  Symmetric labels draw from symmetric proposals.
inline Configuration generate(const GenOptions& o) {
  if (o.n < 7) throw GenerationError("at least seven robots are required");
  if (o.meetings < 1) throw GenerationError("at least one meeting node is required");
  if ((o.extent + 1) * (o.extent + 1) < o.n) throw GenerationError("extent too small for the robots");
  detail::Draw draw(o.seed);
  std::string want = o.label.value_or("");
  bool sym_m = want.rfind("I3", 0) == 0 || want.rfind("I4", 0) == 0;
  bool sym_r = sym_m && want.size() > 2 && want[2] == 'b';
  for (int attempt = 0; attempt < o.attempts; ++attempt) {
    std::optional<detail::Mirror> g;
    if (sym_m) {
      int kind = want[1] == '3' ? static_cast<int>(draw.below(3)) : 3 + static_cast<int>(draw.below(2));
      // both box parities, so axes and centres fall on nodes or between them
      coord_t e = o.extent > 0 ? o.extent - static_cast<coord_t>(draw.below(2)) : 0;
      g = detail::Mirror{kind, e};
    }
    std::vector<Node> fixed;
    if (g)
      for (coord_t x = 0; x <= g->e; ++x)
        for (coord_t y = 0; y <= g->e; ++y)
          if ((*g)(Node{x, y}) == Node{x, y}) fixed.push_back({x, y});
    // fixed nodes are rare under uniform draws but decide the b classes
    auto random_node = [&] {
      if (!fixed.empty() && draw.below(4) == 0) return fixed[draw.below(fixed.size())];
      coord_t hi = g ? g->e : o.extent;
      return Node{draw.in(0, hi), draw.in(0, hi)};
    };
    std::set<Node> m;
    int guard = 0;
    while (static_cast<int>(m.size()) < o.meetings && guard++ < 1000) {
      auto orb = g ? detail::orbit(*g, random_node()) : std::vector<Node>{random_node()};
      if (static_cast<int>(m.size() + orb.size()) <= o.meetings) m.insert(orb.begin(), orb.end());
    }
    if (static_cast<int>(m.size()) != o.meetings) continue;
    std::set<Node> r;
    guard = 0;
    while (static_cast<int>(r.size()) < o.n && guard++ < 1000) {
      auto orb = g && sym_r ? detail::orbit(*g, random_node()) : std::vector<Node>{random_node()};
      bool clash = false;
      for (auto& p : orb) clash = clash || r.count(p);
      if (!clash && static_cast<int>(r.size() + orb.size()) <= o.n) r.insert(orb.begin(), orb.end());
    }
    if (static_cast<int>(r.size()) != o.n) continue;
    Configuration c = Configuration::from_lists({m.begin(), m.end()}, {r.begin(), r.end()});
    ClassLabel lab = classify(c);
    if (o.require_gatherable && !lab.gatherable && want.empty()) continue;
    if (!want.empty() && detail::label_name(lab) != want) continue;
    return c;
  }
  throw GenerationError("no configuration of class " + (want.empty() ? std::string("any") : want) +
                        " found within the attempt budget");
}

}  // namespace gather
