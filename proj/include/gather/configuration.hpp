#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"

namespace gather {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using RobotMap = std::map<Node, std::int64_t>;

class Configuration {
 public:
  Configuration() = default;

  Configuration(std::vector<Node> meeting, RobotMap robots)
      : meeting_(std::move(meeting)), robots_(std::move(robots)) {
    std::sort(meeting_.begin(), meeting_.end());
    if (meeting_.empty()) throw ConfigError("meeting node set is empty");
    if (std::adjacent_find(meeting_.begin(), meeting_.end()) != meeting_.end())
      throw ConfigError("duplicate meeting node");
    for (auto& [p, k] : robots_) {
      if (k < 1) throw ConfigError("robot count at " + to_string(p) + " is not positive");
      n_ += k;
    }
    if (n_ < 1) throw ConfigError("no robots");
  }

  static Configuration from_lists(std::vector<Node> meeting, const std::vector<Node>& robots) {
    RobotMap m;
    for (auto& p : robots) ++m[p];
    return Configuration(std::move(meeting), std::move(m));
  }

  const std::vector<Node>& meeting_nodes() const { return meeting_; }
  const RobotMap& robots() const { return robots_; }
  std::int64_t robot_count() const { return n_; }
  std::size_t position_count() const { return robots_.size(); }

  bool is_meeting(const Node& p) const { return std::binary_search(meeting_.begin(), meeting_.end(), p); }
  std::int64_t count_at(const Node& p) const {
    auto it = robots_.find(p);
    return it == robots_.end() ? 0 : it->second;
  }
  bool has_robot(const Node& p) const { return robots_.count(p) != 0; }

  // all robots on a single meeting node
  bool is_final() const { return robots_.size() == 1 && is_meeting(robots_.begin()->first); }

  // initial configurations: distinct positions and at least seven robots
  bool is_initial() const { return n_ >= 7 && static_cast<std::int64_t>(robots_.size()) == n_; }

  Configuration moved(const Node& from, const Node& to, std::int64_t k = 1) const {
    Configuration c = *this;
    auto it = c.robots_.find(from);
    if (it == c.robots_.end() || it->second < k) throw std::domain_error("no robot to move at " + to_string(from));
    if ((it->second -= k) == 0) c.robots_.erase(it);
    c.robots_[to] += k;
    return c;
  }

  Configuration transformed(const Isometry& g) const {
    std::vector<Node> m;
    m.reserve(meeting_.size());
    for (auto& p : meeting_) m.push_back(g.apply(p));
    RobotMap r;
    for (auto& [p, k] : robots_) r[g.apply(p)] = k;
    return Configuration(std::move(m), std::move(r));
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<Node> meeting_;
  RobotMap robots_;
  std::int64_t n_ = 0;
};

inline std::int64_t consistency(const Configuration& c, const Node& m) {
  if (!c.is_meeting(m)) throw std::domain_error(to_string(m) + " is not a meeting node");
  std::int64_t s = 0;
  for (auto& [p, k] : c.robots()) s += manhattan_distance(p, m) * k;
  return s;
}

struct WeberInfo {
  std::vector<Node> nodes;  // sorted
  std::int64_t min_consistency = 0;
};

inline WeberInfo weber_info(const Configuration& c) {
  WeberInfo w;
  w.min_consistency = std::numeric_limits<std::int64_t>::max();
  for (auto& m : c.meeting_nodes()) {
    std::int64_t v = consistency(c, m);
    if (v < w.min_consistency) {
      w.min_consistency = v;
      w.nodes.clear();
    }
    if (v == w.min_consistency) w.nodes.push_back(m);
  }
  return w;
}

inline std::vector<Node> weber_nodes(const Configuration& c) { return weber_info(c).nodes; }
inline std::int64_t min_consistency(const Configuration& c) { return weber_info(c).min_consistency; }

inline Rectangle compute_mer(const Configuration& c) {
  Node lo = c.meeting_nodes().front(), hi = lo;
  auto grow = [&](const Node& p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  };
  for (auto& p : c.meeting_nodes()) grow(p);
  for (auto& [p, k] : c.robots()) grow(p);
  return {lo, hi};
}

}  // namespace gather
