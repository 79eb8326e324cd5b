#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "algorithm.hpp"

namespace gather {

enum class SchedulerKind { fsync, ssync, async };

inline std::string to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::fsync: return "fsync";
    case SchedulerKind::ssync: return "ssync";
    case SchedulerKind::async: return "async";
  }
  return "?";
}

struct SchedulerPolicy {
  SchedulerKind kind = SchedulerKind::fsync;
  std::uint64_t fairness = 16;
  std::uint64_t seed = 0;
};

struct Caps {
  std::uint64_t max_steps = 1'000'000;
  bool assertions = true;
};

struct TraceEvent {
  enum Kind { look, move, skip } kind = look;
  std::uint64_t step = 0;
  std::size_t robot = 0;  // 1-based ordinal
  Node from, to;
};

inline std::string format_event(const TraceEvent& e) {
  static const char* names[] = {"look", "move", "skip"};
  return "step=" + std::to_string(e.step) + " r=" + std::to_string(e.robot) + " ev=" + names[e.kind] +
         " from=" + std::to_string(e.from.x) + "," + std::to_string(e.from.y) + " to=" + std::to_string(e.to.x) +
         "," + std::to_string(e.to.y);
}

struct Outcome {
  enum Kind { Gathered, Ungatherable, CapExceeded } kind = CapExceeded;
  Node node;
  std::int64_t total_moves = 0;
  std::uint64_t steps = 0;
  std::string reason;
};

inline std::string kind_name(Outcome::Kind k) {
  switch (k) {
    case Outcome::Gathered: return "Gathered";
    case Outcome::Ungatherable: return "Ungatherable";
    case Outcome::CapExceeded: return "CapExceeded";
  }
  return "?";
}

inline std::string format_footer(const Outcome& o) {
  std::string s = "outcome=" + kind_name(o.kind);
  if (o.kind == Outcome::Gathered) s += " node=" + std::to_string(o.node.x) + "," + std::to_string(o.node.y);
  return s + " moves=" + std::to_string(o.total_moves) + " steps=" + std::to_string(o.steps);
}

class SimulationFault : public std::runtime_error {
 public:
  SimulationFault(const std::string& what, std::vector<TraceEvent> trace)
      : std::runtime_error(what), trace(std::move(trace)) {}
  std::vector<TraceEvent> trace;
};

class Simulation {
 public:
  Simulation(Configuration initial, SchedulerPolicy policy, Caps caps = {})
      : config_(std::move(initial)), policy_(policy), caps_(caps), rng_(policy.seed) {
    if (!config_.is_initial())
      throw ConfigError("initial configuration needs at least seven robots on distinct nodes");
    if (policy_.fairness == 0) throw std::invalid_argument("fairness bound must be positive");
    for (auto& [p, k] : config_.robots()) robots_.push_back({p});
    initial_cost_ = min_consistency(config_);
    mer0_ = compute_mer(config_);
    auto msym = meeting_symmetry(config_.meeting_nodes());
    if (msym.rotational() && msym.center2.x % 2 == 0 && msym.center2.y % 2 == 0)
      center_ = Node{msym.center2.x / 2, msym.center2.y / 2};
    auto label = classify(config_);
    if (!label.gatherable) {
      done_ = true;
      outcome_ = {Outcome::Ungatherable, {}, 0, 0, label.reason};
      return;
    }
    target0_ = *plan().target;
  }

  bool terminated() const { return done_; }
  const Configuration& configuration() const { return config_; }
  const Outcome& outcome() const { return outcome_; }
  const std::vector<TraceEvent>& trace() const { return trace_; }
  std::int64_t initial_cost() const { return initial_cost_; }
  std::optional<Node> initial_target() const { return target0_; }

  std::vector<TraceEvent> step() {
    if (done_) return {};
    std::size_t first = trace_.size();
    ++steps_;
    switch (policy_.kind) {
      case SchedulerKind::fsync: sync_round(std::vector<bool>(robots_.size(), true)); break;
      case SchedulerKind::ssync: sync_round(pick_subset()); break;
      case SchedulerKind::async: async_round(); break;
    }
    settle();
    return {trace_.begin() + static_cast<std::ptrdiff_t>(first), trace_.end()};
  }

  Outcome run(std::ostream* trace_out = nullptr) {
    std::size_t emitted = 0;
    while (!done_) {
      step();
      if (trace_out)
        for (; emitted < trace_.size(); ++emitted) *trace_out << format_event(trace_[emitted]) << '\n';
    }
    if (trace_out) {
      for (; emitted < trace_.size(); ++emitted) *trace_out << format_event(trace_[emitted]) << '\n';
      *trace_out << format_footer(outcome_) << '\n';
    }
    return outcome_;
  }

 private:
  struct Robot {
    Node pos;
    bool pending = false;
    Node dest;
    Phase phase = Phase::Done;
    bool was_guard = false;
    std::uint64_t last_cycle = 0;
  };

  const Plan& plan() {
    if (!plan_) {
      try {
        plan_ = std::make_shared<Plan>(make_plan(config_));
        if (!plan_->pinned || plan_->finalizing) released_ = true;
      } catch (const RefusalError& e) {
        fault(std::string("entered an ungatherable class: ") + e.what());
      }
    }
    return *plan_;
  }

  [[noreturn]] void fault(const std::string& what) {
    throw SimulationFault("step " + std::to_string(steps_) + ": " + what, trace_);
  }

  bool coin() { return (rng_() >> 63) != 0; }

  bool overdue(const Robot& r) const { return steps_ - r.last_cycle >= policy_.fairness; }

  std::vector<bool> pick_subset() {
    std::vector<bool> on(robots_.size());
    bool any = false;
    for (std::size_t i = 0; i < robots_.size(); ++i) {
      on[i] = coin() || overdue(robots_[i]);
      any = any || on[i];
    }
    if (!any) on[rng_() % robots_.size()] = true;
    return on;
  }

  void look(std::size_t i) {
    Robot& r = robots_[i];
    const Plan& p = plan();
    const Decision& d = p.at(r.pos);
    r.phase = d.phase;
    r.was_guard = p.is_guard(r.pos);
    if (d.action.move) {
      r.pending = true;
      r.dest = d.action.destination;
      trace_.push_back({TraceEvent::look, steps_, i + 1, r.pos, r.dest});
    } else {
      r.last_cycle = steps_;
      trace_.push_back({TraceEvent::skip, steps_, i + 1, r.pos, r.pos});
    }
  }

  void move(std::size_t i) {
    Robot& r = robots_[i];
    if (manhattan_distance(r.pos, r.dest) != 1) fault("pending move is not a unit step");
    Node from = r.pos;
    WeberInfo wb = weber_info(config_);
    std::int64_t before = wb.min_consistency;
    if (wb.nodes.size() == 1 || (center_ && std::binary_search(wb.nodes.begin(), wb.nodes.end(), *center_)) ||
        r.phase == Phase::Finalization)
      released_ = true;
    config_ = config_.moved(from, r.dest);
    plan_.reset();
    r.pos = r.dest;
    r.pending = false;
    r.last_cycle = steps_;
    ++moves_;
    trace_.push_back({TraceEvent::move, steps_, i + 1, from, r.pos});
    if (!caps_.assertions) return;
    if (min_consistency(config_) != before - 1) fault("move off every shortest path to a Weber node");
    if (r.was_guard && r.phase != Phase::Finalization && r.phase != Phase::SymmetryBreak &&
        r.phase != Phase::LeadingMove)
      fault("guard moved before finalization");
    if (r.phase == Phase::SymmetryBreak) mer0_ = compute_mer(config_);
    if (!released_ && compute_mer(config_) != mer0_) fault("MER changed before finalization");
  }

  void sync_round(const std::vector<bool>& active) {
    for (std::size_t i = 0; i < robots_.size(); ++i)
      if (active[i]) look(i);
    for (std::size_t i = 0; i < robots_.size(); ++i)
      if (active[i] && robots_[i].pending) move(i);
  }

  void async_round() {
    for (std::size_t i = 0; i < robots_.size(); ++i) {
      if (!(coin() || overdue(robots_[i]))) continue;
      if (robots_[i].pending)
        move(i);
      else
        look(i);
    }
  }

  void check_state() {
    const Plan& p = plan();
    if (p.target != target0_) fault("target changed to " + (p.target ? to_string(*p.target) : std::string("none")));
    if (p.leading) {
      std::vector<std::size_t> here;
      for (std::size_t i = 0; i < robots_.size(); ++i)
        if (robots_[i].pos == *p.leading) here.push_back(i);
      if (leading_id_ && std::find(here.begin(), here.end(), *leading_id_) == here.end())
        fault("leading robot changed");
      if (!leading_id_) leading_id_ = here.front();
    } else {
      leading_id_.reset();
    }
  }

  void settle() {
    if (caps_.assertions && !config_.is_final()) check_state();
    bool pending = false;
    for (auto& r : robots_) pending = pending || r.pending;
    if (config_.is_final() && !pending) {
      done_ = true;
      outcome_ = {Outcome::Gathered, config_.robots().begin()->first, moves_, steps_, {}};
      if (caps_.assertions) {
        if (outcome_.node != target0_) fault("gathered away from the initial target");
        if (moves_ != initial_cost_) fault("total moves differ from the optimal cost");
      }
      return;
    }
    if (!pending) {
      bool any = false;
      for (auto& [q, d] : plan().decisions) any = any || d.action.move;
      if (!any) {
        done_ = true;
        outcome_ = {Outcome::CapExceeded, {}, moves_, steps_, "no robot can move"};
        return;
      }
    }
    if (steps_ >= caps_.max_steps) {
      done_ = true;
      outcome_ = {Outcome::CapExceeded, {}, moves_, steps_, "step cap reached"};
    }
  }

  Configuration config_;
  SchedulerPolicy policy_;
  Caps caps_;
  std::mt19937_64 rng_;
  std::vector<Robot> robots_;
  std::shared_ptr<Plan> plan_;
  std::vector<TraceEvent> trace_;
  std::optional<Node> target0_;
  std::optional<std::size_t> leading_id_;
  std::optional<Node> center_;
  Rectangle mer0_;
  bool released_ = false;
  std::int64_t initial_cost_ = 0;
  std::int64_t moves_ = 0;
  std::uint64_t steps_ = 0;
  bool done_ = false;
  Outcome outcome_;
};

}  // namespace gather
