#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "gather/oracle.hpp"
#include "gather/scenario.hpp"
#include "gather/simulation.hpp"

using namespace gather;

namespace {

const char* i1 = "M 5 5\nM 6 4\nR 0 3\nR 4 0\nR 10 5\nR 6 10\nR 3 4\nR 7 7\nR 2 6\n";
const char* i3a = "M 1 0\nM 3 0\nM 2 5\nR 0 0\nR 0 2\nR 1 3\nR 4 1\nR 4 3\nR 3 4\nR 2 2\n";
const char* u = "M 0 1\nM 2 1\nM 1 0\nM 1 2\nR 0 0\nR 2 2\nR 0 2\nR 2 0\nR -1 1\nR 3 1\nR 1 -1\nR 1 3\n";

std::string traced(const Configuration& c, SchedulerPolicy p) {
  std::ostringstream out;
  Simulation(c, p).run(&out);
  return out.str();
}

}  // namespace

TEST(Scenario, ParsesCommentsAndMultiplicity) {
  auto c = parse_scenario("# header\nM 1 2  # trailing\n\nR 0 0\nR 0 0\n  R 3 -4\n");
  EXPECT_EQ(c.meeting_nodes(), (std::vector<Node>{{1, 2}}));
  EXPECT_EQ(c.count_at({0, 0}), 2);
  EXPECT_EQ(c.count_at({3, -4}), 1);
  EXPECT_EQ(c.robot_count(), 3);
}

TEST(Scenario, ErrorsCarryLineNumbers) {
  try {
    parse_scenario("M 0 0\nR 1 1\nX 2 2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 3u);
  }
  EXPECT_THROW(parse_scenario("M 0 0\nR 1\n"), ParseError);
  EXPECT_THROW(parse_scenario("M 0 0\nR 1 1 1\n"), ParseError);
  EXPECT_THROW(parse_scenario("M 0 0\nM 0 0\nR 1 1\n"), ParseError);
  EXPECT_THROW(parse_scenario("R 1 1\n"), ParseError);
  EXPECT_THROW(parse_scenario("M 1 1\n"), ParseError);
}

TEST(Scenario, RenderRoundTrip) {
  auto c = parse_scenario(i3a);
  auto text = render_scenario(c, "note");
  EXPECT_EQ(text.rfind("# note\n", 0), 0u);
  auto d = parse_scenario(text);
  EXPECT_EQ(d.meeting_nodes(), c.meeting_nodes());
  EXPECT_EQ(d.robots(), c.robots());
}

TEST(Simulation, RejectsInvalidStarts) {
  auto shared = parse_scenario("M 0 0\nR 1 1\nR 1 1\nR 2 2\nR 3 3\nR 4 4\nR 5 5\nR 6 6\n");
  EXPECT_THROW(Simulation(shared, {}), ConfigError);
  auto few = parse_scenario("M 0 0\nR 1 1\nR 2 2\nR 3 3\nR 4 4\nR 5 5\nR 6 6\n");
  EXPECT_THROW(Simulation(few, {}), ConfigError);
  EXPECT_THROW(Simulation(parse_scenario(i1), {SchedulerKind::async, 0, 1}), std::invalid_argument);
}

TEST(Simulation, FsyncUniqueWeberDropsByMoversEachRound) {
  auto c = parse_scenario(i1);
  Simulation sim(c, {SchedulerKind::fsync, 16, 0});
  Node w{5, 5};
  while (!sim.terminated()) {
    auto before = sim.configuration();
    std::int64_t movers = before.robot_count() - before.count_at(w);
    sim.step();
    if (sim.configuration().is_final()) break;
    EXPECT_EQ(min_consistency(sim.configuration()), min_consistency(before) - movers);
  }
  EXPECT_EQ(sim.outcome().kind, Outcome::Gathered);
}

TEST(Simulation, UniqueWeberTotalIsDirectSum) {
  auto c = parse_scenario(i1);
  std::int64_t sum = 0;
  for (auto& [p, k] : c.robots()) sum += k * manhattan_distance(p, {5, 5});
  for (auto kind : {SchedulerKind::fsync, SchedulerKind::ssync, SchedulerKind::async}) {
    auto o = Simulation(c, {kind, 16, 7}).run();
    EXPECT_EQ(o.kind, Outcome::Gathered);
    EXPECT_EQ(o.node, (Node{5, 5}));
    EXPECT_EQ(o.total_moves, sum);
  }
}

TEST(Simulation, TiedWeberNodesGatherOptimally) {
  auto c = parse_scenario(i3a);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto o = Simulation(c, {SchedulerKind::async, 8, seed}).run();
    EXPECT_EQ(o.kind, Outcome::Gathered);
    EXPECT_EQ(o.total_moves, oracle::optimal_cost(c));
  }
}

TEST(Simulation, UngatherableStopsImmediately) {
  Simulation sim(parse_scenario(u), {});
  EXPECT_TRUE(sim.terminated());
  auto o = sim.run();
  EXPECT_EQ(o.kind, Outcome::Ungatherable);
  EXPECT_EQ(o.total_moves, 0);
  EXPECT_FALSE(o.reason.empty());
}

TEST(Simulation, StepCap) {
  auto o = Simulation(parse_scenario(i1), {SchedulerKind::fsync, 16, 0}, {1, true}).run();
  EXPECT_EQ(o.kind, Outcome::CapExceeded);
  EXPECT_EQ(o.steps, 1u);
}

TEST(Simulation, AsyncFairnessBoundsPendingMoves) {
  const std::uint64_t k = 4;
  Simulation sim(parse_scenario(i3a), {SchedulerKind::async, k, 11});
  sim.run();
  std::map<std::size_t, std::uint64_t> looked;
  for (auto& e : sim.trace()) {
    if (e.kind == TraceEvent::look) looked[e.robot] = e.step;
    if (e.kind == TraceEvent::move) {
      ASSERT_TRUE(looked.count(e.robot));
      EXPECT_LE(e.step - looked[e.robot], k);
      looked.erase(e.robot);
    }
  }
  EXPECT_TRUE(looked.empty());
}

TEST(Simulation, TracesAreReproducible) {
  auto c = parse_scenario(i3a);
  for (auto kind : {SchedulerKind::fsync, SchedulerKind::ssync, SchedulerKind::async})
    EXPECT_EQ(traced(c, {kind, 16, 5}), traced(c, {kind, 16, 5}));
  EXPECT_NE(traced(c, {SchedulerKind::async, 16, 5}), traced(c, {SchedulerKind::async, 16, 6}));
}

TEST(Simulation, TraceLineFormat) {
  EXPECT_EQ(format_event({TraceEvent::move, 3, 2, {1, -1}, {2, -1}}), "step=3 r=2 ev=move from=1,-1 to=2,-1");
  EXPECT_EQ(format_event({TraceEvent::skip, 1, 7, {0, 0}, {0, 0}}), "step=1 r=7 ev=skip from=0,0 to=0,0");
  Outcome o{Outcome::Gathered, {4, 5}, 30, 9, {}};
  EXPECT_EQ(format_footer(o), "outcome=Gathered node=4,5 moves=30 steps=9");
  auto text = traced(parse_scenario(i1), {SchedulerKind::fsync, 16, 0});
  EXPECT_NE(text.find("\noutcome=Gathered node=5,5 moves="), std::string::npos);
}

TEST(Simulation, AssertionsOffGiveTheSameRun) {
  auto c = parse_scenario(i3a);
  SchedulerPolicy p{SchedulerKind::async, 16, 3};
  auto a = Simulation(c, p, {1'000'000, true}).run();
  auto b = Simulation(c, p, {1'000'000, false}).run();
  EXPECT_EQ(a.node, b.node);
  EXPECT_EQ(a.total_moves, b.total_moves);
  EXPECT_EQ(a.steps, b.steps);
}
