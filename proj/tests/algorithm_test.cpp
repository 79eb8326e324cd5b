#include <gtest/gtest.h>

#include "gather/algorithm.hpp"
#include "gather/scenario.hpp"

using namespace gather;

namespace {

Configuration sc(const std::string& text) { return parse_scenario(text); }

const char* i3a = "M 1 0\nM 3 0\nM 2 5\nR 0 0\nR 0 2\nR 1 3\nR 4 1\nR 4 3\nR 3 4\nR 2 2\n";
const char* i3b2 = "M 1 0\nM 3 0\nM 2 4\nR 0 0\nR 4 0\nR 0 2\nR 4 2\nR 1 3\nR 3 3\nR 2 1\n";
const char* i4b1 =
    "M 0 1\nM 2 1\nM 1 0\nM 1 2\nM 1 1\nR 0 0\nR 2 2\nR 0 2\nR 2 0\nR -1 -1\nR 3 3\nR -1 3\nR 3 -1\n";
const char* i4b2 = "M 0 1\nM 2 1\nM 1 0\nM 1 2\nR 0 0\nR 2 2\nR 0 2\nR 2 0\nR -1 1\nR 3 1\nR 1 -1\nR 1 3\nR 1 1\n";
const char* i4b3 = "M 0 1\nM 2 1\nM 1 0\nM 1 2\nR 0 0\nR 2 2\nR 0 2\nR 2 0\nR -1 1\nR 3 1\nR 1 -1\nR 1 3\n";

bool has(const std::vector<Node>& v, const Node& p) { return std::find(v.begin(), v.end(), p) != v.end(); }

}  // namespace

TEST(Decide, FinalConfigurationStays) {
  Configuration c({{2, 2}}, {{{2, 2}, 9}});
  auto p = make_plan(c);
  EXPECT_FALSE(p.at({2, 2}).action.move);
  EXPECT_EQ(p.at({2, 2}).phase, Phase::Done);
}

TEST(Decide, UniqueWeberNodeEveryoneStepsCloser) {
  auto c = sc("M 5 5\nM 6 4\nR 0 3\nR 4 0\nR 10 5\nR 6 10\nR 3 4\nR 7 7\nR 2 6\n");
  ASSERT_EQ(to_string(classify(c)), "I1");
  Node w{5, 5};
  EXPECT_EQ(select_target(c), w);
  for (auto& [p, k] : c.robots()) {
    auto a = decide(c, p);
    ASSERT_TRUE(a.move) << p;
    EXPECT_EQ(manhattan_distance(a.destination, w), manhattan_distance(p, w) - 1) << p;
  }
}

TEST(Decide, UngatherableIsRefused) {
  auto c = sc(i4b3);
  EXPECT_THROW(make_plan(c), RefusalError);
  EXPECT_THROW(decide(c, {0, 0}), RefusalError);
}

TEST(Decide, UnknownRobotIsAnError) {
  auto c = sc(i3a);
  EXPECT_THROW(make_plan(c).at({50, 50}), std::invalid_argument);
}

TEST(Target, CentreMeetingNode) {
  auto c = sc(i4b1);
  ASSERT_EQ(to_string(classify(c)), "I4b1");
  EXPECT_EQ(select_target(c), (Node{1, 1}));
}

TEST(Target, MirrorPairPicksThePlusHalf) {
  auto c = sc(i3a);
  Analysis a(c);
  Node t = select_target(c);
  EXPECT_TRUE(a.is_weber(t));
  EXPECT_EQ(a.axis->side(t), half_plane_plus(a).signs[0]);
}

TEST(Guards, OneRobotPerSideWithoutMeetingNodes) {
  auto c = sc("M 5 5\nM 6 4\nR 0 3\nR 4 0\nR 10 5\nR 6 10\nR 3 4\nR 7 7\nR 2 6\n");
  EXPECT_EQ(select_guards(c), (std::vector<Node>{{0, 3}, {4, 0}, {6, 10}, {10, 5}}));
}

TEST(Guards, MirrorClosedForSymmetricConfiguration) {
  auto c = sc("M 3 5\nM 7 5\nR 0 2\nR 10 2\nR 4 0\nR 6 0\nR 2 10\nR 8 10\nR 5 6\n");
  auto g = select_guards(c);
  EXPECT_EQ(g.size(), 6u);
  for (auto& p : g) EXPECT_TRUE(has(g, {10 - p.x, p.y})) << p;
}

TEST(Guards, SidesCoveredByMeetingNodesNeedNone) {
  auto c = sc("M 0 2\nM 4 0\nM 8 3\nM 3 6\nR 1 1\nR 2 2\nR 3 3\nR 4 4\nR 5 5\nR 6 1\nR 7 2\n");
  EXPECT_TRUE(select_guards(c).empty());
}

TEST(Leading, AsymmetricSingleAxisHasOneLeader) {
  auto c = sc(i3a);
  auto [r, d] = select_leading_robot(c);
  EXPECT_TRUE(c.has_robot(r));
  EXPECT_EQ(manhattan_distance(r, d), 1);
  Node t = select_target(c);
  EXPECT_EQ(manhattan_distance(d, t), manhattan_distance(r, t) - 1);
}

TEST(SymmetryBreak, RobotOnTheAxisStepsOff) {
  auto c = sc(i3b2);
  auto [r, d] = symmetry_break_action(c);
  EXPECT_EQ(r, (Node{2, 1}));
  EXPECT_NE(d.x, 2);
  auto next = c.moved(r, d);
  EXPECT_FALSE(config_symmetry(next).symmetric());
  EXPECT_EQ(min_consistency(next), min_consistency(c) - 1);
}

TEST(SymmetryBreak, CentreRobotMovesToANeighbour) {
  auto c = sc(i4b2);
  auto [r, d] = symmetry_break_action(c);
  EXPECT_EQ(r, (Node{1, 1}));
  EXPECT_EQ(manhattan_distance(r, d), 1);
  EXPECT_THROW(symmetry_break_action(sc(i3a)), std::domain_error);
}

TEST(Plan, GuardsHoldWhileOthersWork) {
  auto c = sc(i3a);
  auto p = make_plan(c);
  int movers = 0;
  for (auto& [q, d] : p.decisions) {
    if (p.is_guard(q)) EXPECT_TRUE(!d.action.move || d.phase == Phase::LeadingMove) << q;
    movers += d.action.move;
  }
  EXPECT_GE(movers, 1);
}

TEST(Plan, EveryMoveApproachesAWeberNode) {
  for (const char* t : {i3a, i3b2, i4b1, i4b2}) {
    auto c = sc(t);
    auto w = weber_nodes(c);
    for (auto& [q, d] : make_plan(c).decisions) {
      if (!d.action.move) continue;
      bool closer = false;
      for (auto& m : w) closer = closer || manhattan_distance(d.action.destination, m) < manhattan_distance(q, m);
      EXPECT_TRUE(closer) << t << q;
    }
  }
}
