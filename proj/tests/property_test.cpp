#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "gather/generator.hpp"
#include "gather/oracle.hpp"
#include "gather/scenario.hpp"
#include "gather/simulation.hpp"

using namespace gather;

namespace {

const std::vector<std::string> gatherable_labels{"I1", "I2", "I3a", "I3b1", "I3b2", "I4a"};

// Not every (class, n, |M|) combination exists, so a few shapes are tried.
Configuration labelled(const std::string& label, std::uint64_t seed) {
  for (int i = 0;; ++i) {
    GenOptions o;
    o.n = 7 + (i + static_cast<int>(seed)) % 4;
    o.meetings = 3 + i % 4;
    o.extent = 7;
    o.seed = seed * 31 + static_cast<std::uint64_t>(i);
    o.label = label;
    o.attempts = 5000;
    try {
      return generate(o);
    } catch (const GenerationError&) {
      if (i == 40) throw;
    }
  }
}

}  // namespace

// A robot stepping along a shortest path to a Weber node keeps that node
// optimal and lowers the optimum by one per robot moved.
TEST(Property, SingleStepTowardsAWeberNode) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 2000; ++t) {
    GenOptions o;
    o.n = 7 + static_cast<int>(rng() % 6);
    o.meetings = 1 + static_cast<int>(rng() % 6);
    o.extent = 10;
    o.seed = rng();
    o.require_gatherable = false;
    auto c = generate(o);
    auto w = weber_nodes(c);
    Node m = w[rng() % w.size()];
    auto it = c.robots().begin();
    std::advance(it, static_cast<long>(rng() % c.robots().size()));
    if (it->first == m) continue;
    auto steps = detail::geodesic_steps(it->first, m);
    auto next = c.moved(it->first, it->first + steps[rng() % steps.size()]);
    auto w2 = weber_nodes(next);
    EXPECT_TRUE(std::binary_search(w2.begin(), w2.end(), m));
    EXPECT_TRUE(std::includes(w.begin(), w.end(), w2.begin(), w2.end()));
    EXPECT_EQ(min_consistency(next), min_consistency(c) - 1);
  }
}

TEST(Property, GeneratorHonoursTheLabel) {
  for (auto& l : gatherable_labels) {
    auto c = labelled(l, 1);
    EXPECT_EQ(to_string(classify(c)), l);
    EXPECT_TRUE(c.is_initial());
  }
  auto u = labelled("I3b4", 2);
  EXPECT_FALSE(classify(u).gatherable);
}

TEST(Property, RegionsAreCovariant) {
  for (auto& l : {"I3a", "I4a"}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      auto c = labelled(l, 40 + s);
      Analysis a(c);
      auto cond = condition(a);
      Node t = select_target(c);
      for (auto g0 : dihedral_group) {
        auto g = with_translation(g0, 3, -11);
        auto h = c.transformed(g);
        Analysis b(h);
        EXPECT_EQ(condition(b), cond) << l << s;
        EXPECT_EQ(select_target(h), g.apply(t)) << l << s;
      }
    }
  }
}

TEST(Property, EveryClassGathersOptimallyUnderEveryScheduler) {
  for (auto& l : gatherable_labels) {
    for (std::uint64_t s = 0; s < 3; ++s) {
      auto c = labelled(l, 70 + s);
      auto cost = oracle::optimal_cost(c);
      auto w = weber_nodes(c);
      for (auto kind : {SchedulerKind::fsync, SchedulerKind::ssync, SchedulerKind::async}) {
        Outcome o;
        ASSERT_NO_THROW(o = Simulation(c, {kind, 8, s}).run()) << l << " seed " << s;
        EXPECT_EQ(o.kind, Outcome::Gathered) << l;
        EXPECT_EQ(o.total_moves, cost) << l;
        EXPECT_TRUE(std::binary_search(w.begin(), w.end(), o.node)) << l;
      }
    }
  }
}

TEST(Property, MicroFixturesGatherUnderManySeeds) {
  int files = 0;
  for (auto& e : std::filesystem::directory_iterator(std::string(GATHER_FIXTURES) + "/micro")) {
    auto c = load_scenario(e.path().string());
    auto cost = oracle::optimal_cost(c);
    ++files;
    for (std::uint64_t s = 0; s < 5; ++s) {
      for (auto kind : {SchedulerKind::ssync, SchedulerKind::async}) {
        Outcome o;
        ASSERT_NO_THROW(o = Simulation(c, {kind, 4, s}).run()) << e.path();
        EXPECT_EQ(o.kind, Outcome::Gathered) << e.path();
        EXPECT_EQ(o.total_moves, cost) << e.path();
      }
    }
  }
  EXPECT_GE(files, 25);
}
