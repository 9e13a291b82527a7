#include <random>

#include <gtest/gtest.h>

#include "fault_injection.hpp"
#include "oracles.hpp"
#include "spinqec/decoder.hpp"
#include "spinqec/matching.hpp"
#include "spinqec/sampler.hpp"

using namespace spinqec;

TEST(Matching, TwoNodes) {
  const auto mate = min_weight_perfect_matching(2, {{0, 1, 7}});
  EXPECT_EQ(mate, (std::vector<int>{1, 0}));
}

TEST(Matching, FourNodeExample) {
  // a=0 b=1 c=2 d=3
  const std::vector<MatchingEdge> e = {{0, 1, 1}, {2, 3, 1}, {0, 2, 2}, {1, 3, 2}, {0, 3, 3}, {1, 2, 3}};
  const auto mate = min_weight_perfect_matching(4, e);
  EXPECT_EQ(mate, (std::vector<int>{1, 0, 3, 2}));
  EXPECT_EQ(matching_weight(e, mate), 2);
}

TEST(Matching, NoPerfectMatchingThrows) {
  EXPECT_THROW(min_weight_perfect_matching(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}), std::logic_error);
  EXPECT_THROW(min_weight_perfect_matching(3, {{0, 1, 1}, {1, 2, 1}}), std::logic_error);
}

TEST(Matching, EqualsBruteForceOnRandomGraphs) {
  std::mt19937_64 rng(41);
  int compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 * static_cast<int>(1 + rng() % 5);  // 2..10
    const double density = 0.4 + 0.6 * static_cast<double>(rng() % 100) / 100.0;
    std::vector<MatchingEdge> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (static_cast<double>(rng() % 1000) / 1000.0 < density) edges.push_back({u, v, static_cast<std::int64_t>(rng() % 21)});
    const auto best = oracle::brute_force_min_perfect(n, edges);
    if (best == std::numeric_limits<std::int64_t>::max()) {
      EXPECT_THROW(min_weight_perfect_matching(n, edges), std::logic_error);
      continue;
    }
    const auto mate = min_weight_perfect_matching(n, edges);
    for (int v = 0; v < n; ++v) {
      ASSERT_GE(mate[static_cast<std::size_t>(v)], 0);
      EXPECT_EQ(mate[static_cast<std::size_t>(mate[static_cast<std::size_t>(v)])], v);
    }
    EXPECT_EQ(matching_weight(edges, mate), best) << "trial " << trial;
    ++compared;
  }
  EXPECT_GT(compared, 150);
}

TEST(Matching, Deterministic) {
  std::mt19937_64 rng(42);
  std::vector<MatchingEdge> edges;
  for (int u = 0; u < 10; ++u)
    for (int v = u + 1; v < 10; ++v) edges.push_back({u, v, static_cast<std::int64_t>(rng() % 3)});
  EXPECT_EQ(min_weight_perfect_matching(10, edges), min_weight_perfect_matching(10, edges));
}

TEST(Geometry, UnitWeights) {
  const auto l = build_lattice(5);
  for (auto b : {CheckBasis::x, CheckBasis::z}) {
    const MatchingGeometry g(l, b);
    const auto& ps = l.plaquettes(b);
    for (const auto& p : ps) {
      EXPECT_EQ(g.distance(p.id, p.id, 0), 0);
      EXPECT_EQ(g.distance(p.id, p.id, 1), 1);
      EXPECT_EQ(g.distance(p.id, p.id, -3), 3);
      for (const auto& q : ps) {
        bool share = false;
        for (int x : p.data)
          for (int y : q.data) share |= x == y;
        if (share && p.id != q.id) EXPECT_EQ(g.distance(p.id, q.id, 0), 1);
        EXPECT_EQ(g.distance(p.id, q.id, 0), g.distance(q.id, p.id, 0));
        EXPECT_EQ(static_cast<int>(g.path(p.id, q.id, 0).size()), g.distance(p.id, q.id, 0));
      }
      EXPECT_GE(g.boundary_distance(p.id), 1);
      EXPECT_EQ(static_cast<int>(g.boundary_path(p.id).size()), g.boundary_distance(p.id));
    }
    EXPECT_THROW(g.distance(0, 0, g.max_dt() + 1), std::out_of_range);
  }
}

TEST(Geometry, BoundaryAdjacentPlaquettes) {
  const auto l = build_lattice(3);
  for (auto b : {CheckBasis::x, CheckBasis::z}) {
    const MatchingGeometry g(l, b);
    for (const auto& p : l.plaquettes(b)) EXPECT_EQ(g.boundary_distance(p.id), 1);
  }
}

TEST(Geometry, CubicGraphIsManhattan) {
  const auto l = build_lattice(5);
  const MatchingGeometry g(l, CheckBasis::z, -1, false);
  for (const auto& p : l.z_plaquettes)
    for (const auto& q : l.z_plaquettes)
      for (int dt = -2; dt <= 2; ++dt)
        EXPECT_EQ(g.distance(p.id, q.id, dt), g.distance(p.id, q.id, 0) + std::abs(dt));
}

TEST(Sampler, ZeroRatesNoEvents) {
  const auto l = build_lattice(5);
  const ErrorTables t(ErrorModelParams::standard(0, 0, GateFlavour::s_gate), l);
  const auto rec = sample_shot(l, t, 5, 1);
  EXPECT_TRUE(rec.x_grid.event_list().empty());
  EXPECT_TRUE(rec.z_grid.event_list().empty());
  EXPECT_FALSE(adjudicate(rec.frame, Decoder(l).correction(rec), l).failed());
}

TEST(Sampler, BulkXBetweenRoundsGivesTwoEvents) {
  const auto l = build_lattice(5);
  const int q = l.data_index(2, 2);
  const auto rec = run_check_rounds(
      l, 5, [](CheckBasis, const Plaquette&, int) { return TableDraw{}; },
      [&](int r, PauliFrame& f) {
        if (r == 2) f.x[static_cast<std::size_t>(q)] ^= 1;
      });
  const auto ev = rec.z_grid.event_list();
  ASSERT_EQ(ev.size(), 2u);
  for (const auto& [r, p] : ev) {
    EXPECT_EQ(r, 2);
    const auto& data = l.z_plaquettes[static_cast<std::size_t>(p)].data;
    EXPECT_NE(std::find(data.begin(), data.end(), q), data.end());
  }
  EXPECT_TRUE(rec.x_grid.event_list().empty());
  const auto out = adjudicate(rec.frame, Decoder(l).correction(rec), l);
  EXPECT_FALSE(out.failed());
}

TEST(Sampler, ParityFlipGivesTimePair) {
  const auto l = build_lattice(3);
  const int target = 1;
  const auto rec = run_check_rounds(
      l, 3,
      [&](CheckBasis b, const Plaquette& p, int r) {
        return TableDraw{0, 0, b == CheckBasis::x && p.id == target && r == 1};
      },
      [](int, PauliFrame&) {});
  const auto ev = rec.x_grid.event_list();
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[0], (std::pair<int, int>{1, target}));
  EXPECT_EQ(ev[1], (std::pair<int, int>{2, target}));
}

TEST(Adjudicate, Examples) {
  const auto l = build_lattice(3);
  PauliFrame zero(l.n_data());
  EXPECT_FALSE(adjudicate(zero, zero, l).failed());
  PauliFrame chain(l.n_data());
  for (int q : l.logical_x_support) chain.x[static_cast<std::size_t>(q)] = 1;
  EXPECT_TRUE(adjudicate(chain, zero, l).logical_x_failed);
  PauliFrame single(l.n_data());
  single.x[4] = 1;
  EXPECT_THROW(adjudicate(single, zero, l), std::logic_error);
}

TEST(Decoder, SingleFaultsCorrectedAtDistanceThree) {
  for (auto f : {GateFlavour::s_gate, GateFlavour::sqrtswap}) {
    const auto rep = faults::single_fault_sweep(3, ErrorModelParams::standard(0.01, 0.0, f));
    EXPECT_GT(rep.total, 400);
    EXPECT_EQ(rep.failed, 0) << to_string(f) << (rep.examples.empty() ? "" : ": " + rep.examples.front());
  }
}

// adjudicate throws if a correction leaves any stabiliser violated.
TEST(Decoder, CorrectionsAlwaysStabiliserConsistent) {
  for (int d : {3, 5}) {
    const auto l = build_lattice(d);
    const Decoder dec(l);
    for (auto f : {GateFlavour::s_gate, GateFlavour::sqrtswap}) {
      const ErrorTables t(ErrorModelParams::standard(0.02, 0.01, f), l);
      for (std::uint64_t s = 0; s < 300; ++s) {
        const auto rec = sample_shot(l, t, d, s);
        EXPECT_NO_THROW(adjudicate(rec.frame, dec.correction(rec), l));
      }
    }
  }
}

// Phenomenological noise on the cubic graph has a known threshold near 3%.
TEST(Decoder, PhenomenologicalSanity) {
  auto rate = [](int d, double q) {
    const auto l = build_lattice(d);
    const Decoder dec(l, false);
    std::mt19937_64 rng(5);
    int fails = 0;
    const int shots = 1500;
    for (int s = 0; s < shots; ++s) {
      const auto rec = run_check_rounds(
          l, d,
          [&](CheckBasis b, const Plaquette&, int) {
            TableDraw t;
            t.flip = b == CheckBasis::z && uniform01(rng) < q;
            return t;
          },
          [&](int, PauliFrame& fr) {
            for (auto& x : fr.x) x ^= static_cast<std::uint8_t>(uniform01(rng) < q);
          });
      fails += adjudicate(rec.frame, dec.correction(rec), l).logical_x_failed;
    }
    return static_cast<double>(fails) / shots;
  };
  EXPECT_LT(rate(7, 0.015), rate(3, 0.015));
  EXPECT_GT(rate(7, 0.045), rate(3, 0.045));
}
