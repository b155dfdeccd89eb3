// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#include "wmp/return_structure.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"
#include "wmp/branch.hpp"
#include "wmp/nice.hpp"

namespace wmp {
namespace {

using testing::near;
using testing::near_pow2;
using testing::quadratic;

Real iterate(const UnimodalMap& f, Real y, int n) {
  for (int j = 0; j < n; ++j) y = f.eval(y);
  return y;
}

/// Nice candidates left of c, closest to c first.
std::vector<Real> left_candidates(const UnimodalMap& f, int depth) {
  std::vector<Real> out;
  for (auto& cand : nice_candidates(f, depth)) {
    if (cand.point < f.critical_point()) out.push_back(cand.point);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

TEST(IsNice, Examples) {
  auto f = quadratic("0.975");
  auto p0 = reversing_fixed_point(f);
  EXPECT_TRUE(near_pow2(p0, Real(29, 256) / 39, 200));
  auto v = is_nice(f, p0, 10);
  EXPECT_TRUE(v.certified());
  EXPECT_EQ(v.depth, 0);

  auto w = is_nice(f, f.point("0.6"), 10);
  EXPECT_EQ(w.kind, NiceKind::NotNice);
  EXPECT_EQ(w.depth, 5);

  auto g = quadratic("1");
  EXPECT_TRUE(is_nice(g, g.point("0.75"), 5).certified());
  EXPECT_THROW(is_nice(g, g.critical_point(), 5), DomainError);
  EXPECT_THROW(is_nice(g, g.point("0.3"), 0), DomainError);
}

TEST(IsNice, PreimagesCertifyAtLandingDepth) {
  auto f = quadratic("0.975");
  auto v = is_nice(f, f.tau(reversing_fixed_point(f)), 10);
  EXPECT_TRUE(v.certified());
  EXPECT_EQ(v.depth, 1);
}

TEST(NiceCandidates, Examples) {
  auto g = quadratic("1");
  auto d0 = nice_candidates(g, 0);
  ASSERT_EQ(d0.size(), 1u);
  EXPECT_EQ(d0[0].point, Real("0.75", 256));
  auto d1 = nice_candidates(g, 1);
  ASSERT_EQ(d1.size(), 2u);
  EXPECT_EQ(d1[0].point, Real("0.25", 256));
  EXPECT_EQ(d1[1].point, Real("0.75", 256));
  EXPECT_THROW(nice_candidates(g, -1), DomainError);
  EXPECT_THROW(nice_candidates(quadratic("0.5"), 3), NoFixedPoint);
}

// Tree filtering agrees with the orbit-based niceness test.
TEST(NiceCandidates, AgreeWithOrbitTest) {
  auto f = quadratic("0.975");
  auto cands = nice_candidates(f, 9);
  for (std::size_t i = 1; i < cands.size(); ++i) EXPECT_LT(cands[i - 1].point, cands[i].point);
  for (const auto& cand : cands) {
    auto v = is_nice(f, cand.point, cand.depth + 2);
    EXPECT_TRUE(v.certified()) << cand.point;
  }
  // A preimage that is rejected must fail the orbit test.
  Real p0 = reversing_fixed_point(f);
  Real z = f.inverse(f.inverse(f.tau(p0), Side::Left), Side::Right);
  bool kept = std::any_of(cands.begin(), cands.end(),
                          [&](const NiceCandidate& c) { return abs(c.point - z) <= f.tol(); });
  EXPECT_EQ(kept, is_nice(f, z, 5).nice());
}

TEST(NiceCandidates, NestedWindows) {
  auto f = quadratic("0.975");
  auto left = left_candidates(f, 10);
  ASSERT_GT(left.size(), 3u);
  for (std::size_t i = 1; i < left.size(); ++i) {
    Interval outer = window(f, left[i]);
    Interval inner = window(f, left[i - 1]);
    EXPECT_TRUE(outer.contains(inner, Real(0, 256)));
  }
}

TEST(NiceCandidates, WordsReproducePointsAtHigherPrecision) {
  auto f = quadratic("0.975");
  auto g = f.at_precision(1024);
  for (const auto& cand : nice_candidates(f, 7)) {
    EXPECT_EQ(static_cast<int>(cand.word.size()), cand.depth);
    Real hi = preimage_from_word(g, cand.word);
    EXPECT_TRUE(near_pow2(hi, cand.point, 180)) << cand.word;
    EXPECT_TRUE(near_pow2(iterate(g, hi, cand.depth), reversing_fixed_point(g), 900));
  }
}

TEST(LocalSearch, FindsTreeCandidatesInAnInterval) {
  auto f = quadratic("0.975");
  auto cands = nice_candidates(f, 8);
  Real lo = f.point("0.3");
  Real hi = f.point("0.45");
  auto found = nice_preimages_in(f, lo, hi, 8, 1'000'000);
  std::vector<Real> expected;
  for (auto& c : cands) {
    if (c.point > lo && c.point <= hi) expected.push_back(c.point);
  }
  ASSERT_EQ(found.found.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_TRUE(near_pow2(found.found[i].point, expected[i], 150));
    EXPECT_TRUE(near_pow2(preimage_from_word(f, found.found[i].word), expected[i], 150));
  }
}

// Levels are kept in domain order, so the largest-only mode returns the
// largest preimage of the full search.
TEST(LocalSearch, LargestModeMatchesFullSearch) {
  auto f = quadratic("0.975");
  Real lo = f.point("0.35");
  Real hi = f.point("0.47");
  auto all = nice_preimages_in(f, lo, hi, 14, 2'000'000);
  auto top = nice_preimages_in(f, lo, hi, 14, 2'000'000, SearchMode::Largest);
  ASSERT_FALSE(all.found.empty());
  ASSERT_FALSE(top.found.empty());
  EXPECT_TRUE(near_pow2(all.found.back().point, top.found.back().point, 150));
}

TEST(CentralDomain, FixedPointExample) {
  auto f = quadratic("0.975");
  Real p0 = reversing_fixed_point(f);
  auto orb = critical_orbit(f, 50);
  auto cd = central_domain(f, orb, p0);
  EXPECT_EQ(cd.central_time, 3);
  EXPECT_TRUE(cd.S.contains(f.point("0.975")));
  EXPECT_TRUE(near_pow2(cd.U.hi() - f.critical_point(), f.critical_point() - cd.U.lo(), 180));
  EXPECT_TRUE(cd.V.contains(cd.U, f.tol()));

  // Independent oracle: scan outward from c for the first point where f^3
  // leaves V, then bisect.
  Real r = f.dist_to_c(p0);
  auto g = [&](const Real& y) { return f.dist_to_c(iterate(f, y, 3)) - r; };
  Real step = f.point("1e-4");
  Real inner = f.critical_point();
  Real outer = inner - step;
  while (g(outer).sign() < 0) {
    inner = outer;
    outer = outer - step;
  }
  Real psi = bisect(g, outer, inner, Real::pow2(-200, 256));
  EXPECT_TRUE(near_pow2(cd.psi, psi, 150));
  EXPECT_TRUE(near_pow2(iterate(f, cd.psi, 3), cd.boundary_image, 150));
}

TEST(CentralDomain, Errors) {
  auto g = quadratic("1");
  EXPECT_THROW(central_domain(g, g.point("0.75"), 100), NoReturn);
  auto f = quadratic("0.975");
  EXPECT_THROW(central_domain(f, f.critical_point(), 100), DomainError);
}

// The entry tree and the critical-itinerary pullback find the same central
// branch.
TEST(CentralDomain, AgreesWithEntryTree) {
  auto f = quadratic("0.975");
  auto orb = critical_orbit(f, 200);
  int checked = 0;
  for (const Real& x : left_candidates(f, 8)) {
    CentralDomain cd = [&] { return central_domain(f, orb, x); }();
    if (cd.central_time > 40) continue;
    auto tree = enumerate_entry_tree(f, x, cd.central_time, Real(0, 256));
    ASSERT_TRUE(tree.central.has_value()) << x;
    EXPECT_EQ(tree.central->time, cd.central_time);
    EXPECT_TRUE(near_pow2(tree.central->interval.lo(), cd.psi, 150));
    ASSERT_TRUE(tree.S.has_value());
    EXPECT_EQ(tree.S->time, cd.central_time - 1);
    ++checked;
    if (checked > 20) break;
  }
  EXPECT_GT(checked, 3);
}

TEST(ReturnComponents, ChebyshevExample) {
  auto g = quadratic("1");
  Real x = g.point("0.75");
  auto rs = return_components(g, x, 5, Real(0, 256));
  EXPECT_FALSE(rs.U.has_value());
  Real y = g.point("0.3");
  auto it = std::find_if(rs.components.begin(), rs.components.end(),
                         [&](const Component& c) { return c.interval.contains(y); });
  ASSERT_NE(it, rs.components.end());
  EXPECT_EQ(it->time, 2);
  EXPECT_EQ(first_entry_time(g, y, rs.V, 10, 1), 2);
  for (const auto& comp : rs.components) {
    EXPECT_GE(comp.time, 1);
    EXPECT_LE(comp.time, 5);
  }

  auto empty = return_components(g, x, 5, g.point("0.6"));
  EXPECT_TRUE(empty.components.empty());
  EXPECT_TRUE(empty.coverage.is_zero());
  EXPECT_THROW(return_components(g, x, 0, Real(0, 256)), DomainError);
}

void check_return_invariants(const UnimodalMap& f, const ReturnStructure& rs) {
  const Real slack = f.tol() * Real::pow2(64, 256);
  ASSERT_TRUE(rs.U.has_value());
  EXPECT_TRUE(rs.U->contains(f.critical_point()));
  EXPECT_TRUE(rs.V.contains(*rs.U, f.tol()));
  EXPECT_TRUE(near_pow2(f.tau(*rs.psi), rs.U->hi(), 150));
  EXPECT_GE(rs.coverage, 0);
  EXPECT_LE(rs.coverage, 1);
  for (std::size_t i = 0; i < rs.components.size(); ++i) {
    const auto& comp = rs.components[i];
    if (i > 0) EXPECT_LE(rs.components[i - 1].interval.hi(), comp.interval.lo() + f.tol());
    for (const Real& e : {comp.interval.lo(), comp.interval.hi()}) {
      Real img = iterate(f, e, comp.time);
      bool on_boundary = abs(img - rs.V.lo()) <= slack || abs(img - rs.V.hi()) <= slack;
      // The central branch folds: its endpoints both map to one end of V.
      EXPECT_TRUE(on_boundary) << "time " << comp.time << " endpoint " << e;
    }
    Real m = comp.interval.mid();
    EXPECT_EQ(first_entry_time(f, m, rs.V, comp.time, 1), comp.time);
  }
}

TEST(ReturnComponents, InvariantsAtFixedPoint) {
  auto f = quadratic("0.975");
  Real p0 = reversing_fixed_point(f);
  auto rs = return_components(f, p0, 25, f.point("1e-9"));
  EXPECT_EQ(rs.central_time, 3);
  check_return_invariants(f, rs);
  EXPECT_GT(rs.coverage, 0.5);
}

TEST(ReturnComponents, CoverageIsMonotone) {
  auto f = quadratic("0.975");
  Real x = left_candidates(f, 6).at(2);
  Real prev(256);
  for (int t : {5, 10, 20, 30}) {
    auto rs = return_components(f, x, t, f.point("1e-7"));
    EXPECT_GE(rs.coverage, prev) << t;
    prev = rs.coverage;
  }
  Real prev_w(2, 256);
  for (const char* w : {"1e-9", "1e-7", "1e-5", "1e-3"}) {
    auto rs = return_components(f, x, 25, f.point(w));
    EXPECT_LE(rs.coverage, prev_w) << w;
    prev_w = rs.coverage;
  }
}

TEST(TransferComponents, FixedPointExample) {
  auto f = quadratic("0.975");
  Real p0 = reversing_fixed_point(f);
  auto ts = transfer_components(f, p0, 20, f.point("1e-9"));
  ASSERT_TRUE(ts.S.has_value());
  EXPECT_EQ(ts.S->time, 2);
  EXPECT_TRUE(ts.S->interval.contains(f.point("0.975")));
  // f^2 maps the endpoint of S below a onto an end of V.
  Real img = iterate(f, ts.S->interval.lo(), 2);
  EXPECT_TRUE(abs(img - ts.V.lo()) <= f.tol() * 1e6 || abs(img - ts.V.hi()) <= f.tol() * 1e6);
  auto in_v = std::find_if(ts.components.begin(), ts.components.end(),
                           [](const Component& c) { return c.time == 0; });
  ASSERT_NE(in_v, ts.components.end());
  EXPECT_EQ(in_v->interval.lo(), ts.V.lo());
  EXPECT_EQ(in_v->interval.hi(), ts.V.hi());
  EXPECT_GT(ts.coverage, 0.9);
  EXPECT_LE(ts.coverage, 1);
}

TEST(TransferComponents, ChebyshevEntryTime) {
  auto g = quadratic("1");
  auto ts = transfer_components(g, g.point("0.75"), 4, Real(0, 256));
  Real y = g.point("0.84");
  auto it = std::find_if(ts.components.begin(), ts.components.end(),
                         [&](const Component& c) { return c.interval.contains(y); });
  ASSERT_NE(it, ts.components.end());
  EXPECT_EQ(it->time, 1);
  EXPECT_FALSE(ts.S.has_value());
}

TEST(TransferComponents, EntryBranchesMapOntoV) {
  auto f = quadratic("0.975");
  Real x = left_candidates(f, 6).at(3);
  auto ts = transfer_components(f, x, 15, f.point("1e-8"));
  const Real slack = f.tol() * Real::pow2(64, 256);
  for (const auto& comp : ts.components) {
    if (comp.time == 0) continue;
    Real lo = iterate(f, comp.interval.lo(), comp.time);
    Real hi = iterate(f, comp.interval.hi(), comp.time);
    auto img = Interval::hull(lo, hi);
    EXPECT_TRUE(abs(img.lo() - ts.V.lo()) <= slack) << comp.time;
    EXPECT_TRUE(abs(img.hi() - ts.V.hi()) <= slack) << comp.time;
    Real y = comp.interval.mid();
    for (int j = 1; j < comp.time; ++j) {
      y = f.eval(y);
      EXPECT_FALSE(f.in_window(y, x)) << "time " << comp.time << " step " << j;
    }
  }
  for (std::size_t i = 1; i < ts.components.size(); ++i) {
    EXPECT_LE(ts.components[i - 1].interval.hi(), ts.components[i].interval.lo() + f.tol());
  }
}

TEST(FirstEntryTime, Examples) {
  auto g = quadratic("1");
  Interval V = Interval::open(g.point("0.25"), g.point("0.75"));
  EXPECT_EQ(first_entry_time(g, g.point("0.5"), V, 10), 0);
  EXPECT_EQ(first_entry_time(g, g.point("0.3"), V, 10, 1), 2);
  EXPECT_FALSE(first_entry_time(g, g.point("1"), V, 50).has_value());
  EXPECT_THROW(first_entry_time(g, g.point("0.3"), V, -1), DomainError);
}

// Pointwise entry times agree with the enumerated components.
TEST(FirstEntryTime, AgreesWithEnumeration) {
  auto f = quadratic("0.975");
  auto left = left_candidates(f, 6);
  std::vector<TransferStructure> structures;
  for (std::size_t i = 0; i < 4 && i < left.size(); ++i) {
    structures.push_back(transfer_components(f, left[i], 30, f.point("1e-7")));
  }
  std::mt19937_64 gen(17);
  int matched = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto& ts = structures[static_cast<std::size_t>(trial) % structures.size()];
    Real y = testing::uniform(gen, 0.0, 1.0);
    auto it = std::find_if(ts.components.begin(), ts.components.end(),
                           [&](const Component& c) { return c.interval.contains(y); });
    if (it == ts.components.end()) continue;
    EXPECT_EQ(first_entry_time(f, y, ts.V, 30), it->time) << y;
    auto at = transfer_component_at(f, y, ts.V, 30);
    ASSERT_TRUE(at.has_value());
    EXPECT_TRUE(near_pow2(at->interval.lo(), it->interval.lo(), 150));
    ++matched;
  }
  EXPECT_GT(matched, 800);
}

// M = f(U), f(M), ..., f^n(M) are pairwise disjoint, n the time of S.
TEST(TransferComponents, CentralOrbitIsDisjoint) {
  auto f = quadratic("0.975");
  auto orb = critical_orbit(f, 200);
  int checked = 0;
  for (const Real& x : left_candidates(f, 8)) {
    CentralDomain cd = central_domain(f, orb, x);
    if (cd.central_time > 60) continue;
    int n = cd.central_time - 1;
    std::vector<Interval> images;
    Real lo = f.eval(cd.psi);
    Real hi = f.height();
    for (int j = 0; j <= n; ++j) {
      images.push_back(Interval::hull(lo, hi));
      lo = f.eval(lo);
      hi = f.eval(hi);
    }
    for (std::size_t i = 0; i < images.size(); ++i) {
      for (std::size_t j = i + 1; j < images.size(); ++j) {
        EXPECT_TRUE(images[i].disjoint(images[j], f.tol())) << x << " " << i << " " << j;
      }
    }
    if (++checked > 15) break;
  }
  EXPECT_GT(checked, 3);
}

// The index-tracking image agrees with the direct forward sweep.
TEST(BranchImage, AgreesWithForwardSweep) {
  auto f = quadratic("0.975");
  auto orb = critical_orbit(f.at_precision(1024), 400);
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 200; ++trial) {
    Real y = testing::uniform(gen, 0.0, 1.0);
    int n = 1 + trial % 40;
    std::vector<Side> sides;
    Real z = y;
    for (int j = 0; j < n; ++j) {
      sides.push_back(f.side(z));
      z = f.eval(z);
    }
    auto indexed = branch_image(f, orb, sides);
    auto direct = monotone_image(f, y, n);
    EXPECT_TRUE(near_pow2(indexed.lo(), direct.lo(), 100)) << trial;
    EXPECT_TRUE(near_pow2(indexed.hi(), direct.hi(), 100)) << trial;
  }
}

TEST(CriticalOrbit, ReliableHorizonGrowsWithPrecision) {
  auto lo = critical_orbit(quadratic("0.975", 256), 2000);
  auto hi = critical_orbit(quadratic("0.975", 512), 2000);
  EXPECT_GT(lo.reliable_steps, 100);
  EXPECT_GT(hi.reliable_steps, lo.reliable_steps);
  EXPECT_TRUE(near(lo[3], "0.335499922265625", 1e-70));
}

}  // namespace
}  // namespace wmp
