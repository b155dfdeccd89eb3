// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "wmp/closest_approach.hpp"
#include "wmp/errors.hpp"
#include "wmp/interval.hpp"
#include "wmp/map.hpp"
#include "wmp/nice.hpp"
#include "wmp/parallel.hpp"
#include "wmp/return_structure.hpp"

namespace wmp {

enum class Case { Low, High };

inline const char* to_string(Case k) { return k == Case::Low ? "LOW" : "HIGH"; }

/// HIGH iff the central branch image R_x(U_x) contains c.
inline Case classify_case(const UnimodalMap& map, const CriticalOrbit& orb,
                          const CentralDomain& cd) {
  if (cd.U.length() < map.tol()) throw DegenerateInterval("central domain below eq_tolerance");
  Interval image = cd.central_image(orb);
  return image.contains_strictly(map.critical_point(), map.tol()) ? Case::High : Case::Low;
}

/// x(n): the largest nice point found in the annulus (lo, hi] left of c.
struct AnchorPoint {
  int n = 0;
  Real x;
  /// Depth at which x lands on p0.
  int depth = 0;
  /// "tree", "search" or "psi".
  std::string source;
  Interval annulus;
  CentralDomain cd;
  Case kind = Case::Low;
  /// |V_x| / |U_x|.
  Real ratio;
};

struct AnchorSkip {
  int n = 0;
  std::string reason;
};

struct AnchorSet {
  std::vector<AnchorPoint> anchors;
  std::vector<AnchorSkip> skipped;
  /// Certified nice points collected on the way: candidates, search results
  /// and central-domain boundaries, ascending.
  std::vector<NiceCandidate> pool;
};

struct AnchorOptions {
  /// Depth of the global preimage tree.
  int candidate_depth = 12;
  /// Extra depth of the local search inside each annulus.
  int refine_depth = 48;
  /// Piece budget of one local search.
  std::size_t budget = 400'000;
  /// Central-domain boundaries psi(x), psi(psi(x)), ... added per anchor.
  int psi_chain = 6;
  unsigned threads = 1;
};

namespace detail {

inline Interval left_annulus(const UnimodalMap& hp, const ClosestApproachTable& table,
                             std::size_t i) {
  const Real& c = hp.critical_point();
  return Interval(c - table.rows[i - 1].dist, c - table.rows[i].dist, true, false);
}

}  // namespace detail

/// Anchors x(n) for n = 2, 3, ... over the rows of the closest-approach table.
///
/// Candidates come from the global preimage tree of p0, a local search in each
/// annulus and the chain of central-domain boundaries of earlier anchors. All
/// of them are nice, so the largest one found is a lower bound for the
/// supremum over all nice points; the candidate depth is reported.
inline AnchorSet anchor_points(const UnimodalMap& map, const ClosestApproachTable& table,
                               const AnchorOptions& opt) {
  AnchorSet out;
  if (table.rows.size() < 2) return out;
  UnimodalMap hp = map.at_precision(table.precision_bits);
  const CriticalOrbit& orb = table.orbit;
  const Real& c = hp.critical_point();

  auto certify = [&](NiceCandidate cand) -> std::optional<NiceCandidate> {
    cand.point = preimage_from_word(hp, cand.word);
    if (!(cand.point < c)) return std::nullopt;
    if (!is_nice(hp, cand.point, cand.depth + 1).certified()) return std::nullopt;
    return cand;
  };
  for (auto& cand : nice_candidates(map, opt.candidate_depth)) {
    if (auto ok = certify(std::move(cand))) out.pool.push_back(std::move(*ok));
  }

  const std::size_t rows = table.rows.size();
  auto searches = parallel_map(rows - 1, opt.threads, [&](std::size_t k) {
    Interval ann = detail::left_annulus(hp, table, k + 1);
    Real lo = ann.lo();
    Real hi = ann.hi();
    lo.set_precision(map.bits());
    hi.set_precision(map.bits());
    return nice_preimages_in(map, lo, hi, opt.refine_depth, opt.budget, SearchMode::Largest);
  });

  for (std::size_t i = 1; i < rows; ++i) {
    const int n = table.rows[i].n;
    Interval ann = detail::left_annulus(hp, table, i);
    for (auto& cand : searches[i - 1].found) {
      NiceCandidate copy = cand;
      copy.depth = static_cast<int>(copy.word.size());
      if (auto ok = certify(std::move(copy))) out.pool.push_back(std::move(*ok));
    }
    const NiceCandidate* best = nullptr;
    for (const auto& cand : out.pool) {
      if (cand.point > ann.lo() && cand.point <= ann.hi() &&
          (best == nullptr || cand.point > best->point)) {
        best = &cand;
      }
    }
    if (best == nullptr) {
      std::string why = "CandidateExhausted";
      if (searches[i - 1].budget_exhausted) {
        why += " (search budget exhausted at depth " +
               std::to_string(searches[i - 1].depth_reached) + ")";
      }
      out.skipped.push_back({n, why});
      continue;
    }
    NiceCandidate chosen = *best;
    try {
      CentralDomain cd = central_domain(hp, orb, chosen.point);
      Case kind = classify_case(hp, orb, cd);
      Real ratio = cd.V.length() / cd.U.length();
      std::string src = chosen.word == "psi"                  ? "psi"
                        : chosen.depth <= opt.candidate_depth ? "tree"
                                                              : "search";
      out.anchors.push_back(
          AnchorPoint{n, chosen.point, chosen.depth, src, ann, cd, kind, std::move(ratio)});

      // Central-domain boundaries are nice and accumulate on c.
      CentralDomain cur = cd;
      int depth = chosen.depth;
      for (int k = 0; k < opt.psi_chain; ++k) {
        depth += cur.central_time;
        out.pool.push_back({cur.psi, depth, "psi"});
        cur = central_domain(hp, orb, cur.psi);
      }
    } catch (const NoReturn& e) {
      if (out.anchors.empty() || out.anchors.back().n != n) out.skipped.push_back({n, e.what()});
    } catch (const PrecisionExhausted& e) {
      if (out.anchors.empty() || out.anchors.back().n != n) out.skipped.push_back({n, e.what()});
    } catch (const NotNice& e) {
      if (out.anchors.empty() || out.anchors.back().n != n) out.skipped.push_back({n, e.what()});
    }
  }
  std::sort(out.pool.begin(), out.pool.end(),
            [](const NiceCandidate& a, const NiceCandidate& b) { return a.point < b.point; });
  return out;
}

}  // namespace wmp
