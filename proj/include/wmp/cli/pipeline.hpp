// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "wmp/cli/config.hpp"
#include "wmp/wmp.hpp"

namespace wmp::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Geometry measured at one anchor.
struct AnchorGeometry {
  int n = 0;
  Case kind = Case::Low;
  Real ratio;
  GeometryCheck prop35;
  GeometryCheck lemma37;
  PeriodicPoint periodic;
  /// |V| <= (1 + rho)|U|, the precondition of the central-branch constants.
  bool cor36_qualifies = false;
  std::optional<Cor36> cor36;
  std::string cor36_error;
  int lemma24_violations = 0;
};

/// Graph of the first-return map of the window of p0, sampled per branch.
struct ReturnMapPlot {
  Real x;
  Interval V;
  int components = 0;
  /// Branches too narrow to draw.
  int hidden = 0;
  Real coverage;
  std::optional<Interval> U;
  int central_time = 0;
  /// Drawn branches: (lo, hi, time) and sample points (x, R(x)).
  struct Curve {
    double lo = 0, hi = 0;
    int time = 0;
    std::vector<std::pair<double, double>> points;
  };
  std::vector<Curve> curves;
};

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct DensityTables {
  Interval reference;
  int horizon = 0;
  std::vector<DensityRow> control;
  std::vector<DensityRow> entry;
};

struct ReportBundle {
  RunConfig config;
  AdmissibilityReport admissibility;
  ClosestApproachTable table;
  std::vector<int> q_violations;
  AnchorSet anchors;
  std::vector<AnchorGeometry> geometry;
  TransferRangeSeq ranges;
  std::vector<DPoint> markov_windows;
  WeakMarkovReport markov;
  std::optional<DensityTables> density;
  std::optional<ReturnMapPlot> return_map;
  std::vector<Verdict> verdicts;
  std::vector<std::string> notes;
  /// Not part of the report files, which must not depend on timing.
  double wall_seconds = 0.0;

  bool passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
  }
};

inline UnimodalMap build_map(const RunConfig& cfg) {
  return UnimodalMap::from_decimal(cfg.alpha, cfg.a, cfg.precision_bits);
}

namespace detail {

inline ReturnMapPlot return_map_plot(const UnimodalMap& map, const RunConfig& cfg) {
  Real p0 = reversing_fixed_point(map);
  ReturnStructure rs = return_components(map, p0, cfg.max_time, Real(cfg.min_width, map.bits()));
  ReturnMapPlot plot{p0, rs.V, static_cast<int>(rs.components.size()), 0, rs.coverage, rs.U,
                     rs.central_time, {}};
  Real visible = rs.V.length() / 1000;
  constexpr int kSamples = 32;
  for (const auto& comp : rs.components) {
    if (comp.interval.length() < visible) {
      ++plot.hidden;
      continue;
    }
    ReturnMapPlot::Curve curve{comp.interval.lo().to_double(), comp.interval.hi().to_double(),
                               comp.time, {}};
    for (int k = 0; k <= kSamples; ++k) {
      Real y = comp.interval.lo() + comp.interval.length() * k / kSamples;
      Real z = y;
      for (int j = 0; j < comp.time; ++j) z = map.eval(z);
      curve.points.emplace_back(y.to_double(), z.to_double());
    }
    plot.curves.push_back(std::move(curve));
  }
  return plot;
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace detail

/// admissibility, closest approach, anchors, geometry, transfer ranges,
/// weak-Markov sampling, density ratios and the return-map figure data.
inline ReportBundle run_pipeline(const RunConfig& cfg) {
  validate(cfg);
  auto start = std::chrono::steady_clock::now();
  ReportBundle b;
  b.config = cfg;
  UnimodalMap map = build_map(cfg);
  const int bits = map.bits();
  Real rho(cfg.rho, bits);
  Real delta_min(cfg.delta_min, bits);
  Real coverage_min(cfg.coverage_min, bits);
  auto verdict = [&](std::string name, bool pass, std::string detail) {
    b.verdicts.push_back({std::move(name), pass, std::move(detail)});
  };

  b.admissibility = admissibility_check(map, 1000);
  verdict("admissibility", b.admissibility.passed,
          "max sampled Schwarzian " + b.admissibility.max_schwarzian.to_string(6));

  if (auto att = detect_periodic_attractor(map, std::max(cfg.orbit_horizon, 256))) {
    throw PeriodicAttractorSuspected(
        "critical orbit converges to a cycle of period " + std::to_string(att->period) +
        " near " + att->point.to_string(12) + " with multiplier " + att->multiplier.to_string(6));
  }

  const double cost = precision_cost_bits(map, cfg.orbit_horizon);
  if (cost > cfg.precision_bits - 64) {
    b.notes.push_back("orbit of length " + std::to_string(cfg.orbit_horizon) + " may lose " +
                      detail::fmt(cost) + " bits; the critical orbit was computed at " +
                      "escalated precision");
  }

  b.table = closest_approach(map, cfg.orbit_horizon);
  b.q_violations = q_table_violations(map, b.table);
  verdict("qtable.minimal", b.q_violations.empty(),
          std::to_string(b.table.rows.size()) + " rows, " +
              std::to_string(b.q_violations.size()) + " violations");
  const bool recurrent = b.table.termination == Termination::HorizonReached;
  verdict("critical.recurrent", recurrent, to_string(b.table.termination));

  if (map.height() > Real(1, bits) / 2) b.return_map = detail::return_map_plot(map, cfg);

  if (!recurrent) {
    b.ranges.reason = "critical point is not recurrent within horizons.orbit";
  } else {
    AnchorOptions opt;
    opt.candidate_depth = cfg.candidate_depth;
    opt.refine_depth = cfg.refine_depth;
    opt.threads = cfg.threads;
    b.anchors = anchor_points(map, b.table, opt);
    UnimodalMap hp = map.at_precision(b.table.precision_bits);
    const CriticalOrbit& orb = b.table.orbit;

    b.geometry = parallel_map(b.anchors.anchors.size(), cfg.threads, [&](std::size_t i) {
      const AnchorPoint& a = b.anchors.anchors[i];
      AnchorGeometry g;
      g.n = a.n;
      g.kind = a.kind;
      g.ratio = a.ratio;
      g.prop35 = verify_prop35(hp, orb, a, rho, delta_min, cfg.prop35_components, cfg.max_time);
      g.lemma37 = verify_lemma37(hp, orb, a, delta_min);
      g.periodic = central_periodic_point(hp, orb, a, rho, delta_min);
      g.lemma24_violations = lemma24_violations(hp, orb, a.cd);
      g.cor36_qualifies = a.ratio <= 1 + rho;
      try {
        g.cor36 = verify_cor36(hp, orb, a.cd, cfg.cor36_grid);
      } catch (const Error& e) {
        g.cor36_error = e.what();
      }
      return g;
    });

    int measured = 0;
    int below = 0;
    int overlaps = 0;
    for (const auto& g : b.geometry) {
      for (const GeometryCheck* chk : {&g.prop35, &g.lemma37, &g.periodic.check}) {
        if (!chk->applicable || !chk->delta) continue;
        ++measured;
        if (!chk->pass) ++below;
      }
      overlaps += g.lemma24_violations;
    }
    verdict("geometry.delta_min", below == 0,
            std::to_string(measured) + " measured, " + std::to_string(below) + " below delta_min");
    verdict("lemma24.disjoint", overlaps == 0, std::to_string(overlaps) + " overlapping pairs");

    std::vector<PeriodicPoint> periodic;
    for (const auto& g : b.geometry) periodic.push_back(g.periodic);
    b.ranges = transfer_range_sequence(hp, b.anchors.anchors, periodic, rho, delta_min);
    bool shrinking = b.ranges.ranges.size() >= 2;
    for (std::size_t i = 1; i < b.ranges.ranges.size(); ++i) {
      const auto& p = b.ranges.ranges[i - 1];
      const auto& q = b.ranges.ranges[i];
      if (!(q.V_length < p.V_length) || !(q.dist_to_c < p.dist_to_c)) shrinking = false;
    }
    verdict("transfer_ranges.shrinking", shrinking,
            std::to_string(b.ranges.ranges.size()) + " ranges");

    for (const auto& a : b.anchors.anchors) {
      if (static_cast<int>(b.markov_windows.size()) >= cfg.markov_windows) break;
      b.markov_windows.push_back({a.n, a.cd.psi, a.cd.U});
    }
    WeakMarkovOptions wo;
    wo.samples = cfg.markov_samples;
    wo.horizon = cfg.entry_horizon;
    wo.seed = cfg.seed;
    wo.threads = cfg.threads;
    b.markov = verify_weak_markov(map, orb, b.markov_windows, wo, delta_min);
    verdict("weak_markov.koebe", b.markov.koebe_violations == 0,
            std::to_string(b.markov.koebe_violations) + " violations over " +
                std::to_string(b.markov.measured) + " measured pairs");
    verdict("weak_markov.success", Real(b.markov.success_fraction(), bits) >= coverage_min,
            "success fraction " + detail::fmt(b.markov.success_fraction()) + " against " +
                cfg.coverage_min);

    std::vector<DPoint> D;
    for (const auto& a : b.anchors.anchors) D.push_back({a.n, a.cd.psi, a.cd.U});
    std::stable_sort(D.begin(), D.end(),
                     [](const DPoint& p, const DPoint& q) { return p.V.length() > q.V.length(); });
    if (!D.empty()) {
      Real p0 = reversing_fixed_point(map);
      Real h(cfg.density_halfwidth, bits);
      Interval ref = Interval::open(max(p0 - h, Real(0, bits)), min(p0 + h, Real(1, bits)));
      DensityTables dens{ref, cfg.entry_horizon, {}, {}};
      dens.control = density_experiment(map, full_set(), D, cfg.density_samples, cfg.seed,
                                        cfg.threads);
      dens.entry = density_experiment(map, enters_window(ref, cfg.entry_horizon), D,
                                      cfg.density_samples, cfg.seed, cfg.threads);
      b.density = std::move(dens);
    }
  }
  b.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return b;
}

}  // namespace wmp::cli
