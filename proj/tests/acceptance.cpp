// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion.
//
// usage: acceptance <lab binary> <config file> <scratch dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wmp/cli/config.hpp"
#include "wmp/cli/pipeline.hpp"
#include "wmp/wmp.hpp"

namespace {

using namespace wmp;
using namespace wmp::cli;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Real median(std::vector<Real> v) {
  std::sort(v.begin(), v.end(), [](const Real& a, const Real& b) { return a < b; });
  std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

// 1. Chebyshev branches against sin^2(k pi / 2^(n+1)).
Outcome chebyshev_oracle() {
  auto t0 = std::chrono::steady_clock::now();
  const int bits = 256;
  UnimodalMap f = UnimodalMap::from_decimal("2", "1", bits);
  Real tol = Real::pow2(-128, bits);
  Real pi = Real::pi(bits);
  int bad = 0;
  for (int n = 1; n <= 10; ++n) {
    const long count = 1L << n;
    std::vector<Real> e;
    for (long k = 0; k <= count; ++k) {
      Real s = sin(pi * k / (2 * count));
      e.push_back(s * s);
    }
    std::set<std::string> distinct;
    for (long k = 0; k < count; ++k) {
      Branch br = monotone_branch_at(f, (e[k] + e[k + 1]) / 2, n);
      if (abs(br.domain.lo() - e[k]) > tol || abs(br.domain.hi() - e[k + 1]) > tol) ++bad;
      distinct.insert(br.domain.lo().to_string(30));
    }
    if (static_cast<long>(distinct.size()) != count) ++bad;
  }
  double t = seconds_since(t0);
  return {bad == 0 && t < 10,
          std::to_string(bad) + " endpoint or count mismatches for n <= 10, " + fmt("%.2f s", t)};
}

// 2. first_entry_time against membership in enumerated transfer components.
Outcome entry_oracle(const ReportBundle& b) {
  auto t0 = std::chrono::steady_clock::now();
  UnimodalMap map = build_map(b.config);
  const int max_time = 1000;
  Real min_width("1e-8", map.bits());
  std::vector<const AnchorPoint*> bases;
  for (const auto& a : b.anchors.anchors) {
    if (bases.size() < 3) bases.push_back(&a);
  }
  if (bases.empty()) return {false, "no anchors to take windows from"};

  struct Window {
    int n;
    Interval V;
    std::vector<Component> comps;
    double coverage;
  };
  std::vector<Window> windows;
  for (const AnchorPoint* a : bases) {
    Real x = a->x;
    x.set_precision(map.bits());
    TransferStructure ts = transfer_components(map, x, max_time, min_width);
    windows.push_back({a->n, ts.V, std::move(ts.components), ts.coverage.to_double()});
  }
  auto gen = make_stream(b.config.seed, 0x300);
  int checked = 0, uncovered = 0, mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const Window& w = windows[gen() % windows.size()];
    Real y(unit_double(gen), map.bits());
    auto it = std::upper_bound(w.comps.begin(), w.comps.end(), y,
                               [](const Real& v, const Component& c) { return v < c.interval.lo(); });
    const Component* hit = nullptr;
    if (it != w.comps.begin() && std::prev(it)->interval.contains(y)) hit = &*std::prev(it);
    if (hit == nullptr) {
      ++uncovered;
      continue;
    }
    ++checked;
    auto t = first_entry_time(map, y, w.V, max_time);
    if (!t || *t != hit->time) ++mismatches;
  }
  std::string cov;
  bool covered = true;
  for (const auto& w : windows) {
    cov += " x(" + std::to_string(w.n) + ")=" + fmt("%.4f", w.coverage);
    if (w.coverage < 0.99) covered = false;
  }
  double t = seconds_since(t0);
  return {mismatches == 0 && covered && t < 120,
          std::to_string(mismatches) + " mismatches over " + std::to_string(checked) +
              " covered pairs (" + std::to_string(uncovered) + " uncovered); coverage" + cov +
              " (need >= 0.99); " + fmt("%.1f s", t)};
}

// 3. q-table minimality and the (1, 2, 3, 5, 8) prefix.
Outcome qtable(const ReportBundle& b) {
  const auto& rows = b.table.rows;
  bool decreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].dist < rows[i - 1].dist)) decreasing = false;
  }
  // Independent prefix: plain logistic recursion at 1024 bits.
  const int bits = 1024;
  Real a(b.config.a, bits);
  Real x = Real(1, bits) / 2;
  Real half = x;
  std::vector<int> oracle{1};
  x = 4 * a * x * (1 - x);
  Real best = abs(x - half);
  for (int t = 2; oracle.size() < 5 && t <= 1000; ++t) {
    x = 4 * a * x * (1 - x);
    if (abs(x - half) < best) {
      best = abs(x - half);
      oracle.push_back(t);
    }
  }
  std::vector<int> got;
  for (std::size_t i = 0; i < rows.size() && i < 5; ++i) got.push_back(rows[i].q);
  bool prefix = got == oracle && got == std::vector<int>{1, 2, 3, 5, 8};
  std::string q;
  for (std::size_t i = 0; i < rows.size() && i < 12; ++i) {
    q += (i ? "," : "") + std::to_string(rows[i].q);
  }
  return {b.q_violations.empty() && decreasing && prefix && b.table.max_steps == 10000,
          std::to_string(rows.size()) + " rows over " + std::to_string(b.table.max_steps) +
              " steps, " + std::to_string(b.q_violations.size()) + " rescan violations, q=(" + q +
              ",...), prefix " + (prefix ? "matches" : "differs")};
}

// 4. Geometry floors over every measured delta.
Outcome geometry_floors(const ReportBundle& b, double pipeline_seconds) {
  std::vector<Real> deltas;
  for (const auto& g : b.geometry) {
    for (const GeometryCheck* c : {&g.prop35, &g.lemma37, &g.periodic.check}) {
      if (c->applicable && c->delta) deltas.push_back(*c->delta);
    }
  }
  if (deltas.empty()) return {false, "no delta measured"};
  Real lo = *std::min_element(deltas.begin(), deltas.end(),
                              [](const Real& p, const Real& q) { return p < q; });
  Real med = median(deltas);
  Real ratio = lo / med;
  bool floor = lo >= Real("1e-3", 64);
  bool stable = ratio >= Real("0.25", 64);
  return {floor && stable && pipeline_seconds < 300,
          std::to_string(deltas.size()) + " deltas, min " + lo.to_string(4) + " (need >= 1e-3), " +
              "min/median " + ratio.to_string(4) + " (need >= 0.25), pipeline " +
              fmt("%.0f s", pipeline_seconds)};
}

// 5. Koebe consistency of the weak-Markov pairs.
Outcome koebe(const ReportBundle& b) {
  const auto& m = b.markov;
  return {m.koebe_violations == 0 && m.measured >= 1000,
          std::to_string(m.koebe_violations) + " violations over " + std::to_string(m.measured) +
              " measured of " + std::to_string(m.pairs) + " sample-window pairs"};
}

// 6. Disjoint orbit of M = f(U_x).
Outcome disjointness(const ReportBundle& b) {
  int bad = 0;
  for (const auto& g : b.geometry) bad += g.lemma24_violations;
  return {bad == 0 && !b.geometry.empty(),
          std::to_string(bad) + " overlaps over " + std::to_string(b.geometry.size()) + " anchors"};
}

// 7. Shrinking transfer ranges.
Outcome shrinking(const ReportBundle& b) {
  const auto& r = b.ranges.ranges;
  if (r.size() < 2) return {false, std::to_string(r.size()) + " ranges"};
  bool strict = true;
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i].V_length < r[i - 1].V_length) || !(r[i].dist_to_c < r[i - 1].dist_to_c)) {
      strict = false;
    }
  }
  Real ratio = r.back().V_length / r.front().V_length;
  return {strict && ratio <= Real("0.1", 64),
          std::to_string(r.size()) + " ranges, |V| " + r.front().V_length.to_string(4) + " -> " +
              r.back().V_length.to_string(4) + ", last/first " + ratio.to_string(4) +
              (strict ? ", strictly decreasing" : ", NOT strictly decreasing")};
}

// 8. Density trend for the entry predicate.
Outcome density(const ReportBundle& b) {
  if (!b.density || b.density->entry.empty()) return {false, "no density table"};
  const auto& rows = b.density->entry;
  int drops = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double se = std::hypot(rows[i].std_error, rows[i - 1].std_error);
    if (rows[i].ratio < rows[i - 1].ratio - 2 * se) ++drops;
  }
  bool samples = std::all_of(rows.begin(), rows.end(),
                             [](const DensityRow& r) { return r.samples >= 10000; });
  double last = rows.back().ratio;
  return {drops == 0 && last >= 0.95 && samples,
          std::to_string(rows.size()) + " windows, " + std::to_string(drops) +
              " drops beyond 2 SE, first " + fmt("%.4f", rows.front().ratio) + ", final " +
              fmt("%.4f", last) + " (need >= 0.95)"};
}

// 9. Uniform A_sup across anchors with |V| <= (1 + rho)|U|.
Outcome cor36(const ReportBundle& b) {
  std::vector<Real> values;
  bool finite = true;
  for (const auto& g : b.geometry) {
    if (!g.cor36_qualifies) continue;
    if (!g.cor36) {
      finite = false;
      continue;
    }
    if (!g.cor36->A_sup.is_finite()) finite = false;
    values.push_back(g.cor36->A_sup);
  }
  if (values.empty()) {
    Real least;
    bool have = false;
    for (const auto& g : b.geometry) {
      if (!have || g.ratio < least) least = g.ratio;
      have = true;
    }
    return {false, "no qualifying anchor: smallest |V|/|U| is " +
                       (have ? least.to_string(4) : std::string("n/a")) + ", rho = " +
                       b.config.rho};
  }
  Real hi = *std::max_element(values.begin(), values.end(),
                              [](const Real& p, const Real& q) { return p < q; });
  Real ratio = hi / median(values);
  return {finite && ratio <= 10, std::to_string(values.size()) + " qualifying anchors, max/median " +
                                     ratio.to_string(4)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 10. Byte-identical reports from two `lab run` invocations.
Outcome determinism(const std::string& lab, const std::string& config, const fs::path& scratch) {
  fs::remove_all(scratch);
  std::vector<fs::path> dirs{scratch / "threads1", scratch / "threads2"};
  const unsigned threads[] = {1, 2};
  for (int i = 0; i < 2; ++i) {
    std::string cmd = "\"" + lab + "\" run \"" + config + "\" --output.dir \"" + dirs[i].string() +
                      "\" --parallel.threads " + std::to_string(threads[i]) + " > \"" +
                      (scratch / ("log" + std::to_string(i) + ".txt")).string() + "\" 2>&1";
    fs::create_directories(scratch);
    int rc = std::system(cmd.c_str());
    if (rc == -1 || !fs::exists(dirs[i] / "report.json")) {
      return {false, "lab run failed: " + cmd};
    }
  }
  int files = 0, differ = 0;
  for (const auto& entry : fs::directory_iterator(dirs[0])) {
    auto ext = entry.path().extension();
    if (ext != ".json" && ext != ".csv" && ext != ".svg") continue;
    ++files;
    fs::path other = dirs[1] / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) ++differ;
  }
  return {files >= 3 && differ == 0,
          std::to_string(files) + " JSON/CSV/SVG files, " + std::to_string(differ) +
              " differ between 1 and 2 threads"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::fprintf(stderr, "usage: %s <lab> <config> <scratch dir>\n", argv[0]);
    return 2;
  }
  const std::string lab = argv[1];
  const std::string config = argv[2];
  const fs::path scratch = argv[3];

  int failed = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("[%s] %2d %-28s %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  };
  auto guarded = [&](const std::function<Outcome()>& fn) {
    try {
      return fn();
    } catch (const std::exception& e) {
      return Outcome{false, std::string("error: ") + e.what()};
    }
  };

  report(1, "chebyshev-branch-oracle", guarded(chebyshev_oracle));

  RunConfig cfg;
  ReportBundle bundle;
  double pipeline_seconds = 0;
  try {
    cfg = load_config(config);
    auto t0 = std::chrono::steady_clock::now();
    bundle = run_pipeline(cfg);
    pipeline_seconds = seconds_since(t0);
  } catch (const std::exception& e) {
    std::printf("pipeline error: %s\n", e.what());
    return 2;
  }

  report(2, "entry-time-oracle", guarded([&] { return entry_oracle(bundle); }));
  report(3, "qtable-minimality", guarded([&] { return qtable(bundle); }));
  report(4, "geometry-floors", guarded([&] { return geometry_floors(bundle, pipeline_seconds); }));
  report(5, "koebe-consistency", guarded([&] { return koebe(bundle); }));
  report(6, "orbit-disjointness", guarded([&] { return disjointness(bundle); }));
  report(7, "transfer-range-shrinking", guarded([&] { return shrinking(bundle); }));
  report(8, "density-trend", guarded([&] { return density(bundle); }));
  report(9, "central-derivative-uniformity", guarded([&] { return cor36(bundle); }));
  report(10, "determinism", guarded([&] { return determinism(lab, config, scratch); }));

  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
