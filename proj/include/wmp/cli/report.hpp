// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "wmp/cli/pipeline.hpp"

namespace wmp::cli {

using Json = nlohmann::ordered_json;

namespace detail {

/// Decimal string with its digit count. Binary floats never reach the report.
class NumberWriter {
 public:
  explicit NumberWriter(int digits) : digits_(digits) {}

  Json operator()(const Real& v) const { return Json{{"value", v.to_string(digits_)}, {"digits", digits_}}; }
  Json operator()(double v) const {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*e", kDoubleDigits - 1, v);
    return Json{{"value", buf}, {"digits", kDoubleDigits}};
  }
  Json operator()(const std::optional<Real>& v) const { return v ? (*this)(*v) : Json(nullptr); }
  Json operator()(const Interval& I) const { return Json{{"lo", (*this)(I.lo())}, {"hi", (*this)(I.hi())}}; }
  Json operator()(const std::optional<Interval>& I) const { return I ? (*this)(*I) : Json(nullptr); }

  std::string text(const Real& v) const { return v.to_string(digits_); }
  std::string text(double v) const {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*e", kDoubleDigits - 1, v);
    return buf;
  }

 private:
  static constexpr int kDoubleDigits = 17;
  int digits_;
};

inline Json check_json(const NumberWriter& num, const GeometryCheck& g) {
  return Json{{"check", g.check},       {"applicable", g.applicable}, {"reason", g.reason},
              {"delta", num(g.delta)},  {"samples", g.samples},       {"pass", g.pass}};
}

inline Json density_json(const NumberWriter& num, const std::vector<DensityRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    out.push_back(Json{{"n", r.n}, {"V_length", num(r.V_length)}, {"samples", r.samples},
                       {"hits", r.hits}, {"ratio", num(r.ratio)}, {"std_error", num(r.std_error)}});
  }
  return out;
}

}  // namespace detail

/// The whole bundle as one JSON document with a fixed key order. The config
/// echo leaves out output.dir and parallel.threads so that runs differing
/// only in those produce identical reports.
inline Json to_json(const ReportBundle& b) {
  detail::NumberWriter num(b.config.report_digits);
  Json j;
  j["schema"] = "wmplab.report/1";
  j["version"] = kVersion;
  Json cfg;
  for (const auto& k : config_keys()) {
    if (!k.run_local) cfg[k.name] = k.get(b.config);
  }
  j["config"] = cfg;
  j["admissibility"] = Json{{"samples", b.admissibility.samples},
                            {"max_schwarzian", num(b.admissibility.max_schwarzian)},
                            {"schwarzian_positive_at", num(b.admissibility.schwarzian_positive_at)},
                            {"unimodal", b.admissibility.unimodal},
                            {"pass", b.admissibility.passed}};
  Json rows = Json::array();
  for (const auto& r : b.table.rows) {
    rows.push_back(Json{{"n", r.n}, {"q", r.q}, {"c_q", num(r.c_q)}, {"dist_to_c", num(r.dist)},
                        {"V", num(r.V)}});
  }
  j["qtable"] = Json{{"termination", to_string(b.table.termination)},
                     {"max_steps", b.table.max_steps},
                     {"precision_bits", b.table.precision_bits},
                     {"rows", rows},
                     {"violations", b.q_violations}};
  Json anchors = Json::array();
  for (const auto& a : b.anchors.anchors) {
    anchors.push_back(Json{{"n", a.n},
                           {"x", num(a.x)},
                           {"depth", a.depth},
                           {"source", a.source},
                           {"annulus", num(a.annulus)},
                           {"case", to_string(a.kind)},
                           {"psi", num(a.cd.psi)},
                           {"central_time", a.cd.central_time},
                           {"U", num(a.cd.U)},
                           {"V", num(a.cd.V)},
                           {"ratio", num(a.ratio)}});
  }
  Json skipped = Json::array();
  for (const auto& s : b.anchors.skipped) skipped.push_back(Json{{"n", s.n}, {"reason", s.reason}});
  j["anchors"] = Json{{"rows", anchors}, {"skipped", skipped}, {"pool_size", b.anchors.pool.size()}};

  Json geo = Json::array();
  for (const auto& g : b.geometry) {
    Json cor = Json{{"qualifies", g.cor36_qualifies}, {"error", g.cor36_error}};
    cor["K_branch"] = g.cor36 ? num(g.cor36->K_branch) : Json(nullptr);
    cor["A_sup"] = g.cor36 ? num(g.cor36->A_sup) : Json(nullptr);
    cor["grid"] = g.cor36 ? g.cor36->grid : 0;
    geo.push_back(Json{{"n", g.n},
                       {"case", to_string(g.kind)},
                       {"ratio", num(g.ratio)},
                       {"rho", b.config.rho},
                       {"prop35", detail::check_json(num, g.prop35)},
                       {"lemma37", detail::check_json(num, g.lemma37)},
                       {"lemma38", Json{{"status", g.periodic.status},
                                        {"p", num(g.periodic.p)},
                                        {"check", detail::check_json(num, g.periodic.check)}}},
                       {"cor36", cor},
                       {"lemma24_violations", g.lemma24_violations}});
  }
  j["geometry"] = geo;

  Json ranges = Json::array();
  for (const auto& r : b.ranges.ranges) {
    ranges.push_back(Json{{"n", r.n},
                          {"y", num(r.y)},
                          {"source", r.source},
                          {"case", to_string(r.kind)},
                          {"U", num(r.U)},
                          {"V", num(r.V)},
                          {"delta", num(r.delta)},
                          {"V_length", num(r.V_length)},
                          {"dist_to_c", num(r.dist_to_c)}});
  }
  Json dropped = Json::array();
  for (const auto& d : b.ranges.dropped) dropped.push_back(Json{{"n", d.n}, {"reason", d.reason}});
  j["transfer_ranges"] = Json{{"rows", ranges}, {"dropped", dropped}, {"reason", b.ranges.reason}};

  const auto& m = b.markov;
  Json windows = Json::array();
  for (const auto& w : m.windows) {
    windows.push_back(Json{{"n", w.n},
                           {"V_length", num(w.V_length)},
                           {"samples", w.samples},
                           {"successes", w.successes},
                           {"min_delta", num(w.min_delta)},
                           {"max_K", num(w.max_K)}});
  }
  Json failures = Json::object();
  for (const auto& [reason, count] : m.failures) failures[reason] = count;
  j["weak_markov"] = Json{{"pairs", m.pairs},
                          {"measured", m.measured},
                          {"successes", m.successes},
                          {"success_fraction", num(m.success_fraction())},
                          {"koebe_violations", m.koebe_violations},
                          {"min_delta", num(m.min_delta)},
                          {"max_K", num(m.max_K)},
                          {"failures", failures},
                          {"windows", windows}};

  if (b.density) {
    j["density"] = Json{{"surrogate", "orbit enters the reference window within the horizon"},
                        {"reference", num(b.density->reference)},
                        {"horizon", b.density->horizon},
                        {"control", detail::density_json(num, b.density->control)},
                        {"entry", detail::density_json(num, b.density->entry)}};
  } else {
    j["density"] = Json{{"surrogate", "orbit enters the reference window within the horizon"},
                        {"reference", nullptr},
                        {"horizon", 0},
                        {"control", Json::array()},
                        {"entry", Json::array()}};
  }

  if (b.return_map) {
    const auto& r = *b.return_map;
    Json comps = Json::array();
    for (const auto& c : r.curves) {
      comps.push_back(Json{{"lo", num(c.lo)}, {"hi", num(c.hi)}, {"time", c.time}});
    }
    j["return_map"] = Json{{"x", num(r.x)},          {"V", num(r.V)},
                           {"U", num(r.U)},          {"central_time", r.central_time},
                           {"components", r.components}, {"hidden", r.hidden},
                           {"coverage", num(r.coverage)}, {"drawn", comps}};
  } else {
    j["return_map"] = nullptr;
  }

  Json verdicts = Json::array();
  for (const auto& v : b.verdicts) {
    verdicts.push_back(Json{{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  }
  j["verdicts"] = verdicts;
  j["notes"] = b.notes;
  return j;
}

/// RFC 4180 field quoting.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

/// One CSV table: fixed header, CRLF line ends.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) { row(header); }
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) text_ += ',';
      text_ += csv_field(fields[i]);
    }
    text_ += "\r\n";
  }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

/// CSV tables keyed by file name.
inline std::vector<std::pair<std::string, std::string>> to_csv(const ReportBundle& b) {
  detail::NumberWriter num(b.config.report_digits);
  auto opt = [&](const std::optional<Real>& v) { return v ? num.text(*v) : std::string(); };
  auto str = [](auto v) { return std::to_string(v); };
  std::vector<std::pair<std::string, std::string>> out;

  CsvTable q({"n", "q", "c_q", "dist_to_c", "V_lo", "V_hi"});
  for (const auto& r : b.table.rows) {
    q.row({str(r.n), str(r.q), num.text(r.c_q), num.text(r.dist), r.V ? num.text(r.V->lo()) : "",
           r.V ? num.text(r.V->hi()) : ""});
  }
  out.emplace_back("qtable.csv", q.str());

  CsvTable an({"n", "x", "depth", "source", "case", "psi", "central_time", "U_lo", "U_hi", "V_lo",
               "V_hi", "ratio"});
  for (const auto& a : b.anchors.anchors) {
    an.row({str(a.n), num.text(a.x), str(a.depth), a.source, to_string(a.kind), num.text(a.cd.psi),
            str(a.cd.central_time), num.text(a.cd.U.lo()), num.text(a.cd.U.hi()),
            num.text(a.cd.V.lo()), num.text(a.cd.V.hi()), num.text(a.ratio)});
  }
  out.emplace_back("anchors.csv", an.str());

  CsvTable geo({"n", "case", "check", "applicable", "delta", "samples", "pass", "reason"});
  for (const auto& g : b.geometry) {
    for (const GeometryCheck* c : {&g.prop35, &g.lemma37, &g.periodic.check}) {
      geo.row({str(g.n), to_string(g.kind), c->check, c->applicable ? "true" : "false",
               opt(c->delta), str(c->samples), c->pass ? "true" : "false", c->reason});
    }
  }
  out.emplace_back("geometry.csv", geo.str());

  CsvTable cor({"n", "qualifies", "K_branch", "A_sup", "grid", "lemma24_violations"});
  for (const auto& g : b.geometry) {
    cor.row({str(g.n), g.cor36_qualifies ? "true" : "false",
             g.cor36 ? num.text(g.cor36->K_branch) : "", g.cor36 ? num.text(g.cor36->A_sup) : "",
             g.cor36 ? str(g.cor36->grid) : "", str(g.lemma24_violations)});
  }
  out.emplace_back("cor36.csv", cor.str());

  CsvTable tr({"n", "y", "source", "case", "U_lo", "U_hi", "V_lo", "V_hi", "delta", "V_length",
               "dist_to_c"});
  for (const auto& r : b.ranges.ranges) {
    tr.row({str(r.n), num.text(r.y), r.source, to_string(r.kind), num.text(r.U.lo()),
            num.text(r.U.hi()), num.text(r.V.lo()), num.text(r.V.hi()), num.text(r.delta),
            num.text(r.V_length), num.text(r.dist_to_c)});
  }
  out.emplace_back("transfer_ranges.csv", tr.str());

  CsvTable wm({"window", "n", "s", "t", "delta", "K", "koebe_ok", "success", "reason"});
  for (const auto& s : b.markov.samples) {
    wm.row({str(s.window), str(b.markov.windows[s.window].n), num.text(s.s), str(s.t), opt(s.delta),
            opt(s.K), s.koebe_ok ? "true" : "false", s.success ? "true" : "false", s.reason});
  }
  out.emplace_back("weak_markov.csv", wm.str());

  CsvTable dn({"predicate", "n", "V_length", "samples", "hits", "ratio", "std_error"});
  if (b.density) {
    for (const auto& [name, rows] :
         {std::pair{"all", &b.density->control}, std::pair{"entry", &b.density->entry}}) {
      for (const auto& r : *rows) {
        dn.row({name, str(r.n), num.text(r.V_length), str(r.samples), str(r.hits),
                num.text(r.ratio), num.text(r.std_error)});
      }
    }
  }
  out.emplace_back("density.csv", dn.str());
  return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(text.data(), static_cast<std::streamsize>(text.size()))) {
    throw IoError("cannot write '" + path.string() + "'");
  }
}

enum class Format { Json, Csv };

/// Writes report.json or the CSV tables into `dir`.
inline std::vector<std::filesystem::path> emit_report(const ReportBundle& b, Format format,
                                                      const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  if (format == Format::Json) {
    written.push_back(dir / "report.json");
    write_file(written.back(), to_json(b).dump(2) + "\n");
  } else {
    for (const auto& [name, text] : to_csv(b)) {
      written.push_back(dir / name);
      write_file(written.back(), text);
    }
  }
  return written;
}

}  // namespace wmp::cli
