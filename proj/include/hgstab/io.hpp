// Copyright 2026 The hgstab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Hypergraph files and report emission (JSON documents and flat CSV).

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hgstab/errors.hpp"
#include "hgstab/experiments.hpp"
#include "hgstab/hypergraph.hpp"

namespace hgstab {

using Json = nlohmann::ordered_json;

/// Parse failure with a 1-based source position.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : InputError(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

inline std::vector<std::string> id_list(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of vertex ids");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw InputError(std::string(what) + " entries must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace detail

/// {"vertices": [...], "edges": [{"vertices": [...], "weight": w}], "terminals": [...]}
inline WeightedHypergraph hypergraph_from_json(const Json& doc) {
  if (!doc.is_object()) throw InputError("hypergraph document must be an object");
  for (const char* key : {"vertices", "edges", "terminals"}) {
    if (!doc.contains(key)) throw InputError(std::string("missing key '") + key + "'");
  }
  auto vertices = detail::id_list(doc["vertices"], "vertices");
  if (!doc["edges"].is_array()) throw InputError("edges must be an array");
  std::vector<WeightedHypergraph::EdgeSpec> edges;
  for (const auto& e : doc["edges"]) {
    if (!e.is_object() || !e.contains("vertices")) throw InputError("edge needs a vertex list");
    WeightedHypergraph::EdgeSpec spec;
    spec.vertices = detail::id_list(e["vertices"], "edge vertices");
    if (e.contains("weight")) {
      if (!e["weight"].is_number_integer()) throw InputError("edge weight must be an integer");
      spec.weight = e["weight"].get<long long>();
    }
    edges.push_back(std::move(spec));
  }
  auto terminals = detail::id_list(doc["terminals"], "terminals");
  return WeightedHypergraph(std::move(vertices), edges, terminals);
}

inline WeightedHypergraph parse_hypergraph(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is the 1-based offset of the offending character.
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("JSON syntax error at line " + std::to_string(line) + ", column " +
                         std::to_string(column),
                     line, column);
  }
  return hypergraph_from_json(doc);
}

inline WeightedHypergraph load_hypergraph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_hypergraph(buf.str());
}

inline Json hypergraph_to_json(const WeightedHypergraph& h) {
  Json doc;
  doc["vertices"] = h.vertex_ids();
  Json edges = Json::array();
  for (const auto& e : h.edges()) {
    std::vector<std::string> ids;
    for (auto v : e.vertices) ids.push_back(h.vertex_ids()[v]);
    edges.push_back({{"vertices", ids}, {"weight", e.weight}});
  }
  doc["edges"] = std::move(edges);
  doc["terminals"] = h.ids_of(h.terminal_mask());
  return doc;
}

/// Sorted ids of a terminal subset.
inline std::vector<std::string> subset_ids(const WeightedHypergraph& h, TerminalMask a) {
  return h.ids_of(h.expand_terminals(a));
}

/// "{a,c}" display form.
inline std::string format_subset(const WeightedHypergraph& h, TerminalMask a) {
  std::string out = "{";
  const auto ids = subset_ids(h, a);
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? "," : "") + ids[i];
  return out + "}";
}

/// Terminal subsets ordered by size, then lexicographically by sorted ids.
inline std::vector<TerminalMask> display_order(const WeightedHypergraph& h) {
  std::vector<TerminalMask> out;
  for (TerminalMask a = 0; a < (TerminalMask{1} << h.terminal_count()); ++a) out.push_back(a);
  std::stable_sort(out.begin(), out.end(), [&](TerminalMask x, TerminalMask y) {
    const auto ix = subset_ids(h, x);
    const auto iy = subset_ids(h, y);
    if (ix.size() != iy.size()) return ix.size() < iy.size();
    return ix < iy;
  });
  return out;
}

namespace detail {

inline Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace detail

inline Json mincut_to_json(const WeightedHypergraph& h, const MinCutTable& t) {
  Json rows = Json::array();
  for (auto a : display_order(h)) {
    rows.push_back({{"subset", subset_ids(h, a)}, {"m", t.min_cut(a)}, {"k", t.count(a)}});
  }
  return rows;
}

inline Json moments_to_json(const WeightedHypergraph& h, const MomentReport& m) {
  Json second = Json::array();
  for (const auto& row : m.second) {
    second.push_back({{"subset", subset_ids(h, row.subset)},
                      {"m", row.min_cut},
                      {"k", row.min_cut_count},
                      {"mean", detail::number(row.scaled.mean)},
                      {"se", detail::number(row.scaled.se)},
                      {"exact", to_string(row.exact)},
                      {"exact_scaled", detail::number(row.exact_scaled)},
                      {"z", detail::number(row.z)}});
  }
  return {{"bond_exponent", m.bond_exponent},
          {"trials", m.trials},
          {"log_bulk_dimension", m.log_bulk_dimension},
          {"first_moment",
           {{"mean", detail::number(m.first.mean)},
            {"se", detail::number(m.first.se)},
            {"exact", 1},
            {"z", detail::number(m.first_z)}}},
          {"second_moment", std::move(second)}};
}

inline Json concentration_row_to_json(const WeightedHypergraph& h, const ConcentrationRow& r,
                                      bool include_seeds) {
  Json gaps = Json::array();
  for (const auto& g : r.gaps) {
    gaps.push_back({{"subset", subset_ids(h, g.subset)},
                    {"m", g.min_cut},
                    {"k", g.min_cut_count},
                    {"mean_gap", detail::number(g.gap.mean)},
                    {"se", detail::number(g.gap.se)},
                    {"log_k", detail::number(g.log_count)}});
  }
  Json out = {{"bond_exponent", r.bond_exponent},
              {"trials", r.trials},
              {"nonzero", r.nonzero},
              {"p_nonzero", detail::number(r.p_nonzero.mean)},
              {"p_nonzero_se", detail::number(r.p_nonzero.se)},
              {"success_fraction", detail::number(r.success.mean)},
              {"success_se", detail::number(r.success.se)},
              {"rank_bound_violations", r.rank_bound_violations},
              {"entropy_vector_violations", r.entropy_vector_violations},
              {"gaps", std::move(gaps)}};
  if (include_seeds) out["seeds"] = r.seeds;
  return out;
}

/// Full report. Parallelism is deliberately not echoed: reports for the same
/// configuration and seed are byte-identical at any job count.
inline Json report_to_json(const SimulationReport& r, bool include_seeds = true) {
  const auto& h = r.config.hypergraph;
  Json config = {{"prime", r.config.prime},
                 {"bond_exponents", r.config.bond_exponents},
                 {"trials", r.config.trials},
                 {"seed", r.config.seed},
                 {"delta", r.config.delta},
                 {"hypergraph", hypergraph_to_json(h)}};
  Json moments = Json::array();
  for (const auto& m : r.moments) moments.push_back(moments_to_json(h, m));
  Json conc = Json::array();
  for (const auto& row : r.concentration.rows) {
    conc.push_back(concentration_row_to_json(h, row, include_seeds));
  }
  return {{"config", std::move(config)},
          {"mincut", mincut_to_json(h, r.table)},
          {"moments", std::move(moments)},
          {"concentration", std::move(conc)}};
}

namespace detail {

inline std::string csv_number(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

}  // namespace detail

/// `A,m,kA,mean,exact,se,z` with mean/exact/se in units of D_b^2 tr[Psi_A^2].
inline std::string moments_csv(const WeightedHypergraph& h, const MomentReport& m) {
  std::ostringstream out;
  out << "A,m,kA,mean,exact,se,z\n";
  for (auto a : display_order(h)) {
    const MomentRow& row = m.second[a];
    out << '"' << format_subset(h, a) << "\"," << row.min_cut << ',' << row.min_cut_count << ','
        << detail::csv_number(row.scaled.mean) << ',' << detail::csv_number(row.exact_scaled) << ','
        << detail::csv_number(row.scaled.se) << ',' << detail::csv_number(row.z) << '\n';
  }
  return out.str();
}

/// `r,p_nonzero,success_fraction,se` (se of the success fraction).
inline std::string concentration_csv(const ConcentrationReport& c) {
  std::ostringstream out;
  out << "r,p_nonzero,success_fraction,se\n";
  for (const auto& row : c.rows) {
    out << row.bond_exponent << ',' << detail::csv_number(row.p_nonzero.mean) << ','
        << detail::csv_number(row.success.mean) << ',' << detail::csv_number(row.success.se)
        << '\n';
  }
  return out.str();
}

}  // namespace hgstab
