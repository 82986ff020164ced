#include "tfpack/report.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "tfpack/errors.hpp"

namespace tfpack {

namespace {

// JSON has no infinity; unbounded thresholds become null.
Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json to_json(const Rational& q) {
  return Json{{"num", q.numerator()},
              {"den", q.denominator()},
              {"value", boost::rational_cast<double>(q)}};
}

Json to_json(const RegularityReport& r) {
  return Json{{"epsilon", r.epsilon},
              {"p", r.p},
              {"regular", r.regular()},
              {"degree_ok", r.degree_ok},
              {"codegree_ok", r.codegree_ok},
              {"min_degree", r.min_degree},
              {"max_codegree", r.max_codegree},
              {"worst_degree_vertex", r.worst_degree_vertex},
              {"worst_codegree_pair",
               Json::array({r.worst_codegree_pair.first, r.worst_codegree_pair.second})}};
}

Json to_json(std::span<const PairRegularityReport> reports) {
  Json out = Json::array();
  for (const auto& r : reports) {
    out.push_back(Json{{"pair", Json::array({r.pair.first, r.pair.second})},
                       {"super_edge", r.super_edge},
                       {"epsilon", r.epsilon},
                       {"p", r.p},
                       {"min_cross_degree", r.min_cross_degree},
                       {"max_within_codegree", r.max_within_codegree},
                       {"ok", r.ok}});
  }
  return out;
}

Json to_json(const FeasibilityReport& f) {
  Json conditions = Json::object();
  for (const auto& c : f.conditions) {
    conditions[c.name] = Json{{"formula", c.formula},
                              {"lhs", finite_or_null(c.lhs)},
                              {"rhs", finite_or_null(c.rhs)},
                              {"ratio", finite_or_null(c.ratio)},
                              {"pass", c.pass}};
  }
  return Json{{"slack", f.slack}, {"conditions", conditions}};
}

Json to_json(const KappaSummary& k) {
  Json histogram = Json::array();
  for (auto [count, edges] : k.histogram) histogram.push_back(Json::array({count, edges}));
  return Json{{"r", k.r},
              {"r_full_scale", k.r_full},
              {"kappa", k.kappa},
              {"kappa_scaled", k.kappa_scaled},
              {"expected_count", k.expected},
              {"min_count", k.min_count},
              {"max_count", k.max_count},
              {"mean_count", k.mean_count},
              {"fraction_outside", k.fraction_outside},
              {"fraction_outside_scaled", k.fraction_outside_scaled},
              {"unlabeled_edges", k.unlabeled_edges},
              {"histogram", histogram}};
}

Json to_json(const TailBound& b) { return Json{{"value", b.value}, {"vacuous", b.vacuous}}; }

Json to_json(const BlowupPacking& row) {
  Json pairs = Json::array();
  for (auto [a, b] : row.pairs) pairs.push_back(Json::array({a, b}));
  Json out{{"index", row.index},
           {"pairs", pairs},
           {"pair_edges", row.pair_edges},
           {"matching_counts", row.matching_counts},
           {"factors", row.factors},
           {"target", row.target},
           {"target_vacuous", row.target_vacuous},
           {"target_ratio", row.target_ratio ? Json(*row.target_ratio) : Json(nullptr)}};
  if (row.hat_regular) out["hat_regular"] = *row.hat_regular;
  return out;
}

Json to_json(const LossBreakdown& loss) {
  return Json{{"within_part", loss.within_part},
              {"uncovered_pair", loss.uncovered_pair},
              {"matching_shortfall", loss.matching_shortfall}};
}

Json to_json(const BootstrapPlan& plan) {
  return Json{{"tau", plan.tau},
              {"ell", plan.ell},
              {"C", plan.C},
              {"tau1", finite_or_null(plan.tau1)},
              {"tau0", finite_or_null(plan.tau0)},
              {"tau1_note", "interpretation-dependent: thm1 ratio >= slack at (eps^3, 1)"},
              {"outer_r_override",
               plan.outer_r_override ? Json(*plan.outer_r_override) : Json(nullptr)},
              {"outer_scale", plan.outer_scale}};
}

Json result_fields(const PackingResult& result) {
  Json out;
  out["variant"] = to_string(result.variant);
  out["density"] = result.density;
  out["kappa_summary"] = result.kappa ? to_json(*result.kappa) : Json(nullptr);
  Json rows = Json::array();
  for (const auto& row : result.per_blowup) rows.push_back(to_json(row));
  out["per_blowup"] = rows;
  out["factors_count"] = result.factors.size();
  out["covered_edges"] = result.covered_edges;
  out["total_edges"] = result.total_edges;
  out["coverage"] = to_json(result.coverage);
  if (result.loss) out["loss_breakdown"] = to_json(*result.loss);
  if (result.outer) {
    out["outer"] = Json{{"tau", result.outer->tau},
                        {"ell", result.outer->ell},
                        {"r", result.outer->r},
                        {"factors", result.outer->factors},
                        {"pairs_used", result.outer->pairs_used},
                        {"coverage", to_json(result.outer->coverage)}};
  }
  if (!result.diagnostic.empty()) out["diagnostic"] = result.diagnostic;
  return out;
}

void write_factors(std::ostream& out, std::span<const TFactor> factors, std::size_t t) {
  out << "factors " << factors.size() << ' ' << t << '\n';
  for (std::size_t i = 0; i < factors.size(); ++i) {
    out << "factor " << i << ' ' << factors[i].copies.size() << '\n';
    for (const TreeCopy& c : factors[i].copies) {
      for (std::size_t k = 0; k < c.vertices.size(); ++k) out << (k ? " " : "") << c.vertices[k];
      out << " ;";
      for (const Edge& e : c.edges) out << ' ' << e.u << ' ' << e.v;
      out << '\n';
    }
  }
}

std::vector<TFactor> read_factors(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  auto expect = [&](std::istringstream& ss, const char* word) {
    std::string w;
    if (!(ss >> w) || w != word) throw ParseError(line_no, std::string("expected '") + word + "'");
  };

  if (!next_line()) throw ParseError(0, "empty factor file");
  std::istringstream header(line);
  expect(header, "factors");
  long long count = -1, t = -1;
  if (!(header >> count >> t) || count < 0 || t < 1) throw ParseError(line_no, "bad header");

  std::vector<TFactor> factors(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    if (!next_line()) throw ParseError(line_no + 1, "missing factor block");
    std::istringstream ss(line);
    expect(ss, "factor");
    long long index = -1, copies = -1;
    if (!(ss >> index >> copies) || index != i || copies < 0) {
      throw ParseError(line_no, "bad factor header");
    }
    for (long long c = 0; c < copies; ++c) {
      if (!next_line()) throw ParseError(line_no + 1, "missing copy line");
      auto semi = line.find(';');
      if (semi == std::string::npos) throw ParseError(line_no, "copy line needs ';'");
      std::istringstream vs(line.substr(0, semi));
      std::istringstream es(line.substr(semi + 1));
      TreeCopy copy;
      long long v;
      while (vs >> v) {
        if (v < 0) throw ParseError(line_no, "negative vertex id");
        copy.vertices.push_back(static_cast<Vertex>(v));
      }
      if (!vs.eof()) throw ParseError(line_no, "malformed vertex list");
      long long a, b;
      while (es >> a) {
        if (!(es >> b) || a < 0 || b < 0) throw ParseError(line_no, "malformed edge list");
        copy.edges.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
      }
      if (!es.eof()) throw ParseError(line_no, "malformed edge list");
      factors[static_cast<std::size_t>(i)].copies.push_back(std::move(copy));
    }
  }
  if (next_line()) throw ParseError(line_no, "trailing content");
  return factors;
}

}  // namespace tfpack
