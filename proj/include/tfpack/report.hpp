#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "tfpack/blowup.hpp"
#include "tfpack/bounds.hpp"
#include "tfpack/graph.hpp"
#include "tfpack/pipeline.hpp"
#include "tfpack/procedure1.hpp"
#include "tfpack/tree.hpp"

namespace tfpack {

// Insertion-ordered so identical runs serialize byte-identically.
using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = TFPACK_VERSION;

Json to_json(const Rational& q);
Json to_json(const RegularityReport& r);
Json to_json(std::span<const PairRegularityReport> reports);
Json to_json(const FeasibilityReport& f);
Json to_json(const KappaSummary& k);
Json to_json(const TailBound& b);
Json to_json(const BlowupPacking& row);
Json to_json(const LossBreakdown& loss);
Json to_json(const BootstrapPlan& plan);

/// Result fields of the report schema (factors themselves go to the factor
/// file): kappa_summary, per_blowup, factors_count, covered_edges,
/// total_edges, coverage, loss_breakdown?, outer?, diagnostic?.
Json result_fields(const PackingResult& result);

/// Factor file:
///   factors <count> <t>
///   factor <index> <copies>
///   v_0 .. v_{t-1} ; a_1 b_1 .. a_{t-1} b_{t-1}     (one line per copy)
void write_factors(std::ostream& out, std::span<const TFactor> factors, std::size_t t);
std::vector<TFactor> read_factors(std::istream& in);

}  // namespace tfpack
