#pragma once

// JSON encoding of kernels, chaos expansions, target specs and reports.
// Kernels are stored sparsely with 1-based indices; omitted entries are zero
// and symmetrization is applied on load, so hand-written files only need one
// orientation of each entry to be meaningful (at the cost of averaging).

#include <string>

#include "json.hpp"

#include "chaoskit/criteria.hpp"
#include "chaoskit/montecarlo.hpp"
#include "chaoskit/target.hpp"

namespace ck {

using nlohmann::json;

// {"dim": d, "order": p, "entries": [{"index": [i1..ip], "value": v}, ...]}
json to_json(const SymTensor& f);
SymTensor tensor_from_json(const json& j);

// {"dim": d, "kernels": {"0": v, "1": {...SymTensor...}, ...}}
json to_json(const ChaosVector& F);
ChaosVector chaos_from_json(const json& j);

// {"a": v, "b": [...], "cd": [[c, d], ...]}
json to_json(const TargetSpec& X);
TargetSpec target_from_json(const json& j);

// {"a0": v, "lambda": [...], "sigma": [...]}
json to_json(const CorrelatedSpec& Y);
CorrelatedSpec correlated_from_json(const json& j);

// {"n": [...], "kappa_gaps": [[...]], "combo_l2": [...],
//  "contractions": {...}, "verdict": "..."} plus slopes and exact cumulants
json to_json(const ConvergenceReport& rep);
// flat CSV, one row per (n, statistic): n,statistic,value
std::string to_csv(const ConvergenceReport& rep);

json to_json(const FeasibilityVerdict& v);
json to_json(const ContractionReport& rep);
json to_json(const ChiSquareReport& rep);
json to_json(const McEstimate& est);
json to_json(const ConditionalL1& est);
json to_json(const std::vector<JointFunctionalRow>& rows);

}  // namespace ck
