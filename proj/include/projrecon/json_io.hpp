#pragma once

#include <json.hpp>

#include "projrecon/coupling.hpp"
#include "projrecon/counterexample.hpp"
#include "projrecon/experiments.hpp"
#include "projrecon/measure.hpp"
#include "projrecon/projection.hpp"
#include "projrecon/reconstruction.hpp"
#include "projrecon/sliced_wasserstein.hpp"

namespace projrecon::io {

using nlohmann::json;

/// {"dim": d, "points": [[...], ...], "weights": [...]}, atoms in canonical
/// order.
json to_json(const DiscreteMeasure& measure);
DiscreteMeasure measure_from_json(const json& j,
                                  double dedup_tol = kDefaultMergeTol);

/// {"dim": d, "blocks": [[[row], ...], ...], "law": "...", "seed": u64}
json to_json(const ProjectionStack& stack);
ProjectionStack stack_from_json(const json& j);

/// {"dim": d, "thetas": [[...], ...], "seed": u64}
json to_json(const DirectionSet& dirs);
DirectionSet directions_from_json(const json& j);

/// {"n": n, "p": p, "shape": [n, ...], "entries": [...]}
json to_json(const CouplingTensor& coupling);
CouplingTensor coupling_from_json(const json& j);

json to_json(const CandidateSupport& support);
json to_json(const ReconstructionReport& report);

/// {"n": n, "Z": measure, "Y": measure, "stack": stack}
json to_json(const PolygonInstance& instance);

json to_json(const ToleranceConfig& tols);
ToleranceConfig tolerances_from_json(const json& j, ToleranceConfig base = {});

json to_json(const TrialConfig& cfg);
/// Missing keys keep the values of `base`.
TrialConfig trial_config_from_json(const json& j, TrialConfig base = {});

/// Wall time is written only when include_timing is set, so that reruns with
/// the same configuration serialize byte-identically.
json to_json(const TrialSummary& summary, bool include_timing = false);
/// "cardinality,frequency" rows.
std::string histogram_csv(const TrialSummary& summary);

}  // namespace projrecon::io
