#pragma once

#include <string>

#include <json.hpp>

#include "raplab/algebra.hpp"
#include "raplab/delay.hpp"
#include "raplab/flows.hpp"
#include "raplab/maps.hpp"
#include "raplab/recurrence.hpp"

namespace raplab {

using ojson = nlohmann::ordered_json;

ojson to_json(const Window& w);
ojson to_json(const TranslationSet& ts, bool with_entries = false);
ojson to_json(const Thresholds& th);
/// `{flags, evidence, thresholds, window}` in that key order.
ojson to_json(const RecurrenceReport& r, bool with_entries = false);
ojson to_json(const HullSample& h);
ojson to_json(const ConditionHResult& c);
ojson to_json(const ContractionCheck& c);
ojson to_json(const FiberCount& f);
ojson to_json(const StabilityProbeResult& s);
ojson to_json(const DiscreteFiberCount& f);
ojson to_json(const PrecompactnessEvidence& p);
ojson to_json(const RootBoundCheck& c);
ojson to_json(const SeparationCertificate& s);
/// `{residual_max, separation_min, inf_abs_D, collisions: [...]}`.
ojson root_branches_json(const RootBranches* rb, const std::optional<Window>& collision);
ojson to_json(const ZhikovReport& z);

/// `tau,accepted,L,tail_sup` rows.
std::string translation_set_csv(const TranslationSet& ts);

}  // namespace raplab
