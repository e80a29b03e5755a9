#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "garling/asymptotics.hpp"
#include "garling/norms.hpp"
#include "garling/sequence.hpp"
#include "garling/weight.hpp"

namespace garling {

using ordered_json = nlohmann::ordered_json;

/// Serialize with deterministic key order and doubles printed via %.17g
/// (round-trip exact).  Two-space indent, trailing newline.
std::string dump_json(const ordered_json& j);

/// {"entries": [[i, v], ...]} with increasing indices.
ordered_json to_json(const FiniteSequence& f);

/// Accepts either the sparse form {"entries": [[i, v], ...]} or a dense
/// 1-based array [v1, v2, ...]; zeros are dropped.
FiniteSequence sequence_from_json(const ordered_json& j);

/// Parse a vector literal as found on the command line (either JSON form).
FiniteSequence parse_vector(std::string_view text);

/// {"value", "p_power", "selection", "algorithm"}.
ordered_json to_json(const NormReport& report);

/// {"horizon", "ed_sup", "reg_sup", "conj_reg_sup", "eq2_sup",
///  "trend_samples", "in_W_report"}.
ordered_json to_json(const WeightDiagnostics& d);

ordered_json to_json(const SelectionTrace& trace);

ordered_json to_json(const FactorizationReport& report);

ordered_json to_json(const MinimalityReport& report, const FiniteSequence& reduced);

/// CSV with header "r,norm_f,norm_g_rev,harmonic,defect,lorentz_common",
/// doubles via %.17g, '\n' line endings.
std::string defect_rows_to_csv(const std::vector<DefectRow>& rows);

ordered_json to_json(const std::vector<DefectRow>& rows);

/// %.17g rendering used everywhere a double is printed.
std::string format_double(double v);

} // namespace garling
