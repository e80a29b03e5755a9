#include "garling/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace garling {

std::string format_double(double v) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument("refusing to serialize a non-finite number");
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

// nlohmann's writer renders doubles with shortest-round-trip formatting,
// which is fine for parsing but harder to diff against independently
// produced artifacts; this walker pins every double to %.17g instead.
void dump_rec(const ordered_json& j, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
    switch (j.type()) {
        case ordered_json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            std::size_t i = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++i) {
                out += pad_in;
                out += ordered_json(it.key()).dump(); // JSON-escaped key
                out += ": ";
                dump_rec(it.value(), out, depth + 1);
                if (i + 1 < j.size()) out += ',';
                out += '\n';
            }
            out += pad;
            out += '}';
            return;
        }
        case ordered_json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                out += pad_in;
                dump_rec(j[i], out, depth + 1);
                if (i + 1 < j.size()) out += ',';
                out += '\n';
            }
            out += pad;
            out += ']';
            return;
        }
        case ordered_json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

} // namespace

std::string dump_json(const ordered_json& j) {
    std::string out;
    dump_rec(j, out, 0);
    out += '\n';
    return out;
}

ordered_json to_json(const FiniteSequence& f) {
    ordered_json entries = ordered_json::array();
    for (const auto& e : f.entries()) {
        entries.push_back(ordered_json::array({e.index, e.value}));
    }
    ordered_json out;
    out["entries"] = std::move(entries);
    return out;
}

FiniteSequence sequence_from_json(const ordered_json& j) {
    if (j.is_array()) {
        std::vector<double> dense;
        dense.reserve(j.size());
        for (const auto& v : j) {
            if (!v.is_number()) {
                throw std::invalid_argument("dense vector entries must be numbers");
            }
            dense.push_back(v.get<double>());
        }
        return FiniteSequence::from_dense(dense);
    }
    if (j.is_object() && j.contains("entries")) {
        const auto& entries = j.at("entries");
        if (!entries.is_array()) {
            throw std::invalid_argument("\"entries\" must be an array of [index, value] pairs");
        }
        std::vector<FiniteSequence::Entry> out;
        out.reserve(entries.size());
        for (const auto& pair : entries) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
                !pair[1].is_number()) {
                throw std::invalid_argument("each entry must be an [integer index, value] pair");
            }
            out.push_back({pair[0].get<std::int64_t>(), pair[1].get<double>()});
        }
        return FiniteSequence::from_entries(std::move(out));
    }
    throw std::invalid_argument(
        "vector must be a dense array [v1, ...] or {\"entries\": [[i, v], ...]}");
}

FiniteSequence parse_vector(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("cannot parse vector: ") + e.what());
    }
    return sequence_from_json(j);
}

ordered_json to_json(const NormReport& report) {
    ordered_json out;
    out["value"] = report.value;
    out["p_power"] = report.p_power;
    out["selection"] = report.selection.indices;
    out["algorithm"] = to_string(report.algorithm);
    return out;
}

ordered_json to_json(const WeightDiagnostics& d) {
    ordered_json out;
    out["horizon"] = d.horizon;
    out["ed_sup"] = d.ed_sup;
    out["reg_sup"] = d.reg_sup;
    out["conj_reg_sup"] = d.conj_reg_sup;
    out["eq2_sup"] = d.eq2_sup;
    ordered_json samples = ordered_json::array();
    for (const auto& s : d.trend_samples) {
        ordered_json row;
        row["m"] = s.m;
        row["ed"] = s.ed;
        row["reg"] = s.reg;
        row["conj_reg"] = s.conj_reg;
        row["eq2"] = s.eq2;
        samples.push_back(std::move(row));
    }
    out["trend_samples"] = std::move(samples);
    ordered_json member;
    member["w1_is_one"] = d.in_W_report.w1_is_one;
    member["nonincreasing"] = d.in_W_report.nonincreasing;
    member["c0_decay_trend"] = d.in_W_report.c0_decay_trend;
    member["l1_divergence_trend"] = d.in_W_report.l1_divergence_trend;
    out["in_W_report"] = std::move(member);
    return out;
}

namespace {

std::string status_string(SelectionTrace::Status s) {
    switch (s) {
        case SelectionTrace::Status::target_reached: return "target_reached";
        case SelectionTrace::Status::budget_exhausted: return "budget_exhausted";
        case SelectionTrace::Status::blocks_exhausted: return "blocks_exhausted";
    }
    return "unknown";
}

} // namespace

ordered_json to_json(const SelectionTrace& trace) {
    ordered_json out;
    out["p"] = trace.p;
    out["epsilon"] = trace.epsilon;
    out["alpha"] = trace.alpha;
    out["status"] = status_string(trace.status);
    out["budget_used"] = trace.budget_used;
    ordered_json steps = ordered_json::array();
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const SelectionStep& s = trace.steps[i];
        ordered_json row;
        row["k"] = s.k;
        row["L"] = s.L;
        row["M"] = s.M;
        row["block_index"] = s.block_index;
        row["q_begin"] = s.q_begin;
        row["q_end"] = s.q_end;
        row["A"] = s.A;
        row["functional"] = s.functional;
        row["packed_coefficients"] = s.packed_coefficients;
        row["selected_block"] = to_json(trace.selected_blocks[i]);
        steps.push_back(std::move(row));
    }
    out["steps"] = std::move(steps);
    return out;
}

ordered_json to_json(const FactorizationReport& report) {
    ordered_json out;
    out["functional_identity_error"] = report.functional_identity_error;
    out["min_ratio"] = report.min_ratio;
    out["max_ratio"] = report.max_ratio;
    out["trials"] = report.trials;
    out["violations"] = report.violations;
    return out;
}

ordered_json to_json(const MinimalityReport& report, const FiniteSequence& reduced) {
    ordered_json out;
    out["minimal"] = report.minimal;
    if (report.witness) {
        out["witness"] = *report.witness;
    } else {
        out["witness"] = nullptr;
    }
    out["norm"] = report.norm;
    out["minimal_predecessor"] = to_json(reduced);
    return out;
}

std::string defect_rows_to_csv(const std::vector<DefectRow>& rows) {
    std::string out = "r,norm_f,norm_g_rev,harmonic,defect,lorentz_common\n";
    for (const DefectRow& row : rows) {
        out += std::to_string(row.r);
        out += ',';
        out += format_double(row.norm_f);
        out += ',';
        out += format_double(row.norm_g_rev);
        out += ',';
        out += format_double(row.harmonic);
        out += ',';
        out += format_double(row.defect);
        out += ',';
        out += format_double(row.lorentz_common);
        out += '\n';
    }
    return out;
}

ordered_json to_json(const std::vector<DefectRow>& rows) {
    ordered_json out = ordered_json::array();
    for (const DefectRow& row : rows) {
        ordered_json r;
        r["r"] = row.r;
        r["norm_f"] = row.norm_f;
        r["norm_g_rev"] = row.norm_g_rev;
        r["harmonic"] = row.harmonic;
        r["defect"] = row.defect;
        r["lorentz_common"] = row.lorentz_common;
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace garling
