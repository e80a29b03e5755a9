// Python bindings: weights, finitely supported sequences, the norm family,
// minimality, the spreading/extraction operators, and the desk-scale
// experiments (symmetry defect, subsequence selection with factorization).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "garling/asymptotics.hpp"
#include "garling/blocks.hpp"
#include "garling/budget.hpp"
#include "garling/norms.hpp"
#include "garling/operators.hpp"
#include "garling/sequence.hpp"
#include "garling/weight.hpp"

namespace py = pybind11;
using namespace garling;

namespace {

FiniteSequence sequence_from_object(const py::object& data) {
    if (py::isinstance<FiniteSequence>(data)) {
        return data.cast<FiniteSequence>();
    }
    if (py::isinstance<py::dict>(data)) {
        std::vector<FiniteSequence::Entry> entries;
        for (const auto& item : data.cast<py::dict>()) {
            entries.push_back({item.first.cast<std::int64_t>(),
                               item.second.cast<double>()});
        }
        return FiniteSequence::from_entries(std::move(entries));
    }
    if (py::isinstance<py::sequence>(data) && !py::isinstance<py::str>(data)) {
        return FiniteSequence::from_dense(data.cast<std::vector<double>>());
    }
    throw py::type_error("expected a dense list of coefficients or a "
                         "{index: value} mapping");
}

WorkBudget budget_from_limit(std::uint64_t limit) {
    return limit == 0 ? WorkBudget::unlimited() : WorkBudget(limit);
}

py::dict norm_report_to_dict(const NormReport& report) {
    py::dict d;
    d["value"] = report.value;
    d["p_power"] = report.p_power;
    d["selection"] = report.selection.indices;
    d["algorithm"] = to_string(report.algorithm);
    return d;
}

py::dict diagnostics_to_dict(const WeightDiagnostics& di) {
    py::dict d;
    d["horizon"] = di.horizon;
    d["ed_sup"] = di.ed_sup;
    d["reg_sup"] = di.reg_sup;
    d["conj_reg_sup"] = di.conj_reg_sup;
    d["eq2_sup"] = di.eq2_sup;
    py::list samples;
    for (const auto& s : di.trend_samples) {
        py::dict row;
        row["m"] = s.m;
        row["ed"] = s.ed;
        row["reg"] = s.reg;
        row["conj_reg"] = s.conj_reg;
        row["eq2"] = s.eq2;
        samples.append(row);
    }
    d["trend_samples"] = samples;
    py::dict membership;
    membership["w1_is_one"] = di.in_W_report.w1_is_one;
    membership["nonincreasing"] = di.in_W_report.nonincreasing;
    membership["c0_decay_trend"] = di.in_W_report.c0_decay_trend;
    membership["l1_divergence_trend"] = di.in_W_report.l1_divergence_trend;
    d["membership"] = membership;
    return d;
}

py::dict trace_to_dict(const SelectionTrace& trace, bool include_arrays) {
    py::dict d;
    d["p"] = trace.p;
    d["epsilon"] = trace.epsilon;
    d["alpha"] = trace.alpha;
    switch (trace.status) {
        case SelectionTrace::Status::target_reached: d["status"] = "target_reached"; break;
        case SelectionTrace::Status::budget_exhausted: d["status"] = "budget_exhausted"; break;
        case SelectionTrace::Status::blocks_exhausted: d["status"] = "blocks_exhausted"; break;
    }
    d["budget_used"] = trace.budget_used;
    py::list steps;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const SelectionStep& s = trace.steps[i];
        py::dict row;
        row["k"] = s.k;
        row["L"] = s.L;
        row["M"] = s.M;
        row["block_index"] = s.block_index;
        row["q_begin"] = s.q_begin;
        row["q_end"] = s.q_end;
        row["A"] = s.A;
        if (include_arrays) {
            row["functional"] = s.functional;
            row["packed_coefficients"] = s.packed_coefficients;
        }
        row["selected_block"] = py::cast(trace.selected_blocks[i]);
        steps.append(row);
    }
    d["steps"] = steps;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact sequence-space norms over weighted selections and "
              "rearrangements, with weight diagnostics and block experiments";
    m.attr("__version__") = "0.1.0";

    py::register_exception<BudgetExhausted>(m, "BudgetExhausted", PyExc_RuntimeError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);

    py::class_<Weight>(m, "Weight",
                       "A positive weight sequence described by a spec string: "
                       "pow:a=<a>, logpow:a=<a>,b=<b>, table:<v1>,<v2>,..., or "
                       "file:<path>")
        .def(py::init([](const std::string& spec) { return make_weight(spec); }),
             py::arg("spec"))
        .def("value", &Weight::value, py::arg("n"), "w_n for 1-based n")
        .def("prefix_sum", &Weight::prefix_sum, py::arg("n"),
             "W_n = w_1 + ... + w_n")
        .def("first_values", &Weight::first_values, py::arg("n"))
        .def_property_readonly("normalized_nonincreasing",
                               &Weight::normalized_nonincreasing)
        .def_property_readonly("max_index", [](const Weight& w) {
            return w.max_index() ? py::cast(*w.max_index()) : py::none();
        })
        .def_property_readonly("spec", &Weight::spec_string)
        .def("conjugate",
             [](const Weight& w, std::int64_t horizon) { return conjugate(w, horizon); },
             py::arg("horizon"),
             "The weight w*_n = 1/(n w_n) as a table over 1..horizon")
        .def("diagnostics",
             [](const Weight& w, std::int64_t horizon) {
                 return diagnostics_to_dict(diagnostics(w, horizon));
             },
             py::arg("horizon"))
        .def("__repr__",
             [](const Weight& w) { return "Weight('" + w.spec_string() + "')"; });

    py::class_<FiniteSequence>(m, "Sequence",
                               "A finitely supported sequence; construct from a "
                               "dense list [v1, v2, ...] or a {index: value} map")
        .def(py::init(&sequence_from_object), py::arg("data"))
        .def_property_readonly("entries",
                               [](const FiniteSequence& f) {
                                   std::vector<std::pair<std::int64_t, double>> out;
                                   out.reserve(f.support_size());
                                   for (const auto& e : f.entries()) {
                                       out.emplace_back(e.index, e.value);
                                   }
                                   return out;
                               })
        .def_property_readonly("support", &FiniteSequence::support)
        .def("at", &FiniteSequence::at, py::arg("index"))
        .def("scaled", &FiniteSequence::scaled, py::arg("c"))
        .def("without_index", &FiniteSequence::without_index, py::arg("index"))
        .def("__len__", &FiniteSequence::support_size)
        .def("__eq__",
             [](const FiniteSequence& a, const FiniteSequence& b) { return a == b; })
        .def("__repr__", [](const FiniteSequence& f) {
            std::string out = "Sequence({";
            bool first = true;
            for (const auto& e : f.entries()) {
                if (!first) out += ", ";
                first = false;
                out += std::to_string(e.index) + ": " + std::to_string(e.value);
                if (out.size() > 160) { out += ", ..."; break; }
            }
            return out + "})";
        });

    m.def("garling_norm",
          [](const py::object& f, const Weight& w, double p, std::uint64_t budget) {
              WorkBudget meter = budget_from_limit(budget);
              return norm_report_to_dict(garling_norm(sequence_from_object(f), w, p, meter));
          },
          py::arg("f"), py::arg("w"), py::arg("p"), py::arg("budget") = 0,
          "Selection-supremum norm: sup over increasing index selections of "
          "(sum |f_{phi(n)}|^p w_n)^{1/p}; exact, with the optimal selection");

    m.def("garling_norm_oracle",
          [](const py::object& f, const Weight& w, double p) {
              return norm_report_to_dict(garling_norm_oracle(sequence_from_object(f), w, p));
          },
          py::arg("f"), py::arg("w"), py::arg("p"),
          "Independent exhaustive-enumeration check (supports up to 25)");

    m.def("lorentz_norm",
          [](const py::object& f, const Weight& w, double p) {
              return norm_report_to_dict(lorentz_norm(sequence_from_object(f), w, p));
          },
          py::arg("f"), py::arg("w"), py::arg("p"),
          "Rearrangement norm pairing the decreasing rearrangement with w");

    m.def("weak_lorentz_quasinorm",
          [](const py::object& f, const Weight& w, double p) {
              return weak_lorentz_quasinorm(sequence_from_object(f), w, p);
          },
          py::arg("f"), py::arg("w"), py::arg("p"));

    m.def("lp_norm",
          [](const py::object& f, double p) { return lp_norm(sequence_from_object(f), p); },
          py::arg("f"), py::arg("p"));

    m.def("is_minimal",
          [](const py::object& f, const Weight& w, double p, double tol) {
              const MinimalityReport r = is_minimal(sequence_from_object(f), w, p, tol);
              py::dict d;
              d["minimal"] = r.minimal;
              d["witness"] = r.witness ? py::cast(*r.witness) : py::none();
              d["norm"] = r.norm;
              return d;
          },
          py::arg("f"), py::arg("w"), py::arg("p"), py::arg("tol") = 1e-9,
          "Whether every proper support restriction has strictly smaller norm");

    m.def("minimal_predecessor",
          [](const py::object& f, const Weight& w, double p, double tol) {
              return minimal_predecessor(sequence_from_object(f), w, p, tol);
          },
          py::arg("f"), py::arg("w"), py::arg("p"), py::arg("tol") = 1e-9);

    m.def("spread",
          [](const py::object& f, std::int64_t step, std::int64_t offset,
             const std::optional<std::vector<std::int64_t>>& selection) {
              const IncreasingMap phi =
                  selection ? IncreasingMap::from_selection(Selection::of(*selection))
                            : IncreasingMap::affine(step, offset);
              return spread(phi, sequence_from_object(f));
          },
          py::arg("f"), py::arg("step") = 1, py::arg("offset") = 0,
          py::arg("selection") = py::none(),
          "Move coefficient n to position phi(n) along an increasing map "
          "(affine step/offset, or an explicit selection)");

    m.def("extract",
          [](const py::object& f, std::int64_t step, std::int64_t offset,
             const std::optional<std::vector<std::int64_t>>& selection) {
              const IncreasingMap phi =
                  selection ? IncreasingMap::from_selection(Selection::of(*selection))
                            : IncreasingMap::affine(step, offset);
              return extract(phi, sequence_from_object(f));
          },
          py::arg("f"), py::arg("step") = 1, py::arg("offset") = 0,
          py::arg("selection") = py::none(),
          "Pull the subsequence f_{phi(1)}, f_{phi(2)}, ... back to "
          "consecutive positions");

    m.def("apply_signs",
          [](const py::object& f, const std::string& pattern) {
              return apply_signs(SignPattern::cycled(pattern), sequence_from_object(f));
          },
          py::arg("f"), py::arg("pattern"),
          "Multiply coordinate n by the +/- pattern cycled by index");

    m.def("project_interval",
          [](const py::object& f, std::int64_t lo, std::int64_t hi) {
              return project(IndexSet::interval(lo, hi), sequence_from_object(f));
          },
          py::arg("f"), py::arg("lo"), py::arg("hi"));

    m.def("symmetry_defect",
          [](const Weight& w, double p, const std::vector<std::int64_t>& r_list,
             std::uint64_t budget) {
              WorkBudget meter = budget_from_limit(budget);
              py::list out;
              for (const DefectRow& row : symmetry_defect(w, p, r_list, meter)) {
                  py::dict d;
                  d["r"] = row.r;
                  d["norm_f"] = row.norm_f;
                  d["norm_g_rev"] = row.norm_g_rev;
                  d["harmonic"] = row.harmonic;
                  d["defect"] = row.defect;
                  d["lorentz_common"] = row.lorentz_common;
                  out.append(d);
              }
              return out;
          },
          py::arg("w"), py::arg("p"), py::arg("r_list"),
          py::arg("budget") = 1'000'000'000,
          "Forward vs reversed norms of a_n = (n w_n)^{-1/p} on 1..r");

    m.def("select_lp",
          [](const Weight& w, double p, double epsilon, std::uint64_t budget,
             int steps, std::int64_t blocks, int trials, std::uint64_t seed,
             bool include_arrays) {
              const BlockSequence bs = dyadic_blocks(w, p, blocks);
              const SelectionTrace trace =
                  select_lp_subsequence(bs, w, p, epsilon, budget, steps);
              py::dict out;
              out["trace"] = trace_to_dict(trace, include_arrays);
              if (trials > 0 && trace.steps.size() >= 1) {
                  const FactorizationReport fr =
                      verify_factorization(trace, w, p, trials, seed);
                  py::dict f;
                  f["functional_identity_error"] = fr.functional_identity_error;
                  f["min_ratio"] = fr.min_ratio;
                  f["max_ratio"] = fr.max_ratio;
                  f["trials"] = fr.trials;
                  f["violations"] = fr.violations;
                  out["factorization"] = f;
              }
              return out;
          },
          py::arg("w"), py::arg("p"), py::arg("epsilon") = 3.0,
          py::arg("budget") = 1'000'000'000, py::arg("steps") = 2,
          py::arg("blocks") = 48, py::arg("trials") = 0, py::arg("seed") = 0,
          py::arg("include_arrays") = false,
          "Select far-apart dyadic blocks whose left shifts keep at least "
          "(1+epsilon)^{-p} of their mass; optionally certify the resulting "
          "norm bounds on random combinations");
}
