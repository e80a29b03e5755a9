// Command-line front end: norms, weight diagnostics, and the desk-scale
// experiments, with deterministic machine-readable output.
//
// Exit codes: 0 success, 1 usage/validation error, 2 budget exhaustion,
// 3 invariant violation detected in the outputs.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "garling/asymptotics.hpp"
#include "garling/blocks.hpp"
#include "garling/budget.hpp"
#include "garling/norms.hpp"
#include "garling/operators.hpp"
#include "garling/sequence.hpp"
#include "garling/serialization.hpp"
#include "garling/weight.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBudget = 2;
constexpr int kExitInvariant = 3;

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fflush(stdout);
        return;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file '" + output_path + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

std::vector<std::int64_t> parse_int_list(const std::string& text, const char* what) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument("junk");
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("cannot parse ") + what + " entry '" +
                                        item + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument(std::string("empty ") + what + " list");
    return out;
}

// Index-map grammar: "affine:step=<int>,offset=<int>" or "sel:<i1>,<i2>,...".
garling::IncreasingMap parse_map(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("map spec needs a scheme (affine: | sel:)");
    }
    const std::string scheme = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    if (scheme == "affine") {
        std::int64_t step = 1, offset = 0;
        std::stringstream ss(rest);
        std::string item;
        bool saw_step = false;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("expected key=value");
            const std::string key = item.substr(0, eq);
            const std::int64_t value = std::stoll(item.substr(eq + 1));
            if (key == "step") {
                step = value;
                saw_step = true;
            } else if (key == "offset") {
                offset = value;
            } else {
                throw std::invalid_argument("unknown affine key '" + key + "'");
            }
        }
        if (!saw_step) throw std::invalid_argument("affine map needs step=<int>");
        return garling::IncreasingMap::affine(step, offset);
    }
    if (scheme == "sel") {
        return garling::IncreasingMap::from_selection(
            garling::Selection::of(parse_int_list(rest, "selection")));
    }
    throw std::invalid_argument("unknown map scheme '" + scheme + "'");
}

struct NormArgs {
    std::string space = "g";
    std::string weight;
    double p = 1.0;
    std::string vec;
    std::string input;
    std::string signs;
    std::string spread_map;
    std::string extract_map;
    std::uint64_t budget = 0; // 0 = unlimited
    std::string output;
};

garling::FiniteSequence load_vector(const std::string& vec, const std::string& input) {
    if (vec.empty() == input.empty()) {
        throw std::invalid_argument("provide exactly one of --vec or --input");
    }
    if (!vec.empty()) return garling::parse_vector(vec);
    std::ifstream in(input);
    if (!in) throw std::invalid_argument("cannot open input file '" + input + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return garling::parse_vector(buffer.str());
}

int run_norm(const NormArgs& args) {
    const garling::Weight w = garling::make_weight(args.weight);
    garling::FiniteSequence f = load_vector(args.vec, args.input);
    if (!args.signs.empty()) {
        f = garling::apply_signs(garling::SignPattern::cycled(args.signs), f);
    }
    if (!args.spread_map.empty()) {
        f = garling::spread(parse_map(args.spread_map), f);
    }
    if (!args.extract_map.empty()) {
        f = garling::extract(parse_map(args.extract_map), f);
    }

    garling::ordered_json out;
    bool invariant_ok = true;
    if (args.space == "g") {
        garling::WorkBudget budget = args.budget == 0 ? garling::WorkBudget::unlimited()
                                                      : garling::WorkBudget(args.budget);
        const garling::NormReport report = garling::garling_norm(f, w, args.p, budget);
        invariant_ok = garling::norm_attaining_check(report, f, w, args.p);
        out = garling::to_json(report);
    } else if (args.space == "d") {
        const garling::NormReport report = garling::lorentz_norm(f, w, args.p);
        invariant_ok = garling::norm_attaining_check(report, f, w, args.p);
        out = garling::to_json(report);
    } else if (args.space == "dinf") {
        const double v = garling::weak_lorentz_quasinorm(f, w, args.p);
        out["value"] = v;
        out["p_power"] = std::pow(v, args.p);
        out["selection"] = garling::ordered_json::array();
        out["algorithm"] = "direct";
    } else if (args.space == "lp") {
        const double v = garling::lp_norm(f, args.p);
        out["value"] = v;
        out["p_power"] = std::pow(v, args.p);
        out["selection"] = garling::ordered_json::array();
        out["algorithm"] = "direct";
    } else {
        throw std::invalid_argument("--space must be one of g, d, dinf, lp");
    }
    emit(garling::dump_json(out), args.output);
    if (!invariant_ok) {
        std::cerr << "invariant violation: reported selection does not reproduce the value\n";
        return kExitInvariant;
    }
    return kExitOk;
}

struct DiagArgs {
    std::string weight;
    std::int64_t horizon = 10000;
    std::string output;
};

int run_diag(const DiagArgs& args) {
    const garling::Weight w = garling::make_weight(args.weight);
    const garling::WeightDiagnostics d = garling::diagnostics(w, args.horizon);
    emit(garling::dump_json(garling::to_json(d)), args.output);
    return kExitOk;
}

struct DefectArgs {
    std::string weight;
    double p = 1.0;
    std::string r_list = "16,64,256,1024,4096";
    std::string format = "csv";
    std::uint64_t budget = 1000000000ULL;
    std::string output;
};

int run_defect(const DefectArgs& args) {
    const garling::Weight w = garling::make_weight(args.weight);
    const std::vector<std::int64_t> r_list = parse_int_list(args.r_list, "r");
    garling::WorkBudget budget(args.budget);
    const std::vector<garling::DefectRow> rows =
        garling::symmetry_defect(w, args.p, r_list, budget);
    if (args.format == "csv") {
        emit(garling::defect_rows_to_csv(rows), args.output);
    } else if (args.format == "json") {
        emit(garling::dump_json(garling::to_json(rows)), args.output);
    } else {
        throw std::invalid_argument("--format must be csv or json");
    }
    for (const garling::DefectRow& row : rows) {
        if (row.reversal_exceeded_forward) {
            std::cerr << "invariant violation: reversed norm exceeds forward norm at r = "
                      << row.r << "\n";
            return kExitInvariant;
        }
    }
    return kExitOk;
}

struct SelectArgs {
    std::string weight;
    double p = 1.0;
    double epsilon = 3.0;
    std::uint64_t budget = 1000000000ULL;
    int steps = 2;
    std::int64_t blocks = 48;
    int trials = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string output;
};

int run_select(const SelectArgs& args) {
    if (args.trials > 0 && !args.seed_set) {
        throw std::invalid_argument("--seed is required when --trials > 0");
    }
    const garling::Weight w = garling::make_weight(args.weight);
    const garling::BlockSequence bs = garling::dyadic_blocks(w, args.p, args.blocks);
    const garling::SelectionTrace trace =
        garling::select_lp_subsequence(bs, w, args.p, args.epsilon, args.budget, args.steps);

    garling::ordered_json out;
    out["trace"] = garling::to_json(trace);
    if (args.trials > 0 && !trace.steps.empty()) {
        const garling::FactorizationReport report =
            garling::verify_factorization(trace, w, args.p, args.trials, args.seed);
        out["factorization"] = garling::to_json(report);
        emit(garling::dump_json(out), args.output);
        if (report.violations > 0 || report.functional_identity_error > 1e-12) {
            std::cerr << "invariant violation: factorization bounds failed\n";
            return kExitInvariant;
        }
    } else {
        emit(garling::dump_json(out), args.output);
    }
    if (trace.status != garling::SelectionTrace::Status::target_reached) {
        std::cerr << "stopped before the target step count: "
                  << (trace.status == garling::SelectionTrace::Status::budget_exhausted
                          ? "budget exhausted"
                          : "block family exhausted")
                  << " after " << trace.steps.size() << " completed step(s)\n";
        return kExitBudget;
    }
    return kExitOk;
}

struct MinimalArgs {
    std::string weight;
    double p = 1.0;
    std::string vec;
    std::string input;
    double tol = 1e-9;
    std::string output;
};

int run_minimal(const MinimalArgs& args) {
    const garling::Weight w = garling::make_weight(args.weight);
    const garling::FiniteSequence f = load_vector(args.vec, args.input);
    const garling::MinimalityReport report = garling::is_minimal(f, w, args.p, args.tol);
    const garling::FiniteSequence reduced = garling::minimal_predecessor(f, w, args.p, args.tol);
    emit(garling::dump_json(garling::to_json(report, reduced)), args.output);

    // The reduction must itself be minimal and norm-preserving.
    const garling::MinimalityReport check = garling::is_minimal(reduced, w, args.p, args.tol);
    const double drift = std::abs(check.norm - report.norm) /
                         std::max(1.0, std::abs(report.norm));
    if (!check.minimal || drift > args.tol) {
        std::cerr << "invariant violation: minimal predecessor failed its contract\n";
        return kExitInvariant;
    }
    return kExitOk;
}

struct OracleArgs {
    std::string weight;
    double p = 1.0;
    int trials = 100;
    int max_support = 10;
    std::int64_t max_index = 40;
    std::uint64_t seed = 0;
    std::string output;
};

double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int run_oracle_check(const OracleArgs& args) {
    if (args.trials < 1) throw std::invalid_argument("--trials must be >= 1");
    if (args.max_support < 1 || args.max_support > 20) {
        throw std::invalid_argument("--max-support must lie in [1, 20]");
    }
    if (args.max_index < args.max_support) {
        throw std::invalid_argument("--max-index must be >= --max-support");
    }
    const garling::Weight w = garling::make_weight(args.weight);
    std::mt19937_64 rng(args.seed);

    int mismatches = 0;
    double max_rel_err = 0.0;
    garling::ordered_json worst;

    for (int t = 0; t < args.trials; ++t) {
        const int s = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(args.max_support));
        // partial Fisher-Yates draw of s distinct indices from 1..max_index
        std::vector<std::int64_t> pool(static_cast<std::size_t>(args.max_index));
        for (std::int64_t i = 0; i < args.max_index; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
        for (int i = 0; i < s; ++i) {
            const std::size_t j =
                static_cast<std::size_t>(i) +
                static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(args.max_index - i));
            std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        }
        std::vector<std::int64_t> support(pool.begin(), pool.begin() + s);
        std::sort(support.begin(), support.end());

        std::vector<garling::FiniteSequence::Entry> entries;
        entries.reserve(static_cast<std::size_t>(s));
        for (int i = 0; i < s; ++i) {
            double v = 0.0;
            while (v == 0.0) v = 2.0 * uniform_unit(rng) - 1.0;
            entries.push_back({support[static_cast<std::size_t>(i)], v});
        }
        const garling::FiniteSequence f =
            garling::FiniteSequence::from_entries(std::move(entries));

        const garling::NormReport dp = garling::garling_norm(f, w, args.p);
        const garling::NormReport oracle = garling::garling_norm_oracle(f, w, args.p);
        const double rel = std::abs(dp.value - oracle.value) / std::max(1.0, oracle.value);
        const bool attained = garling::norm_attaining_check(dp, f, w, args.p);
        if (rel > max_rel_err) {
            max_rel_err = rel;
            worst = garling::ordered_json();
            worst["trial"] = t;
            worst["vector"] = garling::to_json(f);
            worst["dp"] = garling::to_json(dp);
            worst["oracle"] = garling::to_json(oracle);
        }
        if (rel > 1e-12 || !attained) ++mismatches;
    }

    garling::ordered_json out;
    out["weight"] = w.spec_string();
    out["p"] = args.p;
    out["trials"] = args.trials;
    out["max_support"] = args.max_support;
    out["max_index"] = args.max_index;
    out["seed"] = args.seed;
    out["mismatches"] = mismatches;
    out["max_rel_err"] = max_rel_err;
    out["worst_case"] = worst.is_null() ? garling::ordered_json() : worst;
    emit(garling::dump_json(out), args.output);

    if (mismatches > 0) {
        std::cerr << "invariant violation: " << mismatches
                  << " dynamic-program/oracle mismatches\n";
        return kExitInvariant;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact sequence-space norms, weight diagnostics, and experiments"};
    app.require_subcommand(1);

    NormArgs norm_args;
    CLI::App* norm = app.add_subcommand("norm", "Evaluate a norm of a finite vector");
    norm->add_option("--space", norm_args.space,
                     "Norm: g (selection supremum), d (rearrangement), dinf (weak), lp")
        ->check(CLI::IsMember({"g", "d", "dinf", "lp"}));
    norm->add_option("--weight", norm_args.weight, "Weight spec (pow:|logpow:|table:|file:)")
        ->required();
    norm->add_option("--p", norm_args.p, "Exponent p >= 1")->required();
    norm->add_option("--vec", norm_args.vec, "Vector literal (dense or sparse JSON)");
    norm->add_option("--input", norm_args.input, "Path to a JSON vector file");
    norm->add_option("--signs", norm_args.signs, "Sign pattern (+/- string cycled by index)");
    norm->add_option("--spread", norm_args.spread_map,
                     "Spread through a map (affine:step=..,offset=.. | sel:i1,i2,...)");
    norm->add_option("--extract", norm_args.extract_map, "Extract along a map (same grammar)");
    norm->add_option("--budget", norm_args.budget, "Operation budget (0 = unlimited)");
    norm->add_option("--output", norm_args.output, "Output path (default stdout)");

    DiagArgs diag_args;
    CLI::App* weights = app.add_subcommand("weights", "Weight sequence utilities");
    weights->require_subcommand(1);
    CLI::App* diag = weights->add_subcommand("diag", "Diagnostic statistics over a horizon");
    diag->add_option("--weight", diag_args.weight, "Weight spec")->required();
    diag->add_option("--horizon", diag_args.horizon, "Horizon M >= 1");
    diag->add_option("--output", diag_args.output, "Output path (default stdout)");

    DefectArgs defect_args;
    CLI::App* defect = app.add_subcommand("defect", "Symmetry-defect experiment");
    defect->add_option("--weight", defect_args.weight, "Weight spec")->required();
    defect->add_option("--p", defect_args.p, "Exponent p >= 1")->required();
    defect->add_option("--r", defect_args.r_list, "Comma-separated horizons");
    defect->add_option("--format", defect_args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    defect->add_option("--budget", defect_args.budget, "Operation budget");
    defect->add_option("--output", defect_args.output, "Output path (default stdout)");

    SelectArgs select_args;
    CLI::App* select = app.add_subcommand("select-lp", "Subsequence selection on dyadic blocks");
    select->add_option("--weight", select_args.weight, "Weight spec")->required();
    select->add_option("--p", select_args.p, "Exponent p >= 1")->required();
    select->add_option("--epsilon", select_args.epsilon, "Distortion parameter > 0");
    select->add_option("--budget", select_args.budget, "Operation budget");
    select->add_option("--steps", select_args.steps, "Target completed steps (0 = run out)");
    select->add_option("--blocks", select_args.blocks, "Dyadic family size (<= 62)");
    select->add_option("--trials", select_args.trials,
                       "Random combinations for the factorization check (0 = skip)");
    select->add_option("--seed", select_args.seed, "RNG seed for the check")
        ->each([&select_args](const std::string&) { select_args.seed_set = true; });
    select->add_option("--output", select_args.output, "Output path (default stdout)");

    MinimalArgs minimal_args;
    CLI::App* minimal = app.add_subcommand("minimal", "Minimality test and reduction");
    minimal->add_option("--weight", minimal_args.weight, "Weight spec")->required();
    minimal->add_option("--p", minimal_args.p, "Exponent p >= 1")->required();
    minimal->add_option("--vec", minimal_args.vec, "Vector literal");
    minimal->add_option("--input", minimal_args.input, "Path to a JSON vector file");
    minimal->add_option("--tol", minimal_args.tol, "Relative equality tolerance");
    minimal->add_option("--output", minimal_args.output, "Output path (default stdout)");

    OracleArgs oracle_args;
    CLI::App* oracle = app.add_subcommand("oracle-check",
                                          "Randomized dynamic-program vs oracle suite");
    oracle->add_option("--weight", oracle_args.weight, "Weight spec")->required();
    oracle->add_option("--p", oracle_args.p, "Exponent p >= 1")->required();
    oracle->add_option("--trials", oracle_args.trials, "Number of random vectors");
    oracle->add_option("--max-support", oracle_args.max_support, "Largest support size");
    oracle->add_option("--max-index", oracle_args.max_index, "Largest index drawn");
    oracle->add_option("--seed", oracle_args.seed, "RNG seed")->required();
    oracle->add_option("--output", oracle_args.output, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (norm->parsed()) return run_norm(norm_args);
        if (weights->parsed() && diag->parsed()) return run_diag(diag_args);
        if (defect->parsed()) return run_defect(defect_args);
        if (select->parsed()) return run_select(select_args);
        if (minimal->parsed()) return run_minimal(minimal_args);
        if (oracle->parsed()) return run_oracle_check(oracle_args);
        std::cerr << "no subcommand selected\n";
        return kExitUsage;
    } catch (const garling::BudgetExhausted& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::logic_error& e) {
        // reached only by genuine internal-invariant failures
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
