#include "garling/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>

namespace garling {

namespace {

// Deterministic uniforms built directly on the mt19937_64 stream (the
// distribution classes in <random> are implementation-defined, which would
// make archived outputs compiler-dependent).
double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53; // [0, 1)
}

double uniform_sym(std::mt19937_64& rng) {
    return 2.0 * uniform_unit(rng) - 1.0; // [-1, 1)
}

double pow_p(double x, double p) {
    if (p == 1.0) return x;
    if (p == 2.0) return x * x;
    return std::pow(x, p);
}

double root_p(double x, double p) {
    if (p == 1.0) return x;
    if (p == 2.0) return std::sqrt(x);
    return std::pow(x, 1.0 / p);
}

double lp_of(const std::vector<double>& b, double p) {
    double s = 0.0;
    for (double v : b) s += pow_p(std::abs(v), p);
    return root_p(s, p);
}

bool constant_abs(const FiniteSequence& f) {
    const auto& e = f.entries();
    for (std::size_t i = 1; i < e.size(); ++i) {
        if (std::abs(e[i].value) != std::abs(e[0].value)) return false;
    }
    return true;
}

} // namespace

std::vector<DefectRow> symmetry_defect(const Weight& w, double p,
                                       const std::vector<std::int64_t>& r_list,
                                       WorkBudget& budget) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw std::invalid_argument("exponent p must satisfy 1 <= p < infinity");
    }
    std::vector<DefectRow> rows;
    rows.reserve(r_list.size());
    for (const std::int64_t r : r_list) {
        if (r < 1) throw std::invalid_argument("defect horizon must be >= 1");
        const std::vector<double> wv = w.first_values(r);

        // forward coefficients a_n = (n w_n)^{-1/p}, strictly decreasing for
        // nonincreasing w; the reversal uses the same values back to front
        std::vector<double> a(static_cast<std::size_t>(r));
        for (std::int64_t n = 1; n <= r; ++n) {
            const double nw = static_cast<double>(n) * wv[static_cast<std::size_t>(n - 1)];
            a[static_cast<std::size_t>(n - 1)] = (p == 1.0) ? 1.0 / nw : std::pow(nw, -1.0 / p);
        }
        std::vector<double> rev(a.rbegin(), a.rend());

        const FiniteSequence f = FiniteSequence::from_dense(a);
        const FiniteSequence g = FiniteSequence::from_dense(rev);

        DefectRow row;
        row.r = r;
        double H = 0.0;
        for (std::int64_t n = 1; n <= r; ++n) H += 1.0 / static_cast<double>(n);
        row.harmonic = H;
        row.norm_f = garling_norm(f, w, p, budget).value;
        row.norm_g_rev = garling_norm(g, w, p, budget).value;
        row.defect = row.norm_f / row.norm_g_rev;
        row.lorentz_common = lorentz_norm(f, w, p).value;
        row.reversal_exceeded_forward = row.norm_g_rev > row.norm_f * (1.0 + 1e-12);
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

struct BlocksExhausted {}; // internal control flow for select_lp_subsequence

} // namespace

SelectionTrace select_lp_subsequence(const BlockSequence& bs, const Weight& w, double p,
                                     double epsilon, std::uint64_t budget_limit,
                                     int target_steps) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw std::invalid_argument("exponent p must satisfy 1 <= p < infinity");
    }
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("epsilon must be positive and finite");
    }
    if (target_steps < 0) throw std::invalid_argument("target_steps must be >= 0");

    WorkBudget budget(budget_limit);
    SelectionTrace trace;
    trace.p = p;
    trace.epsilon = epsilon;
    trace.alpha = std::pow(1.0 + epsilon, -p);
    const double alpha = trace.alpha;

    // Values beyond the cache cap are evaluated on the fly; the caller pays
    // per evaluation through the explicit charges below.
    const auto wval = [&](std::int64_t n) {
        return n <= w.cache_cap() ? w.value(n) : w.value_uncached(n);
    };

    std::int64_t q_k = 1;    // next free slot in the packed layout
    std::int64_t n_prev = 0; // last chosen block
    std::int64_t scan_j = 1; // resume point for threshold scans (monotone thresholds)

    try {
        // Reject obvious gliding humps over the available prefix before any
        // real work: if the per-block maxima never fall below the first-step
        // threshold, no admissible block exists.
        {
            const double theta0 = root_p((1.0 - alpha) / 2.0, p);
            const std::int64_t prefix = std::min<std::int64_t>(bs.count().value_or(16), 16);
            const BlockClassification cls = classify_blocks(bs, prefix, theta0, budget);
            if (cls.verdict == BlockClassification::Verdict::gliding_hump) {
                throw std::invalid_argument(
                    "block maxima stay above the admission threshold over the scanned "
                    "prefix; the family is not uniformly null (gliding hump)");
            }
        }

        for (int k = 1; target_steps == 0 || k <= target_steps; ++k) {
            // L: least L >= 1 with w_{L+1} + ... + w_{L+q_k-1} < (1-alpha)/2.
            // The window is empty for q_k = 1, so the least admissible L is 1.
            std::int64_t L = 1;
            if (q_k > 1) {
                const double bound = (1.0 - alpha) / 2.0;
                double window = 0.0;
                for (std::int64_t n = 2; n <= q_k; ++n) {
                    budget.charge(1);
                    window += wval(n);
                }
                while (window >= bound) {
                    budget.charge(1);
                    window -= wval(L + 1);
                    window += wval(L + q_k);
                    ++L;
                }
            }
            const double th = root_p((1.0 - alpha) / (2.0 * static_cast<double>(L)), p);

            // M: packed boundary from which every generated coefficient sits
            // below th.  With nonincreasing maxima the first block below th
            // certifies the whole tail; otherwise the entire (finite) family
            // must be scanned.
            std::int64_t j_star;
            if (bs.maxima_nonincreasing()) {
                while (true) {
                    if (!bs.has_block(scan_j)) throw BlocksExhausted{};
                    budget.charge(1);
                    if (bs.max_abs(scan_j, budget) < th) break;
                    ++scan_j;
                }
                j_star = scan_j;
            } else {
                if (!bs.count()) {
                    throw CapacityError(
                        "cannot certify a tail bound for an unbounded family without "
                        "the nonincreasing-maxima guarantee");
                }
                j_star = *bs.count() + 1;
                for (std::int64_t j = *bs.count(); j >= 1; --j) {
                    budget.charge(1);
                    if (bs.max_abs(j, budget) >= th) break;
                    j_star = j;
                }
                if (j_star > *bs.count()) throw BlocksExhausted{};
            }
            const std::int64_t M = bs.packed_boundary(j_star, budget);

            // Block choice: least j past both the previous pick and j_star
            // whose support is longer than L + q_k (its packed boundary is
            // then automatically >= M).
            std::int64_t chosen = 0;
            for (std::int64_t j = std::max(n_prev + 1, j_star);; ++j) {
                if (!bs.has_block(j)) throw BlocksExhausted{};
                budget.charge(1);
                if (bs.packed_boundary(j, budget) < M) continue;
                if (bs.support_size(j, budget) > L + q_k) {
                    chosen = j;
                    break;
                }
            }

            FiniteSequence y = bs.block(chosen, budget);
            for (const auto& e : y.entries()) {
                if (e.value < 0.0) {
                    throw std::invalid_argument(
                        "blocks must be nonnegative (apply a sign pattern first)");
                }
            }
            {
                const NormReport unit = garling_norm(y, w, p, budget);
                if (std::abs(unit.value - 1.0) > 1e-9) {
                    throw std::invalid_argument("block " + std::to_string(chosen) +
                                                " is not normalized: norm = " +
                                                std::to_string(unit.value));
                }
            }
            // Constant blocks are already minimal; others are reduced first
            // so that the packed coefficients carry full norm.
            const FiniteSequence y_min =
                constant_abs(y) ? y : minimal_predecessor(y, w, p);

            const std::int64_t size = static_cast<std::int64_t>(y_min.support_size());
            const std::int64_t q_next = q_k + size;
            if (q_next - 1 > w.cache_cap()) {
                throw CapacityError("packed layout exceeds the weight cache cap");
            }

            SelectionStep step;
            step.k = k;
            step.L = L;
            step.M = M;
            step.block_index = chosen;
            step.q_begin = q_k;
            step.q_end = q_next;
            step.packed_coefficients.reserve(static_cast<std::size_t>(size));
            double A = 0.0;
            budget.charge(static_cast<std::uint64_t>(size));
            {
                std::int64_t slot = q_k;
                for (const auto& e : y_min.entries()) {
                    const double c = e.value;
                    step.packed_coefficients.push_back(c);
                    A += pow_p(c, p) * w.value(slot);
                    ++slot;
                }
            }
            step.A = A;
            if (A < alpha - 1e-12) {
                throw std::logic_error("selection invariant violated: A_" +
                                       std::to_string(k) + " = " + std::to_string(A) +
                                       " < alpha = " + std::to_string(alpha));
            }
            step.functional.reserve(static_cast<std::size_t>(size));
            {
                std::int64_t slot = q_k;
                for (const auto& e : y_min.entries()) {
                    const double c = e.value;
                    const double cpm1 = (p == 1.0) ? 1.0 : std::pow(c, p - 1.0);
                    step.functional.push_back(cpm1 * w.value(slot) / A);
                    ++slot;
                }
            }

            trace.steps.push_back(std::move(step));
            trace.selected_blocks.push_back(std::move(y));
            q_k = q_next;
            n_prev = chosen;
        }
        trace.status = SelectionTrace::Status::target_reached;
    } catch (const BudgetExhausted&) {
        trace.status = SelectionTrace::Status::budget_exhausted;
    } catch (const BlocksExhausted&) {
        trace.status = SelectionTrace::Status::blocks_exhausted;
    }
    trace.budget_used = budget.used();
    return trace;
}

FactorizationReport verify_factorization(const SelectionTrace& trace, const Weight& w,
                                         double p, int trials, std::uint64_t rng_seed) {
    if (trace.steps.empty()) {
        throw std::invalid_argument("trace has no completed steps to verify");
    }
    if (trials < 0) throw std::invalid_argument("trials must be >= 0");
    const std::size_t K = trace.steps.size();

    FactorizationReport report;
    report.trials = 0;

    // The norming identity: each functional applied to its own packed block
    // gives exactly A/A = 1 up to roundoff; disjoint slot intervals make the
    // cross terms structurally zero.
    for (const SelectionStep& step : trace.steps) {
        double s = 0.0;
        for (std::size_t t = 0; t < step.functional.size(); ++t) {
            s += step.functional[t] * step.packed_coefficients[t];
        }
        report.functional_identity_error =
            std::max(report.functional_identity_error, std::abs(s - 1.0));
    }

    const double lower_factor = 1.0 / (1.0 + trace.epsilon);
    const double tol = 1e-9;
    report.min_ratio = std::numeric_limits<double>::infinity();
    report.max_ratio = 0.0;

    const auto run_combination = [&](const std::vector<double>& b) {
        const double bn = lp_of(b, p);
        if (bn == 0.0) return;
        FiniteSequence combo;
        for (std::size_t k = 0; k < K; ++k) {
            if (b[k] == 0.0) continue;
            combo = FiniteSequence::disjoint_sum(combo,
                                                 trace.selected_blocks[k].scaled(b[k]));
        }
        const double val = garling_norm(combo, w, p).value;
        const double ratio = val / bn;
        report.min_ratio = std::min(report.min_ratio, ratio);
        report.max_ratio = std::max(report.max_ratio, ratio);
        if (ratio < lower_factor - tol || ratio > 1.0 + tol) ++report.violations;
        ++report.trials;
    };

    // Corner cases first: each basis vector and the balanced vector.
    for (std::size_t k = 0; k < K; ++k) {
        std::vector<double> b(K, 0.0);
        b[k] = 1.0;
        run_combination(b);
    }
    run_combination(std::vector<double>(K, 1.0));

    std::mt19937_64 rng(rng_seed);
    for (int t = 0; t < trials; ++t) {
        std::vector<double> b(K);
        double bn = 0.0;
        do {
            for (double& v : b) v = uniform_sym(rng);
            bn = lp_of(b, p);
        } while (bn < 1e-3); // reject degenerate draws
        for (double& v : b) v /= bn;
        run_combination(b);
    }
    return report;
}

DominationReport domination_check(const BlockSequence& bs, const Weight& w, double p,
                                  int trials, std::uint64_t rng_seed) {
    if (trials < 0) throw std::invalid_argument("trials must be >= 0");
    const std::int64_t dims = std::min<std::int64_t>(bs.count().value_or(8), 8);
    std::vector<FiniteSequence> blocks;
    blocks.reserve(static_cast<std::size_t>(dims));
    for (std::int64_t n = 1; n <= dims; ++n) blocks.push_back(bs.block(n));

    DominationReport report;
    report.dims = static_cast<int>(dims);

    const auto run_combination = [&](const std::vector<double>& b) {
        const double bn = lp_of(b, p);
        if (bn == 0.0) return;
        FiniteSequence combo;
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            if (b[k] == 0.0) continue;
            combo = FiniteSequence::disjoint_sum(combo, blocks[k].scaled(b[k]));
        }
        const double ratio = garling_norm(combo, w, p).value / bn;
        report.max_ratio = std::max(report.max_ratio, ratio);
        ++report.trials;
    };

    for (std::size_t k = 0; k < blocks.size(); ++k) {
        std::vector<double> b(blocks.size(), 0.0);
        b[k] = 1.0;
        run_combination(b);
    }
    run_combination(std::vector<double>(blocks.size(), 1.0));

    std::mt19937_64 rng(rng_seed);
    for (int t = 0; t < trials; ++t) {
        std::vector<double> b(blocks.size());
        double bn = 0.0;
        do {
            for (double& v : b) v = uniform_sym(rng);
            bn = lp_of(b, p);
        } while (bn < 1e-3);
        run_combination(b);
    }
    return report;
}

std::vector<GrowthRow> partial_sum_growth(const BlockSequence& bs, const Weight& w,
                                          double p, const std::vector<std::int64_t>& m_list,
                                          WorkBudget& budget) {
    std::vector<std::int64_t> sorted = m_list;
    std::sort(sorted.begin(), sorted.end());
    for (const std::int64_t m : sorted) {
        if (m < 1) throw std::invalid_argument("partial-sum lengths must be >= 1");
        if (bs.count() && m > *bs.count()) {
            throw std::out_of_range("family has only " + std::to_string(*bs.count()) +
                                    " blocks");
        }
    }

    std::vector<GrowthRow> rows;
    rows.reserve(sorted.size());
    FiniteSequence acc;
    std::int64_t have = 0;
    for (const std::int64_t m : sorted) {
        while (have < m) {
            acc = FiniteSequence::disjoint_sum(acc, bs.block(++have, budget));
        }
        rows.push_back({m, garling_norm(acc, w, p, budget).value});
    }
    return rows;
}

PermutationDefectReport permutation_defect(const FiniteSequence& f, const Weight& w,
                                           double p, int trials, std::uint64_t rng_seed) {
    if (f.empty()) throw std::invalid_argument("permutation defect needs a nonzero input");
    if (trials < 1) throw std::invalid_argument("at least one trial required");

    const double base = garling_norm(f, w, p).value;
    PermutationDefectReport report;
    report.trials = trials;
    report.lorentz_bound = w.normalized_nonincreasing() ? lorentz_norm(f, w, p).value : 0.0;
    report.min_ratio = std::numeric_limits<double>::infinity();
    report.max_ratio = 0.0;

    const std::vector<std::int64_t> support = f.support();
    std::vector<double> values;
    values.reserve(support.size());
    for (const auto& e : f.entries()) values.push_back(e.value);

    std::mt19937_64 rng(rng_seed);
    for (int t = 0; t < trials; ++t) {
        // Fisher-Yates on the value multiset; the modulo bias is irrelevant
        // here (sampling quality is not load-bearing, determinism is).
        for (std::size_t i = values.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng() % i);
            std::swap(values[i - 1], values[j]);
        }
        std::vector<FiniteSequence::Entry> entries;
        entries.reserve(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            entries.push_back({support[i], values[i]});
        }
        const double val =
            garling_norm(FiniteSequence::from_entries(std::move(entries)), w, p).value;
        const double ratio = val / base;
        report.min_ratio = std::min(report.min_ratio, ratio);
        report.max_ratio = std::max(report.max_ratio, ratio);
    }
    return report;
}

} // namespace garling
