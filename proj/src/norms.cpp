#include "garling/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

namespace garling {

namespace {

// Instance-size guards for the exact algorithms.
constexpr std::int64_t kPlainDpMaxSupport = 20000;   // N^2 bits of backtrack state
constexpr std::int64_t kRunDpMaxCells = 20'000'000;  // R*(N+1) backtrack entries
constexpr std::int64_t kOracleMaxSupport = 25;

void validate_p(double p) {
    if (!std::isfinite(p) || p < 1.0) {
        throw std::invalid_argument("exponent p must satisfy 1 <= p < infinity");
    }
}

// |x|^p and x^{1/p} with the exact special cases used by the identities.
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

// A maximal run of consecutive support positions carrying the same |value|.
// Only support order matters to the selection problem (restriction to the
// support loses nothing), so gaps between raw indices are irrelevant here.
struct Run {
    std::int64_t count = 0;
    double abs_value = 0.0;
    std::size_t first_entry = 0; // position in the entries vector
};

std::vector<Run> compress_runs(const std::vector<FiniteSequence::Entry>& entries) {
    std::vector<Run> runs;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const double v = std::abs(entries[i].value);
        if (!runs.empty() && runs.back().abs_value == v) {
            ++runs.back().count;
        } else {
            runs.push_back({1, v, i});
        }
    }
    return runs;
}

NormReport closed_form_report(const std::vector<FiniteSequence::Entry>& entries,
                              const Weight& w, double p) {
    // All |values| equal: every selection of size s yields |c|^p W_s, and
    // W_s grows with s, so the full support is the unique optimum and the
    // norm is |c| W_r^{1/p}.
    const std::int64_t r = static_cast<std::int64_t>(entries.size());
    const double vp = pow_p(std::abs(entries.front().value), p);
    NormReport report;
    report.p_power = vp * w.prefix_sum(r);
    report.value = root_p(report.p_power, p);
    std::vector<std::int64_t> indices;
    indices.reserve(entries.size());
    for (const auto& e : entries) indices.push_back(e.index);
    report.selection = Selection::of(std::move(indices));
    report.algorithm = NormAlgorithm::closed_form;
    return report;
}

// Dense selection DP over (position i, slot k):
//   V[i][k] = max(V[i-1][k], V[i-1][k-1] + |a_i|^p w_k)
// with a rolling value row and one backtrack bit per cell ("taking position
// i at slot k was strictly better").  Ties prefer not taking, and the final
// slot count is the smallest argmax, which makes the reported selection the
// minimum-cardinality, lexicographically-smallest optimum.
NormReport plain_dp(const std::vector<FiniteSequence::Entry>& entries, const Weight& w,
                    double p, WorkBudget& budget) {
    const std::int64_t N = static_cast<std::int64_t>(entries.size());
    const std::vector<double> wv = w.first_values(N);
    std::vector<double> vp(static_cast<std::size_t>(N));
    for (std::int64_t i = 0; i < N; ++i) {
        vp[static_cast<std::size_t>(i)] =
            pow_p(std::abs(entries[static_cast<std::size_t>(i)].value), p);
    }

    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> V(static_cast<std::size_t>(N) + 1, neg_inf);
    V[0] = 0.0;
    std::vector<std::uint64_t> take((static_cast<std::size_t>(N) * static_cast<std::size_t>(N) + 63) / 64,
                                    0);
    const auto set_bit = [&](std::int64_t i, std::int64_t k) {
        const std::size_t bit = static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(N) +
                                static_cast<std::size_t>(k - 1);
        take[bit >> 6] |= (std::uint64_t{1} << (bit & 63));
    };
    const auto get_bit = [&](std::int64_t i, std::int64_t k) {
        const std::size_t bit = static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(N) +
                                static_cast<std::size_t>(k - 1);
        return (take[bit >> 6] >> (bit & 63)) & 1u;
    };

    for (std::int64_t i = 1; i <= N; ++i) {
        budget.charge(static_cast<std::uint64_t>(i));
        const double a = vp[static_cast<std::size_t>(i - 1)];
        for (std::int64_t k = i; k >= 1; --k) {
            const double cand = V[static_cast<std::size_t>(k - 1)] +
                                a * wv[static_cast<std::size_t>(k - 1)];
            if (cand > V[static_cast<std::size_t>(k)]) {
                V[static_cast<std::size_t>(k)] = cand;
                set_bit(i, k);
            }
        }
    }

    std::int64_t best_T = 0;
    double best = 0.0;
    for (std::int64_t T = 1; T <= N; ++T) {
        if (V[static_cast<std::size_t>(T)] > best) {
            best = V[static_cast<std::size_t>(T)];
            best_T = T;
        }
    }

    std::vector<std::int64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(best_T));
    std::int64_t k = best_T;
    for (std::int64_t i = N; i >= 1 && k >= 1; --i) {
        if (get_bit(i, k)) {
            chosen.push_back(entries[static_cast<std::size_t>(i - 1)].index);
            --k;
        }
    }
    std::reverse(chosen.begin(), chosen.end());

    NormReport report;
    report.p_power = best;
    report.value = root_p(best, p);
    report.selection = Selection::of(std::move(chosen));
    report.algorithm = NormAlgorithm::dp;
    return report;
}

// Run-compressed DP.  Within one run all |values| agree, so an optimal
// selection uses some count c_j <= m_j of each run and the slots it occupies
// are forced to be the next c_j slots; with T = slots used so far,
//   V[j][T] = v_j W_T + max_{S in [T-m_j, T]} (V[j-1][S] - v_j W_S),
// a sliding-window maximum solved with a monotone deque in O(R N).  Window
// ties prefer the larger S (more members in earlier runs), matching the
// lexicographic preference of the dense DP; runs contribute their earliest
// members first.
NormReport run_dp(const std::vector<FiniteSequence::Entry>& entries,
                  const std::vector<Run>& runs, const Weight& w, double p,
                  WorkBudget& budget) {
    const std::int64_t N = static_cast<std::int64_t>(entries.size());
    const std::int64_t R = static_cast<std::int64_t>(runs.size());
    const std::vector<double> wv = w.first_values(N);
    std::vector<double> W(static_cast<std::size_t>(N) + 1, 0.0);
    for (std::int64_t t = 1; t <= N; ++t) {
        W[static_cast<std::size_t>(t)] =
            W[static_cast<std::size_t>(t - 1)] + wv[static_cast<std::size_t>(t - 1)];
    }

    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> V(static_cast<std::size_t>(N) + 1, neg_inf);
    std::vector<double> Vnext(static_cast<std::size_t>(N) + 1, neg_inf);
    V[0] = 0.0;
    std::vector<std::int32_t> choice(static_cast<std::size_t>(R) * (static_cast<std::size_t>(N) + 1),
                                     -1);

    std::int64_t cap_prev = 0;
    for (std::int64_t j = 1; j <= R; ++j) {
        const Run& run = runs[static_cast<std::size_t>(j - 1)];
        const std::int64_t cap = std::min<std::int64_t>(N, cap_prev + run.count);
        budget.charge(static_cast<std::uint64_t>(cap) + 1);
        const double v = pow_p(run.abs_value, p);

        const auto H = [&](std::int64_t S) {
            return V[static_cast<std::size_t>(S)] - v * W[static_cast<std::size_t>(S)];
        };
        // (H, S) lexicographic preference; larger S wins ties
        const auto key_leq = [&](std::int64_t s1, std::int64_t s2) {
            const double h1 = H(s1), h2 = H(s2);
            return h1 < h2 || (h1 == h2 && s1 < s2);
        };

        std::deque<std::int64_t> window;
        for (std::int64_t T = 0; T <= cap; ++T) {
            if (T <= cap_prev) {
                while (!window.empty() && key_leq(window.back(), T)) window.pop_back();
                window.push_back(T);
            }
            while (window.front() < T - run.count) window.pop_front();
            const std::int64_t S = window.front();
            Vnext[static_cast<std::size_t>(T)] =
                v * W[static_cast<std::size_t>(T)] + H(S);
            choice[static_cast<std::size_t>(j - 1) * (static_cast<std::size_t>(N) + 1) +
                   static_cast<std::size_t>(T)] = static_cast<std::int32_t>(S);
        }
        for (std::int64_t T = cap + 1; T <= N; ++T) {
            Vnext[static_cast<std::size_t>(T)] = neg_inf;
        }
        V.swap(Vnext);
        cap_prev = cap;
    }

    std::int64_t best_T = 0;
    double best = 0.0;
    for (std::int64_t T = 1; T <= N; ++T) {
        if (V[static_cast<std::size_t>(T)] > best) {
            best = V[static_cast<std::size_t>(T)];
            best_T = T;
        }
    }

    std::vector<std::int64_t> counts(static_cast<std::size_t>(R), 0);
    std::int64_t T = best_T;
    for (std::int64_t j = R; j >= 1; --j) {
        const std::int64_t S = choice[static_cast<std::size_t>(j - 1) *
                                          (static_cast<std::size_t>(N) + 1) +
                                      static_cast<std::size_t>(T)];
        counts[static_cast<std::size_t>(j - 1)] = T - S;
        T = S;
    }

    std::vector<std::int64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(best_T));
    for (std::int64_t j = 0; j < R; ++j) {
        const Run& run = runs[static_cast<std::size_t>(j)];
        for (std::int64_t c = 0; c < counts[static_cast<std::size_t>(j)]; ++c) {
            chosen.push_back(entries[run.first_entry + static_cast<std::size_t>(c)].index);
        }
    }

    NormReport report;
    report.p_power = best;
    report.value = root_p(best, p);
    report.selection = Selection::of(std::move(chosen));
    report.algorithm = NormAlgorithm::dp;
    return report;
}

} // namespace

std::string to_string(NormAlgorithm a) {
    switch (a) {
        case NormAlgorithm::dp: return "dp";
        case NormAlgorithm::oracle: return "oracle";
        case NormAlgorithm::rearrangement: return "rearrangement";
        case NormAlgorithm::closed_form: return "closed_form";
    }
    return "unknown";
}

NormReport garling_norm(const FiniteSequence& f, const Weight& w, double p) {
    WorkBudget budget = WorkBudget::unlimited();
    return garling_norm(f, w, p, budget);
}

NormReport garling_norm(const FiniteSequence& f, const Weight& w, double p,
                        WorkBudget& budget) {
    validate_p(p);
    if (f.empty()) {
        NormReport report;
        report.algorithm = NormAlgorithm::closed_form;
        return report;
    }
    const auto& entries = f.entries();
    const std::int64_t N = static_cast<std::int64_t>(entries.size());
    w.materialize(std::min(N, w.cache_cap())); // positivity check; throws past tables

    const std::vector<Run> runs = compress_runs(entries);
    const std::int64_t R = static_cast<std::int64_t>(runs.size());
    if (R == 1) {
        budget.charge(static_cast<std::uint64_t>(N));
        return closed_form_report(entries, w, p);
    }
    const bool runs_fit = R * (N + 1) <= kRunDpMaxCells;
    if (N <= kPlainDpMaxSupport && (!runs_fit || R > N / 4)) {
        return plain_dp(entries, w, p, budget);
    }
    if (runs_fit) {
        return run_dp(entries, runs, w, p, budget);
    }
    throw CapacityError("support of size " + std::to_string(N) + " with " +
                        std::to_string(R) +
                        " value runs exceeds the exact DP capacity limits");
}

NormReport garling_norm_oracle(const FiniteSequence& f, const Weight& w, double p) {
    validate_p(p);
    if (f.empty()) {
        NormReport report;
        report.algorithm = NormAlgorithm::oracle;
        return report;
    }
    const auto& entries = f.entries();
    const int N = static_cast<int>(entries.size());
    if (N > kOracleMaxSupport) {
        throw CapacityError("oracle enumerates 2^N selections; support too large (" +
                            std::to_string(N) + ")");
    }
    const std::vector<double> wv = w.first_values(N);
    std::vector<double> vp(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
        vp[static_cast<std::size_t>(i)] =
            pow_p(std::abs(entries[static_cast<std::size_t>(i)].value), p);
    }

    const auto indices_of = [&](std::uint32_t mask) {
        std::vector<std::int64_t> out;
        for (int i = 0; i < N; ++i) {
            if (mask & (1u << i)) out.push_back(entries[static_cast<std::size_t>(i)].index);
        }
        return out;
    };

    double best_sum = 0.0;
    std::uint32_t best_mask = 0;
    int best_card = 0;
    for (std::uint32_t mask = 1; mask < (1u << N); ++mask) {
        double sum = 0.0;
        int k = 0;
        for (int i = 0; i < N; ++i) {
            if (mask & (1u << i)) {
                sum += vp[static_cast<std::size_t>(i)] * wv[static_cast<std::size_t>(k)];
                ++k;
            }
        }
        bool better = sum > best_sum;
        if (!better && sum == best_sum && best_mask != 0) {
            if (k < best_card) {
                better = true;
            } else if (k == best_card) {
                better = indices_of(mask) < indices_of(best_mask);
            }
        }
        if (better) {
            best_sum = sum;
            best_mask = mask;
            best_card = k;
        }
    }

    NormReport report;
    report.p_power = best_sum;
    report.value = root_p(best_sum, p);
    report.selection = Selection::of(indices_of(best_mask));
    report.algorithm = NormAlgorithm::oracle;
    return report;
}

NormReport lorentz_norm(const FiniteSequence& f, const Weight& w, double p) {
    validate_p(p);
    if (!w.normalized_nonincreasing()) {
        throw std::invalid_argument(
            "rearrangement norm requires a normalized nonincreasing weight (got " +
            w.spec_string() + ")");
    }
    NormReport report;
    report.algorithm = NormAlgorithm::rearrangement;
    if (f.empty()) return report;
    const std::vector<double> mags = decreasing_rearrangement(f);
    const std::int64_t r = static_cast<std::int64_t>(mags.size());
    const std::vector<double> wv = w.first_values(r);
    double sum = 0.0;
    for (std::int64_t k = 0; k < r; ++k) {
        sum += pow_p(mags[static_cast<std::size_t>(k)], p) * wv[static_cast<std::size_t>(k)];
    }
    report.p_power = sum;
    report.value = root_p(sum, p);
    report.selection = Selection::of(f.support());
    return report;
}

double weak_lorentz_quasinorm(const FiniteSequence& f, const Weight& w, double p) {
    validate_p(p);
    if (!w.normalized_nonincreasing()) {
        throw std::invalid_argument(
            "weak quasinorm requires a normalized nonincreasing weight (got " +
            w.spec_string() + ")");
    }
    if (f.empty()) return 0.0;
    const std::vector<double> mags = decreasing_rearrangement(f);
    const std::int64_t r = static_cast<std::int64_t>(mags.size());
    w.materialize(r);
    double best = 0.0;
    for (std::int64_t n = 1; n <= r; ++n) {
        best = std::max(best, root_p(w.prefix_sum(n), p) * mags[static_cast<std::size_t>(n - 1)]);
    }
    return best;
}

double lp_norm(const FiniteSequence& f, double p) {
    validate_p(p);
    double sum = 0.0;
    for (const auto& e : f.entries()) {
        sum += pow_p(std::abs(e.value), p);
    }
    return root_p(sum, p);
}

double reevaluate_p_power(const NormReport& report, const FiniteSequence& f,
                          const Weight& w, double p) {
    validate_p(p);
    if (report.algorithm == NormAlgorithm::rearrangement) {
        std::vector<FiniteSequence::Entry> kept;
        for (std::int64_t i : report.selection.indices) {
            const double v = f.at(i);
            if (v != 0.0) kept.push_back({i, v});
        }
        const auto g = FiniteSequence::from_entries(std::move(kept));
        const std::vector<double> mags = decreasing_rearrangement(g);
        const std::vector<double> wv = w.first_values(static_cast<std::int64_t>(mags.size()));
        double sum = 0.0;
        for (std::size_t k = 0; k < mags.size(); ++k) {
            sum += pow_p(mags[k], p) * wv[k];
        }
        return sum;
    }
    const std::vector<double> wv =
        w.first_values(static_cast<std::int64_t>(report.selection.size()));
    double sum = 0.0;
    std::size_t k = 0;
    for (std::int64_t i : report.selection.indices) {
        sum += pow_p(std::abs(f.at(i)), p) * wv[k];
        ++k;
    }
    return sum;
}

bool norm_attaining_check(const NormReport& report, const FiniteSequence& f,
                          const Weight& w, double p, double tol) {
    const double sum = reevaluate_p_power(report, f, w, p);
    const double scale = std::max(1.0, std::abs(report.p_power));
    if (std::abs(sum - report.p_power) > tol * scale) return false;
    const double root = (p == 1.0) ? report.p_power
                                   : (p == 2.0 ? std::sqrt(report.p_power)
                                               : std::pow(report.p_power, 1.0 / p));
    return std::abs(root - report.value) <= tol * std::max(1.0, std::abs(report.value));
}

MinimalityReport is_minimal(const FiniteSequence& f, const Weight& w, double p, double tol) {
    validate_p(p);
    if (f.empty()) {
        throw std::invalid_argument("minimality is defined for nonzero sequences");
    }
    MinimalityReport out;
    const NormReport base = garling_norm(f, w, p);
    out.norm = base.value;
    // Projection onto a subset never increases the norm, so f fails to be
    // minimal iff some single-coordinate removal keeps the norm: any proper
    // subset B with equal norm sits under a chain of single removals whose
    // norms are squeezed between the two equal values.
    for (const auto& e : f.entries()) {
        const NormReport reduced = garling_norm(f.without_index(e.index), w, p);
        if (reduced.value >= base.value - tol * std::max(1.0, base.value)) {
            out.minimal = false;
            out.witness = e.index;
            return out;
        }
    }
    out.minimal = true;
    return out;
}

FiniteSequence minimal_predecessor(const FiniteSequence& f, const Weight& w, double p,
                                   double tol) {
    FiniteSequence current = f;
    while (true) {
        const MinimalityReport report = is_minimal(current, w, p, tol);
        if (report.minimal) return current;
        current = current.without_index(*report.witness);
    }
}

} // namespace garling
