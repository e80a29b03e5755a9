#include "garling/weight.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <variant>

namespace garling {

namespace {

struct PowerKind {
    double a;
};

struct LogPowerKind {
    double a;
    double b;
    double norm; // log(2)^b, so that w_1 = 1 exactly
};

struct TableKind {
    std::vector<double> values;
};

struct QuotientKind {
    std::shared_ptr<const Weight::Impl> inner;
};

using Kind = std::variant<PowerKind, LogPowerKind, TableKind, QuotientKind>;

std::string short_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

struct Weight::Impl {
    Kind kind;
    std::string spec;
    bool provably_nonincreasing = false;
    bool w1_is_one = false;
    std::optional<std::int64_t> table_length;
    std::int64_t cache_cap = std::int64_t{1} << 21;

    mutable std::mutex mutex;
    mutable std::vector<double> values; // values[i] = w_{i+1}
    mutable std::vector<double> prefix; // prefix[i] = W_{i+1}
    mutable std::int64_t first_increase = 0; // index n with w_{n-1} < w_n; 0 = none seen

    double raw(std::int64_t n) const {
        if (n < 1) throw std::invalid_argument("weight index must be >= 1");
        if (const auto* p = std::get_if<PowerKind>(&kind)) {
            return std::pow(static_cast<double>(n), -p->a);
        }
        if (const auto* lp = std::get_if<LogPowerKind>(&kind)) {
            return std::pow(std::log1p(static_cast<double>(n)), lp->b) *
                   std::pow(static_cast<double>(n), -lp->a) / lp->norm;
        }
        if (const auto* t = std::get_if<TableKind>(&kind)) {
            if (n > static_cast<std::int64_t>(t->values.size())) {
                throw std::out_of_range("weight table has length " +
                                        std::to_string(t->values.size()) +
                                        "; index " + std::to_string(n) + " requested");
            }
            return t->values[static_cast<std::size_t>(n - 1)];
        }
        const auto& q = std::get<QuotientKind>(kind);
        return q.inner->raw(n) / q.inner->raw(1);
    }

    // Extends the caches through index n.  Caller holds the mutex.
    void extend_locked(std::int64_t n) const {
        while (static_cast<std::int64_t>(values.size()) < n) {
            const std::int64_t idx = static_cast<std::int64_t>(values.size()) + 1;
            const double v = raw(idx);
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw std::domain_error("weight values must be finite and positive; w_" +
                                        std::to_string(idx) + " = " + short_float(v));
            }
            if (idx > 1 && first_increase == 0 && v > values.back()) {
                first_increase = idx;
            }
            const double prev = prefix.empty() ? 0.0 : prefix.back();
            values.push_back(v);
            prefix.push_back(prev + v);
        }
    }
};

Weight Weight::power(double a) {
    if (!(a >= 0.0 && a <= 1.0)) {
        throw std::invalid_argument("power weight requires 0 <= a <= 1");
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = PowerKind{a};
    impl->spec = "pow:a=" + short_float(a);
    impl->provably_nonincreasing = true;
    impl->w1_is_one = true;
    return Weight(std::move(impl));
}

Weight Weight::log_power(double a, double b) {
    if (!(a >= 0.0 && a <= 1.0)) {
        throw std::invalid_argument("log-power weight requires 0 <= a <= 1");
    }
    if (!std::isfinite(b)) {
        throw std::invalid_argument("log-power weight requires finite b");
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = LogPowerKind{a, b, std::pow(std::log(2.0), b)};
    impl->spec = "logpow:a=" + short_float(a) + ",b=" + short_float(b);
    // log(1+n)^b is nonincreasing only for b <= 0; for b > 0 the product can
    // rise before the power factor wins, so monotonicity is only observed.
    impl->provably_nonincreasing = (b <= 0.0);
    impl->w1_is_one = true;
    return Weight(std::move(impl));
}

Weight Weight::table(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("weight table must be nonempty");
    auto impl = std::make_shared<Impl>();
    bool noninc = true;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
            throw std::invalid_argument("weight table values must be finite and positive");
        }
        if (i > 0 && values[i] > values[i - 1]) {
            noninc = false;
            if (impl->first_increase == 0) {
                impl->first_increase = static_cast<std::int64_t>(i) + 1;
            }
        }
    }
    impl->table_length = static_cast<std::int64_t>(values.size());
    impl->provably_nonincreasing = noninc; // the whole (finite) domain is scanned
    impl->w1_is_one = (values.front() == 1.0);
    std::string spec = "table:";
    const std::size_t shown = std::min<std::size_t>(values.size(), 8);
    for (std::size_t i = 0; i < shown; ++i) {
        if (i > 0) spec += ',';
        spec += short_float(values[i]);
    }
    if (values.size() > shown) {
        spec += ",...(len=" + std::to_string(values.size()) + ")";
    }
    impl->spec = std::move(spec);
    impl->kind = TableKind{std::move(values)};
    return Weight(std::move(impl));
}

Weight Weight::quotient_normalized(const Weight& inner) {
    auto impl = std::make_shared<Impl>();
    impl->kind = QuotientKind{inner.impl_};
    impl->spec = "quot(" + inner.impl_->spec + ")";
    impl->provably_nonincreasing = inner.impl_->provably_nonincreasing;
    impl->w1_is_one = true; // raw(1) = v_1 / v_1 = 1 exactly
    impl->table_length = inner.impl_->table_length;
    return Weight(std::move(impl));
}

double Weight::value(std::int64_t n) const {
    if (n < 1) throw std::invalid_argument("weight index must be >= 1");
    if (n <= impl_->cache_cap) {
        std::lock_guard<std::mutex> lock(impl_->mutex);
        impl_->extend_locked(n);
        return impl_->values[static_cast<std::size_t>(n - 1)];
    }
    return impl_->raw(n);
}

double Weight::value_uncached(std::int64_t n) const { return impl_->raw(n); }

double Weight::prefix_sum(std::int64_t n) const {
    if (n < 1) throw std::invalid_argument("weight index must be >= 1");
    if (n > impl_->cache_cap) {
        throw CapacityError("prefix sums are cached only up to index " +
                            std::to_string(impl_->cache_cap) +
                            "; use WeightCursor for streaming sums");
    }
    std::lock_guard<std::mutex> lock(impl_->mutex);
    impl_->extend_locked(n);
    return impl_->prefix[static_cast<std::size_t>(n - 1)];
}

void Weight::materialize(std::int64_t n) const {
    if (n < 0) throw std::invalid_argument("materialization horizon must be >= 0");
    if (n == 0) return;
    if (n > impl_->cache_cap) {
        throw CapacityError("weight cache capped at " + std::to_string(impl_->cache_cap));
    }
    std::lock_guard<std::mutex> lock(impl_->mutex);
    impl_->extend_locked(n);
}

std::int64_t Weight::materialized() const {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    return static_cast<std::int64_t>(impl_->values.size());
}

std::vector<double> Weight::first_values(std::int64_t n) const {
    if (n < 0) throw std::invalid_argument("length must be >= 0");
    if (n > impl_->cache_cap) {
        throw CapacityError("weight cache capped at " + std::to_string(impl_->cache_cap));
    }
    std::lock_guard<std::mutex> lock(impl_->mutex);
    impl_->extend_locked(n);
    return std::vector<double>(impl_->values.begin(), impl_->values.begin() + n);
}

bool Weight::normalized_nonincreasing() const {
    return impl_->provably_nonincreasing && impl_->w1_is_one;
}

bool Weight::nonincreasing_up_to(std::int64_t n) const {
    materialize(n);
    std::lock_guard<std::mutex> lock(impl_->mutex);
    return impl_->first_increase == 0 || impl_->first_increase > n;
}

std::optional<std::int64_t> Weight::first_increase() const {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    if (impl_->first_increase == 0) return std::nullopt;
    return impl_->first_increase;
}

std::optional<std::int64_t> Weight::max_index() const { return impl_->table_length; }

std::string Weight::spec_string() const { return impl_->spec; }

std::int64_t Weight::cache_cap() const { return impl_->cache_cap; }

namespace {

double parse_float(std::string_view text, const std::string& what) {
    try {
        std::size_t used = 0;
        const std::string s(text);
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse " + what + " from '" + std::string(text) + "'");
    }
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(text.substr(start));
            return out;
        }
        out.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

double named_float(std::string_view item, std::string_view key) {
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || item.substr(0, eq) != key) {
        throw std::invalid_argument("expected '" + std::string(key) + "=<float>', got '" +
                                    std::string(item) + "'");
    }
    return parse_float(item.substr(eq + 1), std::string(key));
}

Weight table_from_values(std::vector<double> values, const std::string& origin) {
    if (values.empty()) {
        throw std::invalid_argument(origin + ": no values");
    }
    if (values.front() != 1.0) {
        throw std::invalid_argument(origin + ": first weight must equal 1 (normalization)");
    }
    return Weight::table(std::move(values));
}

} // namespace

Weight make_weight(std::string_view spec) {
    const std::size_t colon = spec.find(':');
    if (colon == std::string_view::npos) {
        throw std::invalid_argument("weight spec needs a scheme prefix "
                                    "(pow: | logpow: | table: | file:)");
    }
    const std::string_view scheme = spec.substr(0, colon);
    const std::string_view rest = spec.substr(colon + 1);
    if (scheme == "pow") {
        return Weight::power(named_float(rest, "a"));
    }
    if (scheme == "logpow") {
        const auto parts = split(rest, ',');
        if (parts.size() != 2) {
            throw std::invalid_argument("logpow spec must be 'logpow:a=<float>,b=<float>'");
        }
        return Weight::log_power(named_float(parts[0], "a"), named_float(parts[1], "b"));
    }
    if (scheme == "table") {
        std::vector<double> values;
        for (const auto part : split(rest, ',')) {
            values.push_back(parse_float(part, "table entry"));
        }
        return table_from_values(std::move(values), "table weight");
    }
    if (scheme == "file") {
        std::ifstream in{std::string(rest)};
        if (!in) {
            throw std::invalid_argument("cannot open weight file '" + std::string(rest) + "'");
        }
        std::vector<double> values;
        std::string line;
        while (std::getline(in, line)) {
            const auto begin = line.find_first_not_of(" \t\r");
            if (begin == std::string::npos) continue; // blank line
            const auto end = line.find_last_not_of(" \t\r");
            values.push_back(parse_float(std::string_view(line).substr(begin, end - begin + 1),
                                         "weight file entry"));
        }
        return table_from_values(std::move(values), "weight file '" + std::string(rest) + "'");
    }
    throw std::invalid_argument("unknown weight scheme '" + std::string(scheme) + "'");
}

Weight conjugate(const Weight& w, std::int64_t horizon) {
    if (horizon < 1) throw std::invalid_argument("conjugate horizon must be >= 1");
    w.materialize(horizon);
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(horizon));
    for (std::int64_t n = 1; n <= horizon; ++n) {
        values.push_back(1.0 / (static_cast<double>(n) * w.value(n)));
    }
    return Weight::table(std::move(values));
}

WeightDiagnostics diagnostics(const Weight& w, std::int64_t M) {
    if (M < 1) throw std::invalid_argument("diagnostics horizon must be >= 1");
    w.materialize(M); // throws past a finite table or the cache cap

    WeightDiagnostics d;
    d.horizon = M;

    // Geometric sample points (powers of two and the horizon itself).
    std::vector<std::int64_t> samples;
    for (std::int64_t s = 1; s <= M; s *= 2) {
        samples.push_back(s);
        if (s > M / 2) break;
    }
    if (samples.back() != M) samples.push_back(M);

    const std::vector<double> wv = w.first_values(M);
    auto eq2_at = [&](std::int64_t m) {
        // sum_{n<=m} w_{m+1-n} / (n w_n), accumulated in ascending n
        double s = 0.0;
        for (std::int64_t n = 1; n <= m; ++n) {
            s += wv[static_cast<std::size_t>(m - n)] /
                 (static_cast<double>(n) * wv[static_cast<std::size_t>(n - 1)]);
        }
        return s;
    };

    double min_w = std::numeric_limits<double>::infinity();
    double W = 0.0;      // running prefix sum
    double Wstar = 0.0;  // running sum of 1/(n w_n)
    double ed = 0.0, reg = 0.0, conj = 0.0;
    std::size_t next_sample = 0;
    for (std::int64_t m = 1; m <= M; ++m) {
        const double wm = wv[static_cast<std::size_t>(m - 1)];
        min_w = std::min(min_w, wm);
        W += wm;
        Wstar += 1.0 / (static_cast<double>(m) * wm);
        ed = std::max(ed, wm / min_w);
        reg = std::max(reg, W / (static_cast<double>(m) * wm));
        conj = std::max(conj, wm * Wstar);
        if (next_sample < samples.size() && m == samples[next_sample]) {
            WeightDiagnostics::TrendSample ts;
            ts.m = m;
            // running suprema for the cheap statistics, the pointwise sum for
            // eq2 (that sum is the quantity whose convergence is of interest)
            ts.ed = ed;
            ts.reg = reg;
            ts.conj_reg = conj;
            ts.eq2 = eq2_at(m);
            d.eq2_sup = std::max(d.eq2_sup, ts.eq2);
            d.trend_samples.push_back(ts);
            ++next_sample;
        }
    }
    d.ed_sup = ed;
    d.reg_sup = reg;
    d.conj_reg_sup = conj;

    d.in_W_report.w1_is_one = (wv[0] == 1.0);
    d.in_W_report.nonincreasing = w.nonincreasing_up_to(M);
    if (M >= 8) {
        d.in_W_report.c0_decay_trend = wv[static_cast<std::size_t>(M - 1)] <
                                       0.9 * wv[static_cast<std::size_t>(M / 4 - 1)];
        const double tail = w.prefix_sum(M) - w.prefix_sum(M / 2);
        const double prior = w.prefix_sum(M / 2) - w.prefix_sum(M / 4);
        d.in_W_report.l1_divergence_trend = tail > 0.6 * prior;
    }
    return d;
}

WeightCursor::WeightCursor(Weight w) : weight_(std::move(w)) {}

double WeightCursor::prefix_at(std::int64_t n, WorkBudget& budget) {
    if (n < position_) {
        throw std::invalid_argument("weight cursor cannot move backward (at " +
                                    std::to_string(position_) + ", asked for " +
                                    std::to_string(n) + ")");
    }
    while (position_ < n) {
        budget.charge(1);
        ++position_;
        last_value_ = weight_.value_uncached(position_);
        sum_ += last_value_;
    }
    return sum_;
}

} // namespace garling
