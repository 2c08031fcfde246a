#pragma once

// Candidate-prime rows: period, order of 2, smallest Mersenne factor, eta and
// the three quality flags. Reproduces reference tables and scans ranges.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "primseq/complexity.hpp"
#include "primseq/numtheory.hpp"

namespace primseq {

enum class Flag { small_log2q, small_ord, large_ratio };

inline std::string_view to_string(Flag f) {
    switch (f) {
        case Flag::small_log2q: return "SMALL_LOG2Q";
        case Flag::small_ord: return "SMALL_ORD";
        case Flag::large_ratio: return "LARGE_RATIO";
    }
    return "";
}

inline std::optional<Flag> parse_flag(std::string_view s) {
    for (Flag f : {Flag::small_log2q, Flag::small_ord, Flag::large_ratio}) {
        if (to_string(f) == s) return f;
    }
    return std::nullopt;
}

enum class FactorProvenance { none, discovered, verified };

inline std::string_view to_string(FactorProvenance p) {
    switch (p) {
        case FactorProvenance::none: return "none";
        case FactorProvenance::discovered: return "discovered";
        case FactorProvenance::verified: return "verified";
    }
    return "none";
}

struct SearchRow {
    u64 period = 0;  // T
    u64 p = 0;
    u64 phi = 0;
    bool period_prime = false;
    std::optional<u64> ord;  // ord_T(2), only for prime T
    std::optional<u64> q;    // smallest known prime factor of 2^T - 1
    std::optional<u64> log2q;
    Rational ratio;  // phi(p-1)/p
    bool mersenne = false;
    FactorProvenance q_provenance = FactorProvenance::none;
    std::vector<Flag> flags;  // canonical order

    bool has(Flag f) const { return std::find(flags.begin(), flags.end(), f) != flags.end(); }

    friend bool operator==(const SearchRow&, const SearchRow&) = default;
};

/// Sets flags from the thresholds: floor(log2 q) < T/10, ord_T(2) < T/4,
/// phi(p-1)/p >= 1/3.
inline SearchRow flag_row(SearchRow row) {
    row.flags.clear();
    if (row.log2q && 10 * *row.log2q < row.period) row.flags.push_back(Flag::small_log2q);
    if (row.ord && 4 * *row.ord < row.period) row.flags.push_back(Flag::small_ord);
    if (row.ratio >= Rational(1, 3)) row.flags.push_back(Flag::large_ratio);
    return row;
}

/// Default scan ceiling 10 T ln T.
inline u64 default_p_cap(u64 T) {
    return static_cast<u64>(std::ceil(10.0 * static_cast<double>(T) * std::log(static_cast<double>(T))));
}

/// Largest prime p <= p_cap with phi(p-1) = T + 1 (descending scan).
inline std::optional<u64> largest_p_for_T(u64 T, u64 p_cap) {
    if (T < 3 || T % 2 == 0) return std::nullopt;
    for (u64 p = p_cap; p >= 3; --p) {
        if (p - 1 < T + 1) break;  // phi(n) <= n - 1 for n >= 2
        if (!is_prime(p)) continue;
        if (euler_phi(p - 1) == T + 1) return p;
    }
    return std::nullopt;
}

/// Computes every column for prime p >= 11 and applies flag_row.
inline SearchRow build_row(u64 p, const ProbeOptions& opts = {}) {
    SearchRow row;
    row.p = p;
    row.phi = euler_phi(p - 1);
    row.period = row.phi - 1;
    row.ratio = Rational(BigInt(row.phi), BigInt(p));
    row.period_prime = is_prime(row.period);
    if (row.period_prime) row.ord = multiplicative_order(2, row.period);
    const auto probe = probe_mersenne_number(row.period, opts);
    row.mersenne = probe.is_prime;
    if (probe.smallest_factor) {
        row.q = probe.smallest_factor;
        row.log2q = floor_log2(*row.q);
        row.q_provenance = FactorProvenance::discovered;
    }
    return flag_row(std::move(row));
}

// ---------------------------------------------------------------------------
// Reference table reproduction

/// One published table row. Table 1 rows print the ratio as an exact
/// fraction; both tables print a truncated decimal prefix.
struct ExpectedRow {
    u64 period = 0;
    u64 p = 0;
    u64 ord = 0;
    std::optional<u64> q;
    std::optional<u64> log2q;
    std::optional<Rational> ratio;
    std::string ratio_prefix;
    // Set when the printed decimal is inconsistent with the row's own T and p.
    std::string ratio_prefix_corrected;
    std::string erratum;
    bool mersenne = false;
    std::vector<Flag> flags;
};

struct ReferenceTables {
    int version = 0;
    std::vector<ExpectedRow> table1;
    std::vector<ExpectedRow> table2;
};

struct Discrepancy {
    u64 period = 0;
    std::string field;
    std::string expected;
    std::string actual;
};

struct TableResult {
    std::vector<SearchRow> rows;
    std::vector<Discrepancy> discrepancies;
    std::vector<Discrepancy> errata;  // known misprints in the reference, confirmed by recomputation
};

struct TableConfig {
    ProbeOptions probe;
    double cap_multiplier = 10.0;  // cap = multiplier * T * ln T
};

/// Decimal expansion of r truncated to `digits` places, e.g. "0.307".
inline std::string truncated_decimal(const Rational& r, unsigned digits) {
    BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    const BigInt whole = num / den;
    num -= whole * den;
    std::string out = whole.str();
    if (digits == 0) return out;
    out += '.';
    for (unsigned i = 0; i < digits; ++i) {
        num *= 10;
        const BigInt d = num / den;
        out += d.str();
        num -= d * den;
    }
    return out;
}

inline std::string rational_string(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline std::string flags_string(const std::vector<Flag>& flags) {
    std::string s;
    for (Flag f : flags) {
        if (!s.empty()) s += '|';
        s += to_string(f);
    }
    return s;
}

namespace detail {

inline std::string opt_string(const std::optional<u64>& v) {
    return v ? std::to_string(*v) : std::string("-");
}

inline unsigned decimal_places(const std::string& prefix) {
    const auto dot = prefix.find('.');
    return dot == std::string::npos ? 0 : static_cast<unsigned>(prefix.size() - dot - 1);
}

inline void compare_row(const ExpectedRow& want, const SearchRow& got, TableResult& result) {
    auto diff = [&](std::string field, std::string e, std::string a) {
        if (e != a) result.discrepancies.push_back({want.period, std::move(field), std::move(e), std::move(a)});
    };
    diff("p", std::to_string(want.p), std::to_string(got.p));
    diff("ord", std::to_string(want.ord), opt_string(got.ord));
    diff("mersenne", want.mersenne ? "true" : "false", got.mersenne ? "true" : "false");
    if (want.q || got.q) diff("q", opt_string(want.q), opt_string(got.q));
    if (want.log2q || got.log2q) diff("log2q", opt_string(want.log2q), opt_string(got.log2q));
    const Rational exact = want.ratio ? *want.ratio : Rational(BigInt(want.period + 1), BigInt(want.p));
    diff("ratio", rational_string(exact), rational_string(got.ratio));
    if (!want.ratio_prefix.empty()) {
        const std::string actual = truncated_decimal(got.ratio, decimal_places(want.ratio_prefix));
        if (want.ratio_prefix_corrected.empty()) {
            diff("ratio_prefix", want.ratio_prefix, actual);
        } else {
            diff("ratio_prefix", want.ratio_prefix_corrected, actual);
            // An erratum that no longer reproduces is itself a discrepancy.
            if (actual == want.ratio_prefix) {
                diff("ratio_prefix_erratum", "printed value differs from recomputation", actual);
            } else {
                result.errata.push_back({want.period, "ratio_prefix", want.ratio_prefix, actual});
            }
        }
    }
    diff("flags", flags_string(want.flags), flags_string(got.flags));
}

inline TableResult reproduce(const std::vector<ExpectedRow>& expected, const TableConfig& cfg) {
    TableResult result;
    for (const auto& want : expected) {
        const u64 T = want.period;
        const u64 cap = static_cast<u64>(
            std::ceil(cfg.cap_multiplier * static_cast<double>(T) * std::log(static_cast<double>(T))));
        const auto p = largest_p_for_T(T, cap);
        if (!p) {
            result.discrepancies.push_back({T, "p", std::to_string(want.p), "none <= " + std::to_string(cap)});
            continue;
        }
        SearchRow row = build_row(*p, cfg.probe);
        // Verification mode: a printed factor beyond the discovery budget is
        // accepted only if it divides 2^T - 1 and is prime.
        if (!row.q && !row.mersenne && want.q && verify_mersenne_factor(T, *want.q) && is_prime(*want.q)) {
            row.q = want.q;
            row.log2q = floor_log2(*want.q);
            row.q_provenance = FactorProvenance::verified;
            row = flag_row(std::move(row));
        }
        detail::compare_row(want, row, result);
        result.rows.push_back(std::move(row));
    }
    return result;
}

}  // namespace detail

/// Mersenne-exponent rows: T, largest p, ord_T(2), exact ratio.
inline TableResult reproduce_table1(const ReferenceTables& ref, const TableConfig& cfg = {}) {
    return detail::reproduce(ref.table1, cfg);
}

/// Composite 2^T - 1 rows: adds smallest factor q and floor(log2 q).
inline TableResult reproduce_table2(const ReferenceTables& ref, const TableConfig& cfg = {}) {
    return detail::reproduce(ref.table2, cfg);
}

// ---------------------------------------------------------------------------
// Range scan

struct ScanCriteria {
    bool require_period_prime = false;
    bool require_no_flags = false;
    bool require_two_primitive = false;  // ord_T(2) = T - 1

    bool accepts(const SearchRow& row) const {
        if (require_period_prime && !row.period_prime) return false;
        if (require_no_flags && !row.flags.empty()) return false;
        if (require_two_primitive && !(row.ord && *row.ord == row.period - 1)) return false;
        return true;
    }
};

struct ScanOptions {
    ProbeOptions probe;
    unsigned workers = 1;
    std::size_t batch = 256;
};

/// Rows for every prime in [p_min, p_max] passing the criteria, delivered to
/// sink in ascending p whatever the worker count.
inline void scan(u64 p_min, u64 p_max, const ScanCriteria& criteria, const ScanOptions& opts,
                 const std::function<void(const SearchRow&)>& sink) {
    if (p_min < 11) throw std::invalid_argument("scan: p_min must be >= 11");
    const unsigned workers = std::max(1u, opts.workers);
    const std::size_t batch = std::max<std::size_t>(1, opts.batch);

    std::vector<u64> primes;
    u64 next = p_min;
    auto fill = [&] {
        primes.clear();
        while (primes.size() < batch && next <= p_max) {
            if (is_prime(next)) primes.push_back(next);
            if (next == UINT64_MAX) break;
            ++next;
        }
    };

    std::vector<SearchRow> rows;
    for (fill(); !primes.empty(); fill()) {
        rows.assign(primes.size(), SearchRow{});
        std::atomic<std::size_t> cursor{0};
        auto work = [&] {
            for (std::size_t i = cursor++; i < primes.size(); i = cursor++) rows[i] = build_row(primes[i], opts.probe);
        };
        if (workers == 1) {
            work();
        } else {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        }
        for (const auto& row : rows) {
            if (criteria.accepts(row)) sink(row);
        }
        if (next > p_max) break;
    }
}

inline std::vector<SearchRow> scan(u64 p_min, u64 p_max, const ScanCriteria& criteria, const ScanOptions& opts = {}) {
    std::vector<SearchRow> out;
    scan(p_min, p_max, criteria, opts, [&](const SearchRow& r) { out.push_back(r); });
    return out;
}

}  // namespace primseq
