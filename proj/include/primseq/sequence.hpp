#pragma once

// The parity sequence of consecutive primitive roots, the consecutive-root
// indicator variant, and exact balance / pattern / block statistics.

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "primseq/bounds.hpp"
#include "primseq/numtheory.hpp"

namespace primseq {

/// A prime p >= 11 with phi(p-1), the period T = phi(p-1) - 1, eta and the
/// ordered primitive roots. Immutable once built.
struct PrimeContext {
    u64 p = 0;
    u64 phi = 0;
    u64 period = 0;
    Rational eta;
    std::vector<u64> roots;
    FactorizationInfo p_minus_1;
};

inline PrimeContext build_context(u64 p) {
    if (p < 11 || !is_prime(p)) {
        throw std::invalid_argument("p must be a prime >= 11, got " + std::to_string(p));
    }
    PrimeContext ctx;
    ctx.p = p;
    ctx.p_minus_1 = factorize(p - 1);
    ctx.phi = euler_phi(ctx.p_minus_1);
    ctx.period = ctx.phi - 1;
    ctx.eta = Rational(BigInt(ctx.phi), BigInt(p));
    ctx.roots = primitive_roots(p);
    return ctx;
}

/// One period of a binary sequence; bit n carries weight 2^n in S(2).
class BitSequence {
public:
    BitSequence() = default;
    explicit BitSequence(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
        for (auto& b : bits_) {
            if (b > 1) throw std::invalid_argument("BitSequence: entries must be 0 or 1");
        }
    }

    /// Parses a string of '0'/'1' characters in ascending index order.
    static BitSequence from_string(std::string_view s) {
        std::vector<std::uint8_t> bits;
        bits.reserve(s.size());
        for (char c : s) {
            if (c != '0' && c != '1') throw std::invalid_argument("BitSequence: expected only '0' and '1'");
            bits.push_back(static_cast<std::uint8_t>(c - '0'));
        }
        return BitSequence(std::move(bits));
    }

    std::string to_string() const {
        std::string s(bits_.size(), '0');
        for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = static_cast<char>('0' + bits_[i]);
        return s;
    }

    std::size_t period() const { return bits_.size(); }
    std::span<const std::uint8_t> bits() const { return bits_; }
    std::uint8_t operator[](std::size_t i) const { return bits_[i]; }

    bool is_constant() const {
        for (auto b : bits_) {
            if (b != bits_.front()) return false;
        }
        return true;
    }

    friend bool operator==(const BitSequence&, const BitSequence&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// s_n = g_{n+1} + g_{n+2} mod 2, n = 0..T-1.
inline BitSequence build_s_sequence(const PrimeContext& ctx) {
    std::vector<std::uint8_t> bits(ctx.period);
    for (u64 n = 0; n < ctx.period; ++n) {
        bits[n] = static_cast<std::uint8_t>((ctx.roots[n] + ctx.roots[n + 1]) & 1);
    }
    return BitSequence(std::move(bits));
}

/// t_n = 1 iff the (n+1)-th root directly follows the n-th, n = 0..T-1.
inline BitSequence build_t_sequence(const PrimeContext& ctx) {
    std::vector<std::uint8_t> bits(ctx.period);
    for (u64 n = 0; n < ctx.period; ++n) {
        bits[n] = ctx.roots[n + 1] == ctx.roots[n] + 1 ? 1 : 0;
    }
    return BitSequence(std::move(bits));
}

struct BalanceReport {
    u64 n0 = 0;
    u64 n1 = 0;
    Rational predicted_frac1;
    Rational predicted_frac0;

    friend bool operator==(const BalanceReport&, const BalanceReport&) = default;
};

inline BalanceReport balance(const BitSequence& seq, const PrimeContext& ctx) {
    BalanceReport report;
    for (auto b : seq.bits()) (b ? report.n1 : report.n0) += 1;
    auto fr = predicted_balance_fracs(ctx.eta);
    report.predicted_frac1 = std::move(fr.frac1);
    report.predicted_frac0 = std::move(fr.frac0);
    return report;
}

/// Window counts over n = 0..T-ell (non-cyclic). Pattern strings list
/// a_0 first. counts holds observed patterns only; count_of() fills zeros.
struct PatternReport {
    unsigned ell = 0;
    std::map<std::string, u64> counts;
    std::vector<u64> weight_counts;   // index w = Hamming weight
    std::vector<Rational> predicted;  // per-pattern main-term fraction, index w

    u64 count_of(const std::string& pattern) const {
        auto it = counts.find(pattern);
        return it == counts.end() ? 0 : it->second;
    }

    u64 windows() const {
        u64 total = 0;
        for (auto c : weight_counts) total += c;
        return total;
    }
};

inline std::string pattern_string(u64 index, unsigned ell) {
    std::string s(ell, '0');
    for (unsigned i = 0; i < ell; ++i) s[i] = static_cast<char>('0' + ((index >> i) & 1));
    return s;
}

inline PatternReport pattern_stats(const BitSequence& seq, const PrimeContext& ctx, unsigned ell) {
    const std::size_t T = seq.period();
    if (ell < 1) throw std::invalid_argument("pattern_stats: ell must be >= 1");
    if (ell > T) throw std::invalid_argument("pattern_stats: ell must not exceed the period");

    PatternReport report;
    report.ell = ell;
    report.weight_counts.assign(ell + 1, 0);
    const auto bits = seq.bits();
    const std::size_t windows = T - ell + 1;

    if (ell <= 64) {
        std::map<u64, u64> by_index;
        u64 window = 0;
        for (unsigned i = 0; i < ell; ++i) window |= u64{bits[i]} << i;
        for (std::size_t n = 0;; ++n) {
            ++by_index[window];
            ++report.weight_counts[static_cast<unsigned>(std::popcount(window))];
            if (n + 1 == windows) break;
            window >>= 1;
            window |= u64{bits[n + ell]} << (ell - 1);
        }
        for (const auto& [idx, c] : by_index) report.counts[pattern_string(idx, ell)] = c;
    } else {
        const std::string s = seq.to_string();
        for (std::size_t n = 0; n < windows; ++n) {
            std::string w = s.substr(n, ell);
            unsigned weight = 0;
            for (char c : w) weight += c == '1';
            ++report.counts[w];
            ++report.weight_counts[weight];
        }
    }

    report.predicted.reserve(ell + 1);
    for (unsigned w = 0; w <= ell; ++w) report.predicted.push_back(predicted_pattern_frac(ctx.eta, ell, w));
    return report;
}

/// Primitive-root indicator c(i) for i = 0..p-1 (c(0) unused).
inline std::vector<bool> root_indicator(const PrimeContext& ctx) {
    std::vector<bool> is_root(ctx.p, false);
    for (u64 g : ctx.roots) is_root[g] = true;
    return is_root;
}

inline std::vector<bool> root_indicator(u64 p) {
    std::vector<bool> is_root(p, false);
    for (u64 g : primitive_roots(p)) is_root[g] = true;
    return is_root;
}

namespace detail {

inline void check_epsilons(u64 p, std::span<const int> epsilons) {
    if (epsilons.empty()) throw std::invalid_argument("block_count: need at least one sign");
    if (epsilons.size() >= p) throw std::invalid_argument("block_count: pattern length must be < p");
    for (int e : epsilons) {
        if (e != 1 && e != -1) throw std::invalid_argument("block_count: signs must be +1 or -1");
    }
}

inline u64 block_count(const std::vector<bool>& is_root, u64 p, std::span<const int> epsilons) {
    const u64 s = epsilons.size();
    u64 count = 0;
    for (u64 j = 1; j <= p - s; ++j) {
        bool match = true;
        for (u64 i = 0; i < s && match; ++i) match = is_root[j + i] == (epsilons[i] == 1);
        count += match;
    }
    return count;
}

}  // namespace detail

/// M(eps_1..eps_s): number of j in 1..p-s with c(j+i) = eps_{i+1}, where
/// c(i) = +1 for primitive roots and -1 otherwise.
inline u64 block_count(u64 p, std::span<const int> epsilons) {
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("block_count: p must be a prime >= 3");
    detail::check_epsilons(p, epsilons);
    return detail::block_count(root_indicator(p), p, epsilons);
}

struct CzCheck {
    u64 m = 0;
    double main_term = 0;
    double bound = 0;
    bool holds = false;
};

namespace detail {

inline CzCheck cz_evaluate(u64 m, u64 p, u64 phi, std::span<const int> epsilons, u64 tau) {
    const auto s = static_cast<unsigned>(epsilons.size());
    unsigned z = 0;
    for (int e : epsilons) z += e == 1;
    const Rational eta{BigInt(phi), BigInt(p)};
    Rational main = p;
    for (unsigned i = 0; i < z; ++i) main *= eta;
    for (unsigned i = z; i < s; ++i) main *= 1 - eta;

    CzCheck out;
    out.m = m;
    out.main_term = to_double(main);
    const double pd = static_cast<double>(p);
    out.bound = std::ldexp(1.0, static_cast<int>(s - z + 1)) * s * std::sqrt(pd) * std::log(pd) *
                std::pow(static_cast<double>(tau), s);
    // Compare |M - main| exactly; the bound side is a real number.
    Rational diff = Rational(BigInt(m)) - main;
    if (diff < 0) diff = -diff;
    out.holds = to_double(diff) <= out.bound;
    return out;
}

}  // namespace detail

/// Both sides of the block-count deviation inequality
/// |M - p eta^z (1-eta)^(s-z)| <= 2^(s-z+1) s sqrt(p) ln(p) tau^s.
inline CzCheck cz_bound_check(u64 p, std::span<const int> epsilons, u64 tau) {
    const u64 m = block_count(p, epsilons);
    return detail::cz_evaluate(m, p, euler_phi(p - 1), epsilons, tau);
}

inline CzCheck cz_bound_check(const PrimeContext& ctx, const std::vector<bool>& is_root,
                              std::span<const int> epsilons) {
    detail::check_epsilons(ctx.p, epsilons);
    const u64 m = detail::block_count(is_root, ctx.p, epsilons);
    return detail::cz_evaluate(m, ctx.p, ctx.phi, epsilons, ctx.p_minus_1.divisor_count);
}

/// All 2^s sign vectors of length s, first entry varying slowest; +1 before -1.
inline std::vector<std::vector<int>> all_sign_vectors(unsigned s) {
    std::vector<std::vector<int>> out;
    for (u64 mask = 0; mask < (u64{1} << s); ++mask) {
        std::vector<int> v(s);
        for (unsigned i = 0; i < s; ++i) v[i] = (mask >> (s - 1 - i)) & 1 ? -1 : 1;
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace primseq
