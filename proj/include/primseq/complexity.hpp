#pragma once

// Linear complexity (gcd route and Berlekamp-Massey), 2-adic complexity and
// the lower bounds that min-order and smallest-Mersenne-factor arguments give.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "primseq/gf2_poly.hpp"
#include "primseq/numtheory.hpp"
#include "primseq/sequence.hpp"

namespace primseq {

/// L = T - deg gcd(X^T - 1, S(X)).
inline u64 linear_complexity_gcd(const BitSequence& seq) {
    const std::size_t T = seq.period();
    if (T == 0) throw std::invalid_argument("linear_complexity_gcd: empty sequence");
    const Gf2Poly g = gcd(Gf2Poly::x_pow_minus_one(T), Gf2Poly::from_coefficients(seq.bits()));
    return T - static_cast<u64>(g.degree());
}

namespace detail {

class PackedBits {
public:
    explicit PackedBits(std::size_t nbits) : words_(nbits / 64 + 2, 0) {}

    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }

    /// Bits [pos, pos + 64), zero past the end.
    std::uint64_t window(std::size_t pos) const {
        const std::size_t w = pos / 64;
        const unsigned b = pos % 64;
        const std::uint64_t lo = w < words_.size() ? words_[w] : 0;
        if (b == 0) return lo;
        const std::uint64_t hi = w + 1 < words_.size() ? words_[w + 1] : 0;
        return (lo >> b) | (hi << (64 - b));
    }

    /// this ^= other << shift, restricted to this object's capacity.
    void xor_shifted(const PackedBits& other, std::size_t shift) {
        const std::size_t ws = shift / 64;
        const unsigned bs = shift % 64;
        for (std::size_t i = 0; i + ws < words_.size() && i < other.words_.size(); ++i) {
            words_[i + ws] ^= other.words_[i] << bs;
            if (bs != 0 && i + ws + 1 < words_.size()) words_[i + ws + 1] ^= other.words_[i] >> (64 - bs);
        }
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    std::vector<std::uint64_t> words_;
};

}  // namespace detail

/// Berlekamp-Massey over two periods of the sequence.
inline u64 linear_complexity_bm(const BitSequence& seq) {
    const std::size_t T = seq.period();
    if (T == 0) throw std::invalid_argument("linear_complexity_bm: empty sequence");
    const std::size_t N = 2 * T;

    // Reversed copy: s_{n-j} for j = 0..L is a contiguous run starting at N-1-n.
    detail::PackedBits reversed(N);
    for (std::size_t k = 0; k < N; ++k) {
        if (seq[(N - 1 - k) % T]) reversed.set(k);
    }

    detail::PackedBits conn(N + 1), prev(N + 1);
    conn.set(0);
    prev.set(0);
    std::size_t L = 0, m = 1;
    for (std::size_t n = 0; n < N; ++n) {
        const std::size_t offset = N - 1 - n;
        std::uint64_t acc = 0;
        // deg C <= L, so words past bit L are zero
        for (std::size_t w = 0; w * 64 <= L; ++w) {
            acc ^= conn.words()[w] & reversed.window(offset + w * 64);
        }
        const bool discrepancy = std::popcount(acc) & 1;
        if (!discrepancy) {
            ++m;
        } else if (2 * L <= n) {
            detail::PackedBits saved = conn;
            conn.xor_shifted(prev, m);
            L = n + 1 - L;
            prev = std::move(saved);
            m = 1;
        } else {
            conn.xor_shifted(prev, m);
            ++m;
        }
    }
    return L;
}

/// S(1): sum of the bits mod 2.
inline unsigned s_one(const BitSequence& seq) {
    unsigned acc = 0;
    for (auto b : seq.bits()) acc ^= b;
    return acc;
}

/// 1 if p = 1 (mod 4), 0 if p = 3 (mod 4).
inline unsigned epsilon_of(u64 p) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("epsilon_of: p must be an odd prime");
    return p % 4 == 1 ? 1 : 0;
}

/// min over prime divisors r of T of ord_r(2), plus eps.
inline u64 lc_lower_bound(const FactorizationInfo& period_factors, unsigned eps) {
    if (period_factors.n % 2 == 0 || period_factors.n < 3) {
        throw std::invalid_argument("lc_lower_bound: period must be odd and >= 3");
    }
    u64 best = UINT64_MAX;
    for (const auto& f : period_factors.factors) best = std::min(best, multiplicative_order(2, f.prime));
    return best + eps;
}

struct TwoAdic {
    BigInt s2;
    u64 c = 0;
};

/// S(2) = sum bits[n] 2^n and C = floor(log2((2^T-1)/gcd(2^T-1, S(2)))),
/// with gcd(x, 0) = x.
inline TwoAdic two_adic_complexity(const BitSequence& seq) {
    const std::size_t T = seq.period();
    if (T == 0) throw std::invalid_argument("two_adic_complexity: empty sequence");
    TwoAdic out;
    for (std::size_t n = 0; n < T; ++n) {
        if (seq[n]) boost::multiprecision::bit_set(out.s2, static_cast<unsigned>(n));
    }
    const BigInt m = mersenne_number(T);
    const BigInt g = out.s2 == 0 ? m : BigInt(boost::multiprecision::gcd(m, out.s2));
    out.c = floor_log2(BigInt(m / g));
    return out;
}

inline u64 c_lower_bound(u64 q) {
    if (q < 3) throw std::invalid_argument("c_lower_bound: q must be >= 3");
    return floor_log2(q);
}

/// What is known about 2^T - 1 within a factor-search budget.
struct MersenneProbe {
    std::optional<u64> smallest_factor;  // absent if 2^T - 1 is prime or no factor was found
    bool is_prime = false;               // 2^T - 1 itself proven prime
};

struct ProbeOptions {
    u64 factor_k_max = 1'000'000;
    u64 lucas_lehmer_max_exponent = 5000;
};

/// Factor search first; Lucas-Lehmer only when no factor turns up and T is a
/// prime within the configured limit.
inline MersenneProbe probe_mersenne_number(u64 T, const ProbeOptions& opts = {}) {
    MersenneProbe probe;
    const bool t_prime = is_prime(T);
    auto q = smallest_mersenne_number_factor(T, opts.factor_k_max);
    if (q) {
        if (t_prime && T < 64 && *q == (u64{1} << T) - 1) {
            probe.is_prime = true;
        } else {
            probe.smallest_factor = q;
        }
    } else if (t_prime && T <= opts.lucas_lehmer_max_exponent) {
        probe.is_prime = is_mersenne_prime(T);
    }
    return probe;
}

enum class SequenceVariant { s, t };

inline BitSequence build_sequence(const PrimeContext& ctx, SequenceVariant v) {
    return v == SequenceVariant::s ? build_s_sequence(ctx) : build_t_sequence(ctx);
}

struct ComplexityReport {
    u64 period = 0;
    u64 linear = 0;
    u64 linear_bm = 0;
    u64 linear_gcd = 0;
    unsigned s1 = 0;
    unsigned epsilon = 0;
    u64 linear_lower = 0;
    BigInt s2;
    u64 two_adic = 0;
    std::optional<u64> two_adic_lower;
    std::optional<u64> mersenne_factor;
    bool mersenne_prime = false;
    bool non_constant = true;

    friend bool operator==(const ComplexityReport&, const ComplexityReport&) = default;

    /// Structural invariants; false signals an implementation defect.
    bool consistent(const BitSequence& seq) const {
        if (linear_bm != linear_gcd || linear != linear_gcd) return false;
        if (non_constant && linear < linear_lower) return false;
        if (period >= 1 && two_adic > period - 1) return false;
        if (s1 != s_one(seq)) return false;
        if (non_constant && two_adic_lower && two_adic < *two_adic_lower) return false;
        return true;
    }
};

/// For the s-sequence the additive term is eps (determined by p mod 4); for
/// other variants it is S(1), which is what the general non-constant bound uses.
inline ComplexityReport full_report(const PrimeContext& ctx, const BitSequence& seq, SequenceVariant variant,
                                    const ProbeOptions& opts = {}) {
    ComplexityReport r;
    r.period = seq.period();
    r.linear_gcd = linear_complexity_gcd(seq);
    r.linear_bm = linear_complexity_bm(seq);
    r.linear = r.linear_gcd;
    r.s1 = s_one(seq);
    r.epsilon = epsilon_of(ctx.p);
    r.non_constant = !seq.is_constant();
    r.linear_lower = lc_lower_bound(factorize(r.period), variant == SequenceVariant::s ? r.epsilon : r.s1);
    auto two = two_adic_complexity(seq);
    r.s2 = std::move(two.s2);
    r.two_adic = two.c;

    const auto probe = probe_mersenne_number(r.period, opts);
    r.mersenne_prime = probe.is_prime;
    r.mersenne_factor = probe.smallest_factor;
    if (probe.is_prime) {
        r.two_adic_lower = r.period - 1;
    } else if (probe.smallest_factor) {
        r.two_adic_lower = c_lower_bound(*probe.smallest_factor);
    }
    return r;
}

inline ComplexityReport full_report(const PrimeContext& ctx, u64 factor_budget) {
    ProbeOptions opts;
    opts.factor_k_max = factor_budget;
    return full_report(ctx, build_s_sequence(ctx), SequenceVariant::s, opts);
}

}  // namespace primseq
