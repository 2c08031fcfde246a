#pragma once

// Exact 64-bit number theory: primality, factorization, totient,
// multiplicative order, primitive roots and Mersenne-number helpers.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace primseq {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr u64 mul_mod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline constexpr u64 pow_mod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

namespace detail {

inline bool miller_rabin_round(u64 n, u64 d, int r, u64 a) {
    a %= n;
    if (a == 0) return true;
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < r; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

}  // namespace detail

/// Deterministic for every 64-bit input (Sinclair's seven-base witness set).
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
        if (!detail::miller_rabin_round(n, d, r, a)) return false;
    }
    return true;
}

struct PrimePower {
    u64 prime;
    unsigned exponent;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization of n with its divisor count tau(n).
struct FactorizationInfo {
    u64 n = 1;
    std::vector<PrimePower> factors;  // strictly increasing primes
    u64 divisor_count = 1;

    std::vector<u64> primes() const {
        std::vector<u64> out;
        out.reserve(factors.size());
        for (const auto& f : factors) out.push_back(f.prime);
        return out;
    }
};

namespace detail {

inline u64 pollard_brent(u64 n) {
    if (n % 2 == 0) return 2;
    // Fixed seed sequence keeps factorization deterministic.
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, q = 1, g = 1, ys = 2;
        const u64 m = 128;
        u64 r = 1;
        auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void split_into(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

inline constexpr u64 kTrialLimit = 1'000'000;

/// Primes below kTrialLimit, sieved once.
inline const std::vector<std::uint32_t>& trial_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        std::vector<bool> composite(kTrialLimit + 1, false);
        std::vector<std::uint32_t> out;
        for (u64 i = 2; i <= kTrialLimit; ++i) {
            if (composite[i]) continue;
            out.push_back(static_cast<std::uint32_t>(i));
            for (u64 j = i * i; j <= kTrialLimit; j += i) composite[j] = true;
        }
        return out;
    }();
    return primes;
}

}  // namespace detail

/// Trial division up to 10^6, Pollard-Brent rho for the remaining cofactor.
inline FactorizationInfo factorize(u64 n) {
    if (n < 2) throw std::invalid_argument("factorize: n must be >= 2, got " + std::to_string(n));
    FactorizationInfo info;
    info.n = n;
    std::vector<u64> primes;
    u64 rest = n;
    for (u64 d : detail::trial_primes()) {
        if (d * d > rest) break;
        while (rest % d == 0) {
            primes.push_back(d);
            rest /= d;
        }
    }
    detail::split_into(rest, primes);
    std::sort(primes.begin(), primes.end());
    for (u64 q : primes) {
        if (!info.factors.empty() && info.factors.back().prime == q) {
            ++info.factors.back().exponent;
        } else {
            info.factors.push_back({q, 1});
        }
    }
    for (const auto& f : info.factors) info.divisor_count *= f.exponent + 1;
    return info;
}

inline u64 euler_phi(const FactorizationInfo& info) {
    u64 phi = info.n;
    for (const auto& f : info.factors) phi = phi / f.prime * (f.prime - 1);
    return phi;
}

inline u64 euler_phi(u64 n) {
    if (n == 0) throw std::invalid_argument("euler_phi: n must be >= 1");
    if (n == 1) return 1;
    return euler_phi(factorize(n));
}

/// ord_m(a): smallest k >= 1 with a^k = 1 (mod m). Divides down from phi(m).
inline u64 multiplicative_order(u64 a, u64 m) {
    if (m < 2) throw std::invalid_argument("multiplicative_order: modulus must be >= 2");
    a %= m;
    if (std::gcd(a, m) != 1) {
        throw std::invalid_argument("multiplicative_order: gcd(" + std::to_string(a) + ", " +
                                    std::to_string(m) + ") != 1");
    }
    u64 order = euler_phi(m);
    if (order == 1) return 1;
    for (const auto& f : factorize(order).factors) {
        for (unsigned e = 0; e < f.exponent && order % f.prime == 0; ++e) {
            if (pow_mod(a, order / f.prime, m) != 1) break;
            order /= f.prime;
        }
    }
    return order;
}

inline bool is_primitive_root(u64 g, u64 p, const FactorizationInfo& pm1) {
    if (g % p == 0) return false;
    for (const auto& f : pm1.factors) {
        if (pow_mod(g, (p - 1) / f.prime, p) == 1) return false;
    }
    return true;
}

/// All primitive roots modulo an odd prime p, in increasing order.
inline std::vector<u64> primitive_roots(u64 p) {
    if (p < 3 || p % 2 == 0 || !is_prime(p)) {
        throw std::invalid_argument("primitive_roots: p must be an odd prime, got " + std::to_string(p));
    }
    const auto pm1 = factorize(p - 1);
    u64 g = 2;
    while (!is_primitive_root(g, p, pm1)) ++g;

    std::vector<u64> roots;
    roots.reserve(euler_phi(pm1));
    u64 power = 1;
    for (u64 k = 1; k < p; ++k) {
        power = mul_mod(power, g, p);
        if (std::gcd(k, p - 1) == 1) roots.push_back(power);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// 2^T - 1 as a big integer.
inline BigInt mersenne_number(u64 T) {
    BigInt m = 1;
    m <<= static_cast<unsigned>(T);
    return m - 1;
}

/// Lucas-Lehmer test of 2^T - 1 for prime T.
inline bool is_mersenne_prime(u64 T) {
    if (!is_prime(T)) throw std::invalid_argument("is_mersenne_prime: exponent must be prime, got " + std::to_string(T));
    if (T == 2) return true;
    const BigInt m = mersenne_number(T);
    const unsigned shift = static_cast<unsigned>(T);
    BigInt s = 4;
    for (u64 i = 0; i < T - 2; ++i) {
        s = s * s + (m - 2);  // s^2 - 2, kept non-negative
        // reduction mod 2^T - 1 without division
        while (s > m) s = (s & m) + (s >> shift);
        if (s == m) s = 0;
    }
    return s == 0;
}

/// True iff q divides 2^T - 1.
inline bool verify_mersenne_factor(u64 T, u64 q) {
    if (q < 2) return false;
    return pow_mod(2, T, q) == 1 % q;
}

/// Smallest prime factor of 2^T - 1 for odd T >= 3 (prime or composite),
/// searched among q <= 2 * k_max * r_min + 1 where r_min is the least prime
/// divisor of T. Every prime factor q satisfies q = 1 (mod 2r) for some
/// prime r | T and q = +-1 (mod 8); each residue class is scanned up to
/// the same bound, so the minimum found is the true smallest factor.
inline std::optional<u64> smallest_mersenne_number_factor(u64 T, u64 k_max) {
    if (T < 3 || T % 2 == 0) {
        throw std::invalid_argument("smallest_mersenne_number_factor: T must be odd and >= 3");
    }
    const auto primes = factorize(T).primes();
    const u128 bound128 = static_cast<u128>(2) * k_max * primes.front() + 1;
    const u64 bound = bound128 > UINT64_MAX ? UINT64_MAX : static_cast<u64>(bound128);

    std::optional<u64> best;
    for (u64 r : primes) {
        const u64 step = 2 * r;
        for (u64 q = step + 1; q <= bound; q += step) {
            if (best && q >= *best) break;
            const u64 q8 = q & 7;
            if (q8 != 1 && q8 != 7) continue;
            if (pow_mod(2, T, q) == 1) {
                best = q;  // first hit in a class is prime: its prime factors would hit earlier
                break;
            }
            if (q > UINT64_MAX - step) break;
        }
    }
    return best;
}

/// Smallest prime factor of 2^T - 1 for prime T, candidates 2kT + 1 with k <= k_max.
inline std::optional<u64> smallest_mersenne_factor(u64 T, u64 k_max) {
    if (!is_prime(T)) {
        throw std::invalid_argument("smallest_mersenne_factor: exponent must be prime, got " + std::to_string(T));
    }
    if (T == 2) return 3;
    return smallest_mersenne_number_factor(T, k_max);
}

/// Position of the highest set bit, i.e. floor(log2(x)) for x >= 1.
inline unsigned floor_log2(u64 x) {
    return 63u - static_cast<unsigned>(__builtin_clzll(x));
}

inline unsigned floor_log2(const BigInt& x) {
    return static_cast<unsigned>(boost::multiprecision::msb(x));
}

}  // namespace primseq
