#pragma once

// Dense polynomials over GF(2), one coefficient per bit.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace primseq {

class Gf2Poly {
public:
    Gf2Poly() = default;

    /// Coefficient of X^i is coeffs[i].
    static Gf2Poly from_coefficients(std::span<const std::uint8_t> coeffs) {
        Gf2Poly poly;
        poly.words_.assign((coeffs.size() + 63) / 64, 0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (coeffs[i] & 1) poly.words_[i / 64] |= std::uint64_t{1} << (i % 64);
        }
        poly.trim();
        return poly;
    }

    /// X^n + 1 (which equals X^n - 1 over GF(2)).
    static Gf2Poly x_pow_minus_one(std::size_t n) {
        Gf2Poly poly;
        poly.words_.assign(n / 64 + 1, 0);
        poly.words_[0] ^= 1;
        poly.words_[n / 64] ^= std::uint64_t{1} << (n % 64);
        poly.trim();
        return poly;
    }

    bool is_zero() const { return words_.empty(); }

    /// Degree, or -1 for the zero polynomial.
    long degree() const {
        if (words_.empty()) return -1;
        return static_cast<long>((words_.size() - 1) * 64 + 63 - std::countl_zero(words_.back()));
    }

    bool coefficient(std::size_t i) const {
        return i / 64 < words_.size() && ((words_[i / 64] >> (i % 64)) & 1);
    }

    /// this %= divisor, divisor non-zero.
    void reduce_mod(const Gf2Poly& divisor) {
        const long dd = divisor.degree();
        for (long d = degree(); d >= dd; d = degree()) {
            xor_shifted(divisor, static_cast<std::size_t>(d - dd));
        }
    }

    friend bool operator==(const Gf2Poly&, const Gf2Poly&) = default;

private:
    void xor_shifted(const Gf2Poly& other, std::size_t shift) {
        const std::size_t word_shift = shift / 64;
        const unsigned bit_shift = shift % 64;
        const std::size_t needed = other.words_.size() + word_shift + 1;
        if (words_.size() < needed) words_.resize(needed, 0);
        for (std::size_t i = 0; i < other.words_.size(); ++i) {
            const std::uint64_t w = other.words_[i];
            words_[i + word_shift] ^= w << bit_shift;
            if (bit_shift != 0) words_[i + word_shift + 1] ^= w >> (64 - bit_shift);
        }
        trim();
    }

    void trim() {
        while (!words_.empty() && words_.back() == 0) words_.pop_back();
    }

    std::vector<std::uint64_t> words_;
};

/// Euclid over GF(2); gcd(a, 0) = a.
inline Gf2Poly gcd(Gf2Poly a, Gf2Poly b) {
    while (!b.is_zero()) {
        a.reduce_mod(b);
        std::swap(a, b);
    }
    return a;
}

}  // namespace primseq
