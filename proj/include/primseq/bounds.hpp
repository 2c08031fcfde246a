#pragma once

// Closed-form main terms for symbol and pattern frequencies as functions of
// eta = phi(p-1)/p, and the regime vocabulary used to label eta.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string_view>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace primseq {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) {
    return static_cast<double>(r);
}

struct BalanceFractions {
    Rational frac1;
    Rational frac0;
};

/// frac1 = 1/(2-eta), frac0 = (1-eta)/(2-eta).
inline BalanceFractions predicted_balance_fracs(const Rational& eta) {
    if (eta <= 0 || eta >= 1) throw std::domain_error("predicted_balance_fracs: eta must lie in (0, 1)");
    const Rational denom = 2 - eta;
    return {Rational(1) / denom, (1 - eta) / denom};
}

/// Main-term fraction for one pattern of length ell with w ones:
/// (1/(2-eta))^w ((1-eta)/(2-eta))^(ell-w).
inline Rational predicted_pattern_frac(const Rational& eta, unsigned ell, unsigned w) {
    if (ell < 1) throw std::domain_error("predicted_pattern_frac: ell must be >= 1");
    if (w > ell) throw std::domain_error("predicted_pattern_frac: w must lie in [0, ell]");
    const auto [one, zero] = predicted_balance_fracs(eta);
    Rational out = 1;
    for (unsigned i = 0; i < w; ++i) out *= one;
    for (unsigned i = w; i < ell; ++i) out *= zero;
    return out;
}

inline Rational binomial(unsigned n, unsigned k) {
    Rational c = 1;
    for (unsigned i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return c;
}

enum class EtaRegime { large, small, typical, generic };

inline std::string_view to_string(EtaRegime r) {
    switch (r) {
        case EtaRegime::large: return "large";
        case EtaRegime::small: return "small";
        case EtaRegime::typical: return "typical";
        case EtaRegime::generic: return "generic";
    }
    return "generic";
}

struct EtaProfile {
    Rational eta;
    EtaRegime regime = EtaRegime::generic;
};

/// Expected density of phi(n)/n over even n.
inline constexpr double kTypicalEta = 4.0 / (std::numbers::pi * std::numbers::pi);
inline constexpr double kDefaultRegimeTolerance = 0.02;

/// Labels eta by the nearest anchor among 1/2, 0 and 4/pi^2 within tol.
/// Advisory only; the prediction formulas never consume the label.
inline EtaProfile classify_eta(const Rational& eta, double tol = kDefaultRegimeTolerance) {
    const double x = to_double(eta);
    const std::pair<double, EtaRegime> anchors[] = {
        {0.5, EtaRegime::large}, {0.0, EtaRegime::small}, {kTypicalEta, EtaRegime::typical}};
    EtaProfile profile{eta, EtaRegime::generic};
    double best = tol;
    for (const auto& [anchor, regime] : anchors) {
        const double d = std::abs(x - anchor);
        if (d <= best) {
            best = d;
            profile.regime = regime;
        }
    }
    return profile;
}

}  // namespace primseq
