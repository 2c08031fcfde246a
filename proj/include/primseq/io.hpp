#pragma once

// JSON-lines and CSV encodings for sequences, analysis reports and search rows,
// plus the reference-table fixture loader.
//
// JSON: integers above 2^53 are written as decimal strings; rationals as
// "num/den" strings. CSV column order is fixed by the *_csv_header() functions.

#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "primseq/bounds.hpp"
#include "primseq/complexity.hpp"
#include "primseq/search.hpp"
#include "primseq/sequence.hpp"

namespace primseq {

using json = nlohmann::json;

inline constexpr u64 kMaxExactJsonInteger = u64{1} << 53;

inline json encode_uint(u64 v) {
    if (v > kMaxExactJsonInteger) return std::to_string(v);
    return v;
}

inline json encode_big(const BigInt& v) {
    if (v > kMaxExactJsonInteger) return v.str();
    return static_cast<u64>(v);
}

inline json encode_opt(const std::optional<u64>& v) {
    return v ? encode_uint(*v) : json(nullptr);
}

inline u64 decode_uint(const json& j) {
    if (j.is_string()) return std::stoull(j.get<std::string>());
    return j.get<u64>();
}

inline BigInt decode_big(const json& j) {
    if (j.is_string()) return BigInt(j.get<std::string>());
    return BigInt(j.get<u64>());
}

inline std::optional<u64> decode_opt(const json& j) {
    if (j.is_null()) return std::nullopt;
    return decode_uint(j);
}

inline Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

inline std::string fixed6(const Rational& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", to_double(r));
    return buf;
}

inline std::string fixed6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

inline std::string_view to_string(SequenceVariant v) {
    return v == SequenceVariant::s ? "s" : "t";
}

inline SequenceVariant parse_variant(std::string_view s) {
    if (s == "s") return SequenceVariant::s;
    if (s == "t") return SequenceVariant::t;
    throw std::invalid_argument("variant must be 's' or 't'");
}

inline EtaRegime parse_regime(std::string_view s) {
    for (auto r : {EtaRegime::large, EtaRegime::small, EtaRegime::typical, EtaRegime::generic}) {
        if (to_string(r) == s) return r;
    }
    throw std::invalid_argument("unknown regime label");
}

// ---------------------------------------------------------------------------
// Documents

/// A generated sequence with its context metadata.
struct SequenceDoc {
    u64 p = 0;
    u64 period = 0;
    u64 phi = 0;
    Rational eta;
    EtaRegime regime = EtaRegime::generic;
    SequenceVariant variant = SequenceVariant::s;
    BitSequence bits;

    friend bool operator==(const SequenceDoc&, const SequenceDoc&) = default;
};

struct AnalysisDoc {
    u64 p = 0;
    u64 period = 0;
    u64 phi = 0;
    Rational eta;
    EtaRegime regime = EtaRegime::generic;
    SequenceVariant variant = SequenceVariant::s;
    BalanceReport balance;
    ComplexityReport complexity;

    friend bool operator==(const AnalysisDoc&, const AnalysisDoc&) = default;
};

inline SequenceDoc make_sequence_doc(const PrimeContext& ctx, SequenceVariant v, double tol = kDefaultRegimeTolerance) {
    return {ctx.p, ctx.period, ctx.phi, ctx.eta, classify_eta(ctx.eta, tol).regime, v, build_sequence(ctx, v)};
}

inline AnalysisDoc make_analysis_doc(const PrimeContext& ctx, SequenceVariant v, const ProbeOptions& opts,
                                     double tol = kDefaultRegimeTolerance) {
    const BitSequence seq = build_sequence(ctx, v);
    return {ctx.p, ctx.period, ctx.phi, ctx.eta, classify_eta(ctx.eta, tol).regime, v,
            balance(seq, ctx), full_report(ctx, seq, v, opts)};
}

inline json to_json(const SequenceDoc& d) {
    return json{{"p", encode_uint(d.p)},
                {"T", encode_uint(d.period)},
                {"phi", encode_uint(d.phi)},
                {"eta", rational_string(d.eta)},
                {"eta_value", to_double(d.eta)},
                {"regime", std::string(to_string(d.regime))},
                {"variant", std::string(to_string(d.variant))},
                {"bits", d.bits.to_string()}};
}

inline SequenceDoc sequence_doc_from_json(const json& j) {
    SequenceDoc d;
    d.p = decode_uint(j.at("p"));
    d.period = decode_uint(j.at("T"));
    d.phi = decode_uint(j.at("phi"));
    d.eta = parse_rational(j.at("eta").get<std::string>());
    d.regime = parse_regime(j.at("regime").get<std::string>());
    d.variant = parse_variant(j.at("variant").get<std::string>());
    d.bits = BitSequence::from_string(j.at("bits").get<std::string>());
    return d;
}

inline json to_json(const AnalysisDoc& d) {
    const auto& c = d.complexity;
    return json{{"p", encode_uint(d.p)},
                {"T", encode_uint(d.period)},
                {"phi", encode_uint(d.phi)},
                {"eta", rational_string(d.eta)},
                {"eta_value", to_double(d.eta)},
                {"regime", std::string(to_string(d.regime))},
                {"variant", std::string(to_string(d.variant))},
                {"n0", encode_uint(d.balance.n0)},
                {"n1", encode_uint(d.balance.n1)},
                {"predicted_frac1", rational_string(d.balance.predicted_frac1)},
                {"predicted_frac0", rational_string(d.balance.predicted_frac0)},
                {"L", encode_uint(c.linear)},
                {"L_bm", encode_uint(c.linear_bm)},
                {"L_gcd", encode_uint(c.linear_gcd)},
                {"L_lower", encode_uint(c.linear_lower)},
                {"s1", c.s1},
                {"epsilon", c.epsilon},
                {"S2", encode_big(c.s2)},
                {"C", encode_uint(c.two_adic)},
                {"C_lower", encode_opt(c.two_adic_lower)},
                {"q", encode_opt(c.mersenne_factor)},
                {"mersenne", c.mersenne_prime},
                {"non_constant", c.non_constant}};
}

inline AnalysisDoc analysis_doc_from_json(const json& j) {
    AnalysisDoc d;
    d.p = decode_uint(j.at("p"));
    d.period = decode_uint(j.at("T"));
    d.phi = decode_uint(j.at("phi"));
    d.eta = parse_rational(j.at("eta").get<std::string>());
    d.regime = parse_regime(j.at("regime").get<std::string>());
    d.variant = parse_variant(j.at("variant").get<std::string>());
    d.balance.n0 = decode_uint(j.at("n0"));
    d.balance.n1 = decode_uint(j.at("n1"));
    d.balance.predicted_frac1 = parse_rational(j.at("predicted_frac1").get<std::string>());
    d.balance.predicted_frac0 = parse_rational(j.at("predicted_frac0").get<std::string>());
    auto& c = d.complexity;
    c.period = d.period;
    c.linear = decode_uint(j.at("L"));
    c.linear_bm = decode_uint(j.at("L_bm"));
    c.linear_gcd = decode_uint(j.at("L_gcd"));
    c.linear_lower = decode_uint(j.at("L_lower"));
    c.s1 = j.at("s1").get<unsigned>();
    c.epsilon = j.at("epsilon").get<unsigned>();
    c.s2 = decode_big(j.at("S2"));
    c.two_adic = decode_uint(j.at("C"));
    c.two_adic_lower = decode_opt(j.at("C_lower"));
    c.mersenne_factor = decode_opt(j.at("q"));
    c.mersenne_prime = j.at("mersenne").get<bool>();
    c.non_constant = j.at("non_constant").get<bool>();
    return d;
}

inline json to_json(const SearchRow& r) {
    json flags = json::array();
    for (Flag f : r.flags) flags.push_back(std::string(to_string(f)));
    return json{{"T", encode_uint(r.period)},
                {"p", encode_uint(r.p)},
                {"phi", encode_uint(r.phi)},
                {"T_prime", r.period_prime},
                {"ord_T_2", encode_opt(r.ord)},
                {"q", encode_opt(r.q)},
                {"log2q", encode_opt(r.log2q)},
                {"q_provenance", std::string(to_string(r.q_provenance))},
                {"ratio", rational_string(r.ratio)},
                {"ratio_value", to_double(r.ratio)},
                {"mersenne", r.mersenne},
                {"flags", flags}};
}

inline SearchRow search_row_from_json(const json& j) {
    SearchRow r;
    r.period = decode_uint(j.at("T"));
    r.p = decode_uint(j.at("p"));
    r.phi = decode_uint(j.at("phi"));
    r.period_prime = j.at("T_prime").get<bool>();
    r.ord = decode_opt(j.at("ord_T_2"));
    r.q = decode_opt(j.at("q"));
    r.log2q = decode_opt(j.at("log2q"));
    const auto prov = j.at("q_provenance").get<std::string>();
    r.q_provenance = prov == "discovered" ? FactorProvenance::discovered
                     : prov == "verified" ? FactorProvenance::verified
                                          : FactorProvenance::none;
    r.ratio = parse_rational(j.at("ratio").get<std::string>());
    r.mersenne = j.at("mersenne").get<bool>();
    for (const auto& f : j.at("flags")) {
        auto flag = parse_flag(f.get<std::string>());
        if (!flag) throw std::invalid_argument("unknown flag " + f.get<std::string>());
        r.flags.push_back(*flag);
    }
    return r;
}

inline json to_json(const Discrepancy& d) {
    return json{{"T", d.period}, {"field", d.field}, {"expected", d.expected}, {"actual", d.actual}};
}

inline json to_json(u64 p, const PatternReport& r) {
    json counts = json::object();
    if (r.ell <= 12) {
        for (u64 i = 0; i < (u64{1} << r.ell); ++i) {
            const auto s = pattern_string(i, r.ell);
            counts[s] = r.count_of(s);
        }
    } else {
        for (const auto& [s, c] : r.counts) counts[s] = c;
    }
    json weights = json::array();
    for (unsigned w = 0; w <= r.ell; ++w) {
        weights.push_back(json{{"w", w},
                               {"count", r.weight_counts[w]},
                               {"predicted_per_pattern", rational_string(r.predicted[w])},
                               {"predicted_weight_frac", to_double(binomial(r.ell, w) * r.predicted[w])}});
    }
    return json{{"p", p}, {"ell", r.ell}, {"windows", r.windows()}, {"counts", counts}, {"weights", weights}};
}

// ---------------------------------------------------------------------------
// CSV

inline std::string sequence_csv_header() { return "p,T,phi,eta,eta_exact,regime,variant,bits"; }

inline std::string to_csv(const SequenceDoc& d) {
    std::ostringstream os;
    os << d.p << ',' << d.period << ',' << d.phi << ',' << fixed6(d.eta) << ',' << rational_string(d.eta) << ','
       << to_string(d.regime) << ',' << to_string(d.variant) << ',' << d.bits.to_string();
    return os.str();
}

inline std::string analysis_csv_header() {
    return "p,T,phi,eta,eta_exact,regime,variant,n0,n1,frac1_pred,frac1_pred_exact,L,L_bm,L_gcd,L_lower,s1,"
           "epsilon,C,C_lower,q,mersenne";
}

inline std::string to_csv(const AnalysisDoc& d) {
    const auto& c = d.complexity;
    auto opt = [](const std::optional<u64>& v) { return v ? std::to_string(*v) : std::string(); };
    std::ostringstream os;
    os << d.p << ',' << d.period << ',' << d.phi << ',' << fixed6(d.eta) << ',' << rational_string(d.eta) << ','
       << to_string(d.regime) << ',' << to_string(d.variant) << ',' << d.balance.n0 << ',' << d.balance.n1 << ','
       << fixed6(d.balance.predicted_frac1) << ',' << rational_string(d.balance.predicted_frac1) << ',' << c.linear
       << ',' << c.linear_bm << ',' << c.linear_gcd << ',' << c.linear_lower << ',' << c.s1 << ',' << c.epsilon << ','
       << c.two_adic << ',' << opt(c.two_adic_lower) << ',' << opt(c.mersenne_factor) << ','
       << (c.mersenne_prime ? "true" : "false");
    return os.str();
}

inline std::string row_csv_header() { return "T,p,phi,T_prime,ord_T_2,q,log2q,q_provenance,ratio,ratio_exact,mersenne,flags"; }

inline std::string to_csv(const SearchRow& r) {
    auto opt = [](const std::optional<u64>& v) { return v ? std::to_string(*v) : std::string(); };
    std::ostringstream os;
    os << r.period << ',' << r.p << ',' << r.phi << ',' << (r.period_prime ? "true" : "false") << ',' << opt(r.ord)
       << ',' << opt(r.q) << ',' << opt(r.log2q) << ',' << to_string(r.q_provenance) << ',' << fixed6(r.ratio) << ','
       << rational_string(r.ratio) << ',' << (r.mersenne ? "true" : "false") << ',' << flags_string(r.flags);
    return os.str();
}

// ---------------------------------------------------------------------------
// Reference fixture

inline std::vector<ExpectedRow> expected_rows_from_json(const json& arr) {
    std::vector<ExpectedRow> rows;
    for (const auto& j : arr) {
        ExpectedRow r;
        r.period = decode_uint(j.at("T"));
        r.p = decode_uint(j.at("p"));
        r.ord = decode_uint(j.at("ord_T_2"));
        if (j.contains("q")) r.q = decode_uint(j.at("q"));
        if (j.contains("log2q")) r.log2q = decode_uint(j.at("log2q"));
        if (j.contains("ratio")) r.ratio = parse_rational(j.at("ratio").get<std::string>());
        r.ratio_prefix = j.value("ratio_prefix", std::string());
        r.ratio_prefix_corrected = j.value("ratio_prefix_corrected", std::string());
        r.erratum = j.value("erratum", std::string());
        r.mersenne = j.at("mersenne").get<bool>();
        for (const auto& f : j.value("flags", json::array())) {
            auto flag = parse_flag(f.get<std::string>());
            if (!flag) throw std::runtime_error("fixture: unknown flag " + f.get<std::string>());
            r.flags.push_back(*flag);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

inline ReferenceTables reference_tables_from_json(const json& j) {
    ReferenceTables ref;
    ref.version = j.at("version").get<int>();
    ref.table1 = expected_rows_from_json(j.at("table1").at("rows"));
    ref.table2 = expected_rows_from_json(j.at("table2").at("rows"));
    return ref;
}

inline ReferenceTables load_reference_tables(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open reference fixture " + path);
    return reference_tables_from_json(json::parse(in));
}

}  // namespace primseq
