// primseq: generate and analyze primitive-root parity sequences, reproduce the
// reference tables and scan prime ranges for good candidates.
//
// Exit codes: 0 success, 1 usage error, 2 table discrepancy, 3 internal
// inconsistency (oracle mismatch or violated bound).

#include <cstdio>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "primseq/bounds.hpp"
#include "primseq/complexity.hpp"
#include "primseq/io.hpp"
#include "primseq/search.hpp"
#include "primseq/sequence.hpp"

#ifndef PRIMSEQ_DEFAULT_FIXTURE
#define PRIMSEQ_DEFAULT_FIXTURE "data/reference_tables.json"
#endif

namespace {

using namespace primseq;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDiscrepancy = 2;
constexpr int kExitInconsistent = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Format { text, json_lines, csv };

struct RunConfig {
    std::optional<u64> p;
    std::string p_range;
    std::string variant = "s";
    std::string format = "text";
    u64 factor_k_max = 1'000'000;
    u64 ll_max = 5000;
    unsigned workers = 1;
    double regime_tol = kDefaultRegimeTolerance;
    unsigned ell = 2;
    unsigned max_s = 3;
    std::string eps;
    std::string which = "all";
    double cap_multiplier = 10.0;
    std::string fixture = PRIMSEQ_DEFAULT_FIXTURE;
    bool require_prime_t = false;
    bool no_flags = false;
    bool two_primitive = false;
};

Format parse_format(const std::string& s) {
    if (s == "text") return Format::text;
    if (s == "json-lines" || s == "json") return Format::json_lines;
    if (s == "csv") return Format::csv;
    throw UsageError("--format must be text, json-lines or csv");
}

std::pair<u64, u64> parse_range(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) throw UsageError("range must look like LO..HI, got '" + s + "'");
    try {
        const u64 lo = std::stoull(s.substr(0, dots));
        const u64 hi = std::stoull(s.substr(dots + 2));
        if (lo > hi) throw UsageError("empty range '" + s + "'");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw UsageError("range must look like LO..HI, got '" + s + "'");
    }
}

/// Primes requested via --p or --p-range. A single --p must itself be valid.
std::vector<u64> requested_primes(const RunConfig& cfg) {
    if (cfg.p && !cfg.p_range.empty()) throw UsageError("give either --p or --p-range, not both");
    if (cfg.p) {
        if (*cfg.p < 11 || !is_prime(*cfg.p)) throw UsageError("p must be a prime >= 11, got " + std::to_string(*cfg.p));
        return {*cfg.p};
    }
    if (cfg.p_range.empty()) throw UsageError("one of --p or --p-range is required");
    auto [lo, hi] = parse_range(cfg.p_range);
    std::vector<u64> out;
    for (u64 n = std::max<u64>(lo, 11); n <= hi; ++n) {
        if (is_prime(n)) out.push_back(n);
    }
    return out;
}

ProbeOptions probe_options(const RunConfig& cfg) {
    ProbeOptions opts;
    opts.factor_k_max = cfg.factor_k_max;
    opts.lucas_lehmer_max_exponent = cfg.ll_max;
    return opts;
}

std::string opt_text(const std::optional<u64>& v) { return v ? std::to_string(*v) : std::string("unknown"); }

int cmd_generate(const RunConfig& cfg) {
    const Format fmt = parse_format(cfg.format);
    const auto variant = parse_variant(cfg.variant);
    if (fmt == Format::csv) std::cout << sequence_csv_header() << '\n';
    for (u64 p : requested_primes(cfg)) {
        const auto doc = make_sequence_doc(build_context(p), variant, cfg.regime_tol);
        switch (fmt) {
            case Format::json_lines: std::cout << to_json(doc).dump() << '\n'; break;
            case Format::csv: std::cout << to_csv(doc) << '\n'; break;
            case Format::text:
                std::cout << "p=" << doc.p << " T=" << doc.period << " phi=" << doc.phi << " eta=" << rational_string(doc.eta)
                          << " (" << fixed6(doc.eta) << ") regime=" << to_string(doc.regime)
                          << " variant=" << to_string(doc.variant) << '\n'
                          << doc.bits.to_string() << '\n';
                break;
        }
    }
    return kExitOk;
}

int cmd_analyze(const RunConfig& cfg) {
    const Format fmt = parse_format(cfg.format);
    const auto variant = parse_variant(cfg.variant);
    const auto opts = probe_options(cfg);
    int status = kExitOk;
    if (fmt == Format::csv) std::cout << analysis_csv_header() << '\n';
    for (u64 p : requested_primes(cfg)) {
        const auto ctx = build_context(p);
        const auto doc = make_analysis_doc(ctx, variant, opts, cfg.regime_tol);
        if (!doc.complexity.consistent(build_sequence(ctx, variant))) {
            std::cerr << "internal inconsistency for p=" << p << ": L_bm=" << doc.complexity.linear_bm
                      << " L_gcd=" << doc.complexity.linear_gcd << " L_lower=" << doc.complexity.linear_lower << '\n';
            status = kExitInconsistent;
        }
        const auto& c = doc.complexity;
        switch (fmt) {
            case Format::json_lines: std::cout << to_json(doc).dump() << '\n'; break;
            case Format::csv: std::cout << to_csv(doc) << '\n'; break;
            case Format::text:
                std::cout << "p=" << doc.p << " T=" << doc.period << " eta=" << rational_string(doc.eta) << " ("
                          << fixed6(doc.eta) << ", " << to_string(doc.regime) << ")\n"
                          << "  balance: n1=" << doc.balance.n1 << " n0=" << doc.balance.n0 << "  observed frac1="
                          << fixed6(static_cast<double>(doc.balance.n1) / static_cast<double>(doc.period))
                          << " predicted frac1=" << fixed6(doc.balance.predicted_frac1) << '\n'
                          << "  linear complexity: L=" << c.linear << " (BM " << c.linear_bm << ", gcd " << c.linear_gcd
                          << ")  lower bound " << c.linear_lower << "  S(1)=" << c.s1 << " eps=" << c.epsilon << '\n'
                          << "  2-adic complexity: C=" << c.two_adic << "  lower bound " << opt_text(c.two_adic_lower)
                          << (c.mersenne_prime ? "  (2^T-1 prime)" : "")
                          << (c.mersenne_factor ? "  q=" + std::to_string(*c.mersenne_factor) : std::string()) << '\n';
                break;
        }
    }
    return status;
}

int cmd_patterns(const RunConfig& cfg) {
    const Format fmt = parse_format(cfg.format);
    const auto variant = parse_variant(cfg.variant);
    if (cfg.ell < 1) throw UsageError("--ell must be >= 1");
    if (fmt == Format::csv) {
        std::cout << "p,T,ell,w,count,windows,observed_frac,predicted_weight_frac,predicted_per_pattern\n";
    }
    for (u64 p : requested_primes(cfg)) {
        const auto ctx = build_context(p);
        if (cfg.ell > ctx.period) throw UsageError("--ell exceeds the period T=" + std::to_string(ctx.period));
        const auto report = pattern_stats(build_sequence(ctx, variant), ctx, cfg.ell);
        const double windows = static_cast<double>(report.windows());
        switch (fmt) {
            case Format::json_lines: std::cout << to_json(p, report).dump() << '\n'; break;
            case Format::csv:
                for (unsigned w = 0; w <= report.ell; ++w) {
                    std::cout << p << ',' << ctx.period << ',' << report.ell << ',' << w << ',' << report.weight_counts[w]
                              << ',' << report.windows() << ','
                              << fixed6(static_cast<double>(report.weight_counts[w]) / windows) << ','
                              << fixed6(binomial(report.ell, w) * report.predicted[w]) << ','
                              << rational_string(report.predicted[w]) << '\n';
                }
                break;
            case Format::text:
                std::cout << "p=" << p << " T=" << ctx.period << " ell=" << report.ell << " windows=" << report.windows()
                          << '\n';
                for (unsigned w = 0; w <= report.ell; ++w) {
                    std::cout << "  w=" << w << " N=" << report.weight_counts[w] << " observed="
                              << fixed6(static_cast<double>(report.weight_counts[w]) / windows)
                              << " predicted=" << fixed6(binomial(report.ell, w) * report.predicted[w]) << '\n';
                }
                if (report.ell <= 6) {
                    for (u64 i = 0; i < (u64{1} << report.ell); ++i) {
                        const auto s = pattern_string(i, report.ell);
                        std::cout << "    " << s << ": " << report.count_of(s) << '\n';
                    }
                }
                break;
        }
    }
    return kExitOk;
}

std::vector<int> parse_signs(const std::string& s) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const std::string tok = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (tok == "+1" || tok == "1" || tok == "+") {
            out.push_back(1);
        } else if (tok == "-1" || tok == "-") {
            out.push_back(-1);
        } else {
            throw UsageError("--eps entries must be +1 or -1, got '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string signs_string(const std::vector<int>& eps) {
    std::string s;
    for (int e : eps) s += e == 1 ? '+' : '-';
    return s;
}

int cmd_czcheck(const RunConfig& cfg) {
    const Format fmt = parse_format(cfg.format);
    std::vector<std::vector<int>> vectors;
    if (!cfg.eps.empty()) {
        vectors.push_back(parse_signs(cfg.eps));
    } else {
        for (unsigned s = 1; s <= cfg.max_s; ++s) {
            for (auto& v : all_sign_vectors(s)) vectors.push_back(std::move(v));
        }
    }
    if (fmt == Format::csv) std::cout << "p,eps,s,z,M,main_term,bound,holds\n";
    u64 checked = 0, violations = 0;
    for (u64 p : requested_primes(cfg)) {
        const auto ctx = build_context(p);
        const auto is_root = root_indicator(ctx);
        for (const auto& eps : vectors) {
            if (eps.size() >= p) continue;
            const auto r = cz_bound_check(ctx, is_root, eps);
            ++checked;
            if (!r.holds) ++violations;
            unsigned z = 0;
            for (int e : eps) z += e == 1;
            switch (fmt) {
                case Format::json_lines:
                    std::cout << json{{"p", p}, {"eps", signs_string(eps)}, {"s", eps.size()}, {"z", z}, {"M", r.m},
                                      {"main_term", r.main_term}, {"bound", r.bound}, {"holds", r.holds}}
                                     .dump()
                              << '\n';
                    break;
                case Format::csv:
                    std::cout << p << ',' << signs_string(eps) << ',' << eps.size() << ',' << z << ',' << r.m << ','
                              << fixed6(r.main_term) << ',' << fixed6(r.bound) << ',' << (r.holds ? "true" : "false")
                              << '\n';
                    break;
                case Format::text:
                    if (!r.holds || cfg.p) {
                        std::cout << "p=" << p << " eps=" << signs_string(eps) << " M=" << r.m
                                  << " main=" << fixed6(r.main_term) << " bound=" << fixed6(r.bound)
                                  << (r.holds ? " holds" : " VIOLATED") << '\n';
                    }
                    break;
            }
        }
    }
    if (fmt == Format::text) std::cout << "checked " << checked << " inequalities, " << violations << " violations\n";
    return violations == 0 ? kExitOk : kExitInconsistent;
}

void print_table(const std::string& title, const TableResult& result, Format fmt, bool& csv_header_done) {
    switch (fmt) {
        case Format::json_lines:
            for (const auto& r : result.rows) std::cout << to_json(r).dump() << '\n';
            for (const auto& d : result.discrepancies) {
                std::cout << json{{"discrepancy", to_json(d)}}.dump() << '\n';
            }
            for (const auto& d : result.errata) std::cout << json{{"erratum", to_json(d)}}.dump() << '\n';
            break;
        case Format::csv:
            if (!csv_header_done) std::cout << row_csv_header() << '\n';
            csv_header_done = true;
            for (const auto& r : result.rows) std::cout << to_csv(r) << '\n';
            for (const auto& d : result.discrepancies) {
                std::cerr << "discrepancy T=" << d.period << ' ' << d.field << ": expected " << d.expected << ", got "
                          << d.actual << '\n';
            }
            break;
        case Format::text:
            std::cout << title << '\n';
            std::cout << "       T  p       ord  q               log2q  ratio              flags\n";
            for (const auto& r : result.rows) {
                char line[256];
                std::snprintf(line, sizeof line, "  %6llu  %-6llu  %-4s %-15s %-6s %-18s %s\n",
                              static_cast<unsigned long long>(r.period), static_cast<unsigned long long>(r.p),
                              r.ord ? std::to_string(*r.ord).c_str() : "-",
                              r.mersenne ? "(prime)"
                                         : (r.q ? std::to_string(*r.q) +
                                                      (r.q_provenance == FactorProvenance::verified ? "*" : "")
                                                : std::string("?"))
                                               .c_str(),
                              r.log2q ? std::to_string(*r.log2q).c_str() : "-",
                              (rational_string(r.ratio) + " " + truncated_decimal(r.ratio, 3)).c_str(),
                              flags_string(r.flags).c_str());
                std::cout << line;
            }
            std::cout << "  " << result.discrepancies.size() << " discrepancies\n";
            for (const auto& d : result.discrepancies) {
                std::cout << "    T=" << d.period << ' ' << d.field << ": expected " << d.expected << ", got " << d.actual
                          << '\n';
            }
            for (const auto& d : result.errata) {
                std::cout << "  erratum T=" << d.period << ' ' << d.field << ": printed " << d.expected
                          << ", recomputed " << d.actual << '\n';
            }
            break;
    }
}

int cmd_tables(const RunConfig& cfg) {
    const Format fmt = parse_format(cfg.format);
    if (cfg.which != "1" && cfg.which != "2" && cfg.which != "all") throw UsageError("--which must be 1, 2 or all");
    const auto ref = load_reference_tables(cfg.fixture);
    TableConfig tc;
    tc.probe = probe_options(cfg);
    tc.cap_multiplier = cfg.cap_multiplier;
    bool header = false;
    std::size_t discrepancies = 0;
    if (cfg.which != "2") {
        const auto r = reproduce_table1(ref, tc);
        print_table("Table 1: 2^T - 1 prime", r, fmt, header);
        discrepancies += r.discrepancies.size();
    }
    if (cfg.which != "1") {
        const auto r = reproduce_table2(ref, tc);
        print_table("Table 2: 2^T - 1 composite (* = verified, not discovered)", r, fmt, header);
        discrepancies += r.discrepancies.size();
    }
    return discrepancies == 0 ? kExitOk : kExitDiscrepancy;
}

int cmd_scan(const RunConfig& cfg) {
    const Format fmt = parse_format(cfg.format);
    if (cfg.p_range.empty()) throw UsageError("scan needs --p-range");
    auto [lo, hi] = parse_range(cfg.p_range);
    if (lo < 11) throw UsageError("scan range must start at p >= 11");
    ScanCriteria criteria{cfg.require_prime_t, cfg.no_flags, cfg.two_primitive};
    ScanOptions opts;
    opts.probe = probe_options(cfg);
    opts.workers = cfg.workers;
    if (fmt == Format::csv) std::cout << row_csv_header() << '\n';
    int status = kExitOk;
    scan(lo, hi, criteria, opts, [&](const SearchRow& r) {
        if (r.period != r.phi - 1 || euler_phi(r.p - 1) != r.phi) status = kExitInconsistent;
        switch (fmt) {
            case Format::json_lines: std::cout << to_json(r).dump() << '\n'; break;
            case Format::csv: std::cout << to_csv(r) << '\n'; break;
            case Format::text:
                std::cout << "p=" << r.p << " T=" << r.period << (r.period_prime ? " (prime)" : "")
                          << " ord=" << (r.ord ? std::to_string(*r.ord) : "-")
                          << " q=" << (r.mersenne ? "2^T-1 prime" : r.q ? std::to_string(*r.q) : "?")
                          << " ratio=" << fixed6(r.ratio) << " flags=" << (r.flags.empty() ? "none" : flags_string(r.flags))
                          << '\n';
                break;
        }
    });
    return status;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--format", cfg.format, "text, json-lines or csv")->capture_default_str();
    cmd->add_option("--factor-k-max", cfg.factor_k_max, "candidate budget k for factors 2kT+1 of 2^T-1")
        ->envname("PRIMSEQ_FACTOR_K_MAX")
        ->capture_default_str();
    cmd->add_option("--ll-max", cfg.ll_max, "largest exponent for the Lucas-Lehmer fallback")->capture_default_str();
}

void add_prime_selection(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--p", cfg.p, "a prime p >= 11");
    cmd->add_option("--p-range", cfg.p_range, "inclusive range LO..HI");
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Primitive-root parity sequences: generation, analysis, table reproduction and search"};
    app.require_subcommand(1);

    auto* generate = app.add_subcommand("generate", "emit one period of the sequence");
    add_prime_selection(generate, cfg);
    add_common(generate, cfg);
    generate->add_option("--variant", cfg.variant, "s (parities) or t (consecutive roots)")->capture_default_str();
    generate->add_option("--regime-tol", cfg.regime_tol, "tolerance for eta regime labels")->capture_default_str();

    auto* analyze = app.add_subcommand("analyze", "balance, linear and 2-adic complexity with lower bounds");
    add_prime_selection(analyze, cfg);
    add_common(analyze, cfg);
    analyze->add_option("--variant", cfg.variant, "s or t")->capture_default_str();
    analyze->add_option("--regime-tol", cfg.regime_tol, "tolerance for eta regime labels")->capture_default_str();

    auto* patterns = app.add_subcommand("patterns", "pattern counts against predicted frequencies");
    add_prime_selection(patterns, cfg);
    add_common(patterns, cfg);
    patterns->add_option("--ell", cfg.ell, "pattern length")->capture_default_str();
    patterns->add_option("--variant", cfg.variant, "s or t")->capture_default_str();

    auto* czcheck = app.add_subcommand("czcheck", "check the block-count deviation bound");
    add_prime_selection(czcheck, cfg);
    add_common(czcheck, cfg);
    czcheck->add_option("--max-s", cfg.max_s, "check every sign vector of length 1..max-s")->capture_default_str();
    czcheck->add_option("--eps", cfg.eps, "single sign vector, e.g. +1,-1,+1");

    auto* tables = app.add_subcommand("tables", "reproduce the reference tables");
    add_common(tables, cfg);
    tables->add_option("--which", cfg.which, "1, 2 or all")->capture_default_str();
    tables->add_option("--cap-multiplier", cfg.cap_multiplier, "search cap c * T * ln T for the largest p")
        ->capture_default_str();
    tables->add_option("--fixture", cfg.fixture, "reference table fixture")->envname("PRIMSEQ_FIXTURE")->capture_default_str();

    auto* scan_cmd = app.add_subcommand("scan", "scan a prime range for candidate p");
    add_common(scan_cmd, cfg);
    scan_cmd->add_option("--p-range", cfg.p_range, "inclusive range LO..HI")->required();
    scan_cmd->add_flag("--require-prime-T", cfg.require_prime_t, "keep rows with prime period T");
    scan_cmd->add_flag("--no-flags", cfg.no_flags, "keep rows without any quality flag");
    scan_cmd->add_flag("--two-primitive", cfg.two_primitive, "keep rows where 2 is a primitive root mod T");
    scan_cmd->add_option("--workers", cfg.workers, "worker threads")->envname("PRIMSEQ_WORKERS")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*generate) return cmd_generate(cfg);
        if (*analyze) return cmd_analyze(cfg);
        if (*patterns) return cmd_patterns(cfg);
        if (*czcheck) return cmd_czcheck(cfg);
        if (*tables) return cmd_tables(cfg);
        if (*scan_cmd) return cmd_scan(cfg);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInconsistent;
    }
    return kExitUsage;
}
