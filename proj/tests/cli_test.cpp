#include "primseq/io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace primseq {
namespace {

struct Run {
    std::string out;
    int code = -1;
};

// stdout only unless the command redirects stderr itself.
Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + PRIMSEQ_CLI + std::string(" ") + args;
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<json> json_lines(const std::string& s) {
    std::vector<json> out;
    for (const auto& line : lines(s)) out.push_back(json::parse(line));
    return out;
}

TEST(Cli, GenerateText) {
    const auto r = run("generate --p 13");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("T=3"), std::string::npos);
    EXPECT_NE(r.out.find("\n010\n"), std::string::npos);
}

TEST(Cli, GenerateVariantJson) {
    const auto r = run("generate --p 13 --variant t --format json-lines");
    ASSERT_EQ(r.code, 0);
    const auto docs = json_lines(r.out);
    ASSERT_EQ(docs.size(), 1u);
    EXPECT_EQ(docs[0].at("bits"), "010");
    const auto doc = sequence_doc_from_json(docs[0]);
    EXPECT_EQ(doc, make_sequence_doc(build_context(13), SequenceVariant::t));
}

TEST(Cli, GenerateRejectsNonPrime) {
    const auto r = run("generate --p 9 2>&1");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("p must be a prime >= 11"), std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("generate 2>/dev/null").code, 1);
    EXPECT_EQ(run("analyze --p 13 --format xml 2>/dev/null").code, 1);
    EXPECT_EQ(run("scan 2>/dev/null").code, 1);
    EXPECT_EQ(run("scan --p-range 5..20 2>/dev/null").code, 1);
    EXPECT_EQ(run("patterns --p 13 --ell 9 2>/dev/null").code, 1);
    EXPECT_EQ(run("bogus 2>/dev/null").code, 1);
}

TEST(Cli, AnalyzeExamples) {
    const auto r13 = analysis_doc_from_json(json_lines(run("analyze --p 13 --format json-lines").out).at(0));
    EXPECT_EQ(r13.complexity.linear, 3u);
    EXPECT_EQ(r13.complexity.two_adic, 2u);
    EXPECT_EQ(r13.balance.n1, 1u);
    EXPECT_EQ(r13.balance.n0, 2u);

    const auto r43 = analysis_doc_from_json(json_lines(run("analyze --p 43 --format json-lines").out).at(0));
    EXPECT_EQ(r43.complexity.linear_lower, 10u);
    EXPECT_EQ(r43.complexity.two_adic_lower, 4u);
}

TEST(Cli, AnalyzeRangeCsv) {
    const auto r = run("analyze --p-range 11..100 --format csv");
    ASSERT_EQ(r.code, 0);
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 22u);  // header + 21 primes in [11, 100]
    EXPECT_EQ(ls[0], analysis_csv_header());
    EXPECT_EQ(ls[1].rfind("11,3,4,", 0), 0u);
    EXPECT_EQ(ls.back().rfind("97,", 0), 0u);
}

TEST(Cli, TablesFirst) {
    const auto r = run("tables --which 1");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0 discrepancies"), std::string::npos);
    const auto j = run("tables --which 1 --format json-lines");
    EXPECT_EQ(j.code, 0);
    std::size_t rows = 0;
    for (const auto& doc : json_lines(j.out)) {
        if (doc.contains("T")) {
            ++rows;
            EXPECT_TRUE(doc.at("mersenne").get<bool>());
        } else {
            EXPECT_TRUE(doc.contains("erratum"));
        }
    }
    EXPECT_EQ(rows, 9u);
}

TEST(Cli, TablesSecondMarksVerifiedFactor) {
    const auto r = run("tables --which 2 --factor-k-max 1000000 --format json-lines");
    EXPECT_EQ(r.code, 0);
    std::size_t rows = 0;
    for (const auto& doc : json_lines(r.out)) {
        if (!doc.contains("T")) continue;
        ++rows;
        if (doc.at("T") == 199) {
            EXPECT_EQ(doc.at("q_provenance"), "verified");
            EXPECT_EQ(doc.at("q"), 164504919713ULL);  // below 2^53, so still a JSON number
            EXPECT_EQ(doc.at("log2q"), 37);
        }
    }
    EXPECT_EQ(rows, 15u);
}

TEST(Cli, TablesTamperedFixtureExitsWithDiscrepancy) {
    std::ifstream in(PRIMSEQ_FIXTURE);
    json j = json::parse(in);
    j["table1"]["rows"][0]["p"] = 11;
    const auto path = std::filesystem::temp_directory_path() / "primseq_tampered_fixture.json";
    std::ofstream(path) << j.dump();
    const auto r = run("tables --which 1 --fixture " + path.string());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("T=3 p: expected 11, got 13"), std::string::npos);
    const auto via_env = run("tables --which 1", "PRIMSEQ_FIXTURE=" + path.string());
    EXPECT_EQ(via_env.code, 2);
    std::filesystem::remove(path);
}

TEST(Cli, Patterns) {
    const auto r = run("patterns --p 13 --ell 2 --format json-lines");
    ASSERT_EQ(r.code, 0);
    const auto doc = json_lines(r.out).at(0);
    EXPECT_EQ(doc.at("counts").at("01"), 1);
    EXPECT_EQ(doc.at("counts").at("10"), 1);
    EXPECT_EQ(doc.at("counts").at("00"), 0);
    EXPECT_EQ(doc.at("counts").at("11"), 0);
    const auto csv = lines(run("patterns --p-range 11..50 --ell 3 --format csv").out);
    EXPECT_EQ(csv.size(), 1u + 11u * 4u);  // 11 primes, four weights each
}

TEST(Cli, CzCheck) {
    const auto r = run("czcheck --p-range 11..200");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find(" 0 violations"), std::string::npos);
    const auto one = json_lines(run("czcheck --p 13 --eps -1 --format json-lines").out);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].at("M"), 8);
    EXPECT_EQ(run("czcheck --p 13 --eps +2 2>/dev/null").code, 1);
}

TEST(Cli, ScanFilters) {
    const auto r = run("scan --p-range 11..500 --require-prime-T --no-flags --format json-lines");
    ASSERT_EQ(r.code, 0);
    std::vector<u64> ps;
    for (const auto& doc : json_lines(r.out)) {
        const auto row = search_row_from_json(doc);
        EXPECT_TRUE(row.period_prime);
        EXPECT_TRUE(row.flags.empty());
        ps.push_back(row.p);
    }
    for (u64 p : {43ULL, 79ULL, 211ULL}) EXPECT_NE(std::find(ps.begin(), ps.end(), p), ps.end()) << p;
}

TEST(Cli, ScanCsvAndWorkerOverride) {
    const auto a = run("scan --p-range 11..2000 --format csv");
    const auto b = run("scan --p-range 11..2000 --format csv", "PRIMSEQ_WORKERS=3");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(lines(a.out).at(0), row_csv_header());
}

TEST(Cli, FactorBudgetOverride) {
    // T = 167: smallest factor 2349023 = 2 * 7033 * 167 + 1.
    const auto wide = analysis_doc_from_json(json_lines(run("analyze --p 523 --format json-lines").out).at(0));
    EXPECT_EQ(wide.complexity.mersenne_factor, 2349023u);
    const auto narrow = analysis_doc_from_json(
        json_lines(run("analyze --p 523 --format json-lines", "PRIMSEQ_FACTOR_K_MAX=1000").out).at(0));
    EXPECT_FALSE(narrow.complexity.mersenne_factor.has_value());
    EXPECT_FALSE(narrow.complexity.two_adic_lower.has_value());
}

}  // namespace
}  // namespace primseq
