#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <string>

#include "json.hpp"
#include "mdet/report.hpp"
#include "mdet/spec_file.hpp"

using namespace mdet;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run run(const std::string& args) {
    const auto err_path = fs::temp_directory_path() / "mdet_cli_stderr.txt";
    const std::string cmd = std::string(MDET_TOOL) + " " + args + " 2>" + err_path.string();
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(err_path);
    r.err.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    return r;
}

std::string spec(const std::string& name) { return std::string(MDET_SPEC_DIR) + "/" + name; }

int expected_analyze_code(const fs::path& p) {
    std::ifstream in(p);
    std::string first;
    std::getline(in, first);
    std::smatch m;
    static const std::regex re(R"(# expect-analyze: (\d+))");
    REQUIRE(std::regex_search(first, m, re));
    return std::stoi(m[1]);
}

}  // namespace

TEST_CASE("analyze: exit codes over the spec corpus", "[cli][property]") {
    int files = 0;
    for (const auto& entry : fs::directory_iterator(MDET_SPEC_DIR)) {
        if (entry.path().extension() != ".yaml") continue;
        ++files;
        CAPTURE(entry.path().filename().string());
        const auto r = run("analyze " + entry.path().string());
        CHECK(r.code == expected_analyze_code(entry.path()));
        if (r.code == 1) {
            CHECK(r.out.empty());
            CHECK_THAT(r.err, Catch::Matchers::StartsWith("error: "));
        }
    }
    CHECK(files >= 12);
}

TEST_CASE("analyze: reports cite the applied result", "[cli]") {
    const auto en = run("analyze " + spec("exp_normal.yaml"));
    CHECK(en.code == 10);
    const auto doc = nlohmann::json::parse(en.out);
    CHECK(doc["verdict"]["rule"] == "Theorem 11");
    CHECK(doc["verdict"]["citations"][0] == "Corollary 4");
    CHECK(doc["input"]["factors"][1] == "DGG(1/2, 2, 1)");

    const auto e = run("analyze " + spec("exp.yaml"));
    CHECK(e.code == 0);
    CHECK(nlohmann::json::parse(e.out)["verdict"]["rule"] == "Theorem 1");
}

TEST_CASE("analyze: parse diagnostics name the problem", "[cli]") {
    const auto neg = run("analyze " + spec("negative_beta.yaml"));
    CHECK(neg.code == 1);
    CHECK_THAT(neg.err, Catch::Matchers::ContainsSubstring("beta"));
    CHECK_THAT(neg.err, Catch::Matchers::ContainsSubstring("line 5"));

    const auto fam = run("analyze " + spec("unknown_family.yaml"));
    CHECK_THAT(fam.err, Catch::Matchers::ContainsSubstring("Weibull"));
    CHECK_THAT(fam.err, Catch::Matchers::ContainsSubstring("line 5"));

    CHECK(run("analyze /nonexistent/spec.yaml").code == 1);
    CHECK(run("").code == 1);
    CHECK(run("analyze").code == 1);
}

TEST_CASE("analyze: identical inputs give identical bytes", "[cli][property]") {
    for (const char* name : {"exp_normal.yaml", "ig_ig_exp.yaml", "dgg_boundary_float.yaml", "exp_exp.yaml"}) {
        CAPTURE(name);
        const auto a = run("analyze --ratio " + spec(name));
        const auto b = run("analyze --ratio " + spec(name));
        CHECK(a.out == b.out);
        CHECK(a.code == b.code);
    }
    const auto p1 = run("analyze --pretty " + spec("exp_normal.yaml"));
    CHECK(p1.out == run("analyze --pretty " + spec("exp_normal.yaml")).out);
    CHECK_THAT(p1.out, Catch::Matchers::StartsWith("conclusion: M-indet"));
}

TEST_CASE("analyze: reports round trip", "[cli][property]") {
    for (const char* name : {"exp.yaml", "exp_normal.yaml", "ig_ig_exp.yaml", "gg_third.yaml", "dgg_boundary_exact.yaml",
                             "dgg_boundary_float.yaml", "mixed_det.yaml"}) {
        CAPTURE(name);
        const auto r = run("analyze " + spec(name));
        const auto parsed = parse_analyze_report(r.out);

        const auto file = parse_spec_file(spec(name));
        const auto cfg = apply_options(file.options);
        const auto v = decide_product(file.product, cfg);
        CHECK(parsed.schema == kReportSchema);
        CHECK(parsed.tool_version == kToolVersion);
        CHECK(parsed.conclusion == v.conclusion);
        CHECK(parsed.rule == v.rule);
        CHECK(parsed.citations == v.citations);
        CHECK(parsed.exponent_sum == v.exponent_sum);
        CHECK(parsed.exponent_sum_exact == v.exponent_sum_exact);
        REQUIRE(parsed.exponents.size() == v.exponents.size());
        for (std::size_t i = 0; i < v.exponents.size(); ++i) {
            CHECK(parsed.exponents[i].factor == v.exponents[i].factor);
            CHECK(parsed.exponents[i].exponent == v.exponents[i].exponent);
            CHECK(parsed.exponents[i].exact == v.exponents[i].exact);
        }
    }
    CHECK_THROWS_AS(parse_analyze_report("{}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_analyze_report("not json"), std::invalid_argument);
}

TEST_CASE("analyze: options and flags", "[cli]") {
    const auto r = run("analyze --k-horizon 80 --x0 2 " + spec("exp_normal.yaml"));
    CHECK(r.code == 10);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["config"]["k_horizon"] == 80);
    CHECK(doc["config"]["x0"] == 2.0);
    CHECK(run("analyze --k-horizon 10 " + spec("exp.yaml")).code == 1);

    const auto mixed = nlohmann::json::parse(run("analyze " + spec("mixed_det.yaml")).out);
    CHECK(mixed["config"]["k_horizon"] == 120);
    CHECK(mixed["verdict"]["rule"] == "Theorem 8 (mixed-case analogue)");

    const auto ratio = nlohmann::json::parse(run("analyze --ratio " + spec("exp_exp.yaml")).out);
    CHECK(ratio["ratio_route"]["rule"] == "Theorem 6");
    CHECK(ratio["seed"] == 7);
}

TEST_CASE("criterion subcommand", "[cli]") {
    const auto krein = run("criterion krein --counterexample stieltjes --delta 2");
    CHECK(krein.code == 0);
    CHECK(nlohmann::json::parse(krein.out)["report"]["status"] == "holds");
    CHECK(run("criterion krein --counterexample hamburger --delta 2").code == 0);

    const auto hardy = run("criterion hardy " + spec("exp.yaml"));
    CHECK(hardy.code == 0);
    CHECK(nlohmann::json::parse(hardy.out)["report"]["estimate"].get<double>() <= 1.0);

    const auto carleman = run("criterion carleman " + spec("gg_third.yaml"));
    CHECK(carleman.code == 10);  // the series converges
    CHECK(run("criterion lin " + spec("exp.yaml")).code == 0);
    CHECK(run("criterion growth --pretty " + spec("exp.yaml")).out.find("GrowthExponent: holds") == 0);

    CHECK(run("criterion nonsense " + spec("exp.yaml")).code == 1);
    CHECK(run("criterion krein " + spec("exp_normal.yaml")).code == 1);
    CHECK(run("criterion hardy --counterexample stieltjes").code == 1);
    CHECK(run("criterion krein --counterexample stieltjes --delta 1").code == 1);
    CHECK(run("criterion krein").code == 1);
}

TEST_CASE("verify subcommand", "[cli]") {
    const auto ee = run("verify " + spec("exp_exp.yaml") + " --mc 1000000 --seed 7 --kmax 4");
    CHECK(ee.code == 0);
    const auto doc = nlohmann::json::parse(ee.out);
    CHECK(doc["passed"] == true);
    CHECK(doc["monte_carlo"]["checks"][1]["analytic"].get<double>() == Catch::Approx(4.0));

    CHECK(run("verify " + spec("normal.yaml") + " --mc 1000000 --kmax 6").code == 0);
    CHECK(run("verify " + spec("ig.yaml") + " --mc 1000000 --kmax 4").code == 0);

    // Deterministic in the seed.
    const auto again = run("verify " + spec("exp_exp.yaml") + " --mc 1000000 --seed 7 --kmax 4");
    CHECK(again.out == ee.out);

    CHECK(run("verify " + spec("exp.yaml") + " --mc 10").code == 1);
    CHECK(run("verify " + spec("exp.yaml") + " --kmax 12").code == 1);
}

TEST_CASE("version flag", "[cli]") {
    const auto r = run("--version");
    CHECK(r.code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring(kToolVersion));
}
