// mdet: decide moment determinacy of products of independent GG, DGG and IG
// random variables.
//
//   mdet analyze SPEC [--ratio] [--pretty] [--k-horizon K] [--x0 X]
//       exit 0 M-det, 10 M-indet, 20 inconclusive, 1 usage/parse error
//   mdet criterion NAME (SPEC | --counterexample stieltjes|hamburger --delta D)
//       NAME in growth, ratio, hardy, cramer, carleman, krein, lin
//       exit 0 holds, 10 fails, 20 inconclusive, 1 usage error
//   mdet verify SPEC [--mc N] [--seed S] [--kmax K]
//       exit 0 all checks pass, 30 some check failed, 1 usage/parse error

#include <algorithm>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "mdet/criteria.hpp"
#include "mdet/decision.hpp"
#include "mdet/report.hpp"
#include "mdet/spec_file.hpp"
#include "mdet/verify.hpp"

namespace {

using namespace mdet;

constexpr int kExitError = 1;
constexpr int kExitVerifyFailed = 30;

int exit_code(Conclusion c) {
    switch (c) {
        case Conclusion::Determinate: return 0;
        case Conclusion::Indeterminate: return 10;
        case Conclusion::Inconclusive: return 20;
    }
    return kExitError;
}

int exit_code(Status s) {
    switch (s) {
        case Status::Holds: return 0;
        case Status::Fails: return 10;
        case Status::Inconclusive: return 20;
    }
    return kExitError;
}

struct CommonFlags {
    bool pretty = false;
    int k_horizon = 0;
    double x0 = 0.0;
    CLI::Option* k_opt = nullptr;
    CLI::Option* x0_opt = nullptr;

    DecisionConfig config(const SpecOptions& options) const {
        auto cfg = apply_options(options);
        if (k_opt && k_opt->count()) cfg.horizon = k_horizon;
        if (x0_opt && x0_opt->count()) cfg.x0 = x0;
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_flag("--pretty", flags.pretty, "Human-readable output instead of JSON");
    flags.k_opt = cmd->add_option("--k-horizon", flags.k_horizon, "Moment horizon K (>= 40)")
                      ->check(CLI::Range(40, 100000));
    flags.x0_opt = cmd->add_option("--x0", flags.x0, "Tail threshold x0 (> 0)")
                       ->check(CLI::PositiveNumber);
}

std::string pretty_report(const CriterionReport& r) {
    std::ostringstream os;
    os << to_string(r.criterion) << ": " << to_string(r.status) << '\n';
    if (!r.subject.empty()) os << "subject: " << r.subject << '\n';
    os << "estimate: " << r.estimate << '\n';
    for (const auto& [name, value] : r.evidence) os << "  " << name << " = " << value << '\n';
    if (!r.ladder.empty()) {
        os << "ladder:";
        for (double v : r.ladder) os << ' ' << v;
        os << '\n';
    }
    for (const auto& note : r.notes) os << "note: " << note << '\n';
    return os.str();
}

int run_analyze(const std::string& path, bool ratio, const CommonFlags& flags) {
    const auto spec = parse_spec_file(path);
    const auto cfg = flags.config(spec.options);
    const auto verdict = decide_product(spec.product, cfg);
    std::optional<Verdict> ratio_verdict;
    if (ratio) ratio_verdict = ratio_route(spec.product, cfg);

    if (flags.pretty) {
        std::cout << explain(verdict);
        if (ratio_verdict) std::cout << "\nratio route:\n" << explain(*ratio_verdict);
    } else {
        AnalyzeReportInput in;
        in.product = &spec.product;
        in.verdict = &verdict;
        in.ratio = ratio_verdict ? &*ratio_verdict : nullptr;
        in.config = &cfg;
        in.seed = spec.options.seed;
        std::cout << render_analyze_report(in);
    }
    return exit_code(verdict.conclusion);
}

int run_criterion(const std::string& name, const std::string& path, const std::string& counterexample,
                  double delta, const CommonFlags& flags) {
    static const std::set<std::string> moment_based = {"growth", "ratio", "hardy", "cramer", "carleman"};
    static const std::set<std::string> density_based = {"krein", "lin"};
    if (!moment_based.count(name) && !density_based.count(name)) {
        std::cerr << "error: unknown criterion '" << name
                  << "' (expected growth, ratio, hardy, cramer, carleman, krein or lin)\n";
        return kExitError;
    }
    if (path.empty() == counterexample.empty()) {
        std::cerr << "error: give either a spec file or --counterexample\n";
        return kExitError;
    }

    CriterionReport report;
    std::string subject;
    if (!counterexample.empty()) {
        if (!density_based.count(name)) {
            std::cerr << "error: --counterexample supports only the krein and lin criteria\n";
            return kExitError;
        }
        const MomentCase kase = counterexample == "stieltjes" ? MomentCase::Stieltjes : MomentCase::Hamburger;
        const auto cd = build_counterexample(kase, delta);
        const auto cfg = flags.config({});
        std::ostringstream os;
        os << "counterexample(" << counterexample << ", delta = " << delta << ")";
        subject = os.str();
        report = name == "krein" ? krein_quantity(cd.log_density_fn(), kase, cfg.krein, cfg.x0)
                                 : condition_L_check(cd.log_density_fn(), cfg.x0, kase, true);
    } else {
        const auto spec = parse_spec_file(path);
        const auto cfg = flags.config(spec.options);
        const auto& p = spec.product;
        subject = p.describe();
        if (moment_based.count(name)) {
            const auto seq = LogMomentSequence::product(p, cfg.horizon);
            if (name == "growth") report = growth_exponent(seq, cfg.criteria);
            if (name == "ratio") report = ratio_rate(seq, cfg.criteria);
            if (name == "hardy") report = hardy_check(seq, cfg.criteria);
            if (name == "cramer") report = cramer_check(seq, cfg.criteria);
            if (name == "carleman") report = carleman_quantity(seq, cfg.criteria);
        } else {
            if (p.size() != 1) {
                std::cerr << "error: " << name << " needs a single-factor spec (product densities have no closed form)\n";
                return kExitError;
            }
            const auto d = p.factors().front();
            if (name == "krein") {
                report = krein_quantity([d](double x) { return log_density(d, x); }, d.moment_case(), cfg.krein,
                                        cfg.x0);
            } else {
                report = condition_L_check(d, cfg.x0);
            }
        }
    }
    if (report.subject.empty()) report.subject = subject;
    std::cout << (flags.pretty ? pretty_report(report) : render_criterion_report(name, subject, report));
    return exit_code(report.status);
}

int run_verify(const std::string& path, std::size_t n, std::optional<std::uint64_t> seed, int kmax,
               const CommonFlags& flags) {
    const auto spec = parse_spec_file(path);
    const std::uint64_t s = seed ? *seed : spec.options.seed.value_or(1);
    std::vector<OracleCheck> oracle;
    for (const auto& f : spec.product.factors()) {
        const auto checks = oracle_cross_check(f, kmax);
        oracle.insert(oracle.end(), checks.begin(), checks.end());
    }
    const auto mc = mc_cross_check(spec.product, s, n, kmax);
    const bool ok = mc.passed() &&
                    std::all_of(oracle.begin(), oracle.end(), [](const OracleCheck& c) { return c.pass; });
    if (flags.pretty) {
        std::cout << "oracle (quadrature vs analytic):\n";
        for (const auto& c : oracle) {
            std::cout << "  " << c.factor << " k=" << c.k << " rel_error=" << c.rel_error
                      << (c.pass ? " pass" : " FAIL") << '\n';
        }
        std::cout << "monte carlo (seed " << mc.seed << ", n " << mc.n << "):\n";
        for (const auto& c : mc.checks) {
            std::cout << "  k=" << c.k << " analytic=" << c.analytic << " empirical=" << c.empirical
                      << " se=" << c.standard_error << (c.pass ? " pass" : " FAIL") << '\n';
        }
        std::cout << (ok ? "all checks passed\n" : "some checks failed\n");
    } else {
        std::cout << render_verify_report(spec.product, oracle, mc);
    }
    return ok ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moment determinacy of products of independent random variables"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    CommonFlags analyze_flags, criterion_flags, verify_flags;

    auto* analyze = app.add_subcommand("analyze", "Decide M-det / M-indet for a product spec");
    std::string analyze_path;
    bool ratio = false;
    analyze->add_option("spec", analyze_path, "Product spec file (YAML)")->required();
    analyze->add_flag("--ratio", ratio, "Also run the moment-ratio route");
    add_common(analyze, analyze_flags);

    auto* criterion = app.add_subcommand("criterion", "Evaluate one criterion");
    std::string criterion_name, criterion_path, counterexample;
    double delta = 2.0;
    criterion->add_option("name", criterion_name, "growth|ratio|hardy|cramer|carleman|krein|lin")->required();
    criterion->add_option("spec", criterion_path, "Product spec file (YAML)");
    criterion->add_option("--counterexample", counterexample, "Boundary-growth counterexample density")
        ->check(CLI::IsMember({"stieltjes", "hamburger"}));
    criterion->add_option("--delta", delta, "Counterexample exponent delta (> 1)");
    add_common(criterion, criterion_flags);

    auto* verify = app.add_subcommand("verify", "Quadrature and Monte Carlo cross-checks");
    std::string verify_path;
    std::size_t mc_n = 1000000;
    std::uint64_t seed_value = 0;
    int kmax = 4;
    verify->add_option("spec", verify_path, "Product spec file (YAML)")->required();
    verify->add_option("--mc", mc_n, "Monte Carlo sample size (>= 100000)");
    auto* seed_opt = verify->add_option("--seed", seed_value, "Random seed");
    verify->add_option("--kmax", kmax, "Highest moment order checked (1..8)");
    add_common(verify, verify_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitError;
    }

    try {
        if (analyze->parsed()) return run_analyze(analyze_path, ratio, analyze_flags);
        if (criterion->parsed()) {
            return run_criterion(criterion_name, criterion_path, counterexample, delta, criterion_flags);
        }
        std::optional<std::uint64_t> seed;
        if (seed_opt->count()) seed = seed_value;
        return run_verify(verify_path, mc_n, seed, kmax, verify_flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
}
