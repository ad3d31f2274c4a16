// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mdet/criteria.hpp"
#include "mdet/decision.hpp"
#include "mdet/verify.hpp"

namespace {

using namespace mdet;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Dist = DistributionSpec;

Rational sum_inverse(const std::vector<Rational>& betas) {
    Rational s(0);
    for (const auto& b : betas) s += Rational(1) / b;
    return s;
}

// All products of 1..3 factors drawn from `betas`; the factor builder varies
// alpha and gamma with the position so the grid is not all unit scales.
Outcome beta_grid(const std::vector<Rational>& betas, const std::function<Dist(int, Rational)>& make,
                  Rational threshold) {
    int cases = 0, mismatches = 0;
    std::string first_bad;
    auto check = [&](const std::vector<Rational>& bs) {
        std::vector<Dist> factors;
        for (std::size_t i = 0; i < bs.size(); ++i) factors.push_back(make(int(i), bs[i]));
        const ProductSpec p(factors);
        const auto want = sum_inverse(bs) <= threshold ? Conclusion::Determinate : Conclusion::Indeterminate;
        const auto got = decide_product(p).conclusion;
        ++cases;
        if (got != want) {
            ++mismatches;
            if (first_bad.empty()) first_bad = p.describe() + " -> " + to_string(got);
        }
    };
    for (const auto& a : betas) {
        check({a});
        for (const auto& b : betas) {
            check({a, b});
            for (const auto& c : betas) check({a, b, c});
        }
    }
    std::ostringstream os;
    os << cases << " products, " << mismatches << " mismatches";
    if (!first_bad.empty()) os << " (first: " << first_bad << ")";
    return {mismatches == 0, os.str()};
}

Outcome expect_conclusions(const std::vector<std::pair<ProductSpec, Conclusion>>& cases) {
    std::ostringstream os;
    bool ok = true;
    for (const auto& [p, want] : cases) {
        const auto v = decide_product(p);
        ok = ok && v.conclusion == want;
        os << p.describe() << " -> " << to_string(v.conclusion) << " [" << v.rule;
        for (const auto& c : v.citations) os << ", " << c;
        os << "]; ";
    }
    return {ok, os.str()};
}

Outcome criterion1() {
    const std::vector<Rational> betas = {Rational(1, 3), Rational(1, 2), Rational(1), Rational(2), Rational(3)};
    const std::vector<std::pair<Rational, Rational>> alpha_gamma = {
        {Rational(1), Rational(1)}, {Rational(2), Rational(3)}, {Rational(1, 2), Rational(1, 2)}};
    return beta_grid(
        betas,
        [&](int i, Rational b) { return Dist::gg(alpha_gamma[i].first, b, alpha_gamma[i].second); },
        Rational(2));
}

Outcome criterion2() {
    const auto ig1 = Dist::ig(1, 1), ig2 = Dist::ig(2, 1), e = Dist::exponential();
    return expect_conclusions({{ProductSpec({ig1, e}), Conclusion::Determinate},
                               {ProductSpec({ig1, ig2}), Conclusion::Determinate},
                               {ProductSpec({ig1, ig2, e}), Conclusion::Indeterminate}});
}

Outcome criterion3() {
    const auto n = Dist::normal();
    return expect_conclusions({{ProductSpec({Dist::exponential(), n}), Conclusion::Indeterminate},
                               {ProductSpec({Dist::chi_square(3), n}), Conclusion::Indeterminate},
                               {ProductSpec({Dist::ig(1, 1), n}), Conclusion::Indeterminate}});
}

Outcome criterion4() {
    const std::vector<Rational> betas = {Rational(1, 2), Rational(1), Rational(2), Rational(4)};
    const std::vector<std::pair<Rational, Rational>> alpha_gamma = {
        {Rational(1), Rational(1)}, {Rational(3), Rational(2)}, {Rational(1, 2), Rational(3, 2)}};
    return beta_grid(
        betas,
        [&](int i, Rational b) { return Dist::dgg(alpha_gamma[i].first, b, alpha_gamma[i].second); },
        Rational(1));
}

Outcome criterion5() {
    std::ostringstream os;
    bool ok = true;
    os << "GG hardy/growth:";
    for (double beta : {0.4, 0.5, 0.6, 1.0, 2.0}) {
        const auto seq = LogMomentSequence::analytic(Dist::gg(1, beta, 1));
        const bool hardy = hardy_check(seq).status == Status::Holds;
        const double a = growth_exponent(seq).estimate;
        const bool growth = a <= 2.05;
        const bool expected = beta >= 0.5;
        ok = ok && hardy == growth && hardy == expected;
        os << " b=" << beta << ":" << (hardy ? "H" : "-") << (growth ? "G" : "-");
    }
    os << "; DGG cramer/growth:";
    for (double beta : {0.5, 0.8, 1.0, 1.5, 2.0, 4.0}) {
        const auto seq = LogMomentSequence::analytic(Dist::dgg(1, beta, 1));
        const bool cramer = cramer_check(seq).status == Status::Holds;
        const double a = growth_exponent(seq).estimate;
        const bool growth = a <= 1.05;
        const bool expected = beta >= 1.0;
        ok = ok && cramer == growth && cramer == expected;
        os << " b=" << beta << ":" << (cramer ? "C" : "-") << (growth ? "G" : "-");
    }
    return {ok, os.str()};
}

Outcome criterion6() {
    struct Case {
        std::string name;
        LogDensityFn f;
        MomentCase kase;
        Status want;
    };
    const auto stj = build_counterexample(MomentCase::Stieltjes, 2.0);
    const auto ham = build_counterexample(MomentCase::Hamburger, 2.0);
    const auto normal = Dist::normal(), expo = Dist::exponential();
    const std::vector<Case> cases = {
        {"stieltjes counterexample", stj.log_density_fn(), MomentCase::Stieltjes, Status::Holds},
        {"hamburger counterexample", ham.log_density_fn(), MomentCase::Hamburger, Status::Holds},
        {"normal", [normal](double x) { return log_density(normal, x); }, MomentCase::Hamburger, Status::Fails},
        {"exp", [expo](double x) { return log_density(expo, x); }, MomentCase::Stieltjes, Status::Fails},
        {"lognormal", [](double x) { return lognormal_log_density(x); }, MomentCase::Stieltjes, Status::Holds},
    };
    std::ostringstream os;
    bool ok = true;
    for (const auto& c : cases) {
        const auto base = krein_quantity(c.f, c.kase);
        const auto twice = krein_quantity(c.f, c.kase, KreinSchedule{}.doubled());
        ok = ok && base.status == c.want && twice.status == base.status;
        os << c.name << ": " << (base.status == Status::Holds ? "finite" : "infinite")
           << (twice.status == base.status ? "" : " (unstable)") << "; ";
    }
    return {ok, os.str()};
}

Outcome criterion7() {
    const auto stj = build_counterexample(MomentCase::Stieltjes, 2.0);
    const auto ham = build_counterexample(MomentCase::Hamburger, 2.0);
    const bool s_hi = verify_growth_bound(stj, 2.1, 40).holds;
    const bool s_lo = verify_growth_bound(stj, 1.9, 40).holds;
    const bool h_hi = verify_growth_bound(ham, 1.1, 40).holds;
    const bool h_lo = verify_growth_bound(ham, 0.9, 40).holds;
    std::ostringstream os;
    os << std::boolalpha << "stieltjes a=2.1 " << s_hi << ", a=1.9 " << s_lo << "; hamburger a=1.1 " << h_hi
       << ", a=0.9 " << h_lo;
    return {s_hi && !s_lo && h_hi && !h_lo, os.str()};
}

std::vector<Dist> oracle_grid() {
    std::vector<Dist> grid;
    for (Rational a : {Rational(1), Rational(2)}) {
        for (Rational b : {Rational(1, 3), Rational(1, 2), Rational(1), Rational(2), Rational(3)}) {
            for (Rational g : {Rational(1, 2), Rational(1), Rational(3)}) grid.push_back(Dist::gg(a, b, g));
        }
        for (Rational b : {Rational(1, 2), Rational(1), Rational(2), Rational(4)}) {
            for (Rational g : {Rational(1), Rational(3)}) grid.push_back(Dist::dgg(a, b, g));
        }
    }
    grid.push_back(Dist::ig(1, 1));
    grid.push_back(Dist::ig(2, 1));
    grid.push_back(Dist::ig(1, 3));
    grid.push_back(Dist::ig(Rational(1, 2), 2));
    return grid;
}

Outcome criterion8() {
    const auto grid = oracle_grid();
    double worst = 0.0;
    std::string worst_at;
    for (const auto& d : grid) {
        for (const auto& c : oracle_cross_check(d, 20)) {
            if (c.rel_error > worst) {
                worst = c.rel_error;
                worst_at = c.factor + " k=" + std::to_string(c.k);
            }
        }
    }
    std::ostringstream os;
    os << grid.size() << " grid points, k <= 20, max rel error " << std::scientific << std::setprecision(2)
       << worst << " at " << worst_at;
    return {grid.size() >= 48 && worst < 1e-8, os.str()};
}

std::vector<ProductSpec> mc_products() {
    return {ProductSpec({Dist::exponential(), Dist::exponential()}),
            ProductSpec({Dist::normal(), Dist::exponential()}),
            ProductSpec({Dist::ig(1, 1), Dist::exponential()}),
            ProductSpec({Dist::chi_square(3), Dist::normal()}),
            ProductSpec({Dist::gg(2, 2, 1), Dist::dgg(1, 2, 1)}),
            ProductSpec({Dist::half_normal(), Dist::half_normal(), Dist::ig(2, 3)})};
}

int mc_failures(std::uint64_t seed, std::string& where) {
    int failures = 0;
    for (const auto& p : mc_products()) {
        const auto r = mc_cross_check(p, seed, 1000000, 4);
        for (const auto& c : r.checks) {
            if (!c.pass) where += p.describe() + " k=" + std::to_string(c.k) + "; ";
        }
        failures += r.failures();
    }
    return failures;
}

Outcome criterion9() {
    std::string where;
    const int first = mc_failures(20240611, where);
    std::ostringstream os;
    os << "6 products, k <= 4, n = 1e6: " << first << " failures with the first seed";
    if (first == 0) return {true, os.str()};
    if (first > 1) return {false, os.str() + " (" + where + ")"};
    std::string again;
    const int second = mc_failures(99991, again);
    os << ", " << second << " with the second seed (" << where << again << ")";
    return {second == 0, os.str()};
}

std::vector<double> random_betas(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> size(2, 6);
    std::uniform_real_distribution<double> log_beta(std::log(0.2), std::log(5.0));
    std::vector<double> betas(std::size_t(size(rng)));
    for (auto& b : betas) b = std::exp(log_beta(rng));
    return betas;
}

Outcome criterion10() {
    std::mt19937_64 rng(7);
    std::ostringstream os;
    bool ok = true;
    for (auto kase : {MomentCase::Stieltjes, MomentCase::Hamburger}) {
        const double need = kase == MomentCase::Stieltjes ? 2.0 : 1.0;
        const std::string inequality = kase == MomentCase::Stieltjes ? "sum_i 1/beta_i > 2" : "sum_i 1/beta_i > 1";
        int feasible = 0, infeasible = 0, bad = 0, wrong_rejection = 0;
        double min_margin = 1.0;
        while (feasible < 500 || infeasible < 100) {
            const auto betas = random_betas(rng);
            double s = 0.0;
            for (double b : betas) s += 1.0 / b;
            if (s > need) {
                if (feasible >= 500) continue;
                ++feasible;
                try {
                    const auto split = theta_split(betas, kase);
                    const double m = theta_split_margin(split);
                    min_margin = std::min(min_margin, m);
                    if (m < kThetaMargin) ++bad;
                } catch (const std::exception&) {
                    ++bad;
                }
            } else {
                if (infeasible >= 100) continue;
                ++infeasible;
                try {
                    theta_split(betas, kase);
                    ++wrong_rejection;
                } catch (const InfeasibleSplit& e) {
                    if (e.inequality() != inequality) ++wrong_rejection;
                }
            }
        }
        ok = ok && bad == 0 && wrong_rejection == 0;
        os << to_string(kase) << ": " << feasible << " feasible (min margin " << std::scientific
           << std::setprecision(2) << min_margin << std::defaultfloat << ", " << bad << " bad), " << infeasible
           << " infeasible (" << wrong_rejection << " not rejected correctly); ";
    }
    return {ok, os.str()};
}

Dist random_factor(std::mt19937_64& rng, Rational alpha_scale = Rational(1)) {
    static const std::vector<Rational> betas = {Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(1),
                                                Rational(3, 2), Rational(2),    Rational(3),    Rational(4)};
    static const std::vector<Rational> alphas = {Rational(1, 2), Rational(1), Rational(2), Rational(3)};
    static const std::vector<Rational> gammas = {Rational(1, 2), Rational(1), Rational(2)};
    auto pick = [&](const std::vector<Rational>& v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; };
    switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
        case 0:
        case 1:
        case 2: return Dist::gg(pick(alphas) * alpha_scale, pick(betas), pick(gammas));
        case 3:
        case 4: return Dist::dgg(pick(alphas) * alpha_scale, pick(betas), pick(gammas));
        default: return Dist::ig(pick(alphas), pick(alphas));
    }
}

// Scaling X by c > 0 maps GG(alpha, beta, gamma) to GG(alpha c^-beta, beta,
// gamma); any alpha change is such a scaling. IG is left alone.
Dist rescale_alpha(const Dist& d, Rational k) {
    switch (d.family()) {
        case Family::GG: return Dist::gg(*d.alpha_param().exact * k, *d.beta_param().exact, *d.gamma_param().exact);
        case Family::DGG: return Dist::dgg(*d.alpha_param().exact * k, *d.beta_param().exact, *d.gamma_param().exact);
        case Family::IG: return d;
    }
    return d;
}

Outcome criterion11() {
    std::mt19937_64 rng(11);
    int perm_bad = 0, scale_bad = 0, append_bad = 0, inconclusive = 0;
    std::vector<std::string> bad;
    auto note = [&](const std::string& what) {
        if (bad.size() < 3) bad.push_back(what);
    };
    const std::vector<Rational> scales = {Rational(1, 4), Rational(3), Rational(10)};
    for (int trial = 0; trial < 200; ++trial) {
        const int n = std::uniform_int_distribution<int>(1, 3)(rng);
        std::vector<Dist> factors;
        for (int i = 0; i < n; ++i) factors.push_back(random_factor(rng));
        const ProductSpec p(factors);
        const auto base = decide_product(p).conclusion;
        if (base == Conclusion::Inconclusive) ++inconclusive;

        auto shuffled = factors;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        if (decide_product(ProductSpec(shuffled)).conclusion != base) {
            ++perm_bad;
            note("permutation of " + p.describe());
        }

        std::vector<Dist> scaled;
        const Rational k = scales[std::size_t(trial) % scales.size()];
        for (const auto& f : factors) scaled.push_back(rescale_alpha(f, k));
        if (decide_product(ProductSpec(scaled)).conclusion != base) {
            ++scale_bad;
            note("alpha x" + to_string(k) + " of " + p.describe());
        }

        auto longer = factors;
        longer.push_back(random_factor(rng));
        const auto appended = decide_product(ProductSpec(longer)).conclusion;
        if (base == Conclusion::Indeterminate && appended != Conclusion::Indeterminate) {
            ++append_bad;
            note("appending " + longer.back().describe() + " to " + p.describe());
        }
    }
    std::ostringstream os;
    os << "200 random products: permutation " << perm_bad << ", alpha-scale " << scale_bad << ", append "
       << append_bad << " violations; " << inconclusive << " inconclusive";
    for (const auto& b : bad) os << "; " << b;
    return {perm_bad == 0 && scale_bad == 0 && append_bad == 0, os.str()};
}

}  // namespace

int main() {
    struct Item {
        const char* name;
        Outcome (*run)();
    };
    const Item items[] = {
        {"Corollary 1 grid (GG products, n <= 3)", criterion1},
        {"Corollary 2 (IG products)", criterion2},
        {"Corollaries 4-5 (products with a normal factor)", criterion3},
        {"Corollary 3 grid (DGG products, n <= 3)", criterion4},
        {"Lemma 1/2 equivalence flips", criterion5},
        {"Krein classifications", criterion6},
        {"growth sharpness bracket", criterion7},
        {"oracle agreement", criterion8},
        {"Monte Carlo moments", criterion9},
        {"theta split property", criterion10},
        {"engine invariants", criterion11},
    };
    int failed = 0, index = 0;
    for (const auto& item : items) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = item.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << index << "  " << item.name << " -- "
                  << o.detail << " (" << std::fixed << std::setprecision(2) << secs << " s)" << std::defaultfloat
                  << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
