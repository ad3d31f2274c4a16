#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "mdet/criteria.hpp"
#include "mdet/verify.hpp"

using namespace mdet;
using Catch::Approx;
using Dist = DistributionSpec;

namespace {

LogDensityFn density_of(const Dist& d) {
    return [d](double x) { return log_density(d, x); };
}

}  // namespace

TEST_CASE("moment sequences", "[criteria][sequence]") {
    const auto e = LogMomentSequence::analytic(Dist::exponential(), 50);
    CHECK(e.parity() == Parity::AllK);
    CHECK(e.horizon() == 50);
    CHECK(e.at(5) == Approx(std::lgamma(6.0)));
    CHECK_THROWS_AS(e.at(51), std::out_of_range);

    const auto n = LogMomentSequence::analytic(Dist::normal(), 50);
    CHECK(n.parity() == Parity::EvenOnly);
    CHECK(n.orders().front() == 2);
    CHECK(n.orders().back() == 100);
    CHECK(std::exp(n.at(4)) == Approx(3.0));

    SECTION("products add log moments pointwise") {
        const auto p = LogMomentSequence::product(ProductSpec({Dist::exponential(), Dist::exponential()}), 50);
        CHECK(p.at(7) == Approx(2 * std::lgamma(8.0)));
        const auto mixed = LogMomentSequence::product(ProductSpec({Dist::exponential(), Dist::normal()}), 50);
        CHECK(mixed.parity() == Parity::EvenOnly);
        CHECK(mixed.at(2) == Approx(std::log(2.0)));
    }
    SECTION("mismatched parity cannot be added") {
        CHECK_THROWS(e + n);
    }
    SECTION("explicit formulas") {
        const auto s = LogMomentSequence::from_function([](int k) { return 2.0 * std::lgamma(k + 1.0); }, 60,
                                                        Parity::AllK, "(k!)^2");
        CHECK(s.source() == "(k!)^2");
        CHECK(growth_exponent(s).estimate == Approx(2.0).margin(0.01));
    }
}

TEST_CASE("growth exponent matches 1/beta", "[criteria][growth]") {
    struct Case {
        Dist d;
        double a;
        Status status;
    };
    for (const auto& c : {Case{Dist::exponential(), 1.0, Status::Holds},
                          Case{Dist::gg(2, Rational(1, 3), 3), 3.0, Status::Fails},
                          Case{Dist::gg(1, Rational(1, 2), 1), 2.0, Status::Inconclusive},
                          Case{Dist::ig(1, 1), 1.0, Status::Holds},
                          Case{Dist::normal(), 0.5, Status::Holds},
                          Case{Dist::dgg(1, Rational(1, 2), 1), 2.0, Status::Fails}}) {
        CAPTURE(c.d.describe());
        const auto r = growth_exponent(LogMomentSequence::analytic(c.d));
        CHECK(r.estimate == Approx(c.a).margin(5e-3));
        CHECK(r.status == c.status);
    }
}

TEST_CASE("ratio rate matches 1/beta", "[criteria][ratio]") {
    CHECK(ratio_rate(LogMomentSequence::analytic(Dist::exponential())).estimate == Approx(1.0).margin(1e-2));
    const auto g = ratio_rate(LogMomentSequence::analytic(Dist::gg(1, Rational(1, 3), 1)));
    CHECK(g.estimate == Approx(3.0).margin(2e-2));
    CHECK(g.status == Status::Fails);
    // Even-step rate of the normal: m_{2k+2}/m_{2k} = 2k+1.
    CHECK(ratio_rate(LogMomentSequence::analytic(Dist::normal())).estimate == Approx(1.0).margin(1e-2));
}

TEST_CASE("Hardy and Cramer conditions", "[criteria][hardy]") {
    const auto exp_hardy = hardy_check(LogMomentSequence::analytic(Dist::exponential()));
    CHECK(exp_hardy.status == Status::Holds);
    CHECK(exp_hardy.estimate <= 1.0);

    CHECK(hardy_check(LogMomentSequence::analytic(Dist::gg(1, Rational(1, 2), 1))).status == Status::Holds);
    CHECK(hardy_check(LogMomentSequence::analytic(Dist::gg(1, Rational(2, 5), 1))).status == Status::Fails);
    CHECK_THROWS_AS(hardy_check(LogMomentSequence::analytic(Dist::normal())), std::invalid_argument);

    CHECK(cramer_check(LogMomentSequence::analytic(Dist::normal())).status == Status::Holds);
    CHECK(cramer_check(LogMomentSequence::analytic(Dist::dgg(1, 1, 1))).status == Status::Holds);
    CHECK(cramer_check(LogMomentSequence::analytic(Dist::dgg(1, Rational(4, 5), 1))).status == Status::Fails);
}

TEST_CASE("Carleman classification follows the growth exponent", "[criteria][carleman]") {
    const auto conv = carleman_quantity(LogMomentSequence::analytic(Dist::gg(1, Rational(1, 3), 1)));
    CHECK(conv.status == Status::Fails);
    CHECK(conv.evidence_value("fitted_exponent") == Approx(3.0).margin(5e-3));

    const auto div = carleman_quantity(LogMomentSequence::analytic(Dist::exponential()));
    CHECK(div.status == Status::Holds);
    // Partial sums are recorded at k = 1, 2, 4, ... and at the horizon.
    REQUIRE(div.ladder.size() >= 8);
    for (std::size_t i = 1; i < div.ladder.size(); ++i) CHECK(div.ladder[i] > div.ladder[i - 1]);
}

TEST_CASE("Krein ladder classifications", "[criteria][krein]") {
    const auto normal = Dist::normal(), expo = Dist::exponential();
    CHECK(krein_quantity(density_of(normal), MomentCase::Hamburger).status == Status::Fails);
    CHECK(krein_quantity(density_of(expo), MomentCase::Stieltjes).status == Status::Fails);
    CHECK(krein_quantity([](double x) { return lognormal_log_density(x); }, MomentCase::Stieltjes).status ==
          Status::Holds);
    // GG with beta < 1/2 has a finite Krein integral.
    CHECK(krein_quantity(density_of(Dist::gg(1, Rational(1, 3), 1)), MomentCase::Stieltjes).status == Status::Holds);

    for (double delta : {1.5, 2.0, 3.0}) {
        for (auto kase : {MomentCase::Stieltjes, MomentCase::Hamburger}) {
            CAPTURE(delta, to_string(kase));
            const auto cd = build_counterexample(kase, delta);
            const auto base = krein_quantity(cd.log_density_fn(), kase);
            const auto twice = krein_quantity(cd.log_density_fn(), kase, KreinSchedule{}.doubled());
            CHECK(base.status == Status::Holds);
            CHECK(twice.status == base.status);
            CHECK(base.ladder.size() == 15);
            CHECK(twice.ladder.size() == 30);
        }
    }

    CHECK_THROWS_AS(krein_quantity(density_of(expo), MomentCase::Stieltjes, KreinSchedule{10, 2, 3}),
                    std::invalid_argument);
    CHECK_THROWS_AS(krein_quantity([](double x) { return x > 5 ? -INFINITY : -x; }, MomentCase::Stieltjes),
                    std::domain_error);
}

TEST_CASE("Condition L", "[criteria][lin]") {
    CHECK(condition_L_check(Dist::exponential()).status == Status::Holds);
    CHECK(condition_L_check(Dist::gg(1, Rational(1, 3), 1)).status == Status::Holds);
    CHECK(condition_L_check(Dist::ig(1, 1)).status == Status::Holds);
    CHECK(condition_L_check(Dist::normal()).status == Status::Holds);

    // L_f of x^(-3) on x > 1 is the constant 3: bounded, so the condition fails.
    CHECK(condition_L_check([](double x) { return -3.0 * std::log(x); }, 1.0, MomentCase::Stieltjes).status ==
          Status::Fails);

    // The counterexamples satisfy Condition L on a tail only: L_f dips below
    // zero for x up to about e^3.7 before rising like sqrt(x) / ln^2 x.
    const auto cd = build_counterexample(MomentCase::Stieltjes, 2.0);
    CHECK(condition_L_check(cd.log_density_fn(), 1.0, MomentCase::Stieltjes).status == Status::Fails);
    CHECK(condition_L_check(cd.log_density_fn(), 10.0, MomentCase::Stieltjes).status == Status::Holds);
    const auto ham = build_counterexample(MomentCase::Hamburger, 2.0);
    CHECK(condition_L_check(ham.log_density_fn(), 10.0, MomentCase::Hamburger, true).status == Status::Holds);
    CHECK(condition_L_check(ham.log_density_fn(), 10.0, MomentCase::Hamburger, false).status == Status::Fails);

    // Closed form and finite differences agree.
    const auto d = Dist::gg(2, Rational(3, 2), 3);
    const auto closed = condition_L_check(d, 2.0);
    const auto numeric = condition_L_check(density_of(d), 2.0, MomentCase::Stieltjes);
    CHECK(numeric.estimate == Approx(closed.estimate).epsilon(1e-6));
}

TEST_CASE("growth exponents add over products", "[criteria][property]") {
    std::mt19937_64 rng(3);
    const std::vector<Rational> betas = {Rational(1, 3), Rational(1, 2), Rational(1), Rational(3, 2), Rational(3)};
    std::uniform_int_distribution<std::size_t> pick(0, betas.size() - 1);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Dist> fs;
        double want = 0.0;
        for (int i = 0; i < 1 + trial % 3; ++i) {
            const auto b = betas[pick(rng)];
            fs.push_back(Dist::gg(1 + i, b, Rational(1, 2) + i));
            want += 1.0 / boost::rational_cast<double>(b);
        }
        const ProductSpec p(fs);
        CAPTURE(p.describe());
        CHECK(growth_exponent(LogMomentSequence::product(p)).estimate == Approx(want).margin(1e-2));
    }
}
