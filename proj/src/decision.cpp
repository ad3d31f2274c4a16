#include "mdet/decision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "mdet/verify.hpp"

namespace mdet {

namespace {

using BigRational = boost::multiprecision::cpp_rational;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

BigRational to_big(const Rational& r) {
    return BigRational(r.numerator()) / BigRational(r.denominator());
}

std::optional<Rational> to_small(const BigRational& r) {
    using boost::multiprecision::cpp_int;
    const cpp_int num = boost::multiprecision::numerator(r);
    const cpp_int den = boost::multiprecision::denominator(r);
    const cpp_int limit = std::numeric_limits<std::int64_t>::max();
    if (abs(num) > limit || den > limit) return std::nullopt;
    return Rational(num.convert_to<std::int64_t>(), den.convert_to<std::int64_t>());
}

// -1: sum at or below threshold, +1: above, 0: inside the floating band.
int compare_to_threshold(Verdict& v, double band) {
    v.exponent_sum = 0.0;
    bool all_exact = true;
    BigRational exact_sum = 0;
    for (const auto& e : v.exponents) {
        v.exponent_sum += e.exponent;
        if (e.exact) {
            exact_sum += to_big(*e.exact);
        } else {
            all_exact = false;
        }
    }
    if (all_exact) {
        v.exact_comparison = true;
        v.exponent_sum_exact = to_small(exact_sum);
        return exact_sum <= BigRational(int(v.threshold)) ? -1 : 1;
    }
    if (std::fabs(v.exponent_sum - v.threshold) <= band) return 0;
    return v.exponent_sum < v.threshold ? -1 : 1;
}

FactorExponent make_exponent(const DistributionSpec& d) {
    return {d.describe(), factor_exponent(d), exact_factor_exponent(d)};
}

bool is_exact(const Param& p, const Rational& r) { return p.exact && *p.exact == r; }

bool is_standard_exponential(const DistributionSpec& d) {
    return d.family() == Family::GG && is_exact(d.alpha_param(), Rational(1)) &&
           is_exact(d.beta_param(), Rational(1)) && is_exact(d.gamma_param(), Rational(1));
}

bool is_chi_square(const DistributionSpec& d) {
    return d.family() == Family::GG && is_exact(d.alpha_param(), Rational(1, 2)) &&
           is_exact(d.beta_param(), Rational(1));
}

bool is_standard_normal(const DistributionSpec& d) {
    return d.family() == Family::DGG && is_exact(d.alpha_param(), Rational(1, 2)) &&
           is_exact(d.beta_param(), Rational(2)) && is_exact(d.gamma_param(), Rational(1));
}

// Named special cases of the product theorems that match the factor multiset.
std::vector<std::string> corollary_citations(const ProductSpec& p) {
    const auto& fs = p.factors();
    auto count = [&](auto pred) { return std::count_if(fs.begin(), fs.end(), pred); };
    const auto n = long(fs.size());
    const auto gg = count([](const DistributionSpec& d) { return d.family() == Family::GG; });
    const auto dgg = count([](const DistributionSpec& d) { return d.family() == Family::DGG; });
    const auto ig = count([](const DistributionSpec& d) { return d.family() == Family::IG; });
    const auto expo = count(is_standard_exponential);

    if (gg == n) return {"Corollary 1"};
    if (dgg == n) return {"Corollary 3"};
    if (ig >= 1 && ig + expo == n) {
        if (ig == 1 && expo == 1) return {"Corollary 2(i)"};
        if (ig == 2 && expo == 0) return {"Corollary 2(ii)"};
        if (ig == 2 && expo == 1) return {"Corollary 2(iii)"};
    }
    if (n == 2 && count(is_standard_normal) == 1) {
        const auto& other = is_standard_normal(fs[0]) ? fs[1] : fs[0];
        if (is_standard_exponential(other)) return {"Corollary 4"};
        if (is_chi_square(other)) return {"Corollary 5(i)"};
        if (other.family() == Family::IG) return {"Corollary 5(ii)"};
    }
    return {};
}

std::vector<double> side_grid(double x0, const DecisionConfig& cfg) {
    if (!(x0 > 0.0)) throw std::invalid_argument("x0 must be positive");
    std::vector<double> xs;
    const int n = std::max(cfg.grid_points, 3);
    for (int i = 0; i < n; ++i) xs.push_back(x0 * std::pow(cfg.grid_span, double(i) / (n - 1)));
    return xs;
}

// Index where the last decade of the side grid begins.
std::size_t last_decade_start(const std::vector<double>& xs) {
    std::size_t i = xs.size() - 1;
    while (i > 0 && xs[i - 1] >= xs.back() / 10.0) --i;
    return i;
}

// Shared rule for fitted-constant lower bounds. The constant is the grid
// minimum of the log-ratio. If the ratio is still falling over the last
// decade, the fall must be slowing down, and the constant is lowered by the
// geometric extrapolation of the remaining fall. Changes within `noise` (the
// rounding error of the ratio, which subtracts terms of size alpha x^beta)
// count as flat.
CriterionReport lower_bound_report(Criterion which, const DistributionSpec& d, double x0,
                                   const std::vector<double>& xs, const std::vector<double>& log_ratio,
                                   const char* constant, double noise) {
    CriterionReport r;
    r.criterion = which;
    r.subject = d.describe();
    const auto it = std::min_element(log_ratio.begin(), log_ratio.end());
    const std::size_t last_start = last_decade_start(xs);
    std::size_t prev_start = last_start;
    while (prev_start > 0 && xs[prev_start - 1] >= xs[last_start] / 10.0) --prev_start;
    const double end_change = log_ratio.back() - log_ratio[last_start];
    const double prev_change = log_ratio[last_start] - log_ratio[prev_start];

    const bool finite = std::all_of(log_ratio.begin(), log_ratio.end(), [](double v) { return std::isfinite(v); });
    double allowance = 0.0;
    if (!finite) {
        r.status = Status::Fails;
        r.notes.push_back("ratio not finite on the grid");
    } else if (end_change >= -noise) {
        r.status = Status::Holds;
        r.notes.push_back(std::string(constant) + " fitted as the grid minimum; ratio flat or rising at the grid end");
    } else if (prev_change < 0.0 && end_change > prev_change) {
        const double rate = end_change / prev_change;
        allowance = -end_change * rate / (1.0 - rate);
        r.status = Status::Holds;
        r.notes.push_back(std::string(constant) +
                          " fitted as the grid minimum less the extrapolated remaining decrease of the ratio");
    } else {
        r.status = Status::Inconclusive;
        r.notes.push_back("ratio decreasing without slowing down at the grid end; constant may not persist");
    }
    const double log_c = *it - allowance;
    r.estimate = std::exp(log_c);
    r.evidence = {{constant, std::exp(log_c)},
                  {std::string("log_") + constant, log_c},
                  {"x_at_min", xs[std::size_t(it - log_ratio.begin())]},
                  {"end_log_change", end_change},
                  {"previous_decade_log_change", prev_change},
                  {"extrapolation_allowance", allowance},
                  {"noise_floor", noise},
                  {"x0", x0},
                  {"grid_hi", xs.back()}};
    return r;
}

// Rounding floor of a log-ratio built from ln(1 - F(x)) on the grid.
double ratio_noise(const DistributionSpec& d, const std::vector<double>& xs) {
    double scale = 1.0;
    for (double x : xs) {
        const double lt = log_tail(d, x);
        if (std::isfinite(lt)) scale = std::max(scale, std::fabs(lt));
    }
    return 1e-9 + 1e-14 * scale;
}

std::string rule_det(SupportClass s) {
    switch (s) {
        case SupportClass::Stieltjes: return "Theorem 5";
        case SupportClass::Hamburger: return "Theorem 8";
        case SupportClass::Mixed: return "Theorem 8 (mixed-case analogue)";
    }
    return "";
}

std::string rule_indet(SupportClass s) {
    switch (s) {
        case SupportClass::Stieltjes: return "Theorem 7";
        case SupportClass::Hamburger: return "Theorem 10";
        case SupportClass::Mixed: return "Theorem 11";
    }
    return "";
}

const char* kMixedCaveat =
    "mixed product: the threshold-1 determinacy rule is the even-moment argument carried over "
    "from the real-line case, not a separately stated theorem";

// Natural length scale of a factor: where alpha x^beta reaches 1 for GG and
// DGG, 2 mu^2 / lambda for IG. Rescaling X by c rescales every side-condition
// threshold by c, so the x0 search starts at cfg.x0 times this scale.
double natural_scale(const DistributionSpec& d) {
    if (d.family() == Family::IG) return 2.0 * d.mu() * d.mu() / d.lambda();
    return std::pow(d.alpha(), -1.0 / d.beta());
}

struct FactorSearch {
    double x0 = 0.0;
    bool holds = false;
    std::vector<CriterionReport> reports;
};

// Doubling search for the first x0 at which every check in `run` holds.
// Each factor is searched on its own grid: a common far-out grid loses all
// precision on factors with large alpha x^beta there.
template <class Run>
FactorSearch search_factor(const DistributionSpec& f, const DecisionConfig& cfg, Run run) {
    FactorSearch s;
    const double start = cfg.x0 * std::max(1.0, natural_scale(f));
    for (int j = 0; j <= cfg.x0_search_steps; ++j) {
        s.x0 = start * std::ldexp(1.0, j);
        s.reports = run(f, s.x0);
        s.holds = std::all_of(s.reports.begin(), s.reports.end(),
                              [](const CriterionReport& r) { return r.status == Status::Holds; });
        if (s.holds) break;
    }
    return s;
}

struct SideAttempt {
    double x0 = 0.0;
    std::vector<CriterionReport> reports;
    std::vector<std::string> failed;
    std::vector<std::size_t> decreasing;  // indices of factors verified decreasing
};

// Deterministic choice among verified decreasing factors: smallest name.
std::size_t pick_decreasing(const ProductSpec& p, const std::vector<std::size_t>& candidates) {
    return *std::min_element(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
        return p.factors()[a].describe() < p.factors()[b].describe();
    });
}

// A bound verified on [x0_i, inf) holds on every later tail, so the common
// threshold is the largest per-factor one.
SideAttempt check_side_conditions(const ProductSpec& p, const DecisionConfig& cfg) {
    SideAttempt a;
    a.x0 = cfg.x0;
    const bool mixed = p.support_class() == SupportClass::Mixed;
    std::vector<double> dec_x0(p.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& f = p.factors()[i];
        auto bounds = search_factor(f, cfg, [&](const DistributionSpec& d, double x0) {
            return std::vector<CriterionReport>{verify_hazard_bound(d, x0, cfg), verify_tail_bound(d, x0, cfg)};
        });
        if (bounds.reports[0].status != Status::Holds) a.failed.push_back("hazard bound for " + f.describe());
        if (bounds.reports[1].status != Status::Holds) a.failed.push_back("tail bound for " + f.describe());
        a.x0 = std::max(a.x0, bounds.x0);
        for (auto& r : bounds.reports) a.reports.push_back(std::move(r));
        if (mixed && !f.real_valued()) continue;
        auto dec = search_factor(f, cfg, [&](const DistributionSpec& d, double x0) {
            return std::vector<CriterionReport>{verify_decreasing(d, x0, cfg)};
        });
        if (dec.holds) {
            a.decreasing.push_back(i);
            dec_x0[i] = dec.x0;
        }
        a.reports.push_back(std::move(dec.reports[0]));
    }
    if (a.decreasing.empty()) {
        a.failed.push_back(mixed ? "decreasing density among the real-valued factors"
                                 : "decreasing density for at least one factor");
    } else {
        // Only the factor picked for the split needs its decreasing threshold.
        a.decreasing = {pick_decreasing(p, a.decreasing)};
        a.x0 = std::max(a.x0, dec_x0[a.decreasing.front()]);
    }
    return a;
}

void indeterminacy_route(const ProductSpec& p, const DecisionConfig& cfg, Verdict& v) {
    v.rule = rule_indet(p.support_class());
    SideAttempt attempt = check_side_conditions(p, cfg);
    v.x0 = attempt.x0;
    for (auto& r : attempt.reports) v.side_conditions.push_back(std::move(r));
    if (!attempt.failed.empty()) {
        v.failed_conditions = attempt.failed;
        std::ostringstream os;
        os << "side conditions searched for x0 up to " << cfg.x0 << " * 2^" << cfg.x0_search_steps
           << " times each factor's natural scale";
        v.caveats.push_back(os.str());
        v.conclusion = Conclusion::Inconclusive;
        return;
    }

    // Split order: canonical (sorted) factors, the chosen decreasing factor last.
    std::vector<std::size_t> order(p.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto by_name = [&](std::size_t a, std::size_t b) {
        return p.factors()[a].describe() < p.factors()[b].describe();
    };
    const std::size_t last = attempt.decreasing.front();
    std::sort(order.begin(), order.end(), by_name);
    order.erase(std::find(order.begin(), order.end(), last));
    order.push_back(last);
    v.decreasing_factor = p.factors()[last].describe();

    std::vector<double> betas;
    std::vector<TailShape> shapes;
    for (std::size_t i : order) {
        shapes.push_back(native_tail_shape(p.factors()[i]));
        betas.push_back(shapes.back().beta);
        v.theta_factors.push_back(p.factors()[i].describe());
    }
    const MomentCase kase = p.moment_case();
    ThetaSplit split;
    try {
        split = theta_split(betas, kase);
    } catch (const InfeasibleSplit& e) {
        v.failed_conditions.push_back("theta split: " + e.inequality());
        v.conclusion = Conclusion::Inconclusive;
        return;
    }
    v.thetas = split.thetas;

    // Krein quantity of the exponential part of the product-density lower
    // bound exp(-sum alpha_i x^(theta_i beta_i)), from x_theta on.
    std::size_t doubling = p.size() - 1;
    if (p.support_class() == SupportClass::Mixed) {
        const auto real = std::size_t(std::count_if(p.factors().begin(), p.factors().end(),
                                                    [](const DistributionSpec& d) { return d.real_valued(); }));
        doubling = real - 1;
    }
    const double theta_min = *std::min_element(split.thetas.begin(), split.thetas.end());
    const double log_x_theta = (double(doubling) * std::numbers::ln2 + std::log(*v.x0)) / theta_min;
    if (log_x_theta > 300.0) {
        v.failed_conditions.push_back("Krein lower limit x_theta out of floating range");
        v.conclusion = Conclusion::Inconclusive;
        return;
    }
    const auto thetas = split.thetas;
    auto envelope = [shapes, thetas](double x) {
        double s = 0.0;
        for (std::size_t i = 0; i < shapes.size(); ++i) {
            s -= shapes[i].alpha * std::pow(std::fabs(x), thetas[i] * shapes[i].beta);
        }
        return s;
    };
    const double krein_lo = std::max(1.0, std::exp(log_x_theta));
    auto krein = krein_quantity(envelope, kase, cfg.krein, krein_lo);
    if (krein.status == Status::Inconclusive) {
        // Exponents theta_i beta_i close to the bound decay slowly; a longer
        // ladder lets the slowest power term dominate the fit.
        krein = krein_quantity(envelope, kase, cfg.krein.doubled(), krein_lo);
        krein.notes.push_back("classified on the doubled truncation schedule after the first ladder was unsettled");
    }
    krein.subject = "theta-split lower-bound envelope";
    krein.notes.push_back(
        "the power and constant factors of the envelope add a finite amount to the Krein integral");
    if (krein.status != Status::Holds) v.failed_conditions.push_back("Krein quantity of the envelope");
    v.side_conditions.push_back(std::move(krein));
    v.conclusion = v.failed_conditions.empty() ? Conclusion::Indeterminate : Conclusion::Inconclusive;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

}  // namespace

std::string to_string(Conclusion c) {
    switch (c) {
        case Conclusion::Determinate: return "M-det";
        case Conclusion::Indeterminate: return "M-indet";
        case Conclusion::Inconclusive: return "inconclusive";
    }
    return "?";
}

double factor_exponent(const DistributionSpec& d) {
    return d.family() == Family::IG ? 1.0 : 1.0 / d.beta();
}

std::optional<Rational> exact_factor_exponent(const DistributionSpec& d) {
    if (d.family() == Family::IG) return Rational(1);
    if (d.beta_param().exact) return Rational(1) / *d.beta_param().exact;
    return std::nullopt;
}

TailShape native_tail_shape(const DistributionSpec& d) {
    if (d.family() == Family::IG) {
        return {d.lambda() / (2.0 * d.mu() * d.mu()), 1.0, -1.5};
    }
    return {d.alpha(), d.beta(), d.gamma() - d.beta()};
}

CriterionReport verify_hazard_bound(const DistributionSpec& d, double x0, const DecisionConfig& cfg) {
    const auto xs = side_grid(x0, cfg);
    std::vector<double> log_ratio;
    for (double x : xs) {
        double v = kNegInf;
        try {
            v = std::log(x) + log_hazard(d, x);
        } catch (const std::domain_error&) {
        }
        log_ratio.push_back(v);
    }
    auto r = lower_bound_report(Criterion::HazardBound, d, x0, xs, log_ratio, "A", ratio_noise(d, xs));
    r.notes.push_back("checks f(x)/(1-F(x)) >= A/x for x >= x0");
    return r;
}

CriterionReport verify_tail_bound(const DistributionSpec& d, double x0, const DecisionConfig& cfg) {
    const auto xs = side_grid(x0, cfg);
    const auto shape = native_tail_shape(d);
    std::vector<double> log_ratio;
    for (double x : xs) {
        log_ratio.push_back(log_tail(d, x) - shape.gamma * std::log(x) + shape.alpha * std::pow(x, shape.beta));
    }
    auto r = lower_bound_report(Criterion::TailBound, d, x0, xs, log_ratio, "B", ratio_noise(d, xs));
    r.evidence.push_back({"alpha", shape.alpha});
    r.evidence.push_back({"beta", shape.beta});
    r.evidence.push_back({"gamma", shape.gamma});
    r.notes.push_back("checks 1-F(x) >= B x^gamma exp(-alpha x^beta) for x >= x0");
    return r;
}

CriterionReport verify_decreasing(const DistributionSpec& d, double x0, const DecisionConfig& cfg) {
    const auto xs = side_grid(x0, cfg);
    std::vector<double> L;
    for (double x : xs) L.push_back(lin_L(d, x));
    CriterionReport r;
    r.criterion = Criterion::DecreasingDensity;
    r.subject = d.describe();
    r.estimate = *std::min_element(L.begin(), L.end());
    r.evidence = {{"L_min", r.estimate}, {"L_last", L.back()}, {"x0", x0}, {"grid_hi", xs.back()}};
    const bool positive = r.estimate > 0.0;
    const bool rising = L.back() >= L[L.size() - 2];
    r.status = positive && rising ? Status::Holds : Status::Fails;
    r.notes.push_back(positive ? "L_f > 0 on the grid, so f' < 0" : "L_f <= 0 somewhere on the grid");
    if (!rising) r.notes.push_back("L_f falling at the grid end");
    return r;
}

Verdict decide_single(const DistributionSpec& d, const DecisionConfig& cfg) {
    Verdict v;
    const bool stieltjes = d.moment_case() == MomentCase::Stieltjes;
    v.support = stieltjes ? SupportClass::Stieltjes : SupportClass::Hamburger;
    v.threshold = stieltjes ? 2.0 : 1.0;
    v.exponents = {make_exponent(d)};
    const int side = compare_to_threshold(v, cfg.boundary_band);

    const auto seq = LogMomentSequence::analytic(d, cfg.horizon);
    auto growth = growth_exponent(seq, cfg.criteria);
    growth.subject = d.describe();
    const Status growth_status = growth.status;
    v.side_conditions.push_back(std::move(growth));

    if (side <= 0) {
        v.rule = stieltjes ? "Theorem 1" : "Theorem 3";
        v.citations = {stieltjes ? "Lemma 1" : "Lemma 2", stieltjes ? "Corollary 1" : "Corollary 3"};
        if (d.family() == Family::IG) v.citations = {"Lemma 1"};
        auto moment_bound = stieltjes ? hardy_check(seq, cfg.criteria) : cramer_check(seq, cfg.criteria);
        moment_bound.subject = d.describe();
        if (moment_bound.status != Status::Holds) {
            v.caveats.push_back(std::string(stieltjes ? "Hardy" : "Cramer") +
                                " check did not confirm the bound on the finite horizon");
        }
        v.side_conditions.push_back(std::move(moment_bound));
        if (side == 0) {
            v.failed_conditions.push_back("exponent sum within the floating-point band of the threshold");
            v.conclusion = Conclusion::Inconclusive;
        } else {
            v.conclusion = Conclusion::Determinate;
        }
        return v;
    }

    v.rule = stieltjes ? "Theorem 2" : "Theorem 4";
    v.citations = {stieltjes ? "Corollary 1" : "Corollary 3"};
    auto carleman = carleman_quantity(seq, cfg.criteria);
    carleman.subject = d.describe();
    v.side_conditions.push_back(std::move(carleman));
    // L_f is scale-equivariant; start its window at the factor's own scale.
    const double l_x0 = cfg.x0 * std::max(1.0, natural_scale(d));
    v.x0 = l_x0;
    auto cond_l = condition_L_check(d, l_x0);
    if (growth_status != Status::Fails) v.failed_conditions.push_back("numeric growth exponent above threshold");
    if (cond_l.status != Status::Holds) v.failed_conditions.push_back("Condition L");
    v.side_conditions.push_back(std::move(cond_l));
    if (!stieltjes) v.caveats.push_back("density is symmetric, as required on the real line");
    v.conclusion = v.failed_conditions.empty() ? Conclusion::Indeterminate : Conclusion::Inconclusive;
    return v;
}

Verdict decide_product(const ProductSpec& p, const DecisionConfig& cfg) {
    if (p.size() == 1) return decide_single(p.factors().front(), cfg);

    Verdict v;
    v.support = p.support_class();
    v.threshold = v.support == SupportClass::Stieltjes ? 2.0 : 1.0;
    for (const auto& f : p.factors()) v.exponents.push_back(make_exponent(f));
    const int side = compare_to_threshold(v, cfg.boundary_band);
    v.citations = corollary_citations(p);

    auto growth = growth_exponent(LogMomentSequence::product(p, cfg.horizon), cfg.criteria, v.threshold);
    growth.subject = p.describe();
    v.side_conditions.push_back(std::move(growth));

    if (side <= 0) {
        v.rule = rule_det(v.support);
        if (v.support == SupportClass::Mixed) v.caveats.push_back(kMixedCaveat);
        if (side == 0) {
            v.failed_conditions.push_back("exponent sum within the floating-point band of the threshold");
            v.conclusion = Conclusion::Inconclusive;
        } else {
            v.conclusion = Conclusion::Determinate;
        }
        return v;
    }
    indeterminacy_route(p, cfg, v);
    return v;
}

Verdict ratio_route(const ProductSpec& p, const DecisionConfig& cfg) {
    Verdict v;
    v.support = p.support_class();
    v.threshold = v.support == SupportClass::Stieltjes ? 2.0 : 1.0;
    for (const auto& f : p.factors()) v.exponents.push_back(make_exponent(f));
    compare_to_threshold(v, cfg.boundary_band);

    const Parity parity = v.support == SupportClass::Stieltjes ? Parity::AllK : Parity::EvenOnly;
    double sum = 0.0;
    for (const auto& f : p.factors()) {
        auto r = ratio_rate(LogMomentSequence::analytic(f, cfg.horizon, parity), cfg.criteria);
        r.subject = f.describe();
        if (r.evidence_value("drift") > cfg.criteria.trend_tolerance) {
            v.failed_conditions.push_back("stable ratio rate for " + f.describe());
        }
        sum += r.estimate;
        v.side_conditions.push_back(std::move(r));
    }
    v.ratio_sum = sum;
    const double limit = 2.0 + cfg.ratio_slack * double(p.size());
    switch (v.support) {
        case SupportClass::Stieltjes:
            v.rule = "Theorem 6";
            v.citations = {"Remark 1"};
            break;
        case SupportClass::Hamburger:
            v.rule = "Theorem 9";
            v.citations = {"Remark 4"};
            break;
        case SupportClass::Mixed:
            v.rule = "Theorem 9 (mixed-case analogue)";
            v.citations = {"Remark 4"};
            v.caveats.push_back(kMixedCaveat);
            break;
    }
    std::ostringstream os;
    os << "ratio-rate sum compared with 2 + " << cfg.ratio_slack << " per factor (estimator precision)";
    v.caveats.push_back(os.str());
    if (!(sum <= limit)) v.failed_conditions.push_back("sum of ratio rates <= 2");
    v.conclusion = v.failed_conditions.empty() ? Conclusion::Determinate : Conclusion::Inconclusive;
    if (v.conclusion == Conclusion::Inconclusive) {
        v.caveats.push_back("the ratio route cannot establish indeterminacy");
    }
    return v;
}

std::string explain(const Verdict& v) {
    std::ostringstream os;
    os << "conclusion: " << to_string(v.conclusion) << '\n';
    os << "rule: " << v.rule << '\n';
    if (!v.citations.empty()) {
        os << "citations:";
        for (const auto& c : v.citations) os << ' ' << c << ';';
        os << '\n';
    }
    os << "support: " << to_string(v.support) << '\n';
    os << "exponents:\n";
    for (const auto& e : v.exponents) {
        os << "  " << e.factor << ": a = " << fmt(e.exponent);
        if (e.exact) os << " (exact " << to_string(*e.exact) << ')';
        os << '\n';
    }
    os << "exponent sum: " << fmt(v.exponent_sum);
    if (v.exponent_sum_exact) os << " (exact " << to_string(*v.exponent_sum_exact) << ')';
    const char* relation = v.exponent_sum <= v.threshold ? " <= " : " > ";
    if (v.exponent_sum_exact) relation = *v.exponent_sum_exact <= Rational(int(v.threshold)) ? " <= " : " > ";
    os << relation << "threshold " << fmt(v.threshold) << '\n';
    if (v.ratio_sum) os << "ratio-rate sum: " << fmt(*v.ratio_sum) << '\n';
    if (v.x0) os << "x0: " << fmt(*v.x0) << '\n';
    if (!v.decreasing_factor.empty()) os << "decreasing density: " << v.decreasing_factor << '\n';
    if (!v.thetas.empty()) {
        os << "theta split:\n";
        for (std::size_t i = 0; i < v.thetas.size(); ++i) {
            os << "  " << v.theta_factors[i] << ": theta = " << fmt(v.thetas[i]) << '\n';
        }
    }
    os << "side conditions:\n";
    for (const auto& r : v.side_conditions) {
        os << "  [" << to_string(r.criterion) << ']';
        if (!r.subject.empty()) os << ' ' << r.subject;
        os << ": " << to_string(r.status) << " (estimate " << fmt(r.estimate) << ")\n";
        for (const auto& [name, value] : r.evidence) os << "      " << name << " = " << fmt(value) << '\n';
        for (const auto& note : r.notes) os << "      note: " << note << '\n';
    }
    if (!v.failed_conditions.empty()) {
        os << "failed conditions:\n";
        for (const auto& f : v.failed_conditions) os << "  - " << f << '\n';
    }
    if (!v.caveats.empty()) {
        os << "caveats:\n";
        for (const auto& c : v.caveats) os << "  - " << c << '\n';
    }
    return os.str();
}

}  // namespace mdet
