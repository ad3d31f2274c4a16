#include "mdet/criteria.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "mdet/quadrature.hpp"

namespace mdet {

namespace {

constexpr int kMinHorizon = 40;

Status band_status(double estimate, double threshold, double tol) {
    if (estimate < threshold - tol) return Status::Holds;
    if (estimate > threshold + tol) return Status::Fails;
    return Status::Inconclusive;
}

// Least-squares coefficients for rows of `basis(x)` against y.
template <typename Basis>
Eigen::VectorXd least_squares(const std::vector<double>& xs, const std::vector<double>& ys, int columns,
                              Basis basis) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(xs.size()), columns);
    Eigen::VectorXd b(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto row = basis(xs[i]);
        for (int c = 0; c < columns; ++c) a(Eigen::Index(i), c) = row[c];
        b(Eigen::Index(i)) = ys[i];
    }
    return a.colPivHouseholderQr().solve(b);
}

// Coefficient of n ln n in ln m_n ~ a n ln n + b n + c ln n + d, fitted on
// entries [lo, hi) of the sequence.
double stirling_fit(const LogMomentSequence& s, std::size_t lo, std::size_t hi) {
    std::vector<double> ns, ys;
    for (std::size_t i = lo; i < hi; ++i) {
        ns.push_back(s.orders()[i]);
        ys.push_back(s.values()[i]);
    }
    const auto coef = least_squares(ns, ys, 4, [](double n) {
        return std::array<double, 4>{n * std::log(n), n, std::log(n), 1.0};
    });
    return coef(0);
}

void require_horizon(const LogMomentSequence& s) {
    if (s.horizon() < kMinHorizon) {
        throw std::invalid_argument("moment horizon K must be at least 40");
    }
}

// Successive log-ratios d_k = ln m_{k+1} - ln m_k (all-k) or
// ln m_{2(k+1)} - ln m_{2k} (even-only), indexed by the k in (k+1)^r.
struct RatioSeries {
    std::vector<double> ks;
    std::vector<double> log_ratios;
};

RatioSeries ratio_series(const LogMomentSequence& s) {
    RatioSeries r;
    const auto& v = s.values();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        r.ks.push_back(double(i + 1));  // k = i+1 in both parities
        r.log_ratios.push_back(v[i + 1] - v[i]);
    }
    return r;
}

double ratio_fit(const RatioSeries& r, std::size_t lo, std::size_t hi) {
    std::vector<double> ks(r.ks.begin() + long(lo), r.ks.begin() + long(hi));
    std::vector<double> ys(r.log_ratios.begin() + long(lo), r.log_ratios.begin() + long(hi));
    const auto coef = least_squares(ks, ys, 3, [](double k) {
        return std::array<double, 3>{std::log(k + 1.0), 1.0, 1.0 / (k + 1.0)};
    });
    return coef(0);
}

// Shared body of the Hardy and Cramer checks: s_k = (ln m_{2k}' - ln (2k)!) / k
// where m' is m_k (Hardy) or m_{2k} (Cramer) and k runs over 1..K.
CriterionReport factorial_domination(Criterion which, const std::vector<double>& log_moments,
                                     const CriteriaConfig& cfg) {
    const std::size_t n = log_moments.size();
    std::vector<double> s(n), logk(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = double(i + 1);
        s[i] = (log_moments[i] - std::lgamma(2.0 * k + 1.0)) / k;
        logk[i] = std::log(k);
    }
    const std::size_t half = n / 2;
    const double sup_all = *std::max_element(s.begin(), s.end());
    const double sup_head = *std::max_element(s.begin(), s.begin() + long(half));
    const double sup_tail = *std::max_element(s.begin() + long(half), s.end());

    std::vector<double> xs(logk.begin() + long(half), logk.end());
    std::vector<double> ys(s.begin() + long(half), s.end());
    const double slope = least_squares(xs, ys, 2, [](double x) {
        return std::array<double, 2>{x, 1.0};
    })(0);

    CriterionReport r;
    r.criterion = which;
    r.estimate = std::exp(sup_all);
    r.evidence = {{"c0_estimate", std::exp(sup_all)},
                  {"log_c0_estimate", sup_all},
                  {"tail_slope_vs_log_k", slope},
                  {"sup_first_half", sup_head},
                  {"sup_second_half", sup_tail}};
    if (slope > cfg.tolerance) {
        r.status = Status::Fails;
        r.notes.push_back("(ln m - ln (2k)!)/k grows like a positive multiple of ln k: no c0 exists");
    } else if (slope < -cfg.tolerance || sup_tail <= sup_head + cfg.tolerance) {
        r.status = Status::Holds;
        r.notes.push_back("c0 estimate is the supremum over the stored horizon");
    } else {
        r.status = Status::Inconclusive;
        r.notes.push_back("boundary growth with a slowly varying factor; boundedness not settled");
    }
    return r;
}

}  // namespace

std::string to_string(Criterion c) {
    switch (c) {
        case Criterion::GrowthExponent: return "GrowthExponent";
        case Criterion::RatioRate: return "RatioRate";
        case Criterion::Hardy: return "Hardy";
        case Criterion::Cramer: return "Cramer";
        case Criterion::Carleman: return "Carleman";
        case Criterion::Krein: return "Krein";
        case Criterion::ConditionL: return "ConditionL";
        case Criterion::HazardBound: return "HazardBound";
        case Criterion::TailBound: return "TailBound";
        case Criterion::DecreasingDensity: return "DecreasingDensity";
    }
    return "?";
}

std::string to_string(Status s) {
    switch (s) {
        case Status::Holds: return "holds";
        case Status::Fails: return "fails";
        case Status::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::string to_string(Parity p) { return p == Parity::AllK ? "all-k" : "even-only"; }

double CriterionReport::evidence_value(const std::string& name) const {
    for (const auto& [key, value] : evidence) {
        if (key == name) return value;
    }
    throw std::out_of_range("no evidence named " + name);
}

CriterionReport growth_exponent(const LogMomentSequence& s, const CriteriaConfig& cfg, double threshold) {
    require_horizon(s);
    if (threshold <= 0.0) threshold = s.parity() == Parity::AllK ? 2.0 : 1.0;
    const std::size_t k = std::size_t(s.horizon());
    const double tail_fit = stirling_fit(s, k / 2 - 1, k);
    const double mid_fit = stirling_fit(s, k / 4 - 1, k / 2);

    double literal = -std::numeric_limits<double>::infinity();
    for (std::size_t i = k / 2 - 1; i < k; ++i) {
        const double n = s.orders()[i];
        literal = std::max(literal, s.values()[i] / (n * std::log(n)));
    }

    CriterionReport r;
    r.criterion = Criterion::GrowthExponent;
    r.estimate = tail_fit;
    r.evidence = {{"fitted_exponent", tail_fit},
                  {"fitted_exponent_previous_window", mid_fit},
                  {"drift", std::fabs(tail_fit - mid_fit)},
                  {"literal_window_max", literal},
                  {"threshold", threshold}};
    r.status = band_status(tail_fit, threshold, cfg.tolerance);
    if (std::fabs(tail_fit - mid_fit) > cfg.trend_tolerance) {
        r.status = Status::Inconclusive;
        r.notes.push_back("fitted exponent still drifting between tail windows");
    }
    if (tail_fit > threshold && tail_fit <= threshold + cfg.tolerance) {
        r.notes.push_back("exponent just above threshold: refined scales such as k ln k are not evaluated");
    }
    return r;
}

CriterionReport ratio_rate(const LogMomentSequence& s, const CriteriaConfig& cfg) {
    require_horizon(s);
    const auto series = ratio_series(s);
    const std::size_t n = series.ks.size();
    const double tail_fit = ratio_fit(series, n / 2, n);
    const double mid_fit = ratio_fit(series, n / 4, n / 2);

    double literal = -std::numeric_limits<double>::infinity();
    for (std::size_t i = n / 2; i < n; ++i) {
        literal = std::max(literal, series.log_ratios[i] / std::log(series.ks[i] + 1.0));
    }

    CriterionReport r;
    r.criterion = Criterion::RatioRate;
    r.estimate = tail_fit;
    r.evidence = {{"fitted_rate", tail_fit},
                  {"fitted_rate_previous_window", mid_fit},
                  {"drift", std::fabs(tail_fit - mid_fit)},
                  {"literal_window_max", literal},
                  {"threshold", 2.0}};
    r.status = band_status(tail_fit, 2.0, cfg.tolerance);
    if (std::fabs(tail_fit - mid_fit) > cfg.trend_tolerance) {
        r.status = Status::Inconclusive;
        r.notes.push_back("fitted rate still drifting between tail windows");
    }
    if (s.parity() == Parity::EvenOnly) r.notes.push_back("even-step rate m_{2(k+1)}/m_{2k}");
    return r;
}

CriterionReport hardy_check(const LogMomentSequence& s, const CriteriaConfig& cfg) {
    require_horizon(s);
    if (s.parity() != Parity::AllK) {
        throw std::invalid_argument("Hardy check needs moments of every order");
    }
    return factorial_domination(Criterion::Hardy, s.values(), cfg);
}

CriterionReport cramer_check(const LogMomentSequence& s, const CriteriaConfig& cfg) {
    require_horizon(s);
    std::vector<double> even;
    for (std::size_t i = 0; i < s.orders().size(); ++i) {
        if (s.orders()[i] % 2 == 0) even.push_back(s.values()[i]);
    }
    if (even.size() < std::size_t(kMinHorizon / 2)) {
        throw std::invalid_argument("Cramer check needs at least 20 even moments");
    }
    return factorial_domination(Criterion::Cramer, even, cfg);
}

CriterionReport carleman_quantity(const LogMomentSequence& s, const CriteriaConfig& cfg) {
    require_horizon(s);
    const bool stieltjes = s.parity() == Parity::AllK;
    const auto growth = growth_exponent(s, cfg);

    CriterionReport r;
    r.criterion = Criterion::Carleman;
    double partial = 0.0;
    int next_mark = 1;
    for (std::size_t i = 0; i < s.orders().size(); ++i) {
        const double k = double(i + 1);
        partial += std::exp(-s.values()[i] / (2.0 * k));
        if (int(i + 1) == next_mark || i + 1 == s.orders().size()) {
            r.ladder.push_back(partial);
            next_mark *= 2;
        }
    }
    r.estimate = partial;
    r.evidence = {{"partial_sum", partial},
                  {"fitted_exponent", growth.estimate},
                  {"threshold", growth.evidence_value("threshold")}};
    switch (growth.status) {
        case Status::Holds:
            r.status = Status::Holds;
            r.notes.push_back("series diverges: Carleman's condition holds, distribution is determinate");
            break;
        case Status::Fails:
            r.status = Status::Fails;
            r.notes.push_back("series converges; this is only a necessary condition for indeterminacy");
            break;
        case Status::Inconclusive:
            r.status = Status::Inconclusive;
            r.notes.push_back("growth exponent at the convergence boundary");
            break;
    }
    r.notes.push_back(stieltjes ? "Stieltjes form: sum m_k^(-1/(2k))" : "Hamburger form: sum m_2k^(-1/(2k))");
    return r;
}

CriterionReport krein_quantity(const LogDensityFn& log_density, MomentCase kase,
                               const KreinSchedule& schedule, double x0) {
    if (!(x0 > 0.0)) throw std::invalid_argument("Krein lower limit must be positive");
    if (schedule.rungs < 6 || !(schedule.factor > 1.0) || !(schedule.first > 1.0)) {
        throw std::invalid_argument("Krein schedule needs >= 6 increasing rungs");
    }
    const bool stieltjes = kase == MomentCase::Stieltjes;
    auto integrand = [&](double x) {
        const double lf = log_density(stieltjes ? x * x : x);
        if (!std::isfinite(lf)) {
            std::ostringstream os;
            os << "density vanishes at x = " << (stieltjes ? x * x : x)
               << " inside the Krein tail region; criterion inapplicable";
            throw std::domain_error(os.str());
        }
        return (stieltjes ? 1.0 : 2.0) * -lf / (1.0 + x * x);
    };

    std::vector<double> uppers, increments;
    double lo = x0, total = 0.0;
    CriterionReport r;
    r.criterion = Criterion::Krein;
    for (int j = 0; j < schedule.rungs; ++j) {
        const double hi = x0 * schedule.first * std::pow(schedule.factor, j);
        const double piece = quadrature::integrate(integrand, lo, hi, 1e-10);
        total += piece;
        uppers.push_back(hi);
        increments.push_back(piece);
        r.ladder.push_back(total);
        lo = hi;
    }
    r.estimate = total;

    // Rung increments beyond the first (which covers a differently shaped piece).
    const std::size_t n = increments.size();
    auto last = [&](std::size_t count) { return n - count; };
    const std::size_t start4 = last(4);

    bool non_decreasing = true, geometric = true;
    for (std::size_t j = start4; j + 1 < n; ++j) {
        if (increments[j + 1] < increments[j]) non_decreasing = false;
        if (!(increments[j] > 0.0) || !(increments[j + 1] < 0.5 * increments[j])) geometric = false;
    }

    // Local decay rates from the last 6 rungs: q against ln T and p = q * ln T
    // (the exponent of a (ln T)^-p decay).
    auto local_q = [&](std::size_t from, std::size_t to) {
        std::vector<double> us, ys;
        for (std::size_t j = from; j < to; ++j) {
            if (!(increments[j] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
            us.push_back(std::log(std::sqrt(uppers[j] * (j ? uppers[j - 1] : x0))));
            ys.push_back(std::log(increments[j]));
        }
        return -least_squares(us, ys, 2, [](double u) { return std::array<double, 2>{u, 1.0}; })(0);
    };
    const double q_last = local_q(last(6), n);
    const double u_mid = std::log(uppers[n - 4]);
    const double p_last = q_last * u_mid;
    const double q_prev = n >= 13 ? local_q(last(12), last(6)) : std::numeric_limits<double>::quiet_NaN();
    const bool power_law = std::isfinite(q_prev) && q_last > 0.01 &&
                           std::fabs(q_last - q_prev) <= 0.25 * q_last;

    r.evidence = {{"ladder_final", total},
                  {"last_increment", increments.back()},
                  {"last_increment_ratio", increments[n - 1] / increments[n - 2]},
                  {"power_decay_rate", q_last},
                  {"power_decay_rate_previous", q_prev},
                  {"log_decay_exponent", p_last},
                  {"lower_limit", x0},
                  {"top_truncation", uppers.back()}};

    if (non_decreasing) {
        r.status = Status::Fails;
        r.notes.push_back("ladder increments are non-decreasing: integral diverges");
    } else if (geometric) {
        r.status = Status::Holds;
        r.notes.push_back("ladder increments decay geometrically");
    } else if (!std::isfinite(q_last)) {
        r.status = Status::Inconclusive;
        r.notes.push_back("ladder increments change sign on the tail");
    } else if (p_last > 1.25) {
        r.status = Status::Holds;
        r.notes.push_back("increments decay faster than (ln T)^-1.25");
    } else if (power_law) {
        r.status = Status::Holds;
        r.notes.push_back("increments decay like a stable power of T");
    } else if (p_last < 0.75) {
        r.status = Status::Fails;
        r.notes.push_back("increments decay no faster than (ln T)^-0.75: integral diverges");
    } else {
        r.status = Status::Inconclusive;
        r.notes.push_back("increments decay like (ln T)^-1: convergence not settled");
    }
    r.notes.push_back(
        "integrated over the tail from x0; the integrand is bounded on compacts where the density is "
        "positive and continuous, so tail finiteness is equivalent to finiteness of the full integral");
    return r;
}

CriterionReport condition_L_from_values(const std::vector<double>& xs, const std::vector<double>& L) {
    CriterionReport r;
    r.criterion = Criterion::ConditionL;
    const std::size_t n = L.size();
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!std::isfinite(L[i]) || L[i + 1] < L[i] - 1e-9 * std::max(1.0, std::fabs(L[i]))) {
            monotone = false;
        }
    }
    const double rise = L.back() - L.front();

    // Log-log slope of L over the last decade of the grid.
    double slope = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < n; ++i) {
        if (xs[i] >= xs.back() / 10.0 && L[i] > 0.0) {
            lx.push_back(std::log(xs[i]));
            ly.push_back(std::log(L[i]));
        }
    }
    if (lx.size() >= 3) {
        slope = least_squares(lx, ly, 2, [](double x) { return std::array<double, 2>{x, 1.0}; })(0);
    }

    r.estimate = L.back();
    r.evidence = {{"L_first", L.front()},
                  {"L_last", L.back()},
                  {"rise", rise},
                  {"loglog_slope_last_decade", slope},
                  {"x_first", xs.front()},
                  {"x_last", xs.back()}};
    if (!monotone) {
        r.status = Status::Fails;
        r.notes.push_back("L_f is not nondecreasing on the grid");
    } else if (rise > 1e3 || (std::isfinite(slope) && slope >= 0.05)) {
        r.status = Status::Holds;
        r.notes.push_back("L_f increases without bound (power growth)");
    } else if (!std::isfinite(slope) || slope < 0.01) {
        r.status = Status::Fails;
        r.notes.push_back("L_f saturates: bounded limit on the tested range");
    } else {
        r.status = Status::Inconclusive;
        r.notes.push_back("L_f monotone but growth too slow to call unbounded");
    }
    return r;
}

namespace {

std::vector<double> condition_L_grid(double x0) {
    if (!(x0 > 0.0)) throw std::invalid_argument("Condition L needs x0 > 0");
    std::vector<double> xs;
    constexpr int per_decade = 40;
    for (int i = 0; i <= 4 * per_decade; ++i) xs.push_back(x0 * std::pow(10.0, double(i) / per_decade));
    xs.front() *= 1.0 + 1e-9;  // strictly beyond x0
    return xs;
}

}  // namespace

CriterionReport condition_L_check(const DistributionSpec& d, double x0) {
    const auto xs = condition_L_grid(x0);
    std::vector<double> L;
    for (double x : xs) L.push_back(lin_L(d, x));
    auto r = condition_L_from_values(xs, L);
    r.subject = d.describe();
    if (d.moment_case() == MomentCase::Hamburger) r.notes.push_back("density is symmetric about 0");
    return r;
}

CriterionReport condition_L_check(const LogDensityFn& log_density, double x0, MomentCase kase,
                                  bool symmetric) {
    const auto xs = condition_L_grid(x0);
    std::vector<double> L;
    for (double x : xs) {
        const double h = 1e-5 * x;
        L.push_back(-x * (log_density(x + h) - log_density(x - h)) / (2.0 * h));
    }
    auto r = condition_L_from_values(xs, L);
    r.notes.push_back("L_f from central differences of ln f");
    if (kase == MomentCase::Hamburger && !symmetric) {
        r.status = Status::Fails;
        r.notes.push_back("Hamburger case requires a symmetric density");
    }
    return r;
}

}  // namespace mdet
