#include "mdet/verify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "mdet/quadrature.hpp"
#include "mdet/special.hpp"

namespace mdet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double half_line_log_moment(const LogDensityFn& log_density, int k) {
    return quadrature::log_integrate_half_line([&](double x) {
               return log_density(x) + k * std::log(x);
           }).log_value;
}

double mirrored_log_moment(const LogDensityFn& log_density, int k) {
    return half_line_log_moment([&](double x) { return log_density(-x); }, k);
}

LogDensityFn family_density(const DistributionSpec& d) {
    return [d](double x) { return log_density(d, x); };
}

Support family_support(const DistributionSpec& d) {
    return d.real_valued() ? Support::RealLine : Support::HalfLine;
}

}  // namespace

double quadrature_log_abs_moment(const LogDensityFn& log_density, Support support, int k) {
    if (k < 0) throw std::invalid_argument("moment order must be >= 0");
    const double pos = half_line_log_moment(log_density, k);
    if (support == Support::HalfLine) return pos;
    return special::log_add_exp(pos, mirrored_log_moment(log_density, k));
}

double quadrature_moment(const LogDensityFn& log_density, Support support, int k) {
    if (k < 0) throw std::invalid_argument("moment order must be >= 0");
    const double pos = std::exp(half_line_log_moment(log_density, k));
    if (support == Support::HalfLine) return pos;
    const double neg = std::exp(mirrored_log_moment(log_density, k));
    return k % 2 == 0 ? pos + neg : pos - neg;
}

double quadrature_moment(const DistributionSpec& d, int k) {
    return quadrature_moment(family_density(d), family_support(d), k);
}

double quadrature_log_abs_moment(const DistributionSpec& d, int k) {
    return quadrature_log_abs_moment(family_density(d), family_support(d), k);
}

double quadrature_tail(const LogDensityFn& log_density, double x) {
    return std::exp(
        quadrature::log_integrate_half_line([&](double u) { return log_density(x + u); }).log_value);
}

double lognormal_log_density(double x, double mu, double sigma) {
    if (!(x > 0.0)) return kNegInf;
    const double z = (std::log(x) - mu) / sigma;
    return -std::log(x * sigma) - 0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * z * z;
}

double CounterexampleDensity::log_density(double x) const {
    if (kase == MomentCase::Stieltjes) {
        if (!(x > 0.0)) return kNegInf;
        return log_norming - std::sqrt(x) / (1.0 + std::pow(std::fabs(std::log(x)), delta));
    }
    const double ax = std::fabs(x);
    if (ax == 0.0) return log_norming;
    return log_norming - ax / (1.0 + std::pow(std::fabs(std::log(ax)), delta));
}

LogDensityFn CounterexampleDensity::log_density_fn() const {
    return [cd = *this](double x) { return cd.log_density(x); };
}

CounterexampleDensity build_counterexample(MomentCase kase, double delta) {
    if (!(delta > 1.0)) throw std::invalid_argument("counterexample requires delta > 1");
    CounterexampleDensity cd{kase, delta, 0.0};
    cd.log_norming = -quadrature_log_abs_moment(cd.log_density_fn(), cd.support(), 0);
    return cd;
}

GrowthBoundReport verify_growth_bound(const CounterexampleDensity& cd, double a, int kmax) {
    if (kmax < 4 || kmax > 60) throw std::invalid_argument("kmax must lie in 4..60");
    const bool stieltjes = cd.kase == MomentCase::Stieltjes;
    GrowthBoundReport r;
    r.a = a;
    r.kmax = kmax;
    r.threshold = stieltjes ? 2.0 : 1.0;

    const auto logf = cd.log_density_fn();
    for (int k = stieltjes ? 1 : 2; k <= kmax; k += stieltjes ? 1 : 2) {
        try {
            r.log_moments.push_back(quadrature_log_abs_moment(logf, cd.support(), k));
        } catch (const std::exception& e) {
            r.notes.push_back("quadrature failed at k = " + std::to_string(k) + ": " + e.what());
            break;
        }
        r.orders.push_back(k);
        r.last_reliable_k = k;
    }

    r.literal_window_max = kNegInf;
    for (std::size_t i = 0; i < r.orders.size(); ++i) {
        const double k = r.orders[i];
        if (2 * r.orders[i] >= kmax) {
            r.literal_window_max = std::max(r.literal_window_max, r.log_moments[i] / (k * std::log(k)));
        }
    }
    if (r.last_reliable_k < kmax) return r;

    if (!(a > r.threshold)) {
        std::ostringstream os;
        os << "no bound of order k^(bk) with b <= " << r.threshold
           << " exists; ln m_k / (k ln k) on the tail window peaks at " << r.literal_window_max;
        r.notes.push_back(os.str());
        return r;
    }

    // Beyond x0 the exponent dominates: sqrt(x) / (1 + (ln x)^delta) >= x^(1/b),
    // i.e. g(t) = c t - ln(1 + t^delta) >= 0 for t = ln x >= ln x0, with g'
    // increasing past the maximum of delta t^(delta-1) / (1 + t^delta).
    r.b = 0.5 * (r.threshold + a);
    const double c = (stieltjes ? 0.5 : 1.0) - 1.0 / r.b;
    const double t_turn = std::pow(cd.delta - 1.0, 1.0 / cd.delta);
    auto g = [&](double t) { return c * t - std::log1p(std::pow(t, cd.delta)); };
    auto dg = [&](double t) {
        return c - cd.delta * std::pow(t, cd.delta - 1.0) / (1.0 + std::pow(t, cd.delta));
    };
    double t0 = 0.0;
    for (double t = 1.0; t < 1e8; t *= 1.02) {
        if (t >= t_turn && g(t) > 0.0 && dg(t) > 0.0) {
            t0 = t;
            break;
        }
    }
    if (t0 == 0.0) {
        r.notes.push_back("no tail threshold found on the search grid");
        return r;
    }
    r.log_x0 = t0;

    // m_k <= c x0^(k+1)/(k+1) + c b Gamma((k+1) b), doubled on the real line.
    const double log_c = cd.log_norming + (stieltjes ? 0.0 : std::numbers::ln2);
    r.holds = true;
    for (std::size_t i = 0; i < r.orders.size(); ++i) {
        const double k1 = r.orders[i] + 1.0;
        const double bound =
            log_c + special::log_add_exp(k1 * t0 - std::log(k1), std::log(r.b) + std::lgamma(k1 * r.b));
        r.log_bounds.push_back(bound);
        if (r.log_moments[i] > bound) r.holds = false;
    }
    std::ostringstream os;
    os << "f(x) <= c exp(-|x|^(1/b)) for ln|x| >= " << t0 << " with b = " << r.b
       << "; the resulting bound is O(k^(bk)) with b < a";
    r.notes.push_back(os.str());
    if (!r.holds) r.notes.push_back("a quadrature moment exceeds the certified bound");
    return r;
}

ThetaSplit theta_split(const std::vector<double>& betas, MomentCase kase) {
    const bool stieltjes = kase == MomentCase::Stieltjes;
    const std::size_t n = betas.size();
    if (n < 2) throw InfeasibleSplit("n >= 2", "theta split needs at least two factors");
    std::vector<double> bounds;
    for (double beta : betas) {
        if (!(beta > 0.0) || !std::isfinite(beta)) {
            throw InfeasibleSplit("beta_i > 0", "every beta must be positive and finite");
        }
        bounds.push_back(stieltjes ? 1.0 / (2.0 * beta) : 1.0 / beta);
    }
    double head = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) head += bounds[i];
    if (!(head + bounds.back() > 1.0)) {
        const std::string inequality = stieltjes ? "sum_i 1/beta_i > 2" : "sum_i 1/beta_i > 1";
        throw InfeasibleSplit(inequality, "theta split infeasible: hypothesis " + inequality + " violated");
    }

    // s = sum_{i<n} theta_i must lie in (max(0, 1 - b_n), min(1, sum_{i<n} b_i)).
    const double lo = std::max(0.0, 1.0 - bounds.back());
    const double hi = std::min(1.0, head);
    const double s = 0.5 * (lo + hi);

    ThetaSplit split;
    split.kase = kase;
    split.betas = betas;
    double used = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        split.thetas.push_back(s * bounds[i] / head);
        used += split.thetas.back();
    }
    split.thetas.push_back(1.0 - used);
    if (theta_split_margin(split) < kThetaMargin) {
        throw InfeasibleSplit("margin >= 1e-9", "feasible interval too narrow for a split with margin 1e-9");
    }
    return split;
}

double theta_split_margin(const ThetaSplit& split) {
    const bool stieltjes = split.kase == MomentCase::Stieltjes;
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < split.thetas.size(); ++i) {
        const double theta = split.thetas[i];
        const double bound = stieltjes ? 1.0 / (2.0 * split.betas[i]) : 1.0 / split.betas[i];
        margin = std::min({margin, theta, 1.0 - theta, bound - theta});
    }
    return margin;
}

double log_stirling_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("Stirling approximation needs x > 0");
    return 0.5 * std::log(2.0 * std::numbers::pi) + (x - 0.5) * std::log(x) - x;
}

double stirling_gamma(double x) { return std::exp(log_stirling_gamma(x)); }

int McReport::failures() const {
    return int(std::count_if(checks.begin(), checks.end(), [](const MomentCheck& c) { return !c.pass; }));
}

McReport mc_cross_check(const ProductSpec& p, std::uint64_t seed, std::size_t n, int kmax, double tolerance_se) {
    if (kmax < 1 || kmax > 8) throw std::invalid_argument("Monte Carlo kmax must lie in 1..8");
    if (n < 100000) throw std::invalid_argument("Monte Carlo needs n >= 100000 draws");

    std::vector<long double> sum(std::size_t(kmax) + 1, 0.0L), sum_sq(std::size_t(kmax) + 1, 0.0L);
    std::mt19937_64 engine(seed);
    for (std::size_t i = 0; i < n; ++i) {
        double z = 1.0;
        for (const auto& f : p.factors()) z *= draw(f, engine);
        long double power = 1.0L;
        for (int k = 1; k <= kmax; ++k) {
            power *= z;
            sum[std::size_t(k)] += power;
            sum_sq[std::size_t(k)] += power * power;
        }
    }

    McReport r;
    r.seed = seed;
    r.n = n;
    r.tolerance_se = tolerance_se;
    for (int k = 1; k <= kmax; ++k) {
        double log_m = 0.0;
        bool vanishes = false;
        for (const auto& f : p.factors()) {
            const auto lm = log_moment(f, k);
            vanishes = vanishes || lm.vanishes;
            log_m += lm.log_value;
        }
        const long double mean = sum[std::size_t(k)] / n;
        const long double var = std::max(0.0L, sum_sq[std::size_t(k)] / n - mean * mean);
        MomentCheck c;
        c.k = k;
        c.analytic = vanishes ? 0.0 : std::exp(log_m);
        c.empirical = double(mean);
        c.standard_error = double(std::sqrt(var * n / (n - 1)) / std::sqrt(double(n)));
        c.z_score = c.standard_error > 0.0 ? (c.empirical - c.analytic) / c.standard_error : 0.0;
        c.pass = std::fabs(c.empirical - c.analytic) <= tolerance_se * c.standard_error;
        r.checks.push_back(c);
    }
    return r;
}

std::vector<OracleCheck> oracle_cross_check(const DistributionSpec& d, int kmax, double rel_tol) {
    std::vector<OracleCheck> out;
    for (int k = 1; k <= kmax; ++k) {
        OracleCheck c;
        c.factor = d.describe();
        c.k = k;
        const auto lm = log_moment(d, k);
        const double log_abs = quadrature_log_abs_moment(d, k);
        if (lm.vanishes) {
            c.quadrature = quadrature_moment(d, k);
            c.rel_error = std::fabs(c.quadrature) / std::exp(log_abs);
        } else {
            c.analytic = std::exp(lm.log_value);
            c.quadrature = std::exp(log_abs);
            c.rel_error = std::fabs(std::expm1(log_abs - lm.log_value));
        }
        c.pass = c.rel_error < rel_tol;
        out.push_back(c);
    }
    return out;
}

std::vector<FixtureRow> read_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<FixtureRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        FixtureRow row;
        if (!(fields >> row.k >> row.log_moment >> row.tolerance)) {
            throw std::runtime_error("malformed fixture line: " + line);
        }
        rows.push_back(row);
    }
    return rows;
}

void write_fixture(const std::string& path, const std::vector<FixtureRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write fixture " + path);
    out << "k\tlog_moment\ttolerance\n";
    out.precision(16);
    for (const auto& row : rows) {
        out << row.k << '\t' << std::scientific << row.log_moment << '\t' << row.tolerance << '\n';
    }
}

}  // namespace mdet
