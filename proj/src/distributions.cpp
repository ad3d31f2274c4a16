#include "mdet/distributions.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mdet/special.hpp"

namespace mdet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_positive(const Param& p, const char* name) {
    if (!(p.value > 0.0) || !std::isfinite(p.value)) {
        std::ostringstream os;
        os << "parameter '" << name << "' must be strictly positive and finite, got " << p.value;
        throw std::invalid_argument(os.str());
    }
}

std::string format_param(const Param& p) {
    if (p.exact) return to_string(*p.exact);
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p.value);
    return std::string(buf, end);
}

// ln of the GG-shape integral pieces shared by GG and DGG.
double gg_log_norming(double alpha, double beta, double gamma) {
    return std::log(beta) + (gamma / beta) * std::log(alpha) - std::lgamma(gamma / beta);
}

// ln of the upper tail of the GG magnitude, Q(gamma/beta, alpha x^beta).
double gg_log_upper(const DistributionSpec& d, double x) {
    if (x <= 0.0) return 0.0;
    return special::log_gamma_q(d.gamma() / d.beta(), d.alpha() * std::pow(x, d.beta()));
}

double ig_log_tail(double mu, double lambda, double x) {
    if (x <= 0.0) return 0.0;
    // 1 - F(x) = Phi(-a) - exp(2 lambda / mu) Phi(-b)
    //          = phi(a) [R(a) - R(b)]            (R = Mills ratio)
    const double s = std::sqrt(lambda / x);
    const double a = s * (x / mu - 1.0);
    const double b = s * (x / mu + 1.0);
    if (a < 5.0) {
        const double first = special::log_normal_upper_tail(a);
        const double second = 2.0 * lambda / mu + special::log_normal_upper_tail(b);
        return special::log_sub_exp(first, second);
    }
    return special::log_normal_pdf(a) +
           special::log_sub_exp(special::log_mills_ratio(a), special::log_mills_ratio(b));
}

}  // namespace

std::string to_string(Family f) {
    switch (f) {
        case Family::GG: return "GG";
        case Family::DGG: return "DGG";
        case Family::IG: return "IG";
    }
    return "?";
}

std::string to_string(MomentCase c) {
    return c == MomentCase::Stieltjes ? "Stieltjes" : "Hamburger";
}

std::string to_string(SupportClass c) {
    switch (c) {
        case SupportClass::Stieltjes: return "Stieltjes";
        case SupportClass::Hamburger: return "Hamburger";
        case SupportClass::Mixed: return "Mixed";
    }
    return "?";
}

std::optional<Rational> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    auto parse_int = [](std::string_view s, std::int64_t& out) {
        if (s.empty()) return false;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc{} && ptr == s.data() + s.size();
    };
    try {
        if (auto slash = text.find('/'); slash != std::string::npos) {
            std::int64_t num = 0, den = 0;
            if (!parse_int(std::string_view(text).substr(0, slash), num) ||
                !parse_int(std::string_view(text).substr(slash + 1), den) || den == 0) {
                return std::nullopt;
            }
            return Rational(num, den);
        }
        std::string_view s(text);
        bool negative = false;
        if (s.front() == '-' || s.front() == '+') {
            negative = s.front() == '-';
            s.remove_prefix(1);
        }
        const auto dot = s.find('.');
        std::string digits(s.substr(0, dot));
        std::int64_t den = 1;
        if (dot != std::string_view::npos) {
            const auto frac = s.substr(dot + 1);
            if (frac.size() > 15) return std::nullopt;
            digits += frac;
            for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        }
        if (digits.size() > 17) return std::nullopt;
        std::int64_t num = 0;
        if (!parse_int(digits, num)) return std::nullopt;
        return Rational(negative ? -num : num, den);
    } catch (const boost::bad_rational&) {
        return std::nullopt;
    }
}

std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << r.numerator();
    if (r.denominator() != 1) os << '/' << r.denominator();
    return os.str();
}

DistributionSpec::DistributionSpec(Family family, Param p1, Param p2, Param p3)
    : family_(family), p1_(p1), p2_(p2), p3_(p3) {
    switch (family_) {
        case Family::GG:
            log_norming_ = gg_log_norming(alpha(), beta(), gamma());
            break;
        case Family::DGG:
            log_norming_ = gg_log_norming(alpha(), beta(), gamma()) - std::numbers::ln2;
            break;
        case Family::IG:
            log_norming_ = 0.5 * std::log(lambda() / (2.0 * std::numbers::pi));
            break;
    }
}

DistributionSpec DistributionSpec::gg(Param alpha, Param beta, Param gamma) {
    require_positive(alpha, "alpha");
    require_positive(beta, "beta");
    require_positive(gamma, "gamma");
    return {Family::GG, alpha, beta, gamma};
}

DistributionSpec DistributionSpec::dgg(Param alpha, Param beta, Param gamma) {
    require_positive(alpha, "alpha");
    require_positive(beta, "beta");
    require_positive(gamma, "gamma");
    return {Family::DGG, alpha, beta, gamma};
}

DistributionSpec DistributionSpec::ig(Param mu, Param lambda) {
    require_positive(mu, "mu");
    require_positive(lambda, "lambda");
    return {Family::IG, mu, lambda, Param(Rational(1))};
}

DistributionSpec DistributionSpec::exponential(Param rate) {
    require_positive(rate, "rate");
    return gg(rate, Rational(1), Rational(1));
}

DistributionSpec DistributionSpec::chi_square(Param nu) {
    require_positive(nu, "nu");
    const Param shape = nu.exact ? Param(*nu.exact / 2) : Param(nu.value / 2.0);
    return gg(Rational(1, 2), Rational(1), shape);
}

DistributionSpec DistributionSpec::normal() {
    return dgg(Rational(1, 2), Rational(2), Rational(1));
}

DistributionSpec DistributionSpec::half_normal() {
    return gg(Rational(1, 2), Rational(2), Rational(1));
}

std::string DistributionSpec::describe() const {
    std::ostringstream os;
    os << to_string(family_) << '(' << format_param(p1_) << ", " << format_param(p2_);
    if (family_ != Family::IG) os << ", " << format_param(p3_);
    os << ')';
    return os.str();
}

ProductSpec::ProductSpec(std::vector<DistributionSpec> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw std::invalid_argument("a product needs at least one factor");
    std::size_t real_valued = 0;
    for (const auto& f : factors_) real_valued += f.real_valued() ? 1 : 0;
    if (real_valued == 0) {
        support_ = SupportClass::Stieltjes;
    } else if (real_valued == factors_.size()) {
        support_ = SupportClass::Hamburger;
    } else {
        support_ = SupportClass::Mixed;
    }
}

std::string ProductSpec::describe() const {
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) out += " x ";
        out += factors_[i].describe();
    }
    return out;
}

SupportClass support_class(const ProductSpec& p) { return p.support_class(); }

double log_density(const DistributionSpec& d, double x) {
    switch (d.family()) {
        case Family::GG:
            if (x <= 0.0) return kNegInf;
            return d.log_norming() + (d.gamma() - 1.0) * std::log(x) - d.alpha() * std::pow(x, d.beta());
        case Family::DGG: {
            if (x == 0.0 && d.gamma() != 1.0) return kNegInf;
            const double ax = std::fabs(x);
            const double power = d.gamma() == 1.0 ? 0.0 : (d.gamma() - 1.0) * std::log(ax);
            return d.log_norming() + power - d.alpha() * std::pow(ax, d.beta());
        }
        case Family::IG:
            if (x <= 0.0) return kNegInf;
            return d.log_norming() - 1.5 * std::log(x) -
                   d.lambda() * (x - d.mu()) * (x - d.mu()) / (2.0 * d.mu() * d.mu() * x);
    }
    return kNegInf;
}

double log_density_strict(const DistributionSpec& d, double x) {
    const double v = log_density(d, x);
    if (v == kNegInf) {
        std::ostringstream os;
        os << "x = " << x << " is outside the support of " << d.describe();
        throw std::domain_error(os.str());
    }
    return v;
}

LogMoment log_moment(const DistributionSpec& d, int k) {
    if (k < 1) throw std::invalid_argument("moment order must be >= 1");
    switch (d.family()) {
        case Family::DGG:
            if (k % 2 == 1) return {kNegInf, true};
            [[fallthrough]];
        case Family::GG: {
            const double shape = d.gamma() / d.beta();
            return {-(k / d.beta()) * std::log(d.alpha()) + std::lgamma(shape + k / d.beta()) -
                        std::lgamma(shape),
                    false};
        }
        case Family::IG: {
            // E X^k = mu^k sum_{i<k} (k-1+i)! / (i! (k-1-i)!) (mu / (2 lambda))^i
            std::vector<double> terms(static_cast<std::size_t>(k));
            const double log_ratio = std::log(d.mu() / (2.0 * d.lambda()));
            for (int i = 0; i < k; ++i) {
                terms[i] = std::lgamma(k + i) - std::lgamma(i + 1.0) - std::lgamma(double(k - i)) +
                           i * log_ratio;
            }
            return {k * std::log(d.mu()) + special::log_sum_exp(terms), false};
        }
    }
    return {};
}

double log_tail(const DistributionSpec& d, double x) {
    switch (d.family()) {
        case Family::GG:
            return gg_log_upper(d, x);
        case Family::DGG:
            if (x >= 0.0) return gg_log_upper(d, x) - std::numbers::ln2;
            return std::log1p(-0.5 * std::exp(gg_log_upper(d, -x)));
        case Family::IG:
            return ig_log_tail(d.mu(), d.lambda(), x);
    }
    return 0.0;
}

double tail(const DistributionSpec& d, double x) {
    if (x < 0.0 && d.family() != Family::DGG) {
        throw std::domain_error("tail requires x >= 0 for nonnegative families");
    }
    return std::exp(log_tail(d, x));
}

double log_hazard(const DistributionSpec& d, double x) {
    const double lt = log_tail(d, x);
    if (lt == kNegInf) throw std::domain_error("tail function vanishes; hazard undefined");
    return log_density(d, x) - lt;
}

double hazard(const DistributionSpec& d, double x) {
    const double h = std::exp(log_hazard(d, x));
    if (!std::isfinite(h)) throw std::range_error("hazard overflows double range; use log_hazard");
    return h;
}

double lin_L(const DistributionSpec& d, double x) {
    if (!(x > 0.0)) throw std::domain_error("lin_L requires x > 0");
    switch (d.family()) {
        case Family::GG:
        case Family::DGG:
            return (1.0 - d.gamma()) + d.alpha() * d.beta() * std::pow(x, d.beta());
        case Family::IG:
            return 1.5 + d.lambda() * x / (2.0 * d.mu() * d.mu()) - d.lambda() / (2.0 * x);
    }
    return 0.0;
}

double draw(const DistributionSpec& d, std::mt19937_64& engine) {
    switch (d.family()) {
        case Family::GG:
        case Family::DGG: {
            std::gamma_distribution<double> g(d.gamma() / d.beta(), 1.0);
            const double magnitude = std::pow(g(engine) / d.alpha(), 1.0 / d.beta());
            if (d.family() == Family::GG) return magnitude;
            return std::bernoulli_distribution(0.5)(engine) ? magnitude : -magnitude;
        }
        case Family::IG: {
            // Michael, Schucany & Haas transformation with a multiple-root choice.
            const double mu = d.mu(), lambda = d.lambda();
            const double nu = std::normal_distribution<double>(0.0, 1.0)(engine);
            const double y = nu * nu;
            // The two roots multiply to mu^2; the larger one has no cancellation.
            const double big = mu + mu * mu * y / (2.0 * lambda) +
                               (mu / (2.0 * lambda)) * std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
            const double small = mu * mu / big;
            const double u = std::uniform_real_distribution<double>(0.0, 1.0)(engine);
            return u <= mu / (mu + small) ? small : big;
        }
    }
    return 0.0;
}

std::vector<double> sample(const DistributionSpec& d, std::uint64_t seed, std::size_t n) {
    std::mt19937_64 engine(seed);
    std::vector<double> out(n);
    for (auto& v : out) v = draw(d, engine);
    return out;
}

}  // namespace mdet
