#include "mdet/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

namespace mdet::special {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Modified Lentz evaluation of the continued fraction for Gamma(s, z) e^z z^-s.
// Converges quickly for z > s + 1.
double log_upper_gamma_cf(double s, double z) {
    constexpr double tiny = 1e-300;
    double b = z + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return -z + s * std::log(z) - std::lgamma(s) + std::log(h);
}

}  // namespace

double log_sum_exp(std::span<const double> values) {
    if (values.empty()) return kNegInf;
    const double peak = *std::max_element(values.begin(), values.end());
    if (!std::isfinite(peak)) return peak;
    double sum = 0.0;
    for (double v : values) sum += std::exp(v - peak);
    return peak + std::log(sum);
}

double log_add_exp(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == kNegInf) return a;
    return a + std::log1p(std::exp(b - a));
}

double log_sub_exp(double a, double b) {
    if (b == kNegInf) return a;
    if (b >= a) return kNegInf;
    return a + std::log1p(-std::exp(b - a));
}

double log_gamma_q(double s, double z) {
    if (z <= 0.0) return 0.0;
    if (z > s + 1.0) {
        // The continued fraction keeps the exp(-z) factor symbolic, which matters
        // once Q drops below double range.
        return log_upper_gamma_cf(s, z);
    }
    const double q = boost::math::gamma_q(s, z);
    if (q > 0.0) return std::log(q);
    return log_upper_gamma_cf(s, z);
}

double log_gamma_p(double s, double z) {
    if (z <= 0.0) return kNegInf;
    if (z < s + 1.0) return std::log(boost::math::gamma_p(s, z));
    return std::log1p(-std::exp(log_gamma_q(s, z)));
}

double log_normal_pdf(double z) {
    return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi);
}

double log_mills_ratio(double z) {
    if (z < 5.0) {
        const double tail = 0.5 * std::erfc(z / std::numbers::sqrt2);
        return std::log(tail) - log_normal_pdf(z);
    }
    // Laplace continued fraction R(z) = 1/(z + 1/(z + 2/(z + 3/(z + ...)))),
    // evaluated bottom-up with a fixed depth that is ample for z >= 5.
    double frac = z;
    for (int i = 200; i >= 1; --i) frac = z + i / frac;
    return -std::log(frac);
}

double log_normal_upper_tail(double z) {
    if (z < 5.0) return std::log(0.5 * std::erfc(z / std::numbers::sqrt2));
    return log_normal_pdf(z) + log_mills_ratio(z);
}

}  // namespace mdet::special
