#include "mdet/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mdet/special.hpp"

namespace mdet::quadrature {

namespace {

constexpr double kScanLo = -300.0;
constexpr double kScanHi = 700.0;
constexpr double kScanStep = 0.1;
constexpr double kDropNats = 60.0;

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    using boost::math::quadrature::gauss_kronrod;
    double error = 0.0;
    const double value = gauss_kronrod<double, 31>::integrate(f, a, b, 10, rel_tol, &error);
    if (!std::isfinite(value)) throw std::runtime_error("quadrature produced a non-finite value");
    return value;
}

LogIntegral log_integrate_half_line(const std::function<double(double)>& log_integrand) {
    auto log_t = [&](double t) {
        const double v = log_integrand(std::exp(t)) + t;
        return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
    };

    const auto steps = static_cast<std::size_t>((kScanHi - kScanLo) / kScanStep);
    std::vector<double> scan(steps + 1);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= steps; ++i) {
        scan[i] = log_t(kScanLo + i * kScanStep);
        peak = std::max(peak, scan[i]);
    }
    if (!std::isfinite(peak)) throw std::runtime_error("integrand vanishes on the scan range");

    std::size_t first = steps, last = 0;
    for (std::size_t i = 0; i <= steps; ++i) {
        if (scan[i] >= peak - kDropNats) {
            first = std::min(first, i);
            last = std::max(last, i);
        }
    }
    if (first == 0 || last == steps) {
        throw std::runtime_error("integrand mass reaches the edge of the scan range");
    }

    // One grid step of padding on each side; pieces of one grid step each so the
    // Gauss-Kronrod rule never straddles more than one scan cell.
    const double t_lo = kScanLo + (first - 1) * kScanStep;
    const double t_hi = kScanLo + (last + 1) * kScanStep;
    auto shifted = [&](double t) { return std::exp(log_t(t) - peak); };

    double total = 0.0;
    for (double a = t_lo; a < t_hi - 0.5 * kScanStep; a += kScanStep) {
        total += integrate(shifted, a, std::min(a + kScanStep, t_hi), 1e-11);
    }
    if (!(total > 0.0)) throw std::runtime_error("quadrature lost all mass");
    return {peak + std::log(total), t_lo, t_hi};
}

}  // namespace mdet::quadrature
